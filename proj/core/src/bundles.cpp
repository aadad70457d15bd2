#include "superconn/bundles.hpp"

#include <algorithm>

#include "superconn/errors.hpp"

namespace superconn {

SuperRank::SuperRank(int even, int odd) : p(even), q(odd) {
  if (even < 0 || odd < 0 || even + odd < 1) throw DimensionError("bundle rank must satisfy p, q >= 0 and p + q >= 1");
}

ESection::ESection(SuperRank rank, int chart_dim)
    : rank_(rank), dim_(chart_dim), entries_(static_cast<std::size_t>(rank.size()), Form(chart_dim)) {}

ESection::ESection(SuperRank rank, std::vector<Form> entries)
    : rank_(rank), dim_(entries.empty() ? 1 : entries.front().chart_dim()), entries_(std::move(entries)) {
  if (static_cast<int>(entries_.size()) != rank.size()) throw DimensionError("section has wrong number of entries");
  for (const Form& f : entries_)
    if (f.chart_dim() != dim_) throw DimensionError("section entries on different charts");
}

ESection ESection::basis(SuperRank rank, int chart_dim, int slot) {
  ESection s(rank, chart_dim);
  s[slot] = Form::constant(chart_dim, Ratio(1));
  return s;
}

bool ESection::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Form& f) { return f.is_zero(); });
}

void ESection::check_compatible(const ESection& o) const {
  if (rank_ != o.rank_ || dim_ != o.dim_) throw DimensionError("sections of different bundles");
}

ESection ESection::operator-() const {
  ESection r = *this;
  for (Form& f : r.entries_) f = -f;
  return r;
}

ESection& ESection::operator+=(const ESection& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
  return *this;
}

ESection& ESection::operator-=(const ESection& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= o.entries_[i];
  return *this;
}

ESection& ESection::operator*=(const Ratio& c) {
  for (Form& f : entries_) f *= c;
  return *this;
}

std::string ESection::str() const {
  std::string out = "(";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) out += ", ";
    out += entries_[i].str();
  }
  return out + ")";
}

ESection left_multiply(const Form& alpha, const ESection& s) {
  ESection r(s.rank(), s.chart_dim());
  for (int i = 0; i < s.rank().size(); ++i) r[i] = wedge(alpha, s[i]);
  return r;
}

ESection ext_d(const ESection& s) {
  ESection r(s.rank(), s.chart_dim());
  for (int i = 0; i < s.rank().size(); ++i) r[i] = ext_d(s[i]);
  return r;
}

EndForm::EndForm(SuperRank rank, int chart_dim)
    : rank_(rank), dim_(chart_dim),
      entries_(static_cast<std::size_t>(rank.size() * rank.size()), Form(chart_dim)) {}

EndForm EndForm::identity(SuperRank rank, int chart_dim) {
  EndForm r(rank, chart_dim);
  for (int i = 0; i < rank.size(); ++i) r(i, i) = Form::constant(chart_dim, Ratio(1));
  return r;
}

std::size_t EndForm::index(int i, int j) const {
  const int n = rank_.size();
  if (i < 0 || j < 0 || i >= n || j >= n) throw DimensionError("endomorphism slot out of range");
  return static_cast<std::size_t>(i * n + j);
}

bool EndForm::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Form& f) { return f.is_zero(); });
}

bool EndForm::has_param() const {
  return std::any_of(entries_.begin(), entries_.end(), [](const Form& f) { return f.has_param(); });
}

EndForm EndForm::total_parity_part(int parity) const {
  EndForm r(rank_, dim_);
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j)
      for (const auto& [mask, c] : (*this)(i, j).terms())
        if (((mask_degree(mask) + rank_.end_parity(i, j)) & 1) == parity) r(i, j).add_term(mask, c);
  return r;
}

EndForm EndForm::form_degree_part(int degree) const {
  EndForm r(rank_, dim_);
  for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = entries_[k].piece(degree);
  return r;
}

EndForm EndForm::end_parity_part(int parity) const {
  EndForm r(rank_, dim_);
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j)
      if (rank_.end_parity(i, j) == parity) r(i, j) = (*this)(i, j);
  return r;
}

std::vector<int> EndForm::form_degrees() const {
  std::vector<int> out;
  for (const Form& f : entries_)
    for (int d : f.degrees()) out.push_back(d);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void EndForm::check_compatible(const EndForm& o) const {
  if (rank_ != o.rank_ || dim_ != o.dim_) throw DimensionError("endomorphisms of different bundles");
}

EndForm EndForm::operator-() const {
  EndForm r = *this;
  for (Form& f : r.entries_) f = -f;
  return r;
}

EndForm& EndForm::operator+=(const EndForm& o) {
  check_compatible(o);
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
  return *this;
}

EndForm& EndForm::operator-=(const EndForm& o) {
  check_compatible(o);
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
  return *this;
}

EndForm& EndForm::operator*=(const Ratio& c) {
  for (Form& f : entries_) f *= c;
  return *this;
}

EndForm& EndForm::operator*=(const Poly& f) {
  for (Form& e : entries_) e *= f;
  return *this;
}

std::string EndForm::str() const {
  std::string out = "[";
  for (int i = 0; i < size(); ++i) {
    if (i) out += ", ";
    out += "[";
    for (int j = 0; j < size(); ++j) {
      if (j) out += ", ";
      out += (*this)(i, j).str();
    }
    out += "]";
  }
  return out + "]";
}

EndForm left_multiply(const Form& alpha, const EndForm& W) {
  EndForm r(W.rank(), W.chart_dim());
  for (int i = 0; i < W.size(); ++i)
    for (int j = 0; j < W.size(); ++j) r(i, j) = wedge(alpha, W(i, j));
  return r;
}

EndForm ext_d(const EndForm& W) {
  EndForm r(W.rank(), W.chart_dim());
  for (int i = 0; i < W.size(); ++i)
    for (int j = 0; j < W.size(); ++j) r(i, j) = ext_d(W(i, j));
  return r;
}

EndForm interior_basis(int index, const EndForm& W) {
  EndForm r(W.rank(), W.chart_dim());
  for (int i = 0; i < W.size(); ++i)
    for (int j = 0; j < W.size(); ++j) r(i, j) = interior_basis(index, W(i, j));
  return r;
}

ESection end_apply(const EndForm& W, const ESection& s) {
  if (W.rank() != s.rank() || W.chart_dim() != s.chart_dim())
    throw DimensionError("end_apply: bundle mismatch");
  const SuperRank rank = W.rank();
  ESection r(rank, s.chart_dim());
  for (int j = 0; j < rank.size(); ++j) {
    if (s[j].is_zero()) continue;
    const Form twisted = grade_involution(s[j]);
    for (int i = 0; i < rank.size(); ++i) {
      const Form& w = W(i, j);
      if (w.is_zero()) continue;
      r[i] += wedge(w, rank.end_parity(i, j) ? twisted : s[j]);
    }
  }
  return r;
}

EndForm end_compose(const EndForm& W1, const EndForm& W2) {
  if (W1.rank() != W2.rank() || W1.chart_dim() != W2.chart_dim())
    throw DimensionError("end_compose: bundle mismatch");
  const SuperRank rank = W1.rank();
  const int n = rank.size();
  EndForm r(rank, W1.chart_dim());
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      const Form& b = W2(j, l);
      if (b.is_zero()) continue;
      const Form twisted = grade_involution(b);
      for (int i = 0; i < n; ++i) {
        const Form& a = W1(i, j);
        if (a.is_zero()) continue;
        r(i, l) += wedge(a, rank.end_parity(i, j) ? twisted : b);
      }
    }
  }
  return r;
}

EndForm supercommutator(const EndForm& W1, const EndForm& W2) {
  EndForm r(W1.rank(), W1.chart_dim());
  for (int a = 0; a < 2; ++a) {
    const EndForm x = W1.total_parity_part(a);
    if (x.is_zero()) continue;
    for (int b = 0; b < 2; ++b) {
      const EndForm y = W2.total_parity_part(b);
      if (y.is_zero()) continue;
      r += end_compose(x, y);
      if (a & b)
        r += end_compose(y, x);
      else
        r -= end_compose(y, x);
    }
  }
  return r;
}

namespace {

void check_one_forms(const EndForm& omega) {
  for (int i = 0; i < omega.size(); ++i)
    for (int j = 0; j < omega.size(); ++j) {
      auto d = omega(i, j).degrees();
      if (d.size() > 1 || (d.size() == 1 && d.front() != 1))
        throw DegreeError("connection matrix entries must be 1-forms");
    }
}

}  // namespace

ESection dnablaE(const EndForm& omega, const ESection& s) {
  check_one_forms(omega);
  return ext_d(s) + end_apply(omega, s);
}

Form supertrace(const EndForm& W) {
  Form r(W.chart_dim());
  for (int i = 0; i < W.size(); ++i) {
    if (W.rank().slot_parity(i))
      r -= W(i, i);
    else
      r += W(i, i);
  }
  return r;
}

void check_connection_matrix(const EndForm& omega) {
  check_one_forms(omega);
  if (!omega.is_block_diagonal()) throw ParityError("connection matrix must be block-diagonal (even)");
}

}  // namespace superconn
