#include "superconn/exterior.hpp"

#include <algorithm>

#include "superconn/errors.hpp"

namespace superconn {

int wedge_sign(IndexMask a, IndexMask b) {
  if ((a & b) != 0) return 0;
  int swaps = 0;
  for (IndexMask rest = b; rest != 0; rest &= rest - 1) {
    const int j = __builtin_ctz(rest);
    // Elements of a above j must move past dx^j.
    swaps += __builtin_popcount(a >> (j + 1));
  }
  return (swaps & 1) ? -1 : 1;
}

Form Form::function(const Poly& f) {
  Form r(f.chart_dim());
  r.add_term(0, f);
  return r;
}

Form Form::basis(int chart_dim, IndexMask mask, const Poly& coeff) {
  if (coeff.chart_dim() != chart_dim) throw DimensionError("coefficient chart mismatch");
  if (chart_dim < 32 && (mask >> chart_dim) != 0) throw DimensionError("form index out of range");
  Form r(chart_dim);
  r.add_term(mask, coeff);
  return r;
}

Form Form::dx(int chart_dim, std::span<const int> indices) {
  Form r = Form::constant(chart_dim, Ratio(1));
  for (int i : indices) {
    if (i < 0 || i >= chart_dim) throw DimensionError("dx index out of range");
    r = wedge(r, basis(chart_dim, IndexMask{1} << i, Poly::constant(chart_dim, Ratio(1))));
  }
  return r;
}

void Form::add_term(IndexMask mask, const Poly& coeff) {
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(mask, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Poly Form::coefficient(IndexMask mask) const {
  auto it = terms_.find(mask);
  return it == terms_.end() ? Poly(dim_) : it->second;
}

bool Form::has_param() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.has_param(); });
}

std::vector<int> Form::degrees() const {
  std::vector<int> out;
  for (const auto& [mask, c] : terms_) out.push_back(mask_degree(mask));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<int> Form::homogeneous_degree() const {
  auto d = degrees();
  if (d.size() == 1) return d.front();
  return std::nullopt;
}

Form Form::piece(int degree) const {
  Form r(dim_);
  for (const auto& [mask, c] : terms_)
    if (mask_degree(mask) == degree) r.terms_.emplace(mask, c);
  return r;
}

int Form::poly_degree() const {
  int d = -1;
  for (const auto& [mask, c] : terms_) d = std::max(d, c.degree());
  return d;
}

void Form::check_same_chart(const Form& o) const {
  if (dim_ != o.dim_) throw DimensionError("forms live on charts of different dimension");
}

Form Form::operator-() const {
  Form r = *this;
  for (auto& [mask, c] : r.terms_) c = -c;
  return r;
}

Form& Form::operator+=(const Form& o) {
  check_same_chart(o);
  for (const auto& [mask, c] : o.terms_) add_term(mask, c);
  return *this;
}

Form& Form::operator-=(const Form& o) {
  check_same_chart(o);
  for (const auto& [mask, c] : o.terms_) add_term(mask, -c);
  return *this;
}

Form& Form::operator*=(const Poly& f) {
  if (f.chart_dim() != dim_) throw DimensionError("coefficient chart mismatch");
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second = it->second * f;
    it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
  }
  return *this;
}

Form& Form::operator*=(const Ratio& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [mask, p] : terms_) p *= c;
  return *this;
}

std::string Form::str(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::vector<IndexMask> order;
  for (const auto& [mask, c] : terms_) order.push_back(mask);
  // Increasing degree, then lexicographic index tuples.
  std::sort(order.begin(), order.end(), [](IndexMask a, IndexMask b) {
    if (mask_degree(a) != mask_degree(b)) return mask_degree(a) < mask_degree(b);
    for (IndexMask x = a, y = b; x != 0 && y != 0; x &= x - 1, y &= y - 1) {
      const int ia = __builtin_ctz(x);
      const int ib = __builtin_ctz(y);
      if (ia != ib) return ia < ib;
    }
    return false;
  });
  std::string out;
  bool first = true;
  for (IndexMask mask : order) {
    Poly coeff = terms_.at(mask);
    bool negative = false;
    if (coeff.terms().size() == 1 && coeff.terms().front().second.sign() < 0) {
      negative = true;
      coeff = -coeff;
    }
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    std::string basis;
    if (mask != 0) {
      basis = "dx(";
      bool sep = false;
      for (IndexMask m = mask; m != 0; m &= m - 1) {
        if (sep) basis += ",";
        basis += std::to_string(__builtin_ctz(m) + 1);
        sep = true;
      }
      basis += ")";
    }
    std::string c = coeff.str(names);
    if (coeff.terms().size() > 1) c = "(" + c + ")";
    if (basis.empty()) {
      out += c;
    } else if (coeff == Poly::constant(dim_, Ratio(1))) {
      out += basis;
    } else {
      out += c + "*" + basis;
    }
  }
  return out;
}

std::string Form::str() const {
  const auto names = default_coordinate_names(dim_);
  return str(names);
}

Form wedge(const Form& a, const Form& b) {
  if (a.chart_dim() != b.chart_dim()) throw DimensionError("forms live on charts of different dimension");
  Form r(a.chart_dim());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      const int s = wedge_sign(ma, mb);
      if (s == 0) continue;
      Poly c = ca * cb;
      if (s < 0) c = -c;
      r.add_term(ma | mb, c);
    }
  }
  return r;
}

Form grade_involution(const Form& a) {
  Form r(a.chart_dim());
  for (const auto& [mask, c] : a.terms()) r.add_term(mask, (mask_degree(mask) & 1) ? -c : c);
  return r;
}

Form ext_d(const Form& a) {
  if (a.has_param()) throw ParameterError("ext_d: input contains the homotopy parameter t");
  Form r(a.chart_dim());
  for (const auto& [mask, c] : a.terms()) {
    for (int k = 0; k < a.chart_dim(); ++k) {
      const IndexMask bit = IndexMask{1} << k;
      if (mask & bit) continue;
      Poly dk = partial(c, k);
      if (dk.is_zero()) continue;
      if (wedge_sign(bit, mask) < 0) dk = -dk;
      r.add_term(mask | bit, dk);
    }
  }
  return r;
}

Form partial(const Form& a, int index) {
  Form r(a.chart_dim());
  for (const auto& [mask, c] : a.terms()) r.add_term(mask, partial(c, index));
  return r;
}

Form interior_basis(int index, const Form& a) {
  if (index < 0 || index >= a.chart_dim()) throw DimensionError("interior: index out of range");
  const IndexMask bit = IndexMask{1} << index;
  Form r(a.chart_dim());
  for (const auto& [mask, c] : a.terms()) {
    if (!(mask & bit)) continue;
    const int below = __builtin_popcount(mask & (bit - 1));
    r.add_term(mask & ~bit, (below & 1) ? -c : c);
  }
  return r;
}

VectorField VectorField::zero(int chart_dim) {
  return VectorField{std::vector<Poly>(static_cast<std::size_t>(chart_dim), Poly(chart_dim))};
}

VectorField VectorField::basis(int chart_dim, int index) {
  VectorField X = zero(chart_dim);
  X.components.at(static_cast<std::size_t>(index)) = Poly::constant(chart_dim, Ratio(1));
  return X;
}

Form interior(const VectorField& X, const Form& a) {
  if (X.chart_dim() != a.chart_dim()) throw DimensionError("interior: chart mismatch");
  Form r(a.chart_dim());
  for (int k = 0; k < X.chart_dim(); ++k) {
    const Poly& c = X.components[static_cast<std::size_t>(k)];
    if (!c.is_zero()) r += interior_basis(k, a) * c;
  }
  return r;
}

VectorForm::VectorForm(int chart_dim, int degree)
    : degree_(degree), components_(static_cast<std::size_t>(chart_dim), Form(chart_dim)) {}

VectorForm::VectorForm(int degree, std::vector<Form> components)
    : degree_(degree), components_(std::move(components)) {
  for (const Form& f : components_) {
    if (f.chart_dim() != chart_dim()) throw DimensionError("vector-valued form: chart mismatch");
    auto d = f.degrees();
    if (d.size() > 1 || (d.size() == 1 && d.front() != degree_))
      throw DegreeError("vector-valued form must be homogeneous of degree " + std::to_string(degree_));
  }
}

void VectorForm::set(int j, Form f) {
  auto d = f.degrees();
  if (d.size() > 1 || (d.size() == 1 && d.front() != degree_))
    throw DegreeError("vector-valued form must be homogeneous of degree " + std::to_string(degree_));
  components_.at(static_cast<std::size_t>(j)) = std::move(f);
}

Christoffel::Christoffel(int chart_dim)
    : dim_(chart_dim), data_(static_cast<std::size_t>(chart_dim * chart_dim * chart_dim), Poly(chart_dim)) {}

std::size_t Christoffel::index(int r, int p, int q) const {
  if (r < 0 || p < 0 || q < 0 || r >= dim_ || p >= dim_ || q >= dim_)
    throw DimensionError("Christoffel index out of range");
  return static_cast<std::size_t>((r * dim_ + p) * dim_ + q);
}

bool Christoffel::is_flat() const {
  return std::all_of(data_.begin(), data_.end(), [](const Poly& p) { return p.is_zero(); });
}

Form nabla_basis(const Christoffel& G, int index, const Form& a) {
  const int m = a.chart_dim();
  if (G.chart_dim() != m) throw DimensionError("nabla: chart mismatch");
  Form r = partial(a, index);
  for (int j = 0; j < m; ++j) {
    Form conn(m);
    for (int q = 0; q < m; ++q) conn += Form::basis(m, IndexMask{1} << q, G(j, index, q));
    if (!conn.is_zero()) r -= wedge(conn, interior_basis(j, a));
  }
  return r;
}

Form nabla_form(const Christoffel& G, const VectorField& X, const Form& a) {
  Form r(a.chart_dim());
  for (int p = 0; p < X.chart_dim(); ++p) {
    const Poly& c = X.components[static_cast<std::size_t>(p)];
    if (!c.is_zero()) r += nabla_basis(G, p, a) * c;
  }
  return r;
}

Form nabla_K(const Christoffel& G, const VectorForm& K, const Form& a) {
  Form r(a.chart_dim());
  for (int p = 0; p < K.chart_dim(); ++p)
    if (!K[p].is_zero()) r += wedge(K[p], nabla_basis(G, p, a));
  return r;
}

Form alg_insertion(const VectorForm& L, const Form& a) {
  Form r(a.chart_dim());
  for (int j = 0; j < L.chart_dim(); ++j)
    if (!L[j].is_zero()) r += wedge(L[j], interior_basis(j, a));
  return r;
}

}  // namespace superconn
