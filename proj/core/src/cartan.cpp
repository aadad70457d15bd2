#include "superconn/cartan.hpp"

#include <algorithm>

#include "superconn/errors.hpp"
#include "superconn/sampling.hpp"

namespace superconn {

namespace {

Exponents theta_unit(int index) { return Exponents{1} << (8 * index); }

// (−1)^{θ-degree} times the grade involution of the coefficient: the sign of
// moving an odd object past the term.
SuperForm parity_twist(const SuperForm& a) {
  SuperForm r(a.chart_dim(), a.theta_cap());
  for (const auto& [mono, c] : a.terms()) {
    const Form t = grade_involution(c);
    r.add_term(mono, (mono.theta_degree() & 1) ? -t : t);
  }
  return r;
}

}  // namespace

SuperForm::SuperForm(int chart_dim, int theta_cap) : dim_(chart_dim), cap_(theta_cap) {
  if (theta_cap < 0) throw PreconditionError("theta cap must be non-negative");
}

SuperForm SuperForm::function(const Form& a, int theta_cap) {
  SuperForm r(a.chart_dim(), theta_cap);
  r.add_term(SMono{}, a);
  return r;
}

SuperForm SuperForm::xi(int chart_dim, int index, int theta_cap) {
  if (index < 0 || index >= chart_dim) throw DimensionError("xi index out of range");
  return monomial(Form::constant(chart_dim, Ratio(1)), SMono{IndexMask{1} << index, 0}, theta_cap);
}

SuperForm SuperForm::theta(int chart_dim, int index, int theta_cap) {
  if (index < 0 || index >= chart_dim) throw DimensionError("theta index out of range");
  return monomial(Form::constant(chart_dim, Ratio(1)), SMono{0, theta_unit(index)}, theta_cap);
}

SuperForm SuperForm::monomial(const Form& coeff, SMono mono, int theta_cap) {
  SuperForm r(coeff.chart_dim(), theta_cap);
  r.add_term(mono, coeff);
  return r;
}

void SuperForm::add_term(const SMono& mono, const Form& coeff) {
  if (coeff.is_zero()) return;
  if (coeff.chart_dim() != dim_) throw DimensionError("superform coefficient chart mismatch");
  auto [it, inserted] = terms_.try_emplace(mono, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Form SuperForm::coefficient(SMono mono) const {
  auto it = terms_.find(mono);
  return it == terms_.end() ? Form(dim_) : it->second;
}

bool SuperForm::has_param() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.has_param(); });
}

int SuperForm::max_theta_degree() const {
  int d = -1;
  for (const auto& [mono, c] : terms_) d = std::max(d, mono.theta_degree());
  return d;
}

std::vector<int> SuperForm::degrees() const {
  std::vector<int> out;
  for (const auto& [mono, c] : terms_) out.push_back(mono.degree());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SuperForm SuperForm::degree_part(int k) const {
  SuperForm r(dim_, cap_);
  for (const auto& [mono, c] : terms_)
    if (mono.degree() == k) r.terms_.emplace(mono, c);
  return r;
}

SuperForm SuperForm::parity_part(int parity) const {
  SuperForm r(dim_, cap_);
  for (const auto& [mono, c] : terms_)
    for (int d : c.degrees())
      if (((d + mono.theta_degree()) & 1) == parity) r.add_term(mono, c.piece(d));
  return r;
}

SuperForm SuperForm::with_cap(int theta_cap) const {
  SuperForm r = *this;
  r.cap_ = theta_cap;
  return r;
}

void SuperForm::check_cap() const {
  const int need = max_theta_degree();
  if (need > cap_)
    throw BudgetError("theta degree " + std::to_string(need) + " exceeds the cap " + std::to_string(cap_), need);
}

void SuperForm::check_compatible(const SuperForm& o) const {
  if (dim_ != o.dim_) throw DimensionError("superforms on charts of different dimension");
}

SuperForm SuperForm::operator-() const {
  SuperForm r = *this;
  for (auto& [mono, c] : r.terms_) c = -c;
  return r;
}

SuperForm& SuperForm::operator+=(const SuperForm& o) {
  check_compatible(o);
  cap_ = std::max(cap_, o.cap_);
  for (const auto& [mono, c] : o.terms_) add_term(mono, c);
  return *this;
}

SuperForm& SuperForm::operator-=(const SuperForm& o) {
  check_compatible(o);
  cap_ = std::max(cap_, o.cap_);
  for (const auto& [mono, c] : o.terms_) add_term(mono, -c);
  return *this;
}

SuperForm& SuperForm::operator*=(const Ratio& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [mono, f] : terms_) f *= c;
  return *this;
}

SuperForm& SuperForm::operator*=(const Poly& f) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= f;
    it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
  }
  return *this;
}

std::string SuperForm::str(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [mono, c] : terms_) {
    if (!first) out += " + ";
    first = false;
    std::string gens;
    if (mono.xi) {
      gens += "xi(";
      bool sep = false;
      for (IndexMask x = mono.xi; x; x &= x - 1) {
        if (sep) gens += ",";
        gens += std::to_string(__builtin_ctz(x) + 1);
        sep = true;
      }
      gens += ")";
    }
    if (mono.theta) {
      if (!gens.empty()) gens += "*";
      gens += "theta(";
      bool sep = false;
      for (int k = 0; k < Poly::kParamSlot; ++k)
        for (int e = 0; e < Poly::exponent(mono.theta, k); ++e) {
          if (sep) gens += ",";
          gens += std::to_string(k + 1);
          sep = true;
        }
      gens += ")";
    }
    const std::string coeff = c.str(names);
    if (gens.empty())
      out += "(" + coeff + ")";
    else if (c == Form::constant(dim_, Ratio(1)))
      out += gens;
    else
      out += "(" + coeff + ")*" + gens;
  }
  return out;
}

std::string SuperForm::str() const {
  const auto names = default_coordinate_names(dim_);
  return str(names);
}

namespace detail {

SuperForm mul_raw(const SuperForm& a, const SuperForm& b) {
  if (a.chart_dim() != b.chart_dim()) throw DimensionError("superforms on charts of different dimension");
  SuperForm r(a.chart_dim(), std::max(a.theta_cap(), b.theta_cap()));
  for (const auto& [ma, ca] : a.terms()) {
    const bool odd_theta = (ma.theta_degree() & 1) != 0;
    for (const auto& [mb, cb] : b.terms()) {
      int s = wedge_sign(ma.xi, mb.xi);
      if (s == 0) continue;
      if (odd_theta && (mask_degree(mb.xi) & 1)) s = -s;
      Form c = wedge(ca, odd_theta ? grade_involution(cb) : cb);
      if (s < 0) c = -c;
      r.add_term(SMono{ma.xi | mb.xi, ma.theta + mb.theta}, c);
    }
  }
  return r;
}

SuperForm d_raw(const SuperForm& a) {
  const int m = a.chart_dim();
  SuperForm r(m, a.theta_cap());
  for (const auto& [mono, c] : a.terms()) {
    const bool odd_xi = (mask_degree(mono.xi) & 1) != 0;
    for (int k = 0; k < m; ++k) {
      const IndexMask bit = IndexMask{1} << k;
      if (!(mono.xi & bit)) {
        Form dk = partial(c, k);
        if (!dk.is_zero()) r.add_term(SMono{mono.xi | bit, mono.theta}, wedge_sign(bit, mono.xi) < 0 ? -dk : dk);
      }
      Form ik = grade_involution(interior_basis(k, c));
      if (!ik.is_zero()) r.add_term(SMono{mono.xi, mono.theta + theta_unit(k)}, odd_xi ? -ik : ik);
    }
  }
  return r;
}

}  // namespace detail

SuperForm sform_mul(const SuperForm& a, const SuperForm& b) {
  SuperForm r = detail::mul_raw(a, b);
  r.check_cap();
  return r;
}

SuperForm sform_d(const SuperForm& a) {
  SuperForm r = detail::d_raw(a);
  r.check_cap();
  return r;
}

Form sform_pair(const DerivationSpec& d, const SuperForm& w) {
  const int m = w.chart_dim();
  if (d.chart_dim() != m) throw DimensionError("pairing: chart mismatch");
  Form r(m);
  for (const auto& [mono, c] : w.terms()) {
    if (mono.degree() != 1) continue;
    if (mono.xi) {
      r += wedge(d.A(__builtin_ctz(mono.xi)), c);
    } else {
      int k = 0;
      while (Poly::exponent(mono.theta, k) == 0) ++k;
      r += wedge(d.B(k), grade_involution(c));
    }
  }
  return r;
}

Form kappa(const SuperForm& a) {
  const int m = a.chart_dim();
  Form r(m);
  for (const auto& [mono, c] : a.terms()) {
    if (mono.theta != 0) continue;
    const Poly f = c.coefficient(0);
    if (!f.is_zero()) r.add_term(mono.xi, f);
  }
  return r;
}

ESuperForm::ESuperForm(SuperRank rank, int chart_dim, int theta_cap)
    : rank_(rank), dim_(chart_dim), cap_(theta_cap),
      entries_(static_cast<std::size_t>(rank.size()), SuperForm(chart_dim, theta_cap)) {}

ESuperForm ESuperForm::from_section(const ESection& s, int theta_cap) {
  ESuperForm r(s.rank(), s.chart_dim(), theta_cap);
  for (int i = 0; i < s.rank().size(); ++i) r[i] = SuperForm::function(s[i], theta_cap);
  return r;
}

ESuperForm ESuperForm::basis(SuperRank rank, int chart_dim, int slot, int theta_cap) {
  ESuperForm r(rank, chart_dim, theta_cap);
  r[slot] = SuperForm::function(Form::constant(chart_dim, Ratio(1)), theta_cap);
  return r;
}

bool ESuperForm::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const SuperForm& f) { return f.is_zero(); });
}

void ESuperForm::check_cap() const {
  int need = -1;
  for (const SuperForm& f : entries_) need = std::max(need, f.max_theta_degree());
  if (need > cap_)
    throw BudgetError("theta degree " + std::to_string(need) + " exceeds the cap " + std::to_string(cap_), need);
}

ESuperForm ESuperForm::operator-() const {
  ESuperForm r = *this;
  for (SuperForm& f : r.entries_) f = -f;
  return r;
}

ESuperForm& ESuperForm::operator+=(const ESuperForm& o) {
  if (rank_ != o.rank_ || dim_ != o.dim_) throw DimensionError("sections of different bundles");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
  cap_ = std::max(cap_, o.cap_);
  return *this;
}

ESuperForm& ESuperForm::operator-=(const ESuperForm& o) { return *this += -o; }

ESuperForm left_multiply(const SuperForm& S, const ESuperForm& s) {
  ESuperForm r(s.rank(), s.chart_dim(), std::max(S.theta_cap(), s.theta_cap()));
  for (int i = 0; i < s.rank().size(); ++i) r[i] = detail::mul_raw(S, s[i]);
  r.check_cap();
  return r;
}

EndSuperForm::EndSuperForm(SuperRank rank, int chart_dim, int theta_cap)
    : rank_(rank), dim_(chart_dim), cap_(theta_cap),
      entries_(static_cast<std::size_t>(rank.size() * rank.size()), SuperForm(chart_dim, theta_cap)) {}

EndSuperForm EndSuperForm::from_end_form(const EndForm& W, int theta_cap) {
  EndSuperForm r(W.rank(), W.chart_dim(), theta_cap);
  for (int i = 0; i < W.size(); ++i)
    for (int j = 0; j < W.size(); ++j) r(i, j) = SuperForm::function(W(i, j), theta_cap);
  return r;
}

std::size_t EndSuperForm::index(int i, int j) const {
  const int n = rank_.size();
  if (i < 0 || j < 0 || i >= n || j >= n) throw DimensionError("endomorphism slot out of range");
  return static_cast<std::size_t>(i * n + j);
}

bool EndSuperForm::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const SuperForm& f) { return f.is_zero(); });
}

void EndSuperForm::check_cap() const {
  int need = -1;
  for (const SuperForm& f : entries_) need = std::max(need, f.max_theta_degree());
  if (need > cap_)
    throw BudgetError("theta degree " + std::to_string(need) + " exceeds the cap " + std::to_string(cap_), need);
}

EndSuperForm EndSuperForm::degree_part(int k) const {
  EndSuperForm r(rank_, dim_, cap_);
  for (std::size_t n = 0; n < entries_.size(); ++n) r.entries_[n] = entries_[n].degree_part(k);
  return r;
}

std::vector<int> EndSuperForm::degrees() const {
  std::vector<int> out;
  for (const SuperForm& f : entries_)
    for (int d : f.degrees()) out.push_back(d);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

EndSuperForm EndSuperForm::operator-() const {
  EndSuperForm r = *this;
  for (SuperForm& f : r.entries_) f = -f;
  return r;
}

EndSuperForm& EndSuperForm::operator+=(const EndSuperForm& o) {
  if (rank_ != o.rank_ || dim_ != o.dim_) throw DimensionError("endomorphisms of different bundles");
  for (std::size_t n = 0; n < entries_.size(); ++n) entries_[n] += o.entries_[n];
  cap_ = std::max(cap_, o.cap_);
  return *this;
}

EndSuperForm& EndSuperForm::operator-=(const EndSuperForm& o) { return *this += -o; }

EndSuperForm& EndSuperForm::operator*=(const Ratio& c) {
  for (SuperForm& f : entries_) f *= c;
  return *this;
}

EndSuperForm& EndSuperForm::operator*=(const Poly& p) {
  for (SuperForm& f : entries_) f *= p;
  return *this;
}

namespace detail {

ESuperForm apply_raw(const EndSuperForm& Q, const ESuperForm& s) {
  if (Q.rank() != s.rank() || Q.chart_dim() != s.chart_dim()) throw DimensionError("end_apply: bundle mismatch");
  const SuperRank rank = Q.rank();
  ESuperForm r(rank, s.chart_dim(), std::max(Q.theta_cap(), s.theta_cap()));
  for (int l = 0; l < rank.size(); ++l) {
    if (s[l].is_zero()) continue;
    const SuperForm twisted = parity_twist(s[l]);
    for (int i = 0; i < rank.size(); ++i) {
      if (Q(i, l).is_zero()) continue;
      r[i] += mul_raw(Q(i, l), rank.end_parity(i, l) ? twisted : s[l]);
    }
  }
  return r;
}

EndSuperForm compose_raw(const EndSuperForm& Q1, const EndSuperForm& Q2) {
  if (Q1.rank() != Q2.rank() || Q1.chart_dim() != Q2.chart_dim())
    throw DimensionError("end_compose: bundle mismatch");
  const SuperRank rank = Q1.rank();
  const int n = rank.size();
  EndSuperForm r(rank, Q1.chart_dim(), std::max(Q1.theta_cap(), Q2.theta_cap()));
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      const SuperForm& b = Q2(j, l);
      if (b.is_zero()) continue;
      const SuperForm twisted = parity_twist(b);
      for (int i = 0; i < n; ++i) {
        const SuperForm& a = Q1(i, j);
        if (a.is_zero()) continue;
        r(i, l) += mul_raw(a, rank.end_parity(i, j) ? twisted : b);
      }
    }
  return r;
}

}  // namespace detail

ESuperForm end_apply(const EndSuperForm& Q, const ESuperForm& s) {
  ESuperForm r = detail::apply_raw(Q, s);
  r.check_cap();
  return r;
}

EndSuperForm end_compose(const EndSuperForm& Q1, const EndSuperForm& Q2) {
  EndSuperForm r = detail::compose_raw(Q1, Q2);
  r.check_cap();
  return r;
}

SuperForm supertrace(const EndSuperForm& Q) {
  SuperForm r(Q.chart_dim(), Q.theta_cap());
  for (int i = 0; i < Q.size(); ++i) {
    if (Q.rank().slot_parity(i))
      r -= Q(i, i);
    else
      r += Q(i, i);
  }
  return r;
}

EndSuperForm end_power(const EndSuperForm& Q, int k) {
  if (k < 1) throw PreconditionError("end_power: exponent must be positive");
  EndSuperForm r = Q;
  for (int i = 1; i < k; ++i) r = detail::compose_raw(r, Q);
  r.check_cap();
  return r;
}

GradedConnection::GradedConnection(Christoffel gamma_, EndForm omega_)
    : gamma(std::move(gamma_)), omega(std::move(omega_)),
      K0(static_cast<std::size_t>(omega.chart_dim()), EndForm(omega.rank(), omega.chart_dim())),
      K1(static_cast<std::size_t>(omega.chart_dim()), EndForm(omega.rank(), omega.chart_dim())) {
  validate();
}

GradedConnection::GradedConnection(Christoffel gamma_, EndForm omega_, std::vector<EndForm> K0_,
                                   std::vector<EndForm> K1_)
    : gamma(std::move(gamma_)), omega(std::move(omega_)), K0(std::move(K0_)), K1(std::move(K1_)) {
  validate();
}

void GradedConnection::validate() const {
  const int m = omega.chart_dim();
  if (gamma.chart_dim() != m) throw DimensionError("graded connection: Christoffel chart mismatch");
  if (static_cast<int>(K0.size()) != m || static_cast<int>(K1.size()) != m)
    throw DimensionError("graded connection: K0 and K1 need one value per coordinate field");
  check_connection_matrix(omega);
  for (int k = 0; k < m; ++k) {
    if (K0[k].rank() != omega.rank() || K1[k].rank() != omega.rank() || K0[k].chart_dim() != m ||
        K1[k].chart_dim() != m)
      throw DimensionError("graded connection: tensor on a different bundle");
    if (!K0[k].has_total_parity(0))
      throw ParityError("K0(d/dx" + std::to_string(k + 1) + ") must have even total degree");
    if (!K1[k].has_total_parity(1))
      throw ParityError("K1(d/dx" + std::to_string(k + 1) + ") must have odd total degree");
  }
}

EndForm flat_frame_value(const GradedConnection& C, int k) {
  const int m = C.chart_dim();
  EndForm r = interior_basis(k, C.omega) + C.K0.at(static_cast<std::size_t>(k));
  for (int j = 0; j < m; ++j) {
    if (C.K1[j].is_zero()) continue;
    Form conn(m);
    for (int q = 0; q < m; ++q) conn.add_term(IndexMask{1} << q, C.gamma(j, k, q));
    if (!conn.is_zero()) r += left_multiply(conn, C.K1[j]);
  }
  return r;
}

ESection nn_apply(const GradedConnection& C, const DerivationSpec& d, const ESection& s) {
  const SuperRank rank = C.rank();
  const int m = C.chart_dim();
  if (s.rank() != rank || s.chart_dim() != m || d.chart_dim() != m) throw DimensionError("nn_apply: bundle mismatch");
  // ∇∇_δ φ_l for every basis section, as the columns of one matrix.
  EndForm V(rank, m);
  for (int k = 0; k < m; ++k) {
    if (!d.A(k).is_zero()) V += left_multiply(d.A(k), flat_frame_value(C, k));
    if (!d.B(k).is_zero()) V += left_multiply(d.B(k), C.K1[k]);
  }
  ESection r(rank, m);
  for (int l = 0; l < rank.size(); ++l) {
    if (s[l].is_zero()) continue;
    r[l] += apply_derivation(d, s[l]);
    const Form sl = d.parity() ? grade_involution(s[l]) : s[l];
    for (int i = 0; i < rank.size(); ++i)
      if (!V(i, l).is_zero()) r[i] += wedge(sl, V(i, l));
  }
  return r;
}

EndSuperForm connection_superform(const GradedConnection& C, int theta_cap) {
  const SuperRank rank = C.rank();
  const int m = C.chart_dim();
  EndSuperForm theta(rank, m, theta_cap);
  for (int k = 0; k < m; ++k) {
    const EndForm X = flat_frame_value(C, k);
    const SMono xi{IndexMask{1} << k, 0};
    const SMono th{0, theta_unit(k)};
    for (int i = 0; i < rank.size(); ++i)
      for (int l = 0; l < rank.size(); ++l) {
        theta(i, l).add_term(xi, X(i, l));
        // θ^k c = (−1)^{|c|} c θ^k in left storage.
        theta(i, l).add_term(th, grade_involution(C.K1[k](i, l)));
      }
  }
  return theta;
}

namespace detail {

ESuperForm covariant_d_raw(const EndSuperForm& theta, const ESuperForm& s) {
  const SuperRank rank = s.rank();
  ESuperForm r(rank, s.chart_dim(), std::max(s.theta_cap(), theta.theta_cap()));
  for (int l = 0; l < rank.size(); ++l) {
    if (s[l].is_zero()) continue;
    r[l] += d_raw(s[l]);
    for (int deg : s[l].degrees()) {
      const SuperForm part = s[l].degree_part(deg);
      for (int i = 0; i < rank.size(); ++i) {
        if (theta(i, l).is_zero()) continue;
        const SuperForm t = mul_raw(part, theta(i, l));
        if (deg & 1)
          r[i] -= t;
        else
          r[i] += t;
      }
    }
  }
  return r;
}

EndSuperForm curvature_raw(const EndSuperForm& theta) {
  const SuperRank rank = theta.rank();
  const int m = theta.chart_dim();
  EndSuperForm R(rank, m, theta.theta_cap());
  for (int l = 0; l < rank.size(); ++l) {
    ESuperForm col(rank, m, theta.theta_cap());
    for (int i = 0; i < rank.size(); ++i) col[i] = theta(i, l);
    const ESuperForm sq = covariant_d_raw(theta, col);
    for (int i = 0; i < rank.size(); ++i) R(i, l) = sq[i];
  }
  return R;
}

}  // namespace detail

ESuperForm covariant_sform_d(const GradedConnection& C, const ESuperForm& s) {
  ESuperForm r = detail::covariant_d_raw(connection_superform(C, s.theta_cap()), s);
  r.check_cap();
  return r;
}

ESection sform_pair(const DerivationSpec& d, const ESuperForm& s) {
  ESection r(s.rank(), s.chart_dim());
  for (int i = 0; i < s.rank().size(); ++i) r[i] = sform_pair(d, s[i]);
  return r;
}

EndForm graded_curvature(const GradedConnection& C, const DerivationSpec& d1, const DerivationSpec& d2) {
  const SuperRank rank = C.rank();
  const int m = C.chart_dim();
  const DerivationSpec bracket = der_bracket(d1, d2);
  const bool odd = (d1.parity() & d2.parity()) != 0;
  auto op = [&](const ESection& s) {
    ESection r = nn_apply(C, d1, nn_apply(C, d2, s));
    const ESection back = nn_apply(C, d2, nn_apply(C, d1, s));
    if (odd)
      r += back;
    else
      r -= back;
    return r - nn_apply(C, bracket, s);
  };
  EndForm F(rank, m);
  for (int l = 0; l < rank.size(); ++l) {
    const ESection col = op(ESection::basis(rank, m, l));
    for (int i = 0; i < rank.size(); ++i) F(i, l) = col[i];
  }
  Sampler rng(0xc0ffee);
  for (int l = 0; l < rank.size(); ++l) {
    std::vector<Form> multipliers;
    for (int k = 0; k < m; ++k) multipliers.push_back(Form::function(Poly::coordinate(m, k)));
    multipliers.push_back(rng.form(m, rng.uniform(1, m), 2));
    for (const Form& a : multipliers) {
      const ESection s = left_multiply(a, ESection::basis(rank, m, l));
      if (op(s) != end_apply(F, s))
        throw ConsistencyError("graded curvature is not linear over forms; sign conventions are inconsistent");
    }
  }
  return F;
}

EndSuperForm curvature_2sform(const GradedConnection& C, int theta_cap) {
  const EndSuperForm theta = connection_superform(C, theta_cap);
  EndSuperForm R = detail::curvature_raw(theta);
  const SuperRank rank = C.rank();
  const int m = C.chart_dim();
  // (𝐝^∇∇)² has bidegree (2,0) and must commute with every superform.
  Sampler rng(0xface);
  for (int l = 0; l < rank.size(); ++l) {
    const SuperForm S = rng.superform(m, 1, 1, theta_cap);
    const ESuperForm s = left_multiply(S, ESuperForm::basis(rank, m, l, theta_cap));
    ESuperForm col(rank, m, theta_cap);
    for (int i = 0; i < rank.size(); ++i) col[i] = detail::mul_raw(S, R(i, l));
    if (detail::covariant_d_raw(theta, detail::covariant_d_raw(theta, s)) != col)
      throw ConsistencyError("(d^nabla)^2 is not linear over superforms; sign conventions are inconsistent");
  }
  R.check_cap();
  return R;
}

EndSuperForm covariant_commutator(const GradedConnection& C, const EndSuperForm& Q) {
  const SuperRank rank = Q.rank();
  const int m = Q.chart_dim();
  const int cap = Q.theta_cap();
  const EndSuperForm theta = connection_superform(C, cap);
  auto op = [&](const ESuperForm& s) {
    ESuperForm r = detail::covariant_d_raw(theta, detail::apply_raw(Q, s));
    const ESuperForm ds = detail::covariant_d_raw(theta, s);
    for (int k : Q.degrees()) {
      const ESuperForm t = detail::apply_raw(Q.degree_part(k), ds);
      if (k & 1)
        r += t;
      else
        r -= t;
    }
    return r;
  };
  EndSuperForm out(rank, m, cap);
  for (int l = 0; l < rank.size(); ++l) {
    const ESuperForm col = op(ESuperForm::basis(rank, m, l, cap));
    for (int i = 0; i < rank.size(); ++i) out(i, l) = col[i];
  }
  // Linear over multipliers of bidegree (2k, 0): functions and ξ-pairs.
  for (int l = 0; l < rank.size(); ++l) {
    SuperForm S = SuperForm::function(Form::function(Poly::coordinate(m, l % m)), cap);
    if (m >= 2) S += SuperForm::monomial(Form::function(Poly::coordinate(m, 0)), SMono{IndexMask{3}, 0}, cap);
    const ESuperForm s = left_multiply(S, ESuperForm::basis(rank, m, l, cap));
    ESuperForm col(rank, m, cap);
    for (int i = 0; i < rank.size(); ++i) col[i] = detail::mul_raw(S, out(i, l));
    if (op(s) != col) throw ConsistencyError("covariant commutator is not algebraic; sign conventions are inconsistent");
  }
  out.check_cap();
  return out;
}

}  // namespace superconn
