#include "superconn/poly.hpp"

#include <algorithm>

#include "superconn/errors.hpp"

namespace superconn {

namespace {

constexpr Exponents kCarryMask = 0x0101010101010100ULL;

Exponents add_exponents(Exponents a, Exponents b) {
  const Exponents sum = a + b;
  if (((a ^ b ^ sum) & kCarryMask) != 0 || sum < a)
    throw Error("polynomial exponent exceeds " + std::to_string(Poly::kMaxExponent));
  return sum;
}

void normalize(std::vector<Poly::Term>& terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Poly::Term& x, const Poly::Term& y) { return x.first < y.first; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size();) {
    Exponents key = terms[i].first;
    Ratio acc = std::move(terms[i].second);
    std::size_t j = i + 1;
    for (; j < terms.size() && terms[j].first == key; ++j) acc += terms[j].second;
    if (!acc.is_zero()) terms[out++] = {key, std::move(acc)};
    i = j;
  }
  terms.resize(out);
}

// Graded-lex: larger total degree first, then x1 > x2 > ... > t.
bool grlex_greater(Exponents a, Exponents b) {
  const int da = Poly::total_degree(a);
  const int db = Poly::total_degree(b);
  if (da != db) return da > db;
  for (int slot = 0; slot < 8; ++slot) {
    const int ea = Poly::exponent(a, slot);
    const int eb = Poly::exponent(b, slot);
    if (ea != eb) return ea > eb;
  }
  return false;
}

}  // namespace

Poly::Poly(int chart_dim) : dim_(chart_dim) {
  if (chart_dim < 1 || chart_dim > kMaxChartDim)
    throw DimensionError("chart dimension must lie in 1.." + std::to_string(kMaxChartDim));
}

Poly Poly::constant(int chart_dim, const Ratio& c) { return monomial(chart_dim, 0, c); }

Poly Poly::coordinate(int chart_dim, int index) {
  if (index < 0 || index >= chart_dim) throw DimensionError("coordinate index out of range");
  return monomial(chart_dim, Exponents{1} << (8 * index), Ratio(1));
}

Poly Poly::param(int chart_dim) { return monomial(chart_dim, Exponents{1} << (8 * kParamSlot), Ratio(1)); }

Poly Poly::monomial(int chart_dim, Exponents exps, const Ratio& c) {
  Poly p(chart_dim);
  if (!c.is_zero()) p.terms_.emplace_back(exps, c);
  return p;
}

Poly Poly::from_terms(int chart_dim, std::vector<Term> terms) {
  Poly p(chart_dim);
  normalize(terms);
  p.terms_ = std::move(terms);
  return p;
}

int Poly::total_degree(Exponents e) {
  int d = 0;
  for (int slot = 0; slot < 8; ++slot) d += exponent(e, slot);
  return d;
}

bool Poly::is_constant() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && terms_.front().first == 0);
}

bool Poly::has_param() const noexcept {
  return std::any_of(terms_.begin(), terms_.end(),
                     [](const Term& t) { return exponent(t.first, kParamSlot) != 0; });
}

int Poly::degree() const noexcept {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
  return d;
}

Ratio Poly::coefficient(Exponents e) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                             [](const Term& t, Exponents k) { return t.first < k; });
  return (it != terms_.end() && it->first == e) ? it->second : Ratio(0);
}

void Poly::check_same_chart(const Poly& o) const {
  if (dim_ != o.dim_) throw DimensionError("polynomials live on charts of different dimension");
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  check_same_chart(o);
  if (o.terms_.empty()) return *this;
  std::vector<Term> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      merged.push_back(std::move(*a++));
    } else if (a == terms_.end() || b->first < a->first) {
      merged.push_back(*b++);
    } else {
      Ratio s = a->second + b->second;
      if (!s.is_zero()) merged.emplace_back(a->first, std::move(s));
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) { return *this += -o; }

Poly& Poly::operator*=(const Ratio& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= c;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  a.check_same_chart(b);
  Poly r(a.dim_);
  if (a.terms_.empty() || b.terms_.empty()) return r;
  r.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) r.terms_.emplace_back(add_exponents(ea, eb), ca * cb);
  normalize(r.terms_);
  return r;
}

Poly Poly::pow(unsigned n) const {
  Poly result = constant(dim_, Ratio(1));
  Poly base = *this;
  while (n != 0) {
    if (n & 1U) result *= base;
    n >>= 1U;
    if (n != 0) base *= base;
  }
  return result;
}

std::string Poly::str(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::vector<const Term*> order;
  order.reserve(terms_.size());
  for (const auto& t : terms_) order.push_back(&t);
  std::sort(order.begin(), order.end(),
            [](const Term* x, const Term* y) { return grlex_greater(x->first, y->first); });
  std::string out;
  bool first = true;
  for (const Term* t : order) {
    const Ratio& c = t->second;
    if (first) {
      if (c.sign() < 0) out += "-";
    } else {
      out += c.sign() < 0 ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (int slot = 0; slot < 8; ++slot) {
      const int e = exponent(t->first, slot);
      if (e == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += slot == kParamSlot ? std::string("t") : names[static_cast<std::size_t>(slot)];
      if (e > 1) mono += "^" + std::to_string(e);
    }
    const Ratio mag = c.abs();
    if (mono.empty()) {
      out += mag.str();
    } else if (mag == Ratio(1)) {
      out += mono;
    } else {
      out += mag.str() + "*" + mono;
    }
  }
  return out;
}

std::string Poly::str() const {
  const auto names = default_coordinate_names(dim_);
  return str(names);
}

Poly partial(const Poly& p, int index) {
  if (index < 0 || index >= p.chart_dim()) throw DimensionError("partial: coordinate index out of range");
  std::vector<Poly::Term> out;
  const Exponents unit = Exponents{1} << (8 * index);
  for (const auto& [e, c] : p.terms()) {
    const int k = Poly::exponent(e, index);
    if (k == 0) continue;
    out.emplace_back(e - unit, c * Ratio(k));
  }
  return Poly::from_terms(p.chart_dim(), std::move(out));
}

Poly integrate_unit(const Poly& p) {
  std::vector<Poly::Term> out;
  const Exponents mask = Exponents{0xFF} << (8 * Poly::kParamSlot);
  for (const auto& [e, c] : p.terms()) {
    const int k = Poly::exponent(e, Poly::kParamSlot);
    out.emplace_back(e & ~mask, c / Ratio(k + 1));
  }
  return Poly::from_terms(p.chart_dim(), std::move(out));
}

std::vector<std::string> default_coordinate_names(int chart_dim) {
  std::vector<std::string> names;
  for (int i = 1; i <= chart_dim; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

}  // namespace superconn
