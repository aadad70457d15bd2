#include <doctest.h>

#include "superconn/errors.hpp"
#include "superconn/poly.hpp"
#include "superconn/sampling.hpp"
#include "support/generators.hpp"

using namespace superconn;

namespace {

Poly x(int m = 2) { return Poly::coordinate(m, 0); }
Poly y(int m = 2) { return Poly::coordinate(m, 1); }
Poly c(long n, long d = 1, int m = 2) { return Poly::constant(m, Ratio(n, d)); }

}  // namespace

TEST_CASE("ratio normal form") {
  CHECK(Ratio(2, 4) == Ratio(1, 2));
  CHECK(Ratio(3, -6).str() == "-1/2");
  CHECK(Ratio(0, 5).str() == "0");
  CHECK(Ratio::parse("-6/4") == Ratio(-3, 2));
  CHECK(Ratio::parse("7").is_integer());
  CHECK_THROWS_AS(Ratio(1) / Ratio(0), Error);
}

TEST_CASE("poly ring examples") {
  CHECK((x() + y()) * (x() - y()) == x() * x() - y() * y());
  const Poly p = c(3) * x() * y() - c(1, 2);
  CHECK(p + Poly(2) == p);
  CHECK((c(1, 2) * x()).pow(2) == c(1, 4) * x() * x());
  CHECK_THROWS_AS(x(2) + x(3), DimensionError);
}

TEST_CASE("poly canonical printing") {
  const Poly p = c(3, 2) * x() * x() * y() - c(1);
  CHECK(p.str() == "3/2*x1^2*x2 - 1");
  const std::vector<std::string> names{"x", "y"};
  CHECK(p.str(names) == "3/2*x^2*y - 1");
  CHECK(Poly(2).str() == "0");
  CHECK((-x()).str(names) == "-x");
  CHECK((x() * Poly::param(2)).str(names) == "x*t");
}

TEST_CASE("partial derivatives") {
  const Poly p = x() * x() * y();
  CHECK(partial(p, 0) == c(2) * x() * y());
  CHECK(partial(c(5), 0).is_zero());
  CHECK(partial(p, 1) == x() * x());
}

TEST_CASE("integrate over the unit interval") {
  const Poly t = Poly::param(2);
  CHECK(integrate_unit(c(2) * t) == c(1));
  CHECK(integrate_unit(x()) == x());
  CHECK(integrate_unit(c(3) * t * t * x()) == x());
  CHECK_FALSE(integrate_unit(t * x() + t.pow(3)).has_param());
}

TEST_CASE("exponent overflow is reported") {
  CHECK_THROWS_AS(x().pow(200) * x().pow(100), Error);
  CHECK_NOTHROW(x().pow(255));
}

TEST_CASE("property: ring axioms, partials commute, integration is linear") {
  Sampler rng(gen::kSeed);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = rng.uniform(1, 3);
    const Poly a = rng.poly(m, 3, 4), b = rng.poly(m, 3, 4), d = rng.poly(m, 3, 4);
    CHECK((a * b) * d == a * (b * d));
    CHECK(a * (b + d) == a * b + a * d);
    CHECK(a * b == b * a);
    CHECK(a - a == Poly(m));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) CHECK(partial(partial(a, i), j) == partial(partial(a, j), i));
    const Poly t = Poly::param(m);
    const Ratio r = rng.small_ratio();
    const Poly u = a * t + b * t * t, v = d * t.pow(3);
    CHECK(integrate_unit(u * r + v) == integrate_unit(u) * r + integrate_unit(v));
  }
}
