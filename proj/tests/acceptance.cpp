// Acceptance runner: one PASS/FAIL line per criterion. Every identity is an
// exact equality of canonical forms, so the tolerance is zero throughout.

#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>

#include "superconn/chern.hpp"
#include "superconn/correspondence.hpp"
#include "superconn/dsl.hpp"
#include "support/fuzz.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace superconn;

namespace {

constexpr int kTrials = 20;
constexpr int kThetaMax = 4;
constexpr double kTolerance = 0.0;  // exact arithmetic
constexpr double kLimitExterior = 5.0;
constexpr double kLimitCurvature = 60.0;
constexpr double kLimitChernSuite = 120.0;

/// Counts failed identities; the first one is kept for the report.
class Tally {
public:
  void expect(bool ok, const char* what) {
    ++checks_;
    if (!ok && failures_++ == 0) first_ = what;
  }
  bool ok() const { return failures_ == 0 && checks_ > 0; }
  std::string summary() const {
    if (checks_ == 0) return "no checks ran";
    if (failures_ == 0) return std::to_string(checks_) + " identities exact";
    return std::to_string(failures_) + "/" + std::to_string(checks_) + " failed, first: " + first_;
  }

private:
  int checks_ = 0;
  int failures_ = 0;
  std::string first_;
};

Ratio sign(int exponent) { return Ratio((exponent & 1) ? -1 : 1); }

Christoffel torsionful(Sampler& rng, int m) {
  Christoffel G = gen::christoffel(rng, m);
  if (torsion(G) == Christoffel(m)) G(m - 1, 0, m - 1) += Poly::constant(m, Ratio(1));
  return G;
}

EndForm random_n(Sampler& rng, SuperRank rank, int m) {
  EndForm N(rank, m);
  for (int i = 0; i < rank.size(); ++i)
    for (int j = 0; j < rank.size(); ++j)
      if (rank.end_parity(i, j) && rng.coin(60)) N(i, j) = Form::function(rng.poly(m, 1, 2));
  return N;
}

GradedConnection perturb(Sampler& rng, const GradedConnection& C) {
  GradedConnection r = C;
  for (int k = 0; k < C.chart_dim(); ++k) {
    r.K0[k] += gen::tensor_value(rng, C.rank(), C.chart_dim(), 0, 1);
    r.K1[k] += gen::tensor_value(rng, C.rank(), C.chart_dim(), 1, 1);
  }
  r.validate();
  return r;
}

std::optional<dsl::SpecModel> load_fixture(const char* name) {
  const auto r = dsl::parse_spec(fuzz::read_file(std::string(SUPERCONN_FIXTURE_DIR) + "/" + name));
  return r.model;
}

void exterior_calculus(Tally& t) {
  Sampler rng(gen::kSeed + 100);
  for (int trial = 0; trial < kTrials; ++trial) {
    const int m = rng.uniform(1, 3);
    const Form a = rng.mixed_form(m, 3);
    t.expect(ext_d(ext_d(a)).is_zero(), "d^2 = 0");
    t.expect(ext_d(a) == oracle::ext_d(a), "d against the word oracle");
    for (int p = 0; p <= m; ++p)
      for (int q = 0; q <= m; ++q) {
        const Form u = rng.form(m, p, 3), v = rng.form(m, q, 3);
        t.expect(wedge(u, v) == sign(p * q) * wedge(v, u), "graded commutativity");
        t.expect(wedge(u, v) == oracle::wedge(u, v), "wedge against the word oracle");
      }
    // L_X from the covariant/insertion decomposition against i_X d + d i_X.
    const VectorField X = gen::vector_field(rng, m, 3);
    const DerivationSpec lie = lie_derivative(X, torsionful(rng, m));
    for (int probe = 0; probe < 3; ++probe) {
      const Form b = rng.mixed_form(m, 3);
      t.expect(apply_derivation(lie, b) == interior(X, ext_d(b)) + ext_d(interior(X, b)), "Cartan formula");
    }
  }
}

void derivation_decomposition(Tally& t) {
  Sampler rng(gen::kSeed + 200);
  for (int g = 0; g < 3; ++g) {
    const int m = rng.uniform(2, 3);
    const Christoffel G = g == 0 ? Christoffel(m) : torsionful(rng, m);
    for (int n = -1; n <= 2; ++n)
      for (int trial = 0; trial < kTrials; ++trial) {
        const GeneratorAction act = gen::action(rng, m, n, 3);
        const auto [K, L] = decompose_derivation(act, G);
        t.expect(generator_action(compose_derivation(K, L, G)) == act, "nabla_K + i_L reconstructs the action");
        const Form a = rng.mixed_form(m, 2);
        t.expect(nabla_K(G, K, a) + alg_insertion(L, a) == oracle::apply_action(act, a), "reconstruction on forms");
      }
  }
}

void d_as_derivation_check(Tally& t) {
  Sampler rng(gen::kSeed + 300);
  for (int g = 0; g < 3; ++g) {
    const int m = rng.uniform(2, 3);
    const Christoffel G = torsionful(rng, m);
    const DerivationSpec d = d_as_derivation(G);
    for (int probe = 0; probe < kTrials; ++probe) {
      const Form a = rng.mixed_form(m, 3);
      t.expect(apply_derivation(d, a) == ext_d(a), "d_as_derivation = d");
    }
  }
}

void quillen_leibniz(Tally& t) {
  Sampler rng(gen::kSeed + 400);
  for (int trial = 0; trial < kTrials; ++trial) {
    const int m = rng.uniform(1, 3);
    const SuperRank rank = gen::rank(rng);
    const Superconnection D = induce(gen::graded_connection(rng, rank, m));
    t.expect(D.P.has_total_parity(1), "odd total degree");
    const int p = rng.uniform(0, m);
    const Form a = rng.form(m, p, 2);
    const ESection s = gen::section(rng, rank, m);
    const ESection rhs = left_multiply(ext_d(a), s) + left_multiply(sign(p) * a, sc_apply(D, s));
    t.expect(sc_apply(D, left_multiply(a, s)) == rhs, "D(a s) = da s + (-1)^|a| a Ds");
    // [D, a] = da as operators.
    const ESection bracket = sc_apply(D, left_multiply(a, s)) - left_multiply(sign(p) * a, sc_apply(D, s));
    t.expect(bracket == left_multiply(ext_d(a), s), "[D, a] = da");
  }
}

void round_trip(Tally& t) {
  Sampler rng(gen::kSeed + 500);
  for (int trial = 0; trial < kTrials; ++trial) {
    const int m = rng.uniform(1, 3);
    const SuperRank rank = gen::rank(rng);
    Superconnection D = gen::superconnection(rng, rank, m, 2);
    if (trial % 4 == 0) D = Superconnection(D.omega, random_n(rng, rank, m));
    const auto dec = decompose_superconnection(D);
    t.expect(induce_with(dec.C, dec.N) == D, "induce(decompose(D)) + N = D");
  }
}

void induced_curvature(Tally& t) {
  Sampler rng(gen::kSeed + 600);
  int curved = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const SuperRank rank = trial % 2 ? SuperRank(2, 1) : SuperRank(1, 1);
    const GradedConnection C = gen::graded_connection(rng, rank, 2);
    const DerivationSpec d = d_as_derivation(C.gamma);
    const EndForm R = sc_curvature(induce(C));
    t.expect(R == Ratio(1, 2) * graded_curvature(C, d, d), "R^D = 1/2 R(d,d)");
    if (!R.is_zero()) ++curved;
  }
  t.expect(curved >= 8, "most samples are curved");
}

void curvature_with_n(Tally& t) {
  Sampler rng(gen::kSeed + 700);
  for (int trial = 0; trial < 10; ++trial) {
    const SuperRank rank = trial % 2 ? SuperRank(2, 1) : SuperRank(1, 1);
    const GradedConnection C = gen::graded_connection(rng, rank, 2);
    t.expect(curvature_relation(C, random_n(rng, rank, 2)).equal(), "random (C, N)");
  }
  const auto tachyon = load_fixture("tachyon.sc");
  t.expect(tachyon.has_value(), "tachyon fixture parses");
  if (tachyon) {
    const auto rel = curvature_relation(tachyon->connection(), tachyon->n_tensor());
    t.expect(rel.equal(), "tachyon fixture");
    t.expect(!tachyon->n_tensor().is_zero() && !rel.lhs.form_degree_part(0).is_zero(), "tachyon N^2 is nonzero");
  }
}

void curvature_oracle(Tally& t) {
  Sampler rng(gen::kSeed + 800);
  for (int trial = 0; trial < kTrials; ++trial) {
    const int m = rng.uniform(1, 3);
    const SuperRank rank = gen::rank(rng);
    const Superconnection D = gen::superconnection(rng, rank, m);
    t.expect(sc_curvature(D) == sc_curvature_extracted(D), "closed form = extracted D^2");
  }
}

void chern_suite(Tally& t) {
  Sampler rng(gen::kSeed + 900);
  constexpr int m = 2;
  int moved = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const SuperRank rank = trial % 2 ? SuperRank(2, 1) : SuperRank(1, 1);
    const GradedConnection C0 = gen::graded_connection(rng, rank, m);
    const GradedConnection C1 = perturb(rng, C0);
    for (int k = 1; k <= 2; ++k) {
      const SuperForm c0 = chern_superform(C0, k, kThetaMax), c1 = chern_superform(C1, k, kThetaMax);
      t.expect(is_closed(c0) && is_closed(c1), "d Str(R^k) = 0");
      t.expect(c1 - c0 == sform_d(transgression(C0, C1, k, kThetaMax)), "transgression identity");
      if (!(c1 - c0).is_zero()) ++moved;
    }
  }
  t.expect(moved >= 5, "the Chern superform changes along most pairs");
  for (int trial = 0; trial < 10; ++trial) {
    const SuperRank rank = gen::rank(rng);
    const GradedConnection C = gen::graded_connection(rng, rank, m);
    EndSuperForm Q(rank, m, kThetaMax);
    for (int i = 0; i < rank.size(); ++i)
      for (int j = 0; j < rank.size(); ++j)
        if (rng.coin(60)) Q(i, j) = rng.superform(m, 1, 1, kThetaMax);
    t.expect(supertrace(covariant_commutator(C, Q)) == sform_d(supertrace(Q)), "Str [d^nabla, Q] = d Str Q");
  }
  for (int trial = 0; trial < kTrials; ++trial) {
    const SuperForm s = rng.superform(rng.uniform(1, 3), 3, 2, kThetaMax);
    t.expect(kappa(sform_d(s)) == ext_d(kappa(s)), "kappa d = d kappa");
  }
}

void chern_classes(Tally& t) {
  Sampler rng(gen::kSeed + 1000);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = rng.uniform(1, 3);
    const GradedConnection C(gen::christoffel(rng, m), gen::connection_matrix(rng, gen::rank(rng), m));
    for (int k = 1; k <= 2; ++k) t.expect(chern_match(C, k, kThetaMax).equal(), "chern_match");
  }
  // Two curved blocks: ch_k of the graded bundle is ch_k(E0) - ch_k(E1).
  const auto blocks = load_fixture("two_block_curved.sc");
  t.expect(blocks.has_value(), "two-block fixture parses");
  if (blocks) {
    const int m = blocks->chart_dim;
    const EndForm& w = blocks->omega;
    auto line_chern = [m](const Form& a, int k) {
      EndForm line(SuperRank(1, 0), m);
      line(0, 0) = a;
      return classical_chern(Superconnection::from_connection(line), k);
    };
    for (int k = 1; k <= 2; ++k) {
      const Form expected = line_chern(w(0, 0), k) - line_chern(w(1, 1), k);
      t.expect(kappa(chern_superform(blocks->connection(), k, kThetaMax)) == expected, "ch_k = ch_k(E0) - ch_k(E1)");
    }
    t.expect(!(line_chern(w(0, 0), 1) - line_chern(w(1, 1), 1)).is_zero(), "two-block class is nonzero");
  }
  for (int k = 1; k <= 2; ++k) {
    t.expect(supertangent_chern(2, k).is_zero(), "supertangent class vanishes");
    const EndForm tangent = gen::connection_matrix(rng, SuperRank(2, 0), 2, 1, 80);
    t.expect(supertangent_chern(tangent, tangent, k).is_zero(), "supertangent class vanishes (curved)");
    t.expect(supercotangent_chern(tangent, tangent, k).is_zero(), "supercotangent class vanishes (curved)");
  }
  for (int trial = 0; trial < 5; ++trial) {
    const GradedConnection C = gen::graded_connection(rng, gen::rank(rng), 2);
    t.expect(kappa(chern_superform(C, 2, kThetaMax)).is_zero(), "kappa side vanishes for 2k > m");
  }
}

void parser(Tally& t) {
  const auto files = fuzz::spec_files(SUPERCONN_FIXTURE_DIR);
  t.expect(files.size() >= 10, "at least 10 fixtures");
  std::vector<std::string> texts;
  for (const auto& f : files) {
    texts.push_back(fuzz::read_file(f));
    const auto r = dsl::parse_spec(texts.back());
    t.expect(r.ok(), "fixture parses");
    if (!r.ok()) continue;
    t.expect(dsl::run(*r.model, dsl::Command{"verify", {"all"}}).exit_code == dsl::kExitPass, "verify all exits 0");
    const auto again = dsl::parse_spec(dsl::print_spec(*r.model));
    t.expect(again.ok() && *again.model == *r.model, "print/parse round trip");
  }
  if (texts.empty()) return;
  Sampler rng(gen::kSeed + 1100);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::string text = fuzz::mutate(rng, texts[static_cast<std::size_t>(trial) % texts.size()]);
    try {
      const auto r = dsl::parse_spec(text);
      t.expect(r.ok() || !r.diagnostics.empty(), "rejected input has a diagnostic");
      t.expect(fuzz::locations_valid(text, r.diagnostics), "diagnostic location is valid");
      if (r.ok()) {
        const auto again = dsl::parse_spec(dsl::print_spec(*r.model));
        t.expect(again.ok() && *again.model == *r.model, "round trip of a fuzzed model");
      }
    } catch (...) {
      t.expect(false, "parser threw");
    }
  }
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Tally&)> body;
  std::optional<double> limit_seconds;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "exterior calculus", exterior_calculus, kLimitExterior},
      {2, "derivation decomposition", derivation_decomposition, std::nullopt},
      {3, "d as a derivation", d_as_derivation_check, std::nullopt},
      {4, "Quillen Leibniz for induce", quillen_leibniz, std::nullopt},
      {5, "decompose/induce round trip", round_trip, std::nullopt},
      {6, "induced curvature is half R(d,d)", induced_curvature, kLimitCurvature},
      {7, "curvature relation with N", curvature_with_n, std::nullopt},
      {8, "closed-form curvature oracle", curvature_oracle, std::nullopt},
      {9, "Chern superform suite", chern_suite, kLimitChernSuite},
      {10, "Chern class comparisons", chern_classes, std::nullopt},
      {11, "parser corpus, fuzz, round trip", parser, std::nullopt},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Tally tally;
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      c.body(tally);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = !c.limit_seconds || seconds < *c.limit_seconds;
    const bool pass = error.empty() && tally.ok() && in_time;
    if (!pass) ++failed;
    std::string timing = std::to_string(seconds).substr(0, 5) + " s";
    if (c.limit_seconds) timing += " < " + std::to_string(static_cast<int>(*c.limit_seconds)) + " s";
    std::printf("%s %2d %s: %s, tolerance %g, %s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                error.empty() ? tally.summary().c_str() : ("exception: " + error).c_str(), kTolerance,
                timing.c_str());
  }
  return failed == 0 ? 0 : 1;
}
