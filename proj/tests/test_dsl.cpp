#include <doctest.h>

#include "superconn/dsl.hpp"
#include "superconn/sampling.hpp"
#include "support/fuzz.hpp"
#include "support/generators.hpp"

using namespace superconn;
using namespace superconn::dsl;

namespace {

const std::string kHeader = "[chart]\nm = 2\ncoords = x y\n\n[bundle]\np = 1\nq = 1\n";

std::vector<std::filesystem::path> fixtures() { return fuzz::spec_files(SUPERCONN_FIXTURE_DIR); }

/// The first diagnostic, for checking message and location.
Diagnostic first_error(const std::string& text) {
  const ParseResult r = parse_spec(text);
  REQUIRE_FALSE(r.ok());
  REQUIRE_FALSE(r.diagnostics.empty());
  return r.diagnostics.front();
}

/// Random model with every section populated where the rank allows.
SpecModel random_model(Sampler& rng) {
  SpecModel M;
  M.chart_dim = rng.uniform(1, 3);
  M.coords = default_coordinate_names(M.chart_dim);
  if (rng.coin(50)) {
    static const std::vector<std::string> pool = {"u", "v", "w"};
    M.coords.assign(pool.begin(), pool.begin() + M.chart_dim);
  }
  M.rank = gen::rank(rng);
  const GradedConnection C = gen::graded_connection(rng, M.rank, M.chart_dim);
  M.gamma = C.gamma;
  M.omega = C.omega;
  if (rng.coin(70)) M.K0 = C.K0;
  if (rng.coin(70)) M.K1 = C.K1;
  if (rng.coin(30)) M.K0_alt = gen::graded_connection(rng, M.rank, M.chart_dim).K0;
  if (rng.coin(30)) M.P = gen::end_form(rng, M.rank, M.chart_dim, 1, 2, 40);
  if (rng.coin(40)) {
    EndForm N(M.rank, M.chart_dim);
    for (int i = 0; i < M.rank.size(); ++i)
      for (int j = 0; j < M.rank.size(); ++j)
        if (M.rank.end_parity(i, j) && rng.coin(50)) N(i, j) = Form::function(rng.poly(M.chart_dim, 2));
    M.N = N;
  }
  M.theta_cap = rng.uniform(2, 6);
  M.trials = rng.uniform(1, 30);
  M.seed = static_cast<std::uint64_t>(rng.uniform(0, 1 << 30));
  if (rng.coin(50)) M.commands = {{"verify", {"all"}}, {"chern", {"2"}}, {"same-induced", {}}};
  return M;
}

}  // namespace

TEST_CASE("parser examples") {
  const ParseResult r = parse_spec(kHeader);
  REQUIRE(r.ok());
  CHECK(r.model->chart_dim == 2);
  CHECK(r.model->rank == SuperRank(1, 1));
  CHECK(r.model->omega.is_zero());
  CHECK(r.model->gamma.is_flat());
  CHECK_FALSE(r.model->K0.has_value());

  const ParseResult w = parse_spec(kHeader + "[omegaE]\nomegaE[1][1] = x dx(2)\n");
  REQUIRE(w.ok());
  CHECK(w.model->omega(0, 0) == Poly::coordinate(2, 0) * Form::dx(2, {1}));
  CHECK(w.model->omega(1, 1).is_zero());

  const Diagnostic d = first_error(kHeader + "[K0]\nK0[1][2][1] = dx(3)\n");
  CHECK(d.line == 9);
  CHECK(d.column == 18);
  CHECK(d.message.find("undeclared index 3") != std::string::npos);
}

TEST_CASE("expression syntax") {
  auto value = [](const std::string& expr) {
    const ParseResult r = parse_spec(kHeader + "[omegaE]\nomegaE[1][1] = " + expr + "\n");
    REQUIRE(r.ok());
    return r.model->omega(0, 0);
  };
  const Poly x = Poly::coordinate(2, 0), y = Poly::coordinate(2, 1);
  const Form dx = Form::dx(2, {0}), dy = Form::dx(2, {1});
  CHECK(value("1/2*x*dx(1) - (x + y)*dx(2)") == Ratio(1, 2) * x * dx - (x + y) * dy);
  CHECK(value("x^2 y dx(1)") == x.pow(2) * y * dx);
  CHECK(value("-dx(2) + x dx(1)/3") == -dy + Ratio(1, 3) * x * dx);
  CHECK(value("(1 - x)^2 dx(1)") == (Poly::constant(2, Ratio(1)) - x).pow(2) * dx);
  CHECK(value("x dx(1) + 0 dx(2) # trailing comment") == x * dx);
  // dx(2)*x*dx(1)... products of differentials are wedges.
  const ParseResult k = parse_spec(kHeader + "[P]\nP[1][2] = dx(2) dx(1)\n");
  REQUIRE(k.ok());
  CHECK((*k.model->P)(0, 1) == -Form::dx(2, {0, 1}));
}

TEST_CASE("diagnostics carry locations") {
  struct Case {
    std::string body;
    int line;
    int column;
    std::string fragment;
  };
  const std::vector<Case> cases = {
      {"[omegaE]\nomegaE[1][1] = z dx(2)\n", 9, 16, "undeclared coordinate 'z'"},
      {"[omegaE]\nomegaE[1][2] = dx(2)\n", 9, 8, "block-diagonal"},
      {"[omegaE]\nomegaE[1][1] = x\n", 9, 16, "1-forms"},
      {"[K0]\nK0[1][1][2] = x\n", 9, 15, "wrong total parity"},
      {"[K1]\nK1[1][1][1] = x\n", 9, 15, "wrong total parity"},
      {"[N]\nN[1][1] = x\n", 9, 3, "End^1"},
      {"[N]\nN[1][2] = dx(1)\n", 9, 11, "functions"},
      {"[P]\nP[1][1] = 1\n", 9, 11, "wrong total parity"},
      {"[Gamma]\nGamma[1][1] = x\n", 9, 1, "needs 3 indices"},
      {"[Gamma]\nGamma[1][1][4] = x\n", 9, 13, "undeclared coordinate index 4"},
      {"[omegaE]\nomegaE[3][1] = dx(1)\n", 9, 8, "undeclared bundle slot 3"},
      {"[omegaE]\nfoo[1][1] = dx(1)\n", 9, 1, "unknown key 'foo'"},
      {"[omegaE]\nomegaE[1][1] = (x dx(1)\n", 9, 24, "expected ')'"},
      {"[omegaE]\nomegaE[1][1] = x $ dx(1)\n", 9, 18, "unexpected character"},
      {"[omegaE]\nomegaE[1][1] dx(1)\n", 9, 14, "expected '='"},
      {"[stuff]\n", 8, 2, "unknown section"},
      {"[omegaE]\nomegaE[1][1] = dx(1)\nomegaE[1][1] = dx(2)\n", 10, 1, "duplicate entry"},
      {"[omegaE]\nomegaE[1][1] = x^2 dx(1) / y\n", 9, 26, "division"},
      {"[omegaE]\nomegaE[1][1] = dx(1)^2\n", 9, 16, "only functions"},
      {"[commands]\nrun = verify everything\n", 9, 7, "unknown command"},
      {"[settings]\ntheta_cap = 99\n", 9, 13, "theta cap"},
  };
  for (const Case& c : cases) {
    CAPTURE(c.body);
    const Diagnostic d = first_error(kHeader + c.body);
    CHECK(d.line == c.line);
    CHECK(d.column == c.column);
    CHECK(d.message.find(c.fragment) != std::string::npos);
  }
  CHECK(first_error("").message.find("[chart]") != std::string::npos);
  CHECK(first_error("[chart]\nm = 2\ncoords = x\n[bundle]\np=1\nq=0\n[Gamma]\n").line == 3);
  CHECK(first_error("[chart]\nm = 2\ncoords = x t\n").message.find("'t'") != std::string::npos);
  CHECK(first_error("[bundle]\np = 0\nq = 0\n").message.find("at least 1") != std::string::npos);
}

TEST_CASE("several diagnostics in one file") {
  const ParseResult r = parse_spec(kHeader + "[omegaE]\nomegaE[1][1] = q dx(1)\nomegaE[2][2] = x\n[K0]\nK0[9][1][1] = 1\n");
  CHECK_FALSE(r.ok());
  REQUIRE(r.diagnostics.size() == 3);
  CHECK(r.diagnostics[0].line == 9);
  CHECK(r.diagnostics[1].line == 10);
  CHECK(r.diagnostics[2].line == 12);
}

TEST_CASE("commands") {
  CHECK(parse_command("verify all") == Command{"verify", {"all"}});
  CHECK(parse_command("chern --k 2") == Command{"chern", {"2"}});
  CHECK(parse_command("chern") == Command{"chern", {"1"}});
  CHECK(parse_command("  induce  ") == Command{"induce", {}});
  CHECK_FALSE(parse_command("induce now").has_value());
  CHECK_FALSE(parse_command("chern 0").has_value());
  CHECK_FALSE(parse_command("chern x").has_value());
  CHECK_FALSE(parse_command("run").has_value());
  CHECK_FALSE(parse_command("").has_value());
}

TEST_CASE("fixture corpus parses and passes verify all") {
  const auto files = fixtures();
  CHECK(files.size() >= 10);
  for (const auto& f : files) {
    CAPTURE(f.string());
    const ParseResult r = parse_spec(fuzz::read_file(f));
    REQUIRE(r.ok());
    CHECK(r.diagnostics.empty());
    const RunResult out = run(*r.model, Command{"verify", {"all"}});
    CHECK(out.exit_code == kExitPass);
    if (!r.model->commands.empty()) CHECK(run(*r.model, Command{"run", {}}).exit_code == kExitPass);
  }
}

TEST_CASE("round trip: print then parse reproduces the model") {
  for (const auto& f : fixtures()) {
    CAPTURE(f.string());
    const ParseResult r = parse_spec(fuzz::read_file(f));
    REQUIRE(r.ok());
    const std::string printed = print_spec(*r.model);
    const ParseResult again = parse_spec(printed);
    REQUIRE(again.ok());
    CHECK(*again.model == *r.model);
    CHECK(print_spec(*again.model) == printed);
  }
  Sampler rng(gen::kSeed + 50);
  for (int trial = 0; trial < 50; ++trial) {
    const SpecModel M = random_model(rng);
    const std::string printed = print_spec(M);
    CAPTURE(printed);
    const ParseResult r = parse_spec(printed);
    REQUIRE(r.ok());
    CHECK(*r.model == M);
  }
}

TEST_CASE("fuzzed inputs produce diagnostics, never crashes") {
  std::vector<std::string> seeds;
  for (const auto& f : fixtures()) seeds.push_back(fuzz::read_file(f));
  Sampler rng(gen::kSeed + 51);
  int rejected = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::string text = fuzz::mutate(rng, seeds[static_cast<std::size_t>(trial) % seeds.size()]);
    ParseResult r;
    CHECK_NOTHROW(r = parse_spec(text));
    CHECK(fuzz::locations_valid(text, r.diagnostics));
    if (!r.ok()) {
      ++rejected;
      CHECK_FALSE(r.diagnostics.empty());
    }
  }
  CHECK(rejected > 300);
  // Pathological inputs.
  CHECK_FALSE(parse_spec(kHeader + "[omegaE]\nomegaE[1][1] = " + std::string(500, '(') + "x\n").ok());
  CHECK_FALSE(parse_spec(kHeader + "[omegaE]\nomegaE[1][1] = " + std::string(100, '-') + "\n").ok());
  CHECK_FALSE(parse_spec(kHeader + "[omegaE]\nomegaE[1][1] = (x+y)^200 dx(1)\n").ok());
  CHECK_FALSE(parse_spec(kHeader + "[omegaE]\nomegaE[1][1] = x^255 x dx(1)\n").ok());
  CHECK_FALSE(parse_spec(kHeader + "[omegaE]\nomegaE[1][1] = dx(" + std::string(80, '9') + ")\n").ok());
  CHECK_FALSE(parse_spec(std::string("\0\0[chart]", 9)).ok());
}

TEST_CASE("run reports and exit codes") {
  const ParseResult flat = parse_spec(kHeader);
  REQUIRE(flat.ok());
  for (const char* name : {"leibniz", "decomposition", "curvature-relation", "bianchi", "transgression", "chern-match"})
    CHECK(run(*flat.model, Command{"verify", {name}}).exit_code == kExitPass);

  const ParseResult diag = parse_spec(kHeader + "[omegaE]\nomegaE[1][1] = x dx(2)\n");
  REQUIRE(diag.ok());
  RunOptions json_opts;
  json_opts.format = OutputFormat::json;
  const RunResult chern = run(*diag.model, Command{"chern", {"1"}}, json_opts);
  CHECK(chern.exit_code == kExitPass);
  CHECK(chern.output.find("\"kappa_projection\"") != std::string::npos);

  RunOptions small;
  small.theta_cap = 2;
  const RunResult over = run(*diag.model, Command{"chern", {"2"}}, small);
  CHECK(over.exit_code == kExitInputError);
  CHECK(over.output.find("required theta cap 4") != std::string::npos);

  // same-induced without alternate tensors compares the connection with itself.
  CHECK(run(*diag.model, Command{"same-induced", {}}).output.find("same = true") != std::string::npos);
  CHECK(run(*diag.model, Command{"run", {}}).exit_code == kExitInputError);

  // Options override the model settings, and reruns are deterministic.
  RunOptions seeded;
  seeded.seed = 99;
  seeded.trials = 3;
  const RunResult a = run(*diag.model, Command{"verify", {"leibniz"}}, seeded);
  CHECK(a.output.find("3 trials") != std::string::npos);
  CHECK(a.output == run(*diag.model, Command{"verify", {"leibniz"}}, seeded).output);
}
