// superconn: run symbolic identity checks on a spec file.
//
//   superconn verify all examples/flat.sc --format json
//   superconn chern model.sc --k 2

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "superconn/dsl.hpp"

namespace dsl = superconn::dsl;

namespace {

struct Args {
  std::string file;
  std::string format = "text";
  std::optional<int> theta_cap;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  int k = 1;
  std::string check;
};

void add_common(CLI::App* sub, Args& a) {
  sub->add_option("spec", a.file, "Spec file")->required()->check(CLI::ExistingFile);
  sub->add_option("--format", a.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  sub->add_option("--theta-cap", a.theta_cap, "Largest theta degree kept in superform results")
      ->check(CLI::Range(1, 12));
  sub->add_option("--trials", a.trials, "Random trials per property")->check(CLI::Range(1, 100000));
  sub->add_option("--seed", a.seed, "Seed for randomized checks (SUPERCONN_SEED overrides)");
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("SUPERCONN_SEED");
  if (!s || !*s) return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (*end != '\0') return std::nullopt;
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact checks for graded connections and Quillen superconnections"};
  app.require_subcommand(1);
  Args args;

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub plain[] = {
      {"induce", "Superconnection induced by the graded connection"},
      {"decompose", "Split the superconnection as an induced one plus N"},
      {"curvature", "Curvature of the superconnection and the curvature superform"},
      {"same-induced", "Compare the connection with the [K0_alt]/[K1_alt] variant"},
      {"run", "Execute the [commands] section"},
      {"print", "Print the spec file in canonical form"},
  };
  std::string chosen;
  for (const Sub& s : plain) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, args);
    sub->callback([&chosen, name = s.name] { chosen = name; });
  }
  CLI::App* chern = app.add_subcommand("chern", "Chern superform report");
  add_common(chern, args);
  chern->add_option("--k", args.k, "Half the superform degree")->check(CLI::Range(1, 8));
  chern->callback([&] { chosen = "chern"; });
  CLI::App* verify = app.add_subcommand("verify", "Check identities exactly");
  verify
      ->add_option("check", args.check, "Which identities")
      ->required()
      ->check(CLI::IsMember(
          {"leibniz", "decomposition", "curvature-relation", "bianchi", "transgression", "chern-match", "all"}));
  add_common(verify, args);
  verify->callback([&] { chosen = "verify"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dsl::kExitInputError;
  }

  std::ifstream in(args.file, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  const dsl::ParseResult parsed = dsl::parse_spec(buf.str());
  for (const auto& d : parsed.diagnostics) std::cerr << args.file << ":" << d.str() << '\n';
  if (!parsed.ok()) return dsl::kExitInputError;

  if (chosen == "print") {
    std::cout << dsl::print_spec(*parsed.model);
    return dsl::kExitPass;
  }

  dsl::Command cmd{chosen, {}};
  if (chosen == "chern") cmd.args = {std::to_string(args.k)};
  if (chosen == "verify") cmd.args = {args.check};

  dsl::RunOptions opts;
  opts.format = args.format == "json" ? dsl::OutputFormat::json : dsl::OutputFormat::text;
  opts.theta_cap = args.theta_cap;
  opts.trials = args.trials;
  opts.seed = env_seed() ? env_seed() : args.seed;

  const dsl::RunResult r = dsl::run(*parsed.model, cmd, opts);
  std::cout << r.output;
  return r.exit_code;
}
