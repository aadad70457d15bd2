#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "superconn/cartan.hpp"
#include "superconn/quillen.hpp"

namespace superconn::dsl {

struct Diagnostic {
  enum class Severity { error, warning };
  Severity severity = Severity::error;
  std::string message;
  int line = 1;    ///< 1-based
  int column = 1;  ///< 1-based byte offset within the line

  std::string str() const;
};

/// A subcommand with its arguments, e.g. {"verify", {"all"}} or {"chern", {"2"}}.
struct Command {
  std::string name;
  std::vector<std::string> args;
  friend bool operator==(const Command&, const Command&) = default;
};

/// Parsed spec file. Absent optional tensors default to zero.
struct SpecModel {
  int chart_dim = 1;
  std::vector<std::string> coords;
  SuperRank rank;
  Christoffel gamma{1};
  EndForm omega{SuperRank(), 1};
  std::optional<std::vector<EndForm>> K0, K1, K0_alt, K1_alt;
  std::optional<EndForm> P, N;
  int theta_cap = 4;
  int trials = 20;
  std::uint64_t seed = 1;
  std::vector<Command> commands;

  GradedConnection connection() const;
  /// Γ and ωᴱ with K0_alt / K1_alt (falling back to K0 / K1).
  GradedConnection alt_connection() const;
  bool has_alt() const { return K0_alt.has_value() || K1_alt.has_value(); }
  EndForm n_tensor() const;
  /// D = ωᴱ + P when P is given, otherwise induce(connection()) + N.
  Superconnection superconnection() const;

  friend bool operator==(const SpecModel&, const SpecModel&) = default;
};

struct ParseResult {
  std::optional<SpecModel> model;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return model.has_value(); }
};

/// Never throws on malformed input; problems come back as diagnostics.
ParseResult parse_spec(std::string_view text);

/// Canonical text; parse_spec(print_spec(m)) reproduces m.
std::string print_spec(const SpecModel& model);

/// Parses a command line such as "verify all" or "chern 2"; nullopt when
/// the name or arguments are not recognized.
std::optional<Command> parse_command(std::string_view text);

enum class OutputFormat { text, json };

struct RunOptions {
  OutputFormat format = OutputFormat::text;
  std::optional<int> theta_cap;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
};

/// Exit codes of a run.
inline constexpr int kExitPass = 0;
inline constexpr int kExitIdentityFailure = 1;
inline constexpr int kExitInputError = 2;

struct RunResult {
  int exit_code = kExitPass;
  std::string output;
};

/// Executes one command. `run` executes the model's command list.
RunResult run(const SpecModel& model, const Command& command, const RunOptions& options = {});

}  // namespace superconn::dsl
