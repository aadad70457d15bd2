#include <sstream>

#include <json.hpp>

#include "superconn/chern.hpp"
#include "superconn/correspondence.hpp"
#include "superconn/dsl.hpp"
#include "superconn/errors.hpp"
#include "superconn/sampling.hpp"

namespace superconn::dsl {

namespace {

using nlohmann::json;

json indices_json(IndexMask mask) {
  json a = json::array();
  for (IndexMask x = mask; x; x &= x - 1) a.push_back(__builtin_ctz(x) + 1);
  return a;
}

json form_json(const Form& f, const std::vector<std::string>& names) {
  json a = json::array();
  for (const auto& [mask, p] : f.terms()) a.push_back({{"indices", indices_json(mask)}, {"poly", p.str(names)}});
  return a;
}

json superform_json(const SuperForm& s, const std::vector<std::string>& names) {
  json a = json::array();
  for (const auto& [mono, coeff] : s.terms()) {
    json theta = json::array();
    for (int k = 0; k < Poly::kParamSlot; ++k)
      for (int e = 0; e < Poly::exponent(mono.theta, k); ++e) theta.push_back(k + 1);
    for (const auto& [mask, p] : coeff.terms())
      a.push_back({{"xi", indices_json(mono.xi)}, {"theta", theta}, {"indices", indices_json(mask)}, {"poly", p.str(names)}});
  }
  return a;
}

json end_json(const EndForm& W, const std::vector<std::string>& names) {
  json rows = json::array();
  for (int i = 0; i < W.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < W.size(); ++j) row.push_back(form_json(W(i, j), names));
    rows.push_back(std::move(row));
  }
  return rows;
}

json end_superform_json(const EndSuperForm& Q, const std::vector<std::string>& names) {
  json rows = json::array();
  for (int i = 0; i < Q.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < Q.size(); ++j) row.push_back(superform_json(Q(i, j), names));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Collects data fields and identity checks, rendered as JSON or text.
class Report {
public:
  Report(const SpecModel& model, std::string command) : names_(model.coords) { doc_["command"] = std::move(command); }

  void check(const std::string& name, bool pass, const std::string& detail) {
    doc_["checks"].push_back({{"name", name}, {"pass", pass}, {"detail", detail}});
    text_ << (pass ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
    pass_ = pass_ && pass;
  }

  void form(const std::string& key, const Form& f) {
    doc_[key] = form_json(f, names_);
    text_ << key << " = " << f.str(names_) << '\n';
  }

  void superform(const std::string& key, const SuperForm& s) {
    doc_[key] = superform_json(s, names_);
    text_ << key << " = " << s.str(names_) << '\n';
  }

  void end(const std::string& key, const EndForm& W) {
    doc_[key] = end_json(W, names_);
    text_ << key << ":" << (W.is_zero() ? " 0" : "") << '\n';
    for (int i = 0; i < W.size(); ++i)
      for (int j = 0; j < W.size(); ++j)
        if (!W(i, j).is_zero()) text_ << "  [" << i + 1 << "][" << j + 1 << "] = " << W(i, j).str(names_) << '\n';
  }

  void end_list(const std::string& key, const std::vector<EndForm>& K) {
    json a = json::array();
    text_ << key << ":\n";
    bool any = false;
    for (std::size_t k = 0; k < K.size(); ++k) {
      a.push_back(end_json(K[k], names_));
      for (int i = 0; i < K[k].size(); ++i)
        for (int j = 0; j < K[k].size(); ++j)
          if (!K[k](i, j).is_zero()) {
            any = true;
            text_ << "  [" << k + 1 << "][" << i + 1 << "][" << j + 1 << "] = " << K[k](i, j).str(names_) << '\n';
          }
    }
    if (!any) text_ << "  0\n";
    doc_[key] = std::move(a);
  }

  void end_superform(const std::string& key, const EndSuperForm& Q) {
    doc_[key] = end_superform_json(Q, names_);
    text_ << key << ":" << (Q.is_zero() ? " 0" : "") << '\n';
    for (int i = 0; i < Q.size(); ++i)
      for (int j = 0; j < Q.size(); ++j)
        if (!Q(i, j).is_zero()) text_ << "  [" << i + 1 << "][" << j + 1 << "] = " << Q(i, j).str(names_) << '\n';
  }

  void value(const std::string& key, json v) {
    text_ << key << " = " << v.dump() << '\n';
    doc_[key] = std::move(v);
  }

  bool pass() const { return pass_; }

  std::string render(OutputFormat format) {
    if (format == OutputFormat::json) {
      doc_["pass"] = pass_;
      if (!doc_.contains("checks")) doc_["checks"] = json::array();
      return doc_.dump(2) + "\n";
    }
    return text_.str() + (pass_ ? "result: pass\n" : "result: FAIL\n");
  }

private:
  std::vector<std::string> names_;
  json doc_ = json::object();
  std::ostringstream text_;
  bool pass_ = true;
};

struct Context {
  const SpecModel& model;
  int cap;
  int trials;
  std::uint64_t seed;
};

std::string trials_text(const Context& cx) {
  return std::to_string(cx.trials) + (cx.trials == 1 ? " trial" : " trials") + " (seed " + std::to_string(cx.seed) + ")";
}

GeneratorAction random_action(Sampler& rng, int m, int n) {
  GeneratorAction act;
  act.degree = n;
  for (int j = 0; j < m; ++j) {
    act.on_coordinates.push_back(rng.coin(70) ? rng.form(m, n, 2) : Form(m));
    act.on_differentials.push_back(rng.coin(70) ? rng.form(m, n + 1, 2) : Form(m));
  }
  return act;
}

ESection random_section(Sampler& rng, SuperRank rank, int m) {
  ESection s(rank, m);
  for (int i = 0; i < rank.size(); ++i)
    if (rng.coin(80)) s[i] = rng.mixed_form(m, 1);
  return s;
}

EndForm random_tensor(Sampler& rng, SuperRank rank, int m, int parity) {
  EndForm W(rank, m);
  for (int i = 0; i < rank.size(); ++i)
    for (int j = 0; j < rank.size(); ++j)
      for (int d = 0; d <= std::min(m, 1); ++d)
        if (((d + rank.end_parity(i, j)) & 1) == parity && rng.coin(40)) W(i, j) += rng.form(m, d, 1, 1);
  return W;
}

void check_leibniz(const Context& cx, Report& rep) {
  const SpecModel& M = cx.model;
  const GradedConnection C = M.connection();
  const Superconnection D = induce_with(C, M.n_tensor());
  const Superconnection DC = induce(C);
  Sampler rng(cx.seed);
  bool leibniz = true, three_map = true, parity_ok = true;
  for (int t = 0; t < cx.trials; ++t) {
    const ESection s = random_section(rng, M.rank, M.chart_dim);
    const int p = rng.uniform(0, M.chart_dim);
    const Form a = rng.form(M.chart_dim, p, 1);
    ESection rhs = left_multiply(ext_d(a), s);
    const ESection tail = left_multiply(a, sc_apply(D, s));
    if (p & 1)
      rhs -= tail;
    else
      rhs += tail;
    leibniz = leibniz && sc_apply(D, left_multiply(a, s)) == rhs;
    three_map = three_map && induce_apply_via_superforms(C, s) == sc_apply(DC, s);
  }
  parity_ok = D.P.has_total_parity(1);
  rep.check("leibniz", leibniz, "D(a s) = da s + (-1)^|a| a D s on " + trials_text(cx));
  rep.check("three-map", three_map, "induce(C) equals <d; d^nabla s> on " + trials_text(cx));
  rep.check("odd-total-degree", parity_ok, "P has odd total degree");
}

void check_decomposition(const Context& cx, Report& rep) {
  const SpecModel& M = cx.model;
  const Superconnection D = M.superconnection();
  const auto dec = decompose_superconnection(D);
  rep.check("superconnection-round-trip", induce_with(dec.C, dec.N) == D, "induce(decompose(D).C) + N = D");
  Sampler rng(cx.seed);
  bool derivations = true, d_form = true;
  for (int t = 0; t < cx.trials; ++t) {
    const int n = -1 + t % 4;
    const GeneratorAction act = random_action(rng, M.chart_dim, n);
    const DerivationDecomposition kl = decompose_derivation(act, M.gamma);
    derivations = derivations && compose_derivation(kl.K, kl.L, M.gamma) == from_generator_action(act);
    const Form a = rng.mixed_form(M.chart_dim, 2);
    d_form = d_form && apply_derivation(d_as_derivation(M.gamma), a) == ext_d(a);
  }
  rep.check("derivation-decomposition", derivations,
            "nabla_K + i_L rebuilds the derivation on " + trials_text(cx) + " (degrees -1..2)");
  rep.check("d-as-derivation", d_form, "the Gamma terms of d cancel on " + trials_text(cx));
}

void check_curvature_relation(const Context& cx, Report& rep) {
  const SpecModel& M = cx.model;
  const CurvatureRelation rel = curvature_relation(M.connection(), M.n_tensor());
  rep.check("curvature-relation", rel.equal(), "R^D = 1/2 R(d,d) + [nabla_d, N] + N^2");
  const Superconnection D = M.superconnection();
  rep.check("curvature-extraction", sc_curvature(D) == sc_curvature_extracted(D), "closed-form curvature equals D^2");
}

int max_k(const Context& cx) { return std::min(2, cx.cap / 2); }

void require_cap(const Context& cx) {
  if (cx.cap < 2) throw BudgetError("theta budget too small for the curvature superform", 2);
}

void check_bianchi(const Context& cx, Report& rep) {
  const SpecModel& M = cx.model;
  require_cap(cx);
  const GradedConnection C = M.connection();
  const EndSuperForm R = curvature_2sform(C, cx.cap);
  for (int k = 1; k <= max_k(cx); ++k)
    rep.check("bianchi-k" + std::to_string(k), covariant_commutator(C, end_power(R, k)).is_zero(),
              "[d^nabla, R^" + std::to_string(k) + "] = 0");
  Sampler rng(cx.seed);
  bool str_ok = true;
  for (int t = 0; t < cx.trials; ++t) {
    EndSuperForm Q(M.rank, M.chart_dim, cx.cap);
    for (int i = 0; i < M.rank.size(); ++i)
      for (int j = 0; j < M.rank.size(); ++j)
        if (rng.coin(60)) Q(i, j) = rng.superform(M.chart_dim, 1, 1, cx.cap);
    str_ok = str_ok && supertrace(covariant_commutator(C, Q)) == sform_d(supertrace(Q));
  }
  rep.check("supertrace-commutator", str_ok, "Str [d^nabla, Q] = d Str Q on " + trials_text(cx));
}

void check_transgression(const Context& cx, Report& rep) {
  const SpecModel& M = cx.model;
  require_cap(cx);
  const GradedConnection C0 = M.connection();
  GradedConnection C1 = C0;
  std::string source = "the alternate tensors";
  if (M.has_alt()) {
    C1 = M.alt_connection();
  } else {
    Sampler rng(cx.seed);
    for (int k = 0; k < M.chart_dim; ++k) {
      C1.K0[k] += random_tensor(rng, M.rank, M.chart_dim, 0);
      C1.K1[k] += random_tensor(rng, M.rank, M.chart_dim, 1);
    }
    source = "a seeded perturbation";
  }
  for (int k = 1; k <= max_k(cx); ++k) {
    const SuperForm c0 = chern_superform(C0, k, cx.cap), c1 = chern_superform(C1, k, cx.cap);
    const SuperForm eta = transgression(C0, C1, k, cx.cap);
    const std::string ks = std::to_string(k);
    rep.check("closed-k" + ks, is_closed(c0) && is_closed(c1), "d Str(R^" + ks + ") = 0 for both connections");
    rep.check("transgression-k" + ks, c1 - c0 == sform_d(eta), "Str(R1^" + ks + ") - Str(R0^" + ks + ") = d eta against " + source);
  }
}

void check_chern_match(const Context& cx, Report& rep) {
  const SpecModel& M = cx.model;
  require_cap(cx);
  const GradedConnection C0(M.gamma, M.omega);
  for (int k = 1; k <= max_k(cx); ++k) {
    const ChernMatch cm = chern_match(C0, k, cx.cap);
    const std::string ks = std::to_string(k);
    rep.check("chern-match-k" + ks, cm.equal(), "kappa(Str R^" + ks + ") equals the classical Str(R^" + ks + ")");
    if (2 * k > M.chart_dim)
      rep.check("degree-vanishing-k" + ks, kappa(chern_superform(M.connection(), k, cx.cap)).is_zero(),
                "kappa side vanishes for 2k > m");
  }
  Sampler rng(cx.seed);
  bool kappa_ok = true;
  for (int t = 0; t < cx.trials; ++t) {
    const SuperForm s = rng.superform(M.chart_dim, 2, 2, cx.cap);
    kappa_ok = kappa_ok && kappa(sform_d(s)) == ext_d(kappa(s));
  }
  rep.check("kappa-d", kappa_ok, "kappa d = d kappa on " + trials_text(cx));
}

void run_verify(const Context& cx, const std::string& which, Report& rep) {
  const bool all = which == "all";
  if (all || which == "leibniz") check_leibniz(cx, rep);
  if (all || which == "decomposition") check_decomposition(cx, rep);
  if (all || which == "curvature-relation") check_curvature_relation(cx, rep);
  if (all || which == "bianchi") check_bianchi(cx, rep);
  if (all || which == "transgression") check_transgression(cx, rep);
  if (all || which == "chern-match") check_chern_match(cx, rep);
}

void run_one(const Context& cx, const Command& cmd, Report& rep) {
  const SpecModel& M = cx.model;
  if (cmd.name == "induce") {
    const GradedConnection C = M.connection();
    const Superconnection D = induce_with(C, M.n_tensor());
    rep.end("omegaE", D.omega);
    rep.end("P", D.P);
    Sampler rng(cx.seed);
    bool ok = true;
    const Superconnection DC = induce(C);
    for (int t = 0; t < cx.trials; ++t) {
      const ESection s = random_section(rng, M.rank, M.chart_dim);
      ok = ok && induce_apply_via_superforms(C, s) == sc_apply(DC, s);
    }
    rep.check("three-map", ok, "induce(C) equals <d; d^nabla s> on " + trials_text(cx));
  } else if (cmd.name == "decompose") {
    const Superconnection D = M.superconnection();
    const auto dec = decompose_superconnection(D);
    rep.end("N", dec.N);
    rep.end_list("K0", dec.C.K0);
    rep.end_list("K1", dec.C.K1);
    rep.check("round-trip", induce_with(dec.C, dec.N) == D, "induce(C) + N = D with flat Gamma");
  } else if (cmd.name == "curvature") {
    require_cap(cx);
    const Superconnection D = M.superconnection();
    const EndForm R = sc_curvature(D);
    rep.end("curvature", R);
    rep.end_superform("curvature_superform", curvature_2sform(M.connection(), cx.cap));
    rep.check("curvature-extraction", R == sc_curvature_extracted(D), "closed-form curvature equals D^2");
  } else if (cmd.name == "chern") {
    const int k = std::stoi(cmd.args.at(0));
    if (cx.cap < 2 * k) throw BudgetError("chern --k " + cmd.args[0] + " exceeds the theta budget", 2 * k);
    const ChernReport r = chern_report(M.connection(), k, cx.cap);
    rep.value("k", k);
    rep.superform("superform", r.superform);
    rep.superform("closedness_witness", r.closedness_witness);
    rep.form("kappa_projection", r.kappa_projection);
    if (r.classical_comparison) rep.form("classical_comparison", *r.classical_comparison);
    rep.check("closed", r.closed(), "d Str(R^" + cmd.args[0] + ") = 0");
    if (r.classical_comparison) rep.check("classical-match", r.matches(), "kappa projection equals the classical Chern form");
    if (2 * k > M.chart_dim) rep.check("degree-vanishing", r.kappa_projection.is_zero(), "kappa side vanishes for 2k > m");
  } else if (cmd.name == "same-induced") {
    const GradedConnection C1 = M.connection(), C2 = M.alt_connection();
    const bool same = same_induced(C1, C2);
    const SameInducedConditions cond = same_induced_conditions(C1, C2);
    rep.value("same", same);
    rep.value("k0_condition", cond.k0_part);
    rep.value("k1_condition", cond.k1_part);
    rep.check("consistent", same == (induce(C1) == induce(C2)) && (!cond.both() || same),
              "answer agrees with comparing the induced superconnections");
  } else if (cmd.name == "verify") {
    run_verify(cx, cmd.args.at(0), rep);
  } else {
    throw PreconditionError("unknown command '" + cmd.name + "'");
  }
}

std::string command_text(const Command& c) {
  std::string s = c.name;
  for (const auto& a : c.args) s += " " + a;
  return s;
}

RunResult error_result(OutputFormat format, const std::string& message, std::optional<int> required_cap, int code) {
  RunResult r;
  r.exit_code = code;
  if (format == OutputFormat::json) {
    json j = {{"error", message}, {"pass", false}};
    if (required_cap) j["required_cap"] = *required_cap;
    r.output = j.dump(2) + "\n";
  } else {
    r.output = "error: " + message + (required_cap ? " (required theta cap " + std::to_string(*required_cap) + ")" : "") + "\n";
  }
  return r;
}

}  // namespace

RunResult run(const SpecModel& model, const Command& command, const RunOptions& options) {
  const Context cx{model, options.theta_cap.value_or(model.theta_cap), options.trials.value_or(model.trials),
                   options.seed.value_or(model.seed)};
  try {
    if (command.name == "run") {
      if (model.commands.empty()) return error_result(options.format, "spec has no [commands]", std::nullopt, kExitInputError);
      RunResult all;
      json runs = json::array();
      for (const Command& c : model.commands) {
        RunResult one = run(model, c, options);
        all.exit_code = std::max(all.exit_code, one.exit_code);
        if (options.format == OutputFormat::json)
          runs.push_back(json::parse(one.output));
        else
          all.output += "== " + command_text(c) + "\n" + one.output;
      }
      if (options.format == OutputFormat::json)
        all.output = json({{"runs", runs}, {"pass", all.exit_code == kExitPass}}).dump(2) + "\n";
      return all;
    }
    Report rep(model, command_text(command));
    run_one(cx, command, rep);
    RunResult r;
    r.exit_code = rep.pass() ? kExitPass : kExitIdentityFailure;
    r.output = rep.render(options.format);
    return r;
  } catch (const BudgetError& e) {
    return error_result(options.format, e.what(), e.required_cap(), kExitInputError);
  } catch (const ConsistencyError& e) {
    return error_result(options.format, e.what(), std::nullopt, kExitIdentityFailure);
  } catch (const Error& e) {
    return error_result(options.format, e.what(), std::nullopt, kExitInputError);
  }
}

}  // namespace superconn::dsl
