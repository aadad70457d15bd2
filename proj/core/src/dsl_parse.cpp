#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "superconn/correspondence.hpp"
#include "superconn/dsl.hpp"
#include "superconn/errors.hpp"

namespace superconn::dsl {

namespace {

constexpr int kMaxNesting = 64;
constexpr int kMaxRankSize = 8;
constexpr int kMaxThetaCap = 12;
constexpr int kMaxTrials = 100000;
constexpr std::size_t kMaxLiteralDigits = 64;

/// Located failure inside one line; turned into a Diagnostic by the caller.
struct LineError {
  std::string message;
  int column;
};

struct Token {
  enum class Kind { ident, number, symbol, end };
  Kind kind = Kind::end;
  std::string text;
  int column = 1;

  bool is(char c) const { return kind == Kind::symbol && text.size() == 1 && text[0] == c; }
};

std::vector<Token> lex(std::string_view line, int column0) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const unsigned char c = static_cast<unsigned char>(line[i]);
    const int col = column0 + static_cast<int>(i);
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
    } else if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_'))
        ++j;
      out.push_back({Token::Kind::ident, std::string(line.substr(i, j - i)), col});
      i = j;
    } else if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
      if (j - i > kMaxLiteralDigits) throw LineError{"numeric literal too long", col};
      out.push_back({Token::Kind::number, std::string(line.substr(i, j - i)), col});
      i = j;
    } else if (std::string_view("[]=+-*/^(),").find(static_cast<char>(c)) != std::string_view::npos) {
      out.push_back({Token::Kind::symbol, std::string(1, static_cast<char>(c)), col});
      ++i;
    } else {
      throw LineError{c >= 0x80 ? "unexpected non-ASCII character" : std::string("unexpected character '") +
                                                                         static_cast<char>(c) + "'",
                      col};
    }
  }
  out.push_back({Token::Kind::end, "", column0 + static_cast<int>(line.size())});
  return out;
}

int to_int(const Token& t, int lo, int hi, const std::string& what) {
  if (t.kind != Token::Kind::number) throw LineError{"expected " + what, t.column};
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc() || v < lo || v > hi)
    throw LineError{what + " must lie in " + std::to_string(lo) + ".." + std::to_string(hi), t.column};
  (void)ptr;
  return v;
}

/// Recursive-descent evaluator for form expressions:
///   sum     := product (('+' | '-') product)*
///   product := unary (('*' | '/' | juxtaposition) unary)*
///   unary   := '-' unary | power
///   power   := atom ('^' INT)?
///   atom    := INT | NAME | 'dx' '(' INT (',' INT)* ')' | '(' sum ')'
class FormParser {
public:
  FormParser(const std::vector<Token>& toks, std::size_t pos, int chart_dim, const std::vector<std::string>& coords)
      : toks_(toks), pos_(pos), m_(chart_dim), coords_(coords) {}

  Form parse_all() {
    if (peek().kind == Token::Kind::end) throw LineError{"expected a form expression", peek().column};
    Form f = sum();
    if (peek().kind != Token::Kind::end) throw LineError{"unexpected '" + peek().text + "'", peek().column};
    return f;
  }

private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return pos_ + 1 < toks_.size() ? toks_[pos_++] : toks_[pos_]; }

  void enter() {
    if (++depth_ > kMaxNesting) throw LineError{"expression nested too deeply", peek().column};
  }

  Form sum() {
    enter();
    Form r = product();
    while (peek().is('+') || peek().is('-')) {
      const bool minus = next().is('-');
      Form t = product();
      if (minus)
        r -= t;
      else
        r += t;
    }
    --depth_;
    return r;
  }

  bool starts_atom(const Token& t) const {
    return t.kind == Token::Kind::ident || t.kind == Token::Kind::number || t.is('(') || t.is('-');
  }

  Form product() {
    Form r = unary();
    for (;;) {
      if (peek().is('*')) {
        next();
        r = wedge(r, unary());
      } else if (peek().is('/')) {
        const Token& op = next();
        const Form d = unary();
        const auto c = constant_of(d);
        if (!c) throw LineError{"division is only by nonzero constants", op.column};
        r *= Ratio(1) / *c;
      } else if (starts_atom(peek()) && !peek().is('-')) {
        r = wedge(r, unary());
      } else {
        return r;
      }
    }
  }

  Form unary() {
    if (peek().is('-')) {
      next();
      enter();
      Form r = -unary();
      --depth_;
      return r;
    }
    return power();
  }

  Form power() {
    const int col = peek().column;
    Form base = atom();
    if (!peek().is('^')) return base;
    next();
    const int e = to_int(peek(), 0, Poly::kMaxExponent, "exponent");
    next();
    if (!base.is_zero() && base.degrees() != std::vector<int>{0})
      throw LineError{"only functions can be raised to a power", col};
    const Poly p = base.coefficient(0);
    if (p.terms().size() > 1 && e > 16) throw LineError{"exponent too large for a sum", col};
    if (p.degree() * e > Poly::kMaxExponent) throw LineError{"polynomial degree too large", col};
    return Form::function(p.pow(e));
  }

  Form atom() {
    const Token& t = next();
    switch (t.kind) {
      case Token::Kind::number:
        return Form::constant(m_, Ratio::parse(t.text));
      case Token::Kind::ident: {
        if (t.text == "dx") return differential(t);
        const auto it = std::find(coords_.begin(), coords_.end(), t.text);
        if (it == coords_.end()) throw LineError{"undeclared coordinate '" + t.text + "'", t.column};
        return Form::function(Poly::coordinate(m_, static_cast<int>(it - coords_.begin())));
      }
      case Token::Kind::symbol:
        if (t.is('(')) {
          Form r = sum();
          if (!peek().is(')')) throw LineError{"expected ')'", peek().column};
          next();
          return r;
        }
        throw LineError{"unexpected '" + t.text + "'", t.column};
      case Token::Kind::end:
        break;
    }
    throw LineError{"unexpected end of expression", t.column};
  }

  Form differential(const Token& head) {
    if (!peek().is('(')) throw LineError{"expected '(' after dx", peek().column};
    next();
    std::vector<int> idx;
    for (;;) {
      const Token& t = peek();
      if (t.kind != Token::Kind::number) throw LineError{"expected a coordinate index", t.column};
      int v = 0;
      std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (v < 1 || v > m_ || t.text.size() > 3)
        throw LineError{"undeclared index " + t.text + " (chart has m = " + std::to_string(m_) + ")", t.column};
      idx.push_back(v - 1);
      next();
      if (peek().is(',')) {
        next();
        continue;
      }
      if (peek().is(')')) {
        next();
        break;
      }
      throw LineError{"expected ',' or ')' in dx(...)", peek().column};
    }
    if (idx.size() > static_cast<std::size_t>(m_)) throw LineError{"too many differentials", head.column};
    return Form::dx(m_, idx);
  }

  static std::optional<Ratio> constant_of(const Form& f) {
    if (f.terms().size() != 1 || f.terms().begin()->first != 0) return std::nullopt;
    const Poly& p = f.terms().begin()->second;
    if (p.terms().size() != 1 || p.terms().front().first != 0) return std::nullopt;
    return p.terms().front().second;
  }

  const std::vector<Token>& toks_;
  std::size_t pos_;
  int m_;
  const std::vector<std::string>& coords_;
  int depth_ = 0;
};

const std::set<std::string> kTensorSections = {"Gamma", "omegaE", "K0", "K1", "K0_alt", "K1_alt", "P", "N"};
const std::set<std::string> kSections = {"chart",  "bundle", "settings", "commands", "Gamma", "omegaE",
                                         "K0",     "K1",     "K0_alt",   "K1_alt",   "P",     "N"};

int index_count(const std::string& section) {
  if (section == "Gamma" || section.rfind("K", 0) == 0) return 3;
  return 2;
}

struct Located {
  int line = 0;
  int column = 0;
};

class SpecParser {
public:
  ParseResult run(std::string_view text) {
    std::size_t start = 0;
    int lineno = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      ++lineno;
      handle_line(text.substr(start, end - start), lineno);
      if (end == text.size()) break;
      start = end + 1;
    }
    finish(lineno);
    ParseResult r;
    r.diagnostics = std::move(diags_);
    const bool failed = std::any_of(r.diagnostics.begin(), r.diagnostics.end(),
                                    [](const Diagnostic& d) { return d.severity == Diagnostic::Severity::error; });
    if (!failed) r.model = std::move(model_);
    return r;
  }

private:
  void error(std::string message, int line, int column) {
    diags_.push_back({Diagnostic::Severity::error, std::move(message), line, std::max(1, column)});
  }

  void handle_line(std::string_view raw, int lineno) {
    std::string_view line = raw.substr(0, raw.find('#'));
    try {
      std::size_t first = 0;
      while (first < line.size() && (line[first] == ' ' || line[first] == '\t' || line[first] == '\r')) ++first;
      if (first == line.size()) return;
      if (line[first] == '[' && line.find('=') == std::string_view::npos) {
        section_header(line.substr(first), static_cast<int>(first) + 1, lineno);
        return;
      }
      if (current_.empty()) throw LineError{"entry outside of any section", static_cast<int>(first) + 1};
      if (skip_section_) return;
      const std::vector<Token> toks = lex(line, 1);
      entry(toks, line, lineno);
    } catch (const LineError& e) {
      error(e.message, lineno, e.column);
    } catch (const superconn::Error& e) {
      error(e.what(), lineno, 1);
    } catch (const std::exception& e) {
      error(std::string("internal limit: ") + e.what(), lineno, 1);
    }
  }

  void section_header(std::string_view s, int column, int lineno) {
    std::size_t close = s.find(']');
    if (close == std::string_view::npos) throw LineError{"expected ']'", column + static_cast<int>(s.size())};
    for (std::size_t i = close + 1; i < s.size(); ++i)
      if (s[i] != ' ' && s[i] != '\t' && s[i] != '\r')
        throw LineError{"unexpected text after section header", column + static_cast<int>(i)};
    std::string name(s.substr(1, close - 1));
    name.erase(0, name.find_first_not_of(" \t"));
    name.erase(name.find_last_not_of(" \t") + 1);
    current_ = name;
    skip_section_ = false;
    if (!kSections.count(name)) {
      skip_section_ = true;
      throw LineError{"unknown section [" + name + "]", column + 1};
    }
    if (!seen_sections_.insert(name).second) {
      skip_section_ = true;
      throw LineError{"duplicate section [" + name + "]", column + 1};
    }
    if (name != "chart" && name != "bundle" && !header_ready(lineno, column)) skip_section_ = true;
    if (name == "K0" || name == "K1" || name == "K0_alt" || name == "K1_alt") {
      std::vector<EndForm> zeros(static_cast<std::size_t>(model_.chart_dim), EndForm(model_.rank, model_.chart_dim));
      tensor_list(name).emplace(std::move(zeros));
    } else if (name == "P") {
      model_.P.emplace(model_.rank, model_.chart_dim);
    } else if (name == "N") {
      model_.N.emplace(model_.rank, model_.chart_dim);
    }
  }

  /// Finalizes [chart] and [bundle] before the first data section.
  bool header_ready(int lineno, int column) {
    if (header_done_) return header_ok_;
    header_done_ = true;
    header_ok_ = false;
    if (!m_loc_) {
      error("missing 'm' in [chart] before data sections", lineno, column);
      return false;
    }
    if (!p_loc_ || !q_loc_) {
      error("missing 'p' or 'q' in [bundle] before data sections", lineno, column);
      return false;
    }
    if (coords_loc_ && static_cast<int>(model_.coords.size()) != model_.chart_dim) {
      error("expected " + std::to_string(model_.chart_dim) + " coordinate names", coords_loc_->line,
            coords_loc_->column);
      return false;
    }
    if (!coords_loc_) model_.coords = default_coordinate_names(model_.chart_dim);
    model_.gamma = Christoffel(model_.chart_dim);
    model_.omega = EndForm(model_.rank, model_.chart_dim);
    header_ok_ = true;
    return true;
  }

  std::optional<std::vector<EndForm>>& tensor_list(const std::string& name) {
    if (name == "K0") return model_.K0;
    if (name == "K1") return model_.K1;
    if (name == "K0_alt") return model_.K0_alt;
    return model_.K1_alt;
  }

  void entry(const std::vector<Token>& toks, std::string_view line, int lineno) {
    const Token& key = toks[0];
    if (key.kind != Token::Kind::ident) throw LineError{"expected a key", key.column};
    std::size_t pos = 1;
    std::vector<const Token*> indices;
    while (toks[pos].is('[')) {
      const Token& v = toks[pos + 1];
      if (v.kind != Token::Kind::number) throw LineError{"expected an index", v.column};
      if (!toks[pos + 2].is(']')) throw LineError{"expected ']'", toks[pos + 2].column};
      indices.push_back(&v);
      pos += 3;
    }
    if (!toks[pos].is('=')) throw LineError{"expected '='", toks[pos].column};
    const int eq_column = toks[pos].column;
    ++pos;
    if (current_ == "chart" || current_ == "bundle" || current_ == "settings" || current_ == "commands") {
      if (!indices.empty()) throw LineError{"'" + key.text + "' takes no indices", indices.front()->column};
      scalar_entry(key, toks, pos, line.substr(static_cast<std::size_t>(eq_column)), lineno);
      return;
    }
    if (key.text != current_) throw LineError{"unknown key '" + key.text + "' in section [" + current_ + "]", key.column};
    if (static_cast<int>(indices.size()) != index_count(current_))
      throw LineError{"'" + key.text + "' needs " + std::to_string(index_count(current_)) + " indices", key.column};
    tensor_entry(key, indices, toks, pos);
  }

  void reject_in_header(const Token& key) {
    if (header_done_) throw LineError{"'" + key.text + "' must be set before any data section", key.column};
  }

  void scalar_entry(const Token& key, const std::vector<Token>& toks, std::size_t pos, std::string_view rest,
                    int lineno) {
    auto single = [&](const std::string& what) -> const Token& {
      if (toks[pos].kind != Token::Kind::number) throw LineError{"expected " + what, toks[pos].column};
      if (toks[pos + 1].kind != Token::Kind::end)
        throw LineError{"unexpected '" + toks[pos + 1].text + "'", toks[pos + 1].column};
      return toks[pos];
    };
    auto once = [&](std::optional<Located>& loc) {
      if (loc) throw LineError{"duplicate key '" + key.text + "'", key.column};
      loc = Located{lineno, key.column};
    };
    if (current_ == "chart") {
      reject_in_header(key);
      if (key.text == "m") {
        once(m_loc_);
        model_.chart_dim = to_int(single("chart dimension"), 1, Poly::kMaxChartDim, "chart dimension");
      } else if (key.text == "coords") {
        once(coords_loc_);
        std::vector<std::string> names;
        for (std::size_t i = pos; toks[i].kind != Token::Kind::end; ++i) {
          const Token& t = toks[i];
          if (t.kind != Token::Kind::ident) throw LineError{"expected a coordinate name", t.column};
          if (t.text == "t" || t.text == "dx")
            throw LineError{"'" + t.text + "' cannot be a coordinate name", t.column};
          if (std::find(names.begin(), names.end(), t.text) != names.end())
            throw LineError{"coordinate '" + t.text + "' declared twice", t.column};
          names.push_back(t.text);
        }
        if (names.empty()) throw LineError{"expected coordinate names", toks[pos].column};
        model_.coords = std::move(names);
      } else {
        throw LineError{"unknown key '" + key.text + "' in section [chart]", key.column};
      }
    } else if (current_ == "bundle") {
      reject_in_header(key);
      if (key.text == "p") {
        once(p_loc_);
        model_.rank.p = to_int(single("rank"), 0, kMaxRankSize, "rank");
      } else if (key.text == "q") {
        once(q_loc_);
        model_.rank.q = to_int(single("rank"), 0, kMaxRankSize, "rank");
      } else {
        throw LineError{"unknown key '" + key.text + "' in section [bundle]", key.column};
      }
      if (p_loc_ && q_loc_) {
        if (model_.rank.size() < 1) throw LineError{"bundle rank must be at least 1", key.column};
        if (model_.rank.size() > kMaxRankSize)
          throw LineError{"bundle rank must be at most " + std::to_string(kMaxRankSize), key.column};
      }
    } else if (current_ == "settings") {
      if (!settings_seen_.insert(key.text).second) throw LineError{"duplicate key '" + key.text + "'", key.column};
      if (key.text == "theta_cap") {
        model_.theta_cap = to_int(single("theta cap"), 1, kMaxThetaCap, "theta cap");
      } else if (key.text == "trials") {
        model_.trials = to_int(single("trial count"), 1, kMaxTrials, "trial count");
      } else if (key.text == "seed") {
        const Token& t = single("seed");
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || ptr != t.text.data() + t.text.size()) throw LineError{"seed out of range", t.column};
        model_.seed = v;
      } else {
        throw LineError{"unknown key '" + key.text + "' in section [settings]", key.column};
      }
    } else {
      if (key.text != "run") throw LineError{"unknown key '" + key.text + "' in section [commands]", key.column};
      auto cmd = parse_command(rest);
      if (!cmd) throw LineError{"unknown command", toks[pos].column};
      model_.commands.push_back(std::move(*cmd));
    }
  }

  void tensor_entry(const Token& key, const std::vector<const Token*>& indices, const std::vector<Token>& toks,
                    std::size_t pos) {
    const int m = model_.chart_dim;
    const SuperRank rank = model_.rank;
    const int n = rank.size();
    std::vector<int> idx;
    for (std::size_t i = 0; i < indices.size(); ++i) {
      // Gamma and K tensors start with coordinate indices; the last two are slots.
      const bool coordinate = current_ == "Gamma" || (indices.size() == 3 && i == 0);
      const int hi = coordinate ? m : n;
      const std::string what = coordinate ? "coordinate index" : "bundle slot";
      if (indices[i]->text.size() > 3 || to_int_or(*indices[i]) < 1 || to_int_or(*indices[i]) > hi)
        throw LineError{"undeclared " + what + " " + indices[i]->text + " (range 1.." + std::to_string(hi) + ")",
                        indices[i]->column};
      idx.push_back(to_int_or(*indices[i]) - 1);
    }
    std::vector<int> key_idx = idx;
    key_idx.insert(key_idx.begin(), static_cast<int>(std::distance(kSections.begin(), kSections.find(current_))));
    if (!entries_seen_.insert(key_idx).second) throw LineError{"duplicate entry", key.column};

    const Form f = FormParser(toks, pos, m, model_.coords).parse_all();
    const int value_column = toks[pos].column;
    auto slot_text = [&](int i, int j) { return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")"; };
    auto require_parity = [&](int i, int j, int parity, const std::string& what) {
      for (int d : f.degrees())
        if (((d + rank.end_parity(i, j)) & 1) != parity)
          throw LineError{what + " entry " + slot_text(i, j) + " has a degree-" + std::to_string(d) +
                              " piece of the wrong total parity",
                          value_column};
    };

    if (current_ == "Gamma") {
      if (!f.is_zero() && f.degrees() != std::vector<int>{0})
        throw LineError{"Christoffel symbols must be functions", value_column};
      model_.gamma(idx[0], idx[1], idx[2]) = f.coefficient(0);
    } else if (current_ == "omegaE") {
      if (!f.is_zero() && f.degrees() != std::vector<int>{1})
        throw LineError{"connection matrix entries must be 1-forms", value_column};
      if (!f.is_zero() && rank.end_parity(idx[0], idx[1]))
        throw LineError{"connection matrix must be block-diagonal; slot " + slot_text(idx[0], idx[1]) + " is odd",
                        indices[0]->column};
      model_.omega(idx[0], idx[1]) = f;
    } else if (current_ == "P") {
      require_parity(idx[0], idx[1], 1, "P");
      (*model_.P)(idx[0], idx[1]) = f;
    } else if (current_ == "N") {
      if (!f.is_zero() && f.degrees() != std::vector<int>{0}) throw LineError{"N entries must be functions", value_column};
      if (!f.is_zero() && !rank.end_parity(idx[0], idx[1]))
        throw LineError{"N must lie in End^1; slot " + slot_text(idx[0], idx[1]) + " is even", indices[0]->column};
      (*model_.N)(idx[0], idx[1]) = f;
    } else {
      const bool odd = current_ == "K1" || current_ == "K1_alt";
      require_parity(idx[1], idx[2], odd ? 1 : 0, current_);
      (*tensor_list(current_))[static_cast<std::size_t>(idx[0])](idx[1], idx[2]) = f;
    }
  }

  static int to_int_or(const Token& t) {
    int v = 0;
    std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    return v;
  }

  void finish(int last_line) {
    if (!m_loc_) error("missing [chart] section with 'm'", 1, 1);
    if (!p_loc_ || !q_loc_) error("missing [bundle] section with 'p' and 'q'", 1, 1);
    if (m_loc_ && p_loc_ && q_loc_ && !header_done_) header_ready(last_line, 1);
  }

  SpecModel model_;
  std::vector<Diagnostic> diags_;
  std::string current_;
  bool skip_section_ = false;
  bool header_done_ = false;
  bool header_ok_ = false;
  std::optional<Located> m_loc_, coords_loc_, p_loc_, q_loc_;
  std::set<std::string> seen_sections_;
  std::set<std::string> settings_seen_;
  std::set<std::vector<int>> entries_seen_;
};

void print_tensor(std::ostringstream& out, const std::string& key, const std::vector<int>& prefix, const EndForm& W,
                  const std::vector<std::string>& names) {
  for (int i = 0; i < W.size(); ++i)
    for (int j = 0; j < W.size(); ++j) {
      if (W(i, j).is_zero()) continue;
      out << key;
      for (int p : prefix) out << '[' << p + 1 << ']';
      out << '[' << i + 1 << "][" << j + 1 << "] = " << W(i, j).str(names) << '\n';
    }
}

}  // namespace

std::string Diagnostic::str() const {
  return std::to_string(line) + ":" + std::to_string(column) + ": " +
         (severity == Severity::error ? "error: " : "warning: ") + message;
}

ParseResult parse_spec(std::string_view text) {
  try {
    return SpecParser().run(text);
  } catch (const std::exception& e) {
    ParseResult r;
    r.diagnostics.push_back({Diagnostic::Severity::error, std::string("internal limit: ") + e.what(), 1, 1});
    return r;
  }
}

std::optional<Command> parse_command(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  if (words.empty()) return std::nullopt;
  Command c{words[0], {words.begin() + 1, words.end()}};
  static const std::set<std::string> nullary = {"induce", "decompose", "curvature", "same-induced"};
  static const std::set<std::string> checks = {"leibniz",      "decomposition", "curvature-relation", "bianchi",
                                               "transgression", "chern-match",   "all"};
  if (nullary.count(c.name)) return c.args.empty() ? std::optional<Command>(c) : std::nullopt;
  if (c.name == "verify") return c.args.size() == 1 && checks.count(c.args[0]) ? std::optional<Command>(c) : std::nullopt;
  if (c.name == "chern") {
    if (!c.args.empty() && c.args[0] == "--k") c.args.erase(c.args.begin());
    if (c.args.empty()) c.args = {"1"};
    if (c.args.size() != 1) return std::nullopt;
    int k = 0;
    const std::string& s = c.args[0];
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), k);
    if (ec != std::errc() || ptr != s.data() + s.size() || k < 1 || k > 8) return std::nullopt;
    c.args = {std::to_string(k)};
    return c;
  }
  return std::nullopt;
}

std::string print_spec(const SpecModel& model) {
  std::ostringstream out;
  const auto& names = model.coords;
  out << "[chart]\nm = " << model.chart_dim << "\ncoords =";
  for (const auto& n : names) out << ' ' << n;
  out << "\n\n[bundle]\np = " << model.rank.p << "\nq = " << model.rank.q << "\n\n";
  out << "[settings]\ntheta_cap = " << model.theta_cap << "\ntrials = " << model.trials << "\nseed = " << model.seed
      << "\n\n";
  out << "[Gamma]\n";
  const int m = model.chart_dim;
  for (int r = 0; r < m; ++r)
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q)
        if (!model.gamma(r, p, q).is_zero())
          out << "Gamma[" << r + 1 << "][" << p + 1 << "][" << q + 1 << "] = " << model.gamma(r, p, q).str(names)
              << '\n';
  out << "\n[omegaE]\n";
  print_tensor(out, "omegaE", {}, model.omega, names);
  auto list = [&](const char* key, const std::optional<std::vector<EndForm>>& K) {
    if (!K) return;
    out << "\n[" << key << "]\n";
    for (int k = 0; k < m; ++k) print_tensor(out, key, {k}, (*K)[static_cast<std::size_t>(k)], names);
  };
  list("K0", model.K0);
  list("K1", model.K1);
  list("K0_alt", model.K0_alt);
  list("K1_alt", model.K1_alt);
  if (model.P) {
    out << "\n[P]\n";
    print_tensor(out, "P", {}, *model.P, names);
  }
  if (model.N) {
    out << "\n[N]\n";
    print_tensor(out, "N", {}, *model.N, names);
  }
  if (!model.commands.empty()) {
    out << "\n[commands]\n";
    for (const Command& c : model.commands) {
      out << "run = " << c.name;
      for (const auto& a : c.args) out << ' ' << a;
      out << '\n';
    }
  }
  return out.str();
}

GradedConnection SpecModel::connection() const {
  const std::vector<EndForm> zeros(static_cast<std::size_t>(chart_dim), EndForm(rank, chart_dim));
  return GradedConnection(gamma, omega, K0.value_or(zeros), K1.value_or(zeros));
}

GradedConnection SpecModel::alt_connection() const {
  const std::vector<EndForm> zeros(static_cast<std::size_t>(chart_dim), EndForm(rank, chart_dim));
  return GradedConnection(gamma, omega, K0_alt.value_or(K0.value_or(zeros)), K1_alt.value_or(K1.value_or(zeros)));
}

EndForm SpecModel::n_tensor() const { return N.value_or(EndForm(rank, chart_dim)); }

Superconnection SpecModel::superconnection() const {
  if (P) return Superconnection(omega, *P + n_tensor());
  return induce_with(connection(), n_tensor());
}

}  // namespace superconn::dsl
