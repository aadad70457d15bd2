#pragma once

// Byte-level mutations of spec files for parser fuzzing.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "superconn/dsl.hpp"
#include "superconn/sampling.hpp"

namespace fuzz {

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// The *.sc files of a directory, sorted by name.
inline std::vector<std::filesystem::path> spec_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".sc") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

/// One to six random edits: deletions, insertions of DSL-ish or arbitrary
/// bytes, duplicated spans and truncation.
inline std::string mutate(superconn::Sampler& rng, std::string s) {
  static const std::string alphabet = "[]=+-*/^(),#xyz dx0123456789KPNq\n\t\xc3\xa9";
  const int edits = rng.uniform(1, 6);
  for (int e = 0; e < edits; ++e) {
    const std::size_t pos = s.empty() ? 0 : static_cast<std::size_t>(rng.uniform(0, static_cast<int>(s.size()) - 1));
    switch (rng.uniform(0, 4)) {
      case 0:
        if (!s.empty()) s.erase(pos, static_cast<std::size_t>(rng.uniform(1, 8)));
        break;
      case 1:
        s.insert(pos, 1, alphabet[static_cast<std::size_t>(rng.uniform(0, static_cast<int>(alphabet.size()) - 1))]);
        break;
      case 2:
        if (!s.empty()) s[pos] = static_cast<char>(rng.uniform(1, 255));
        break;
      case 3: {
        const std::size_t from = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(s.size())));
        s.insert(pos, s.substr(from, static_cast<std::size_t>(rng.uniform(1, 30))));
        break;
      }
      default:
        s = s.substr(0, pos);
        break;
    }
  }
  return s;
}

/// Every diagnostic points at an existing line and at most one past its end.
inline bool locations_valid(const std::string& text, const std::vector<superconn::dsl::Diagnostic>& diags) {
  std::vector<std::size_t> lengths;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lengths.push_back(line.size());
  for (const auto& d : diags) {
    if (d.line < 1 || d.column < 1) return false;
    if (static_cast<std::size_t>(d.line) > std::max<std::size_t>(lengths.size(), 1)) return false;
    const std::size_t len = lengths.empty() ? 0 : lengths[static_cast<std::size_t>(d.line) - 1];
    if (static_cast<std::size_t>(d.column) > len + 1) return false;
  }
  return true;
}

}  // namespace fuzz
