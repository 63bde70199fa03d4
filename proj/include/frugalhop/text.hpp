#pragma once

#include <cctype>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace fhop {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::vector<std::string> split_whitespace(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

// SQuAD-style answer normalization: lowercase, delete punctuation, drop the
// articles a/an/the as whole tokens, collapse whitespace. Idempotent.
inline std::string normalize_answer(const std::string& s) {
  std::string stripped;
  stripped.reserve(s.size());
  for (char c : s) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::ispunct(u)) continue;
    stripped.push_back(static_cast<char>(std::tolower(u)));
  }
  std::string out;
  for (const auto& tok : split_whitespace(stripped)) {
    if (tok == "a" || tok == "an" || tok == "the") continue;
    if (!out.empty()) out.push_back(' ');
    out += tok;
  }
  return out;
}

// Title normalization: case-insensitive trimmed equality. Titles are
// identifiers, so punctuation and articles stay.
inline std::string normalize_title(const std::string& s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isspace(u)) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(u)));
  }
  return out;
}

// Tokens scored by answer-level metrics (word-level F1 and friends).
inline std::vector<std::string> answer_tokens(const std::string& s) {
  return split_whitespace(normalize_answer(s));
}

// Index tokenizer: lowercase, split on non-alphanumeric, drop empties.
inline std::vector<std::string> tokenize_for_index(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      cur.push_back(static_cast<char>(std::tolower(u)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline std::set<std::string> normalize_title_set(const std::set<std::string>& titles) {
  std::set<std::string> out;
  for (const auto& t : titles) out.insert(normalize_title(t));
  return out;
}

// FNV-1a; used to derive per-call RNG streams that do not depend on the
// platform's std::hash.
inline std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace fhop
