#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "pavekit/error.hpp"

namespace pavekit::evalkit {

// Tokenization contract for every text metric in this module. Versioned so
// reported scores stay comparable across runs.
inline constexpr std::string_view kTokenizerVersion = "tok-v1";

namespace detail {

inline bool is_punct(unsigned char c) { return std::ispunct(c) != 0; }

inline bool digit_at(std::string_view s, std::size_t i) {
  return i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])) != 0;
}

}  // namespace detail

// Lowercase; punctuation split into its own tokens except '.'/',' between
// digits (keeps "41.5" whole); tokens separated on whitespace.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::string spaced;
  spaced.reserve(text.size() + 16);
  for (std::size_t i = 0; i < text.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    const bool numeric_sep =
        (c == '.' || c == ',') && i > 0 && detail::digit_at(text, i - 1) && detail::digit_at(text, i + 1);
    if (detail::is_punct(c) && !numeric_sep) {
      spaced += ' ';
      spaced += static_cast<char>(c);
      spaced += ' ';
    } else {
      spaced += static_cast<char>(std::tolower(c));
    }
  }
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < spaced.size()) {
    while (i < spaced.size() && std::isspace(static_cast<unsigned char>(spaced[i]))) ++i;
    std::size_t j = i;
    while (j < spaced.size() && !std::isspace(static_cast<unsigned char>(spaced[j]))) ++j;
    if (j > i) tokens.emplace_back(spaced.substr(i, j - i));
    i = j;
  }
  return tokens;
}

inline std::size_t word_count(std::string_view text) { return tokenize(text).size(); }

// Single-character edit distance (insert/delete/substitute), iterative two-row DP.
inline std::size_t levenshtein_distance(std::string_view a, std::string_view b) {
  const std::size_t m = a.size(), n = b.size();
  if (m == 0) return n;
  if (n == 0) return m;
  std::vector<std::size_t> prev(n + 1), cur(n + 1);
  for (std::size_t j = 0; j <= n; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= n; ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

// 1 - Lev(a,b)/max(|a|,|b|); two empty strings are fully similar.
inline double levenshtein_similarity(std::string_view a, std::string_view b) {
  if (a.empty() && b.empty()) return 1.0;
  const std::size_t denom = std::max(a.size(), b.size());
  return 1.0 - static_cast<double>(levenshtein_distance(a, b)) / static_cast<double>(denom);
}

// Severity normalization: lowercase and drop all whitespace.
inline std::string normalize_compact(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char raw : s) {
    const unsigned char c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) continue;
    out += static_cast<char>(std::tolower(c));
  }
  return out;
}

// VQA normalization: lowercase, strip punctuation, drop articles (a, an, the),
// collapse whitespace.
inline std::string normalize_answer(std::string_view s) {
  std::string lowered;
  lowered.reserve(s.size());
  for (char raw : s) {
    const unsigned char c = static_cast<unsigned char>(raw);
    if (detail::is_punct(c)) {
      lowered += ' ';
    } else {
      lowered += static_cast<char>(std::tolower(c));
    }
  }
  std::string out;
  std::size_t i = 0;
  while (i < lowered.size()) {
    while (i < lowered.size() && std::isspace(static_cast<unsigned char>(lowered[i]))) ++i;
    std::size_t j = i;
    while (j < lowered.size() && !std::isspace(static_cast<unsigned char>(lowered[j]))) ++j;
    if (j > i) {
      const std::string_view word(lowered.data() + i, j - i);
      if (word != "a" && word != "an" && word != "the") {
        if (!out.empty()) out += ' ';
        out += word;
      }
    }
    i = j;
  }
  return out;
}

}  // namespace pavekit::evalkit
