#pragma once

#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pavekit/core/taxonomy.hpp"
#include "pavekit/evalkit/text.hpp"

namespace pavekit::evalkit {

// Structured view extracted from a model's free-text output. Extraction
// failures are recorded, not raised: unparseable records count against the
// parsing rate.
struct ParsedPrediction {
  std::vector<std::array<long long, 4>> boxes;
  std::map<std::string, std::string> fields;  // distress / severity / repair
  std::optional<double> pci;
  std::optional<char> choice;
  std::vector<std::pair<std::string, std::string>> checklist;
  std::string text;
};

namespace detail {

inline bool parse_ll(std::string_view s, long long& out) {
  if (s.empty()) return false;
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
    if (i == s.size()) return false;
  }
  long long v = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    v = v * 10 + (s[i] - '0');
  }
  out = neg ? -v : v;
  return true;
}

inline std::string_view trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// All "[x1, y1, x2, y2]" integer quadruples in the text.
inline std::vector<std::array<long long, 4>> extract_boxes(std::string_view text) {
  std::vector<std::array<long long, 4>> out;
  std::size_t pos = 0;
  while ((pos = text.find('[', pos)) != std::string_view::npos) {
    const std::size_t close = text.find(']', pos);
    if (close == std::string_view::npos) break;
    std::string_view body = text.substr(pos + 1, close - pos - 1);
    std::array<long long, 4> vals{};
    std::size_t count = 0, start = 0;
    bool ok = true;
    while (start <= body.size() && ok) {
      std::size_t comma = body.find(',', start);
      if (comma == std::string_view::npos) comma = body.size();
      long long v = 0;
      if (!parse_ll(trim(body.substr(start, comma - start)), v)) {
        ok = false;
        break;
      }
      if (count < 4) vals[count] = v;
      ++count;
      if (comma == body.size()) break;
      start = comma + 1;
    }
    if (ok && count == 4) out.push_back(vals);
    pos = close + 1;
  }
  return out;
}

inline std::optional<double> first_number_after(std::string_view text, std::size_t from,
                                                std::size_t window) {
  const std::size_t end = std::min(text.size(), from + window);
  std::size_t i = from;
  while (i < end) {
    if (std::isdigit(static_cast<unsigned char>(text[i]))) {
      std::size_t j = i;
      bool dot = false;
      while (j < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[j])) || (text[j] == '.' && !dot))) {
        if (text[j] == '.') dot = true;
        ++j;
      }
      try {
        return std::stod(std::string(text.substr(i, j - i)));
      } catch (...) {
        return std::nullopt;
      }
    }
    ++i;
  }
  return std::nullopt;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace detail

// First numeric token inside a window following a "PCI" mention.
inline std::optional<double> extract_pci(std::string_view text) {
  const std::string lowered = detail::lower(text);
  std::size_t pos = 0;
  while ((pos = lowered.find("pci", pos)) != std::string::npos) {
    // reject words that merely contain "pci"
    const bool left_ok = pos == 0 || !std::isalnum(static_cast<unsigned char>(lowered[pos - 1]));
    const bool right_ok =
        pos + 3 >= lowered.size() || !std::isalpha(static_cast<unsigned char>(lowered[pos + 3]));
    if (left_ok && right_ok)
      if (auto v = detail::first_number_after(lowered, pos + 3, 80)) return v;
    pos += 3;
  }
  return std::nullopt;
}

// Choice key written as "(a)".."(h)" or "a)" at a token start.
inline std::optional<char> extract_choice(std::string_view text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '(' && i + 2 < text.size() && text[i + 2] == ')') {
      const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(text[i + 1])));
      if (c >= 'a' && c <= 'h') return c;
    }
  }
  return std::nullopt;
}

inline ParsedPrediction parse_prediction(std::string_view raw_text) {
  ParsedPrediction p;
  p.text = std::string(detail::trim(raw_text));
  p.boxes = detail::extract_boxes(raw_text);
  p.pci = extract_pci(raw_text);
  p.choice = extract_choice(raw_text);

  std::size_t start = 0;
  while (start <= raw_text.size()) {
    std::size_t end = raw_text.find('\n', start);
    if (end == std::string_view::npos) end = raw_text.size();
    const std::string_view line = detail::trim(raw_text.substr(start, end - start));

    if (line.rfind("- ", 0) == 0) {
      const std::size_t colon = line.find(':');
      if (colon != std::string_view::npos)
        p.checklist.emplace_back(std::string(detail::trim(line.substr(2, colon - 2))),
                                 std::string(detail::trim(line.substr(colon + 1))));
    } else {
      for (std::string_view key : {"Distress", "Severity", "Repair"}) {
        if (line.size() > key.size() + 1 &&
            detail::lower(line.substr(0, key.size())) == detail::lower(key) &&
            line[key.size()] == ':') {
          p.fields[detail::lower(key)] = std::string(detail::trim(line.substr(key.size() + 1)));
        }
      }
    }
    if (end == raw_text.size()) break;
    start = end + 1;
  }
  return p;
}

inline bool has_step_markers(std::string_view text) {
  const std::string lowered = detail::lower(text);
  return lowered.find("step 1") != std::string::npos || lowered.find("step 2") != std::string::npos;
}

// Format label for arbitrary answer text; the same grammar backs both corpus
// statistics and evaluation routing. Precedence resolves overlaps between
// surface patterns.
inline AnswerFormat classify_answer_format(std::string_view text) {
  const ParsedPrediction p = parse_prediction(text);
  if (!p.checklist.empty()) return AnswerFormat::Checklist;
  if (p.choice) return AnswerFormat::MultipleChoice;
  if (!p.boxes.empty()) return AnswerFormat::Coordinates;
  if (has_step_markers(text)) return AnswerFormat::ChainOfThought;
  if (p.pci) return AnswerFormat::Numeric;
  if (word_count(text) <= 8) return AnswerFormat::ShortAnswer;
  return AnswerFormat::Descriptive;
}

// Did the raw text yield every field its task's answer format requires?
inline bool parses_for(const ParsedPrediction& p, AnswerFormat format) {
  switch (format) {
    case AnswerFormat::Coordinates: return !p.boxes.empty();
    case AnswerFormat::Numeric: return p.pci.has_value();
    case AnswerFormat::MultipleChoice: return p.choice.has_value();
    case AnswerFormat::Checklist: return !p.checklist.empty();
    case AnswerFormat::ShortAnswer:
    case AnswerFormat::ChainOfThought:
    case AnswerFormat::Descriptive: return !p.text.empty();
  }
  return false;
}

struct PredictionRecord {
  std::string record_id;
  std::string raw_text;
};

// Fraction of predictions whose raw text yields every field required by the
// record's answer format.
inline double parsing_rate(const std::vector<PredictionRecord>& preds,
                           const std::map<std::string, AnswerFormat>& formats_by_id) {
  if (preds.empty()) raise(Errc::EmptyPredictionSet, "no predictions");
  std::size_t ok = 0;
  for (const auto& pred : preds) {
    const auto it = formats_by_id.find(pred.record_id);
    if (it == formats_by_id.end())
      raise(Errc::UnknownRecordId, "prediction '" + pred.record_id + "' not in corpus");
    if (parses_for(parse_prediction(pred.raw_text), it->second)) ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(preds.size());
}

}  // namespace pavekit::evalkit
