#pragma once

#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pavekit/core/types.hpp"
#include "pavekit/evalkit/predictions.hpp"

namespace pavekit::report {

struct CorpusStats {
  std::size_t records = 0;
  std::map<std::string, std::size_t> per_dataset_counts;
  std::map<std::string, std::map<std::string, std::size_t>> per_dataset_class_counts;
  std::map<std::string, std::size_t> global_distress_frequencies;
  std::map<std::string, std::size_t> per_category_counts;  // all five categories, even at zero
  double single_turn_fraction = 0;
  double multi_turn_fraction = 0;
  std::map<int, std::size_t> turn_count_histogram;  // user/assistant exchanges per record, 1..8
  std::size_t turn_overflow = 0;                    // dialogues beyond 8 exchanges, flagged
  std::map<int, std::size_t> answer_word_count_histogram;  // 25-word bins keyed by bin start
  std::map<std::string, double> answer_format_fractions;

  bool operator==(const CorpusStats&) const = default;
};

// Single deterministic pass; answer formats are classified with the same
// grammar the evaluator uses, and word counts use the metric tokenizer.
template <typename RecordRange>
CorpusStats compute_stats(const RecordRange& records) {
  CorpusStats s;
  for (auto c : all_task_categories()) s.per_category_counts[std::string(to_string(c))] = 0;

  std::size_t multi = 0;
  std::map<std::string, std::size_t> format_counts;
  for (const auto& rec : records) {
    ++s.records;
    ++s.per_dataset_counts[rec.source_dataset];
    ++s.per_category_counts[std::string(to_string(category_of(rec.task)))];
    for (const auto& gt_box : rec.ground_truth.boxes) {
      ++s.per_dataset_class_counts[rec.source_dataset][gt_box.label];
      ++s.global_distress_frequencies[gt_box.label];
    }

    const int exchanges = static_cast<int>(rec.turns.size() / 2);
    if (exchanges >= 1 && exchanges <= 8)
      ++s.turn_count_histogram[exchanges];
    else
      ++s.turn_overflow;
    if (exchanges >= 2) ++multi;

    for (const auto& turn : rec.turns) {
      if (turn.role != Role::Assistant) continue;
      const int words = static_cast<int>(evalkit::word_count(turn.text));
      ++s.answer_word_count_histogram[(words / 25) * 25];
    }

    ++format_counts[std::string(
        to_string(evalkit::classify_answer_format(rec.assistant_text())))];
  }

  if (s.records > 0) {
    s.multi_turn_fraction = static_cast<double>(multi) / static_cast<double>(s.records);
    s.single_turn_fraction = 1.0 - s.multi_turn_fraction;
    for (const auto& [fmt, count] : format_counts)
      s.answer_format_fractions[fmt] =
          static_cast<double>(count) / static_cast<double>(s.records);
  }
  return s;
}

enum class ReportFormat { Table, Csv };

namespace detail {

inline std::string exact_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline std::string render_report(const CorpusStats& s, ReportFormat format) {
  std::ostringstream out;
  if (format == ReportFormat::Csv) {
    out << "section,key,value\n";
    out << "meta,records," << s.records << "\n";
    out << "meta,turn_overflow," << s.turn_overflow << "\n";
    for (const auto& [k, v] : s.per_dataset_counts) out << "per_dataset_counts," << k << "," << v << "\n";
    for (const auto& [ds, classes] : s.per_dataset_class_counts)
      for (const auto& [label, v] : classes)
        out << "per_dataset_class_counts," << ds << "/" << label << "," << v << "\n";
    for (const auto& [k, v] : s.global_distress_frequencies)
      out << "global_distress_frequencies," << k << "," << v << "\n";
    for (const auto& [k, v] : s.per_category_counts) out << "per_category_counts," << k << "," << v << "\n";
    out << "turn_style_fractions,single," << detail::exact_double(s.single_turn_fraction) << "\n";
    out << "turn_style_fractions,multi," << detail::exact_double(s.multi_turn_fraction) << "\n";
    for (const auto& [k, v] : s.turn_count_histogram) out << "turn_count_histogram," << k << "," << v << "\n";
    for (const auto& [k, v] : s.answer_word_count_histogram)
      out << "answer_word_count_histogram," << k << "," << v << "\n";
    for (const auto& [k, v] : s.answer_format_fractions)
      out << "answer_format_fractions," << k << "," << detail::exact_double(v) << "\n";
    return out.str();
  }

  out << "Corpus statistics\n";
  out << "  records: " << s.records << "\n";
  out << "  turn styles: single " << s.single_turn_fraction << ", multi " << s.multi_turn_fraction
      << "\n";
  out << "  task categories:\n";
  for (const auto& [k, v] : s.per_category_counts) out << "    " << k << ": " << v << "\n";
  out << "  records per dataset:\n";
  for (const auto& [k, v] : s.per_dataset_counts) out << "    " << k << ": " << v << "\n";
  out << "  distress frequencies:\n";
  for (const auto& [k, v] : s.global_distress_frequencies) out << "    " << k << ": " << v << "\n";
  out << "  distress classes per dataset:\n";
  for (const auto& [ds, classes] : s.per_dataset_class_counts) {
    out << "    " << ds << ":";
    bool first = true;
    for (const auto& [label, v] : classes) {
      out << (first ? " " : ", ") << label << " (" << v << ")";
      first = false;
    }
    out << "\n";
  }
  out << "  conversation turns (exchanges):\n";
  for (const auto& [k, v] : s.turn_count_histogram) out << "    " << k << ": " << v << "\n";
  if (s.turn_overflow > 0) out << "    overflow (>8): " << s.turn_overflow << "\n";
  out << "  answer word counts (25-word bins):\n";
  for (const auto& [k, v] : s.answer_word_count_histogram)
    out << "    " << k << "-" << k + 24 << ": " << v << "\n";
  out << "  answer formats:\n";
  for (const auto& [k, v] : s.answer_format_fractions) out << "    " << k << ": " << v << "\n";
  return out.str();
}

// Inverse of the CSV rendering; round-trips stats exactly.
inline CorpusStats parse_stats_csv(const std::string& csv) {
  CorpusStats s;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      raise(Errc::MalformedLine, "bad stats CSV line: " + line);
    const std::string section = line.substr(0, c1);
    const std::string key = line.substr(c1 + 1, c2 - c1 - 1);
    const std::string value = line.substr(c2 + 1);

    if (section == "meta") {
      if (key == "records") s.records = std::stoull(value);
      else if (key == "turn_overflow") s.turn_overflow = std::stoull(value);
    } else if (section == "per_dataset_counts") {
      s.per_dataset_counts[key] = std::stoull(value);
    } else if (section == "per_dataset_class_counts") {
      const auto slash = key.find('/');
      s.per_dataset_class_counts[key.substr(0, slash)][key.substr(slash + 1)] = std::stoull(value);
    } else if (section == "global_distress_frequencies") {
      s.global_distress_frequencies[key] = std::stoull(value);
    } else if (section == "per_category_counts") {
      s.per_category_counts[key] = std::stoull(value);
    } else if (section == "turn_style_fractions") {
      (key == "single" ? s.single_turn_fraction : s.multi_turn_fraction) = std::stod(value);
    } else if (section == "turn_count_histogram") {
      s.turn_count_histogram[std::stoi(key)] = std::stoull(value);
    } else if (section == "answer_word_count_histogram") {
      s.answer_word_count_histogram[std::stoi(key)] = std::stoull(value);
    } else if (section == "answer_format_fractions") {
      s.answer_format_fractions[key] = std::stod(value);
    } else {
      raise(Errc::MalformedLine, "unknown stats section: " + section);
    }
  }
  return s;
}

}  // namespace pavekit::report
