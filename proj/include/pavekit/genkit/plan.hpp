#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "pavekit/genkit/templates.hpp"

namespace pavekit::genkit {

struct MixConfig {
  double multi_turn_fraction = 0.206;
  std::map<AnswerFormat, double> format_fractions = default_format_fractions();
  int records_per_annotation = 1;
  std::uint64_t seed = 0;
  int max_turns = 8;

  static std::map<AnswerFormat, double> default_format_fractions() {
    return {{AnswerFormat::Coordinates, 0.31},   {AnswerFormat::Descriptive, 0.192},
            {AnswerFormat::ShortAnswer, 0.20},   {AnswerFormat::ChainOfThought, 0.15},
            {AnswerFormat::Numeric, 0.078},      {AnswerFormat::MultipleChoice, 0.04},
            {AnswerFormat::Checklist, 0.03}};
  }
};

struct Assignment {
  std::size_t annotation_index = 0;
  std::optional<std::size_t> partner_index;  // second image for comparisons
  TaskId task = TaskId::SingleObjectGrounding;
  LengthVariant length = LengthVariant::Short;
  bool multi_turn = false;
  int turn_count = 1;  // user/assistant exchanges
  AnswerFormat format = AnswerFormat::Descriptive;
};

struct CorpusPlan {
  std::vector<Assignment> assignments;
};

namespace detail {

inline std::vector<TaskId> single_turn_tasks(AnswerFormat format) {
  std::vector<TaskId> out;
  for (const auto& t : taxonomy())
    if (answer_format_of(t.id) == format && t.id != TaskId::MultiTurnConsultation) out.push_back(t.id);
  return out;
}

// format fractions -> integer counts summing to n (largest remainder)
inline std::map<AnswerFormat, std::size_t> apportion(std::size_t n,
                                                     const std::map<AnswerFormat, double>& fractions) {
  std::map<AnswerFormat, std::size_t> counts;
  std::vector<std::pair<double, AnswerFormat>> remainders;
  std::size_t assigned = 0;
  for (auto f : all_answer_formats()) {
    const auto it = fractions.find(f);
    const double p = it == fractions.end() ? 0.0 : it->second;
    const double exact = p * static_cast<double>(n);
    const auto base = static_cast<std::size_t>(std::floor(exact + 1e-9));
    counts[f] = base;
    assigned += base;
    remainders.emplace_back(exact - static_cast<double>(base), f);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < n && i < remainders.size(); ++i, ++assigned)
    ++counts[remainders[i].second];
  return counts;
}

// what a plan slot demands from its annotation
enum class SlotNeed { Any, Instances, SeverityInstances, Pci, Condition };

inline SlotNeed need_of_task(TaskId task) {
  switch (requirement_of(task)) {
    case Requirement::Instances: return SlotNeed::Instances;
    case Requirement::SeverityInstances: return SlotNeed::SeverityInstances;
    case Requirement::Pci: return SlotNeed::Pci;
    case Requirement::Condition: return SlotNeed::Condition;
    case Requirement::Any: return SlotNeed::Any;
  }
  return SlotNeed::Any;
}

inline SlotNeed need_of_focus(AnswerFormat format) {
  switch (format) {
    case AnswerFormat::Coordinates:
    case AnswerFormat::MultipleChoice: return SlotNeed::Instances;
    case AnswerFormat::Numeric: return SlotNeed::Pci;
    default: return SlotNeed::Any;
  }
}

inline bool satisfies(const UnifiedAnnotation& a, SlotNeed need) {
  switch (need) {
    case SlotNeed::Any: return true;
    case SlotNeed::Instances: return !a.instances.empty();
    case SlotNeed::SeverityInstances:
      for (const auto& inst : a.instances)
        if (inst.severity) return true;
      return false;
    case SlotNeed::Pci: return a.pci.has_value();
    case SlotNeed::Condition: return a.condition.has_value();
  }
  return false;
}

}  // namespace detail

// Deterministic (seeded) assignment of tasks, lengths, and turn styles to
// annotations. Both mix axes are honored independently: answer-format counts
// by largest remainder over the total, the multi-turn count distributed
// across formats that support a consultation focus. Multi-turn consultations
// never carry the short-answer format (a consultation transcript is not a
// one-phrase answer).
inline CorpusPlan plan_corpus(const std::vector<UnifiedAnnotation>& annotations,
                              const MixConfig& mix) {
  double fraction_sum = 0;
  for (const auto& [_, p] : mix.format_fractions) {
    if (p < 0) raise(Errc::InvalidArgument, "negative mix fraction");
    fraction_sum += p;
  }
  if (std::abs(fraction_sum - 1.0) > 1e-9)
    raise(Errc::InvalidArgument, "answer-format fractions must sum to 1");
  if (mix.multi_turn_fraction < 0 || mix.multi_turn_fraction > 1)
    raise(Errc::InvalidArgument, "multi-turn fraction must lie in [0,1]");
  if (mix.records_per_annotation < 1)
    raise(Errc::InvalidArgument, "records_per_annotation must be >= 1");
  if (mix.max_turns < 2 || mix.max_turns > 8)
    raise(Errc::InvalidArgument, "max_turns must lie in [2,8]");

  CorpusPlan plan;
  const std::size_t n =
      annotations.size() * static_cast<std::size_t>(mix.records_per_annotation);
  if (n == 0) return plan;

  auto format_counts = detail::apportion(n, mix.format_fractions);
  const auto multi_total =
      static_cast<std::size_t>(std::llround(mix.multi_turn_fraction * static_cast<double>(n)));

  // split the multi-turn budget across consultation-capable formats
  std::map<AnswerFormat, std::size_t> multi_counts;
  {
    std::size_t eligible_total = 0;
    for (auto f : all_answer_formats())
      if (f != AnswerFormat::ShortAnswer) eligible_total += format_counts[f];
    if (multi_total > eligible_total)
      raise(Errc::InfeasibleMix, "multi-turn fraction exceeds consultation-capable records");
    std::size_t assigned = 0;
    for (auto f : all_answer_formats()) {
      if (f == AnswerFormat::ShortAnswer || eligible_total == 0) continue;
      multi_counts[f] = std::min(
          format_counts[f],
          static_cast<std::size_t>(std::floor(static_cast<double>(multi_total) *
                                              static_cast<double>(format_counts[f]) /
                                              static_cast<double>(eligible_total))));
      assigned += multi_counts[f];
    }
    for (auto f : all_answer_formats()) {
      if (assigned >= multi_total) break;
      if (f == AnswerFormat::ShortAnswer) continue;
      while (multi_counts[f] < format_counts[f] && assigned < multi_total) {
        ++multi_counts[f];
        ++assigned;
      }
    }
  }

  // annotation pool: each index repeated records_per_annotation times, in
  // seeded order
  std::mt19937_64 rng(mix.seed);
  std::vector<std::size_t> pool;
  pool.reserve(n);
  for (int copy = 0; copy < mix.records_per_annotation; ++copy)
    for (std::size_t i = 0; i < annotations.size(); ++i) pool.push_back(i);
  std::shuffle(pool.begin(), pool.end(), rng);

  const auto take_compatible = [&](detail::SlotNeed need) -> std::optional<std::size_t> {
    for (std::size_t k = 0; k < pool.size(); ++k) {
      if (detail::satisfies(annotations[pool[k]], need)) {
        const std::size_t idx = pool[k];
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k));
        return idx;
      }
    }
    return std::nullopt;
  };

  std::discrete_distribution<int> turn_dist({0.45, 0.30, 0.10, 0.06, 0.04, 0.03, 0.02});

  // most-constrained formats first so scarce annotations are not consumed by
  // unconstrained slots
  static constexpr AnswerFormat kFillOrder[] = {
      AnswerFormat::Numeric,   AnswerFormat::MultipleChoice, AnswerFormat::Coordinates,
      AnswerFormat::ShortAnswer, AnswerFormat::Checklist,    AnswerFormat::ChainOfThought,
      AnswerFormat::Descriptive};

  std::size_t length_cursor = 0;
  for (const AnswerFormat format : kFillOrder) {
    const std::size_t total = format_counts[format];
    const std::size_t multi = multi_counts.count(format) ? multi_counts[format] : 0;

    // multi-turn consultations focused on this format
    for (std::size_t k = 0; k < multi; ++k) {
      const auto idx = take_compatible(detail::need_of_focus(format));
      if (!idx)
        raise(Errc::InfeasibleMix, "no annotation supports a multi-turn " +
                                       std::string(to_string(format)) + " consultation");
      Assignment a;
      a.annotation_index = *idx;
      a.task = TaskId::MultiTurnConsultation;
      a.format = format;
      a.multi_turn = true;
      int turns = 2 + turn_dist(rng);
      a.turn_count = std::min(turns, mix.max_turns);
      a.length = kAllLengthVariants[length_cursor++ % 3];
      plan.assignments.push_back(a);
    }

    // single-turn records cycling through the format's tasks
    const auto tasks = detail::single_turn_tasks(format);
    std::size_t task_cursor = 0;
    for (std::size_t k = 0; k < total - multi; ++k) {
      std::optional<std::size_t> idx;
      TaskId task = tasks.front();
      for (std::size_t probe = 0; probe < tasks.size(); ++probe) {
        const TaskId candidate = tasks[(task_cursor + probe) % tasks.size()];
        if (candidate == TaskId::MultiImageComparison && annotations.size() < 2) continue;
        idx = take_compatible(detail::need_of_task(candidate));
        if (idx) {
          task = candidate;
          task_cursor = (task_cursor + probe + 1) % tasks.size();
          break;
        }
      }
      if (!idx)
        raise(Errc::InfeasibleMix, "no annotation supports any remaining " +
                                       std::string(to_string(format)) + " task");
      Assignment a;
      a.annotation_index = *idx;
      a.task = task;
      a.format = format;
      a.length = kAllLengthVariants[length_cursor++ % 3];
      if (task == TaskId::MultiImageComparison) {
        std::size_t partner = (*idx + 1 + rng() % (annotations.size() - 1)) % annotations.size();
        a.partner_index = partner;
      }
      plan.assignments.push_back(a);
    }
  }

  return plan;
}

}  // namespace pavekit::genkit
