#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pavekit/core/types.hpp"
#include "pavekit/error.hpp"

namespace pavekit {

namespace detail {

inline std::string normalize_label_key(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char raw : s) {
    unsigned char c = static_cast<unsigned char>(raw);
    if (c == '_' || c == '-' || std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    out += static_cast<char>(std::tolower(c));
  }
  return out;
}

}  // namespace detail

// Versioned alias map from per-dataset source labels to the canonical
// distress vocabulary. Lookup keys are case/underscore-insensitive; a
// trailing plural "s" falls back to the singular form.
class AliasTable {
 public:
  static constexpr std::string_view kVersion = "aliases-v1";

  void register_canonical(std::string_view label) { vocab_.insert(std::string(label)); }

  void register_dataset(std::string_view dataset) {
    datasets_.insert(detail::normalize_label_key(dataset));
  }

  void register_alias(std::string_view dataset, std::string_view source_label,
                      std::string_view canonical) {
    const std::string canon(canonical);
    if (!vocab_.count(canon))
      raise(Errc::UnknownLabel, "alias target '" + canon + "' not in canonical vocabulary");
    const std::string ds = detail::normalize_label_key(dataset);
    datasets_.insert(ds);
    aliases_[ds][detail::normalize_label_key(source_label)] = canon;
  }

  bool has_dataset(std::string_view dataset) const {
    return datasets_.count(detail::normalize_label_key(dataset)) > 0;
  }

  bool is_canonical(std::string_view label) const { return vocab_.count(std::string(label)) > 0; }

  std::vector<std::string> vocabulary() const { return {vocab_.begin(), vocab_.end()}; }

  DistressClass canonicalize(std::string_view source_label, std::string_view source_dataset) const {
    const std::string ds = detail::normalize_label_key(source_dataset);
    if (!datasets_.count(ds))
      raise(Errc::UnknownLabel, "dataset '" + std::string(source_dataset) + "' is not registered");
    const std::string key = detail::normalize_label_key(source_label);
    if (auto hit = lookup(ds, key)) return {*hit, std::string(source_label), std::string(source_dataset)};
    // plural fallback: "potholes" -> "pothole"
    if (key.size() > 1 && key.back() == 's') {
      if (auto hit = lookup(ds, key.substr(0, key.size() - 1)))
        return {*hit, std::string(source_label), std::string(source_dataset)};
    }
    raise(Errc::UnknownLabel, "label '" + std::string(source_label) + "' not registered for dataset '" +
                                  std::string(source_dataset) + "'");
  }

  // Per-dataset source vocabularies plus the merged canonical label set.
  static const AliasTable& builtin() {
    static const AliasTable table = make_builtin();
    return table;
  }

 private:
  std::optional<std::string> lookup(const std::string& dataset, const std::string& key) const {
    if (auto it = aliases_.find(dataset); it != aliases_.end())
      if (auto jt = it->second.find(key); jt != it->second.end()) return jt->second;
    // identity alias: canonical labels resolve for every registered dataset
    if (vocab_.count(key)) return key;
    return std::nullopt;
  }

  static AliasTable make_builtin() {
    AliasTable t;
    for (const char* label :
         {"longitudinal crack", "transverse crack", "alligator crack", "block crack",
          "reflective crack", "oblique crack", "edge crack", "crack", "pothole", "patch",
          "manhole", "rut", "repair", "other"})
      t.register_canonical(label);

    t.register_dataset("rdd2022");
    t.register_alias("rdd2022", "D00", "longitudinal crack");
    t.register_alias("rdd2022", "D01", "longitudinal crack");
    t.register_alias("rdd2022", "D10", "transverse crack");
    t.register_alias("rdd2022", "D11", "transverse crack");
    t.register_alias("rdd2022", "D20", "alligator crack");
    t.register_alias("rdd2022", "D40", "pothole");
    t.register_alias("rdd2022", "D43", "other");
    t.register_alias("rdd2022", "D44", "other");
    t.register_alias("rdd2022", "D50", "manhole");
    t.register_alias("rdd2022", "other corruption", "other");

    t.register_dataset("pid");
    t.register_alias("pid", "sealed reflective crack", "reflective crack");
    t.register_alias("pid", "sealed transverse crack", "transverse crack");
    t.register_alias("pid", "pcc", "other");

    t.register_dataset("pavetrack");
    t.register_alias("pavetrack", "patched crack", "patch");
    t.register_alias("pavetrack", "patched pothole", "patch");
    t.register_alias("pavetrack", "clay patched crack", "patch");

    t.register_dataset("uapd");
    t.register_alias("uapd", "repairs", "repair");

    t.register_dataset("dsps23");
    t.register_alias("dsps23", "longitudinal", "longitudinal crack");
    t.register_alias("dsps23", "transverse", "transverse crack");
    t.register_alias("dsps23", "alligator", "alligator crack");
    t.register_alias("dsps23", "block", "block crack");
    t.register_alias("dsps23", "patching", "patch");

    t.register_dataset("dsps24");
    t.register_dataset("pcier");

    t.register_dataset("svrdd");
    t.register_alias("svrdd", "longitudinal patch", "patch");
    t.register_alias("svrdd", "transverse patch", "patch");
    t.register_alias("svrdd", "manhole cover", "manhole");

    t.register_dataset("uav_pdd2023");
    t.register_alias("uav_pdd2023", "patching", "patch");
    t.register_alias("uav_pdd2023", "oblique", "oblique crack");

    t.register_dataset("roboflow");
    t.register_alias("roboflow", "edge cracking", "edge crack");
    t.register_alias("roboflow", "patching", "patch");
    t.register_alias("roboflow", "rutting", "rut");

    return t;
  }

  std::set<std::string> vocab_;
  std::set<std::string> datasets_;
  std::map<std::string, std::map<std::string, std::string>> aliases_;
};

inline DistressClass canonicalize_label(std::string_view source_label, std::string_view source_dataset,
                                        const AliasTable& table = AliasTable::builtin()) {
  return table.canonicalize(source_label, source_dataset);
}

}  // namespace pavekit
