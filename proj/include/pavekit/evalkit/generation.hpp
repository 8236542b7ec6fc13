#pragma once

#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "pavekit/evalkit/text.hpp"

namespace pavekit::evalkit {

using TokenSeq = std::vector<std::string>;

namespace detail {

inline std::map<std::string, std::size_t> ngram_counts(const TokenSeq& tokens, std::size_t n) {
  std::map<std::string, std::size_t> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (std::size_t k = 1; k < n; ++k) {
      key += '\x1f';
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace detail

// BLEU-4 with clipped modified precision. The printed formula is undefined
// when a P_n count is zero, so orders n >= 2 use add-one smoothing on both
// numerator and denominator; this is flagged in report metadata.
inline constexpr std::string_view kBleuSmoothing = "add-one smoothing for n >= 2";

inline double bleu4(const TokenSeq& candidate, const std::vector<TokenSeq>& references) {
  if (candidate.empty()) raise(Errc::EmptyCandidate, "empty candidate");
  if (references.empty()) raise(Errc::EmptyInput, "no references");

  double log_sum = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto cand_counts = detail::ngram_counts(candidate, n);
    std::map<std::string, std::size_t> max_ref_counts;
    for (const auto& ref : references)
      for (const auto& [gram, count] : detail::ngram_counts(ref, n))
        max_ref_counts[gram] = std::max(max_ref_counts[gram], count);

    std::size_t clipped = 0, total = 0;
    for (const auto& [gram, count] : cand_counts) {
      total += count;
      const auto it = max_ref_counts.find(gram);
      clipped += std::min(count, it == max_ref_counts.end() ? std::size_t{0} : it->second);
    }

    double p_n;
    if (n == 1) {
      if (clipped == 0) return 0.0;
      p_n = static_cast<double>(clipped) / static_cast<double>(total);
    } else {
      p_n = static_cast<double>(clipped + 1) / static_cast<double>(total + 1);
    }
    log_sum += std::log(p_n);
  }

  // Brevity penalty against the closest reference length (ties -> shorter).
  const std::size_t c = candidate.size();
  std::size_t r = references[0].size();
  for (const auto& ref : references) {
    const auto diff = [&](std::size_t len) {
      return len > c ? len - c : c - len;
    };
    if (diff(ref.size()) < diff(r) || (diff(ref.size()) == diff(r) && ref.size() < r)) r = ref.size();
  }
  const double bp = c > r ? 1.0 : std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c));
  return bp * std::exp(log_sum / 4.0);
}

namespace detail {

inline std::size_t lcs_length(const TokenSeq& x, const TokenSeq& y) {
  const std::size_t m = x.size(), n = y.size();
  std::vector<std::size_t> prev(n + 1, 0), cur(n + 1, 0);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j)
      cur[j] = x[i - 1] == y[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[n];
}

}  // namespace detail

// LCS F-measure with recall emphasis: F = (1+b^2)RP / (R + b^2 P).
inline double rouge_l(const TokenSeq& candidate, const TokenSeq& reference, double beta = 1.2) {
  const std::size_t lcs = detail::lcs_length(candidate, reference);
  if (lcs == 0) return 0.0;
  const double r = static_cast<double>(lcs) / static_cast<double>(reference.size());
  const double p = static_cast<double>(lcs) / static_cast<double>(candidate.size());
  const double b2 = beta * beta;
  return (1 + b2) * r * p / (r + b2 * p);
}

struct CiderScores {
  std::vector<double> per_image;
  double corpus = 0;
};

// Reported at unit scale (cosine mean), without the conventional x10 rescale;
// noted in report metadata.
inline constexpr std::string_view kCiderConvention = "unit scale (no x10 rescale)";

// TF-IDF weighted n-gram consensus, n in 1..4. Document frequency counts the
// images whose reference set contains the n-gram; the candidate borrows the
// reference corpus IDF.
inline CiderScores cider(const std::vector<TokenSeq>& candidates,
                         const std::vector<std::vector<TokenSeq>>& reference_sets,
                         std::size_t max_n = 4) {
  if (candidates.size() != reference_sets.size())
    raise(Errc::LengthMismatch, "candidates and reference sets differ in length");
  const std::size_t num_images = candidates.size();
  if (num_images < 2) raise(Errc::CorpusTooSmall, "IDF needs at least 2 images");

  using Counts = std::map<std::string, std::size_t>;
  using Tfidf = std::map<std::string, double>;

  CiderScores out;
  out.per_image.resize(num_images, 0.0);

  for (std::size_t n = 1; n <= max_n; ++n) {
    // document frequency over images
    std::map<std::string, std::size_t> df;
    std::vector<std::vector<Counts>> ref_counts(num_images);
    for (std::size_t img = 0; img < num_images; ++img) {
      std::map<std::string, bool> seen;
      for (const auto& ref : reference_sets[img]) {
        auto counts = detail::ngram_counts(ref, n);
        for (const auto& [gram, _] : counts) seen[gram] = true;
        ref_counts[img].push_back(std::move(counts));
      }
      for (const auto& [gram, _] : seen) ++df[gram];
    }

    const auto tfidf = [&](const Counts& counts) {
      Tfidf vec;
      std::size_t total = 0;
      for (const auto& [_, c] : counts) total += c;
      if (total == 0) return vec;
      for (const auto& [gram, c] : counts) {
        const auto it = df.find(gram);
        const double docs_with = it == df.end() ? 0.0 : static_cast<double>(it->second);
        const double idf = std::log(static_cast<double>(num_images) / std::max(docs_with, 1.0));
        vec[gram] = (static_cast<double>(c) / static_cast<double>(total)) * idf;
      }
      return vec;
    };
    const auto norm = [](const Tfidf& v) {
      double s = 0;
      for (const auto& [_, x] : v) s += x * x;
      return std::sqrt(s);
    };
    const auto cosine = [&](const Tfidf& a, const Tfidf& b) {
      const double na = norm(a), nb = norm(b);
      if (na == 0.0 || nb == 0.0) return 0.0;
      double dot = 0;
      for (const auto& [gram, x] : a) {
        const auto it = b.find(gram);
        if (it != b.end()) dot += x * it->second;
      }
      return dot / (na * nb);
    };

    for (std::size_t img = 0; img < num_images; ++img) {
      if (ref_counts[img].empty()) continue;
      const Tfidf cand_vec = tfidf(detail::ngram_counts(candidates[img], n));
      double sum = 0;
      for (const auto& counts : ref_counts[img]) sum += cosine(cand_vec, tfidf(counts));
      out.per_image[img] += sum / static_cast<double>(ref_counts[img].size());
    }
  }

  for (auto& score : out.per_image) score /= static_cast<double>(max_n);
  out.corpus = std::accumulate(out.per_image.begin(), out.per_image.end(), 0.0) /
               static_cast<double>(num_images);
  return out;
}

}  // namespace pavekit::evalkit
