#ifndef STYVAR_SIMILARITY_HPP
#define STYVAR_SIMILARITY_HPP

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "styvar/corpus.hpp"
#include "styvar/stats.hpp"

namespace styvar::similarity {

// u.v / (|u||v|), clamped to [-1, 1] against rounding.
double cosine_similarity(std::span<const double> u, std::span<const double> v);

struct PairScore {
  std::string original_id;
  std::string rewrite_id;
  std::string llm_tag;     // empty when untagged
  std::string prompt_tag;  // empty when untagged
  double cosine = 0.0;
};

struct SimilarityReport {
  std::vector<PairScore> scores;
  std::size_t skipped_pairs = 0;  // missing embeddings
  double threshold = 0.0;
  double mean = 0.0;
  double median = 0.0;
  std::array<double, 9> deciles{};  // 10th..90th percentile
  double fraction_at_or_above = 0.0;
};

SimilarityReport similarity_report(
    const std::vector<std::pair<corpus::Document, corpus::Document>>& pairs,
    double threshold);

struct RatingSummary {
  double mean = 0.0;
  double sd = 0.0;  // 0 when only one rating cell
  stats::Agreement agreement;
};

// ratings: items x raters on the {1,2,3} rubric scale.
RatingSummary rating_summary(const std::vector<std::vector<int>>& ratings);

std::string similarity_csv(const SimilarityReport& report);

}  // namespace styvar::similarity

#endif
