#ifndef STYVAR_COMPLEXITY_HPP
#define STYVAR_COMPLEXITY_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "styvar/corpus.hpp"

namespace styvar::complexity {

// The five per-document features. dep_length is absent when no parse with a
// non-root arc exists for the document.
struct ComplexityVector {
  double simpson = 0.0;
  double shannon = 0.0;
  std::optional<double> dep_length;
  double ttr = 0.0;
  double hapax_ratio = 0.0;
  std::size_t hapax_count = 0;
  std::string source_id;
};

// Repetition probability for two draws without replacement:
// sum n_i(n_i-1) / (N(N-1)). `biased` switches to the plug-in sum p_i^2.
double simpson_index(const corpus::TokenStream& ts, bool biased = false);

// Base-2 entropy of the type distribution, in bits.
double shannon_entropy(const corpus::TokenStream& ts);

// Mean |head - dependent| over non-root arcs; absent when no such arc.
std::optional<double> avg_dependency_length(
    const std::vector<corpus::SentenceParse>& parses);

double type_token_ratio(const corpus::TokenStream& ts);

// Fraction of tokens that are once-occurring types; raw type count via out
// parameter.
double hapax_ratio(const corpus::TokenStream& ts,
                   std::size_t* raw_count = nullptr);

ComplexityVector compute_features(
    const corpus::TokenStream& ts,
    const std::vector<corpus::SentenceParse>* parses);

struct FeatureMoment {
  double mean = 0.0;
  double sd = 0.0;
  bool constant = true;  // sd == 0 or fewer than 2 values present
};

struct StandardizationStats {
  FeatureMoment simpson;
  FeatureMoment shannon;
  FeatureMoment dep_length;
  FeatureMoment ttr;
  FeatureMoment hapax_ratio;
};

// ddof=1 moments over present values; features with zero spread are flagged
// constant and skipped by composite_score.
StandardizationStats fit_standardization(
    const std::vector<ComplexityVector>& vectors);

// Mean of z-scored available features. Absent dep_length and constant
// features are skipped; errors when nothing is left.
double composite_score(const ComplexityVector& v,
                       const StandardizationStats& stats);

// Feature table: id, simpson, shannon, dep_length, ttr, hapax_ratio,
// hapax_count, composite. dep_length empty when absent.
std::string feature_csv(const std::vector<ComplexityVector>& vectors,
                        const StandardizationStats& stats);

}  // namespace styvar::complexity

#endif
