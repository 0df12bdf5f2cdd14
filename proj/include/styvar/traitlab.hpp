#ifndef STYVAR_TRAITLAB_HPP
#define STYVAR_TRAITLAB_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "styvar/corpus.hpp"
#include "styvar/linear_model.hpp"
#include "styvar/stats.hpp"

namespace styvar::traitlab {

// z-score, then 1 iff above the median z (ties fall to 0).
std::vector<int> median_split(std::span<const double> values);

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

// Stratified: per-class indices are shuffled by the seed and dealt
// round-robin into k buckets; fold i uses bucket i as test and bucket
// (i+1) mod k as validation. Every index is tested exactly once.
std::vector<Fold> kfold_split(const std::vector<int>& labels, std::size_t k,
                              std::uint64_t seed);

// Unweighted mean of per-class F1 over classes present in labels or
// predictions; a class with zero precision and recall contributes 0.
double f1_macro(std::span<const int> predictions, std::span<const int> labels);

// Prediction imbalance: |P_max - P_min| / (P_max + P_min) over per-class
// prediction counts. n_classes = 0 infers the class set as {0..max seen},
// at least binary.
double delta_imbalance(std::span<const int> predictions,
                       std::size_t n_classes = 0);

struct ShiftTable {
  std::size_t considered = 0;  // correctly predicted on originals
  std::size_t changed = 0;     // of those, prediction changed on rewrite
  std::size_t to_one = 0;      // binary 0 -> 1 changes
  std::size_t to_zero = 0;     // binary 1 -> 0 changes
};

ShiftTable prediction_shift(std::span<const int> orig_preds,
                            std::span<const int> rewrite_preds,
                            std::span<const int> labels);

// Class codes for a trait: numeric values go through the median split
// (class names "low"/"high"), categorical values are coded in sorted order.
struct TraitLabels {
  std::vector<int> codes;                 // per document, input order
  std::vector<std::string> class_names;   // code -> name
  std::size_t n_classes = 0;
};

TraitLabels extract_trait_labels(const std::vector<corpus::Document>& docs,
                                 const std::string& trait);

enum class BaselineKind { empirical, uniform };

// Mean macro-F1 of `trials` seeded prediction draws. Empirical draws
// resample the observed label distribution; uniform draws each class
// equally often in expectation.
double random_baseline(std::span<const int> labels, std::uint64_t seed,
                       std::size_t trials,
                       BaselineKind kind = BaselineKind::empirical);

struct ExperimentConfig {
  std::string trait;
  linear_model::Kind classifier = linear_model::Kind::logistic;
  std::size_t k = 5;
  std::size_t n_seeds = 40;
  std::uint64_t root_seed = 1;
  std::vector<double> reg_grid = {0.01, 0.1, 1.0};
  std::size_t baseline_trials = 200;
  std::size_t min_successful = 20;
};

struct ExperimentRun {
  std::uint64_t seed = 0;
  std::size_t fold = 0;
  double f1_orig = 0.0;
  double f1_rewrite = 0.0;
  double delta_orig = 0.0;
  double delta_rewrite = 0.0;
  double baseline = 0.0;          // empirical-distribution draws
  double baseline_uniform = 0.0;  // uniform class draws, reported alongside
  bool success = false;
  double chosen_reg = 0.0;
  ShiftTable shift;
  std::vector<int> preds_orig;
  std::vector<int> preds_rewrite;
  std::vector<std::string> test_ids;
};

struct ExperimentReport {
  std::string trait;
  std::string classifier;
  std::size_t n_classes = 0;
  std::vector<ExperimentRun> runs;
  std::size_t successful = 0;
  bool aggregate_valid = false;  // successful >= min_successful
  // Aggregates below cover successful runs only.
  double mean_f1_orig = 0.0;
  double mean_f1_rewrite = 0.0;
  double mean_drop = 0.0;
  double drop_se = 0.0;
  double drop_ci_low = 0.0;
  double drop_ci_high = 0.0;
  double baseline_empirical = 0.0;
  double baseline_uniform = 0.0;
  std::size_t shift_to_one = 0;
  std::size_t shift_to_zero = 0;
  std::optional<stats::TestResult> paired_t;       // f1_orig vs f1_rewrite
  std::optional<stats::TestResult> wilcoxon_delta; // delta_orig vs delta_rewrite
  std::optional<stats::TestResult> shift_t;        // to_one vs to_zero per run
  std::string degenerate_note;  // set when a test was skipped (zero variance)
};

// Per seed x fold: fit TF-IDF and the classifier on original training
// texts, pick regularization on the validation fold, then score the test
// originals and their rewrites. Labels come from doc.labels[trait]
// (numeric -> median split, categorical -> coded classes; multi-class runs
// one-vs-rest).
ExperimentReport run_experiment(const std::vector<corpus::Document>& originals,
                                const std::vector<corpus::Document>& rewrites,
                                const ExperimentConfig& config);

// Precomputed predictions for classifiers trained elsewhere:
// CSV columns doc_id, run_id, label (integer class codes).
std::map<std::string, std::map<std::string, int>> load_predictions_csv(
    const std::string& path);

// Same aggregation protocol as run_experiment, on ingested predictions.
ExperimentReport score_external(
    const std::map<std::string, std::map<std::string, int>>& orig_preds,
    const std::map<std::string, std::map<std::string, int>>& rewrite_preds,
    const std::map<std::string, int>& labels_by_doc,
    const ExperimentConfig& config);

std::string runs_csv(const ExperimentReport& report);

}  // namespace styvar::traitlab

#endif
