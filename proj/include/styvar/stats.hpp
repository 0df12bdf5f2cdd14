#ifndef STYVAR_STATS_HPP
#define STYVAR_STATS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace styvar::stats {

// Uniform envelope for every test in the battery. df2 is used by F-shaped
// results only; extras carries secondary effect sizes under documented keys.
struct TestResult {
  std::string method;
  double statistic = 0.0;
  double p_value = 1.0;
  double df = 0.0;
  double df2 = 0.0;
  std::optional<double> effect_size;
  std::string effect_label;
  std::vector<std::size_t> group_sizes;
  std::vector<std::pair<std::string, double>> extras;
};

enum class Center { mean, median };
enum class TTestMode { paired, welch, student };
enum class Adjust { none, bonferroni, benjamini_hochberg };

// Descriptive helpers shared across modules.
double mean(std::span<const double> v);
double median(std::span<const double> v);
double sample_variance(std::span<const double> v);  // ddof = 1
double sample_sd(std::span<const double> v);
std::vector<double> zscores(std::span<const double> v);  // sample sd
// Average ranks (1-based, ties get the mean rank) plus tie-group sizes > 1.
std::vector<double> ranks_with_ties(std::span<const double> v,
                                    std::vector<std::size_t>* tie_sizes);

TestResult levene(const std::vector<std::vector<double>>& groups,
                  Center center = Center::mean);

TestResult t_test(std::span<const double> a, std::span<const double> b,
                  TTestMode mode);

// min(T+, T-) statistic; exact sign-flip enumeration for <= 10 nonzero
// differences, tie-corrected normal approximation with continuity
// correction otherwise.
TestResult wilcoxon_signed_rank(std::span<const double> a,
                                std::span<const double> b);

// U of the first sample; exact distribution for small untied samples,
// tie-corrected normal approximation with continuity correction otherwise.
// effect_size is the rank-biserial r = 2U/(n_a n_b) - 1, positive when `a`
// tends larger.
TestResult mann_whitney_u(std::span<const double> a,
                          std::span<const double> b);

TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups);

struct PairwiseResult {
  std::size_t group_a = 0;
  std::size_t group_b = 0;
  double z = 0.0;
  double p_raw = 1.0;
  double p_adjusted = 1.0;
};
std::vector<PairwiseResult> dunn_posthoc(
    const std::vector<std::vector<double>>& groups,
    Adjust adjust = Adjust::benjamini_hochberg);

TestResult pearson_r(std::span<const double> x, std::span<const double> y);

std::vector<double> adjust_pvalues(std::span<const double> p, Adjust method);

struct Agreement {
  double ac1 = 0.0;
  double ci_low = -1.0;
  double ci_high = 1.0;
  double percent_agreement = 0.0;
  std::size_t items = 0;
  std::size_t raters = 0;
};
// ratings: items x raters, category codes in [0, categories).
Agreement gwet_ac1(const std::vector<std::vector<int>>& ratings,
                   int categories);

enum class Dist { normal, t, chi_square, f };
struct DistParams {
  double mu = 0.0;
  double sigma = 1.0;
  double df1 = 1.0;
  double df2 = 1.0;
};
double dist_cdf(Dist kind, const DistParams& params, double x);

// Magnitude label for |d|: 0.2 / 0.5 / 0.8 cut points.
std::string cohen_d_label(double d);

}  // namespace styvar::stats

#endif
