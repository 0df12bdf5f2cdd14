#ifndef STYVAR_TIMESERIES_HPP
#define STYVAR_TIMESERIES_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "styvar/complexity.hpp"
#include "styvar/corpus.hpp"

namespace styvar::timeseries {

// Consecutive calendar-month grid between the first and last observed
// month. Missing cells (below min_docs) hold NaN.
struct VarianceSeries {
  std::vector<corpus::Date> months;
  std::vector<std::size_t> doc_counts;
  std::vector<std::string> feature_names;
  std::vector<std::vector<double>> feature_variance;  // [feature][month]
  std::vector<double> composite;                      // [month]
};

struct DatedVector {
  complexity::ComplexityVector features;
  corpus::Date date;
};

// Sample variance per month of each z-scored feature (standardization fit
// on the pooled input); composite variance = mean of the per-feature
// variances available in that month.
VarianceSeries monthly_variance(const std::vector<DatedVector>& docs,
                                std::size_t min_docs = 2);

struct RateSeries {
  std::vector<corpus::Date> months;
  std::vector<double> rate;  // NaN when no scored documents that month
  std::vector<std::size_t> scored_counts;
};

// Fraction of documents per month whose detector score clears the
// threshold (score >= threshold counts as AI-attributed).
RateSeries monthly_ai_rate(const std::vector<corpus::Document>& docs,
                           double threshold);

struct CronbachResult {
  double alpha = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t rows = 0;
  std::size_t cols = 0;
};

// rows: observations (months) x items (features); CI by Feldt's F method.
CronbachResult cronbach_alpha(const std::vector<std::vector<double>>& rows);

struct AdfResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int used_lag = 0;
  std::size_t n_obs = 0;  // observations in the final regression
  std::string regression = "c";
};

// Augmented Dickey-Fuller with constant; lag chosen by AIC up to
// floor(12*(T/100)^(1/4)); p from the MacKinnon response surface.
AdfResult adf_test(std::span<const double> series);

std::vector<double> difference(std::span<const double> series, int order);

struct DgmTerm {
  std::string name;
  double estimate = 0.0;
  double se = 0.0;
  double t = 0.0;
  double p = 1.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct DgmResult {
  std::array<DgmTerm, 4> terms;  // Intercept, Time, ONSET, POST
  double rho = 0.0;
  std::size_t n_obs = 0;
  double df = 0.0;
};

// Discontinuous growth model on the composite variance series:
// Time = months since series start, ONSET = 1 from the onset month
// inclusive, POST = months elapsed since onset. AR(1) rho by profile
// likelihood on a grid with Prais-Winsten whitening; pass fixed_rho to pin
// it (0 reproduces OLS).
DgmResult fit_dgm(const VarianceSeries& series, corpus::Date onset,
                  std::optional<double> fixed_rho = {});

struct GrangerLag {
  int lag = 0;
  double f = 0.0;
  double p = 1.0;
  double df1 = 0.0;
  double df2 = 0.0;
  bool skipped = false;  // too few observations at this lag
};

struct GrangerResult {
  std::vector<GrangerLag> lags;
  int diff_order_x = 0;
  int diff_order_y = 0;
};

// Does x help predict y? Per lag L, restricted OLS of y on its own L lags
// versus adding L lags of x, both on the same trimmed sample.
GrangerResult granger_test(std::span<const double> x,
                           std::span<const double> y, int max_lag);

struct GrangerPipelineResult {
  GrangerResult result;
  AdfResult adf_x;  // on the differenced series actually used
  AdfResult adf_y;
  int order_x = 0;
  int order_y = 0;
};

// ADF -> difference-until-stationary -> granger_test, recording orders.
GrangerPipelineResult granger_pipeline(std::span<const double> x,
                                       std::span<const double> y, int max_lag,
                                       double alpha = 0.05, int max_diff = 2);

std::string variance_csv(const VarianceSeries& series);
std::string dgm_csv(const DgmResult& result);
std::string granger_csv(const GrangerResult& result);

}  // namespace styvar::timeseries

#endif
