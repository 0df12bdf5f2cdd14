#include "styvar/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "styvar/error.hpp"
#include "styvar/special.hpp"
#include "styvar/stats.hpp"

namespace styvar::timeseries {

using namespace special;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool missing(double v) { return std::isnan(v); }

// Least squares via Householder QR; small dense problems only.
struct Lstsq {
  std::vector<double> beta;
  double ssr = 0.0;
  std::vector<std::vector<double>> xtx_inv;  // only when requested
};

Lstsq lstsq(const std::vector<std::vector<double>>& x,
            const std::vector<double>& y, bool want_cov) {
  std::size_t n = x.size();
  if (n == 0) throw insufficient_error("least squares on empty sample");
  std::size_t k = x[0].size();
  if (n < k) throw insufficient_error("least squares with n < k");
  std::vector<std::vector<double>> a = x;
  std::vector<double> b = y;
  // scale-aware singularity tolerance
  double max_norm = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i][j] * a[i][j];
    max_norm = std::max(max_norm, std::sqrt(s));
  }
  double tol = 1e-10 * std::max(1.0, max_norm);
  for (std::size_t j = 0; j < k; ++j) {
    double sigma = 0.0;
    for (std::size_t i = j; i < n; ++i) sigma += a[i][j] * a[i][j];
    sigma = std::sqrt(sigma);
    if (sigma < tol)
      throw insufficient_error("singular design matrix (column " +
                               std::to_string(j) + ")");
    double alpha = a[j][j] > 0.0 ? -sigma : sigma;
    std::vector<double> v(n - j, 0.0);
    v[0] = a[j][j] - alpha;
    for (std::size_t i = j + 1; i < n; ++i) v[i - j] = a[i][j];
    double vnorm2 = 0.0;
    for (double vi : v) vnorm2 += vi * vi;
    if (vnorm2 > 0.0) {
      for (std::size_t c = j; c < k; ++c) {
        double dot = 0.0;
        for (std::size_t i = j; i < n; ++i) dot += v[i - j] * a[i][c];
        double f = 2.0 * dot / vnorm2;
        for (std::size_t i = j; i < n; ++i) a[i][c] -= f * v[i - j];
      }
      double dot = 0.0;
      for (std::size_t i = j; i < n; ++i) dot += v[i - j] * b[i];
      double f = 2.0 * dot / vnorm2;
      for (std::size_t i = j; i < n; ++i) b[i] -= f * v[i - j];
    }
  }
  // back substitution on the k x k upper triangle
  Lstsq out;
  out.beta.assign(k, 0.0);
  for (std::size_t jj = k; jj >= 1; --jj) {
    std::size_t j = jj - 1;
    double s = b[j];
    for (std::size_t c = j + 1; c < k; ++c) s -= a[j][c] * out.beta[c];
    out.beta[j] = s / a[j][j];
  }
  for (std::size_t i = 0; i < n; ++i) {
    double fit = 0.0;
    for (std::size_t j = 0; j < k; ++j) fit += x[i][j] * out.beta[j];
    double r = y[i] - fit;
    out.ssr += r * r;
  }
  if (want_cov) {
    // (X'X)^-1 = Rinv * Rinv' with R the upper triangle left in `a`
    std::vector<std::vector<double>> rinv(k, std::vector<double>(k, 0.0));
    for (std::size_t jj = k; jj >= 1; --jj) {
      std::size_t j = jj - 1;
      rinv[j][j] = 1.0 / a[j][j];
      for (std::size_t i = j; i >= 1; --i) {
        std::size_t r = i - 1;
        double s = 0.0;
        for (std::size_t c = r + 1; c <= j; ++c) s += a[r][c] * rinv[c][j];
        rinv[r][j] = -s / a[r][r];
      }
    }
    out.xtx_inv.assign(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        double s = 0.0;
        for (std::size_t c = std::max(i, j); c < k; ++c)
          s += rinv[i][c] * rinv[j][c];
        out.xtx_inv[i][j] = s;
      }
  }
  return out;
}

double col_variance(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

}  // namespace

VarianceSeries monthly_variance(const std::vector<DatedVector>& docs,
                                std::size_t min_docs) {
  if (min_docs < 2) throw input_error("min_docs must be at least 2");
  if (docs.empty()) throw input_error("no documents for variance series");
  std::vector<complexity::ComplexityVector> vecs;
  vecs.reserve(docs.size());
  for (const auto& d : docs) vecs.push_back(d.features);
  auto stats = complexity::fit_standardization(vecs);

  int first = docs[0].date.month_index(), last = first;
  for (const auto& d : docs) {
    first = std::min(first, d.date.month_index());
    last = std::max(last, d.date.month_index());
  }
  std::size_t n_months = static_cast<std::size_t>(last - first + 1);

  VarianceSeries out;
  out.feature_names = {"simpson", "shannon", "dep_length", "ttr",
                       "hapax_ratio"};
  out.months.resize(n_months);
  out.doc_counts.assign(n_months, 0);
  out.feature_variance.assign(5, std::vector<double>(n_months, kNaN));
  out.composite.assign(n_months, kNaN);
  for (std::size_t m = 0; m < n_months; ++m) {
    int idx = first + static_cast<int>(m);
    out.months[m] = corpus::Date{idx / 12, idx % 12 + 1, 1};
  }

  // z-scored feature values bucketed per month
  std::vector<std::array<std::vector<double>, 5>> buckets(n_months);
  const std::array<const complexity::FeatureMoment*, 5> moments = {
      &stats.simpson, &stats.shannon, &stats.dep_length, &stats.ttr,
      &stats.hapax_ratio};
  for (const auto& d : docs) {
    std::size_t m = static_cast<std::size_t>(d.date.month_index() - first);
    ++out.doc_counts[m];
    const auto& f = d.features;
    std::array<std::optional<double>, 5> raw = {
        f.simpson, f.shannon, f.dep_length, f.ttr, f.hapax_ratio};
    for (std::size_t j = 0; j < 5; ++j) {
      if (!raw[j] || moments[j]->constant) continue;
      buckets[m][j].push_back((*raw[j] - moments[j]->mean) / moments[j]->sd);
    }
  }

  bool any = false;
  for (std::size_t m = 0; m < n_months; ++m) {
    if (out.doc_counts[m] < min_docs) continue;
    double sum = 0.0;
    std::size_t used = 0;
    for (std::size_t j = 0; j < 5; ++j) {
      if (buckets[m][j].size() < min_docs) continue;
      double v = col_variance(buckets[m][j]);
      out.feature_variance[j][m] = v;
      sum += v;
      ++used;
    }
    if (used > 0) {
      out.composite[m] = sum / static_cast<double>(used);
      any = true;
    }
  }
  if (!any)
    throw insufficient_error(
        "every month falls below min_docs; no variance series");
  return out;
}

RateSeries monthly_ai_rate(const std::vector<corpus::Document>& docs,
                           double threshold) {
  int first = 0, last = 0;
  bool seen = false;
  for (const auto& d : docs) {
    if (!d.detector_score) continue;
    int idx = d.date.month_index();
    if (!seen) {
      first = last = idx;
      seen = true;
    } else {
      first = std::min(first, idx);
      last = std::max(last, idx);
    }
  }
  if (!seen) throw input_error("no documents carry detector scores");
  std::size_t n_months = static_cast<std::size_t>(last - first + 1);
  RateSeries out;
  out.months.resize(n_months);
  out.scored_counts.assign(n_months, 0);
  out.rate.assign(n_months, kNaN);
  std::vector<std::size_t> hits(n_months, 0);
  for (std::size_t m = 0; m < n_months; ++m) {
    int idx = first + static_cast<int>(m);
    out.months[m] = corpus::Date{idx / 12, idx % 12 + 1, 1};
  }
  for (const auto& d : docs) {
    if (!d.detector_score) continue;
    std::size_t m = static_cast<std::size_t>(d.date.month_index() - first);
    ++out.scored_counts[m];
    if (*d.detector_score >= threshold) ++hits[m];
  }
  for (std::size_t m = 0; m < n_months; ++m) {
    if (out.scored_counts[m] == 0) continue;
    out.rate[m] = static_cast<double>(hits[m]) /
                  static_cast<double>(out.scored_counts[m]);
  }
  return out;
}

CronbachResult cronbach_alpha(const std::vector<std::vector<double>>& rows) {
  std::size_t n = rows.size();
  if (n < 3) throw insufficient_error("cronbach alpha needs >= 3 rows");
  std::size_t k = rows[0].size();
  if (k < 2) throw insufficient_error("cronbach alpha needs >= 2 items");
  for (const auto& r : rows) {
    if (r.size() != k) throw input_error("ragged item matrix");
    for (double v : r)
      if (std::isnan(v)) throw input_error("missing cell in item matrix");
  }
  double item_var_sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = rows[i][j];
    item_var_sum += col_variance(col);
  }
  std::vector<double> totals(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) totals[i] += rows[i][j];
  double total_var = col_variance(totals);
  if (total_var <= 0.0)
    throw insufficient_error("zero total variance in item matrix");
  double kd = static_cast<double>(k);
  CronbachResult out;
  out.alpha = kd / (kd - 1.0) * (1.0 - item_var_sum / total_var);
  out.rows = n;
  out.cols = k;
  // Feldt's F interval for coefficient alpha
  double df1 = static_cast<double>(n - 1);
  double df2 = static_cast<double>((n - 1) * (k - 1));
  double f_hi = f_quantile(0.975, df1, df2);
  double f_lo = f_quantile(0.025, df1, df2);
  out.ci_low = 1.0 - (1.0 - out.alpha) * f_hi;
  out.ci_high = 1.0 - (1.0 - out.alpha) * f_lo;
  return out;
}

std::vector<double> difference(std::span<const double> series, int order) {
  if (order < 1) throw input_error("difference order must be >= 1");
  if (series.size() <= static_cast<std::size_t>(order))
    throw insufficient_error("series too short to difference");
  std::vector<double> cur(series.begin(), series.end());
  for (int o = 0; o < order; ++o) {
    std::vector<double> next(cur.size() - 1);
    for (std::size_t i = 0; i + 1 < cur.size(); ++i)
      next[i] = cur[i + 1] - cur[i];
    cur.swap(next);
  }
  return cur;
}

namespace {

// MacKinnon (1994) response-surface constants for the constant-only Dickey-
// Fuller distribution (one unit root): validity bounds, branch point, and
// the small-/large-tau polynomials mapping tau to a normal quantile.
constexpr double kTauMaxC = 2.74;
constexpr double kTauMinC = -18.83;
constexpr double kTauStarC = -1.61;
constexpr double kTauSmallC[3] = {2.1659, 1.4412, 0.038269};
constexpr double kTauLargeC[4] = {1.7339, 0.93202, -0.12745, -0.010368};

double mackinnon_p(double tau) {
  if (tau > kTauMaxC) return 1.0;
  if (tau < kTauMinC) return 0.0;
  double q;
  if (tau <= kTauStarC) {
    q = kTauSmallC[0] + tau * (kTauSmallC[1] + tau * kTauSmallC[2]);
  } else {
    q = kTauLargeC[0] +
        tau * (kTauLargeC[1] + tau * (kTauLargeC[2] + tau * kTauLargeC[3]));
  }
  return normal_cdf(q);
}

// Regression rows for the ADF equation with `lag` difference lags, using
// observations r = start .. T-2 of the differenced series.
void build_adf_rows(std::span<const double> y, int lag, int start,
                    std::vector<std::vector<double>>* x,
                    std::vector<double>* dep) {
  int t_max = static_cast<int>(y.size()) - 1;
  x->clear();
  dep->clear();
  for (int r = start; r < t_max; ++r) {
    std::vector<double> row;
    row.reserve(static_cast<std::size_t>(lag) + 2);
    row.push_back(y[static_cast<std::size_t>(r)]);  // lagged level
    for (int j = 1; j <= lag; ++j)
      row.push_back(y[static_cast<std::size_t>(r - j + 1)] -
                    y[static_cast<std::size_t>(r - j)]);
    row.push_back(1.0);  // constant last, matching the reported layout
    x->push_back(std::move(row));
    dep->push_back(y[static_cast<std::size_t>(r + 1)] -
                   y[static_cast<std::size_t>(r)]);
  }
}

}  // namespace

AdfResult adf_test(std::span<const double> series) {
  std::size_t t_len = series.size();
  if (t_len < 12) throw insufficient_error("adf: series too short");
  double lo = series[0], hi = series[0];
  for (double v : series) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi <= lo) throw insufficient_error("adf: constant series");
  double td = static_cast<double>(t_len);
  int maxlag =
      static_cast<int>(std::floor(12.0 * std::pow(td / 100.0, 0.25)));
  maxlag = std::min(maxlag, static_cast<int>(t_len) / 2 - 2);
  if (maxlag < 0) throw insufficient_error("adf: series too short");
  if (static_cast<int>(t_len) - 1 - maxlag < 10)
    throw insufficient_error("adf: fewer than 10 observations after lag "
                             "trimming");

  // lag order by AIC, every candidate fit on the same maxlag-trimmed sample
  std::vector<std::vector<double>> x;
  std::vector<double> dep;
  int best_lag = 0;
  double best_aic = std::numeric_limits<double>::infinity();
  for (int lag = 0; lag <= maxlag; ++lag) {
    build_adf_rows(series, lag, maxlag, &x, &dep);
    Lstsq fit = lstsq(x, dep, false);
    double n = static_cast<double>(dep.size());
    double k_params = static_cast<double>(lag) + 2.0;
    double aic = n * std::log(fit.ssr / n) + 2.0 * k_params;
    if (aic < best_aic) {
      best_aic = aic;
      best_lag = lag;
    }
  }

  // refit at the chosen lag on the longest available sample
  build_adf_rows(series, best_lag, best_lag, &x, &dep);
  Lstsq fit = lstsq(x, dep, true);
  double n = static_cast<double>(dep.size());
  double k_params = static_cast<double>(best_lag) + 2.0;
  double dof = n - k_params;
  if (dof <= 0.0) throw insufficient_error("adf: no residual degrees of freedom");
  double sigma2 = fit.ssr / dof;
  double se = std::sqrt(sigma2 * fit.xtx_inv[0][0]);
  AdfResult out;
  out.statistic = fit.beta[0] / se;
  out.p_value = mackinnon_p(out.statistic);
  out.used_lag = best_lag;
  out.n_obs = dep.size();
  return out;
}

namespace {

std::vector<std::vector<double>> dgm_design(const std::vector<int>& month_idx,
                                            int start_idx, int onset_idx) {
  std::vector<std::vector<double>> x;
  x.reserve(month_idx.size());
  for (int idx : month_idx) {
    double time = static_cast<double>(idx - start_idx);
    double onset = idx >= onset_idx ? 1.0 : 0.0;
    double post = idx >= onset_idx ? static_cast<double>(idx - onset_idx) : 0.0;
    x.push_back({1.0, time, onset, post});
  }
  return x;
}

struct GlsFit {
  Lstsq ls;
  double rho = 0.0;
};

// Prais-Winsten transform then OLS; first row scaled by sqrt(1-rho^2).
Lstsq prais_winsten(const std::vector<std::vector<double>>& x,
                    const std::vector<double>& y, double rho, bool want_cov) {
  std::size_t n = x.size();
  std::size_t k = x[0].size();
  std::vector<std::vector<double>> xs(n, std::vector<double>(k, 0.0));
  std::vector<double> ys(n, 0.0);
  double w = std::sqrt(1.0 - rho * rho);
  for (std::size_t j = 0; j < k; ++j) xs[0][j] = w * x[0][j];
  ys[0] = w * y[0];
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j)
      xs[i][j] = x[i][j] - rho * x[i - 1][j];
    ys[i] = y[i] - rho * y[i - 1];
  }
  return lstsq(xs, ys, want_cov);
}

GlsFit fit_ar1_gls(const std::vector<std::vector<double>>& x,
                   const std::vector<double>& y,
                   std::optional<double> fixed_rho) {
  GlsFit out;
  if (fixed_rho) {
    if (std::fabs(*fixed_rho) >= 1.0)
      throw input_error("ar(1) rho must lie in (-1, 1)");
    out.rho = *fixed_rho;
    out.ls = prais_winsten(x, y, out.rho, true);
    return out;
  }
  double n = static_cast<double>(y.size());
  double best_ll = -std::numeric_limits<double>::infinity();
  double best_rho = 0.0;
  for (int g = -99; g <= 99; ++g) {
    double rho = static_cast<double>(g) / 100.0;
    Lstsq fit = prais_winsten(x, y, rho, false);
    double ll = 0.5 * std::log(1.0 - rho * rho) -
                0.5 * n * std::log(fit.ssr / n);
    if (ll > best_ll) {
      best_ll = ll;
      best_rho = rho;
    }
  }
  out.rho = best_rho;
  out.ls = prais_winsten(x, y, best_rho, true);
  return out;
}

}  // namespace

DgmResult fit_dgm(const VarianceSeries& series, corpus::Date onset,
                  std::optional<double> fixed_rho) {
  if (series.months.empty()) throw input_error("empty variance series");
  int start_idx = series.months.front().month_index();
  int onset_idx = onset.month_index();
  std::vector<int> month_idx;
  std::vector<double> y;
  std::size_t pre = 0, post = 0;
  for (std::size_t m = 0; m < series.months.size(); ++m) {
    if (missing(series.composite[m])) continue;
    int idx = series.months[m].month_index();
    month_idx.push_back(idx);
    y.push_back(series.composite[m]);
    if (idx >= onset_idx)
      ++post;
    else
      ++pre;
  }
  if (y.size() < 8)
    throw insufficient_error("dgm needs at least 8 observed months");
  if (pre == 0 || post == 0)
    throw insufficient_error("dgm needs months on both sides of onset");

  auto x = dgm_design(month_idx, start_idx, onset_idx);
  GlsFit fit = fit_ar1_gls(x, y, fixed_rho);
  double n = static_cast<double>(y.size());
  double dof = n - 4.0;
  if (dof <= 0.0) throw insufficient_error("dgm: no residual df");
  double sigma2 = fit.ls.ssr / dof;
  double t_crit = t_quantile(0.975, dof);

  DgmResult out;
  out.rho = fit.rho;
  out.n_obs = y.size();
  out.df = dof;
  static const char* names[4] = {"Intercept", "Time", "ONSET", "POST"};
  for (std::size_t j = 0; j < 4; ++j) {
    DgmTerm& term = out.terms[j];
    term.name = names[j];
    term.estimate = fit.ls.beta[j];
    term.se = std::sqrt(sigma2 * fit.ls.xtx_inv[j][j]);
    term.t = term.estimate / term.se;
    term.p = 2.0 * t_sf(std::fabs(term.t), dof);
    term.ci_low = term.estimate - t_crit * term.se;
    term.ci_high = term.estimate + t_crit * term.se;
  }
  return out;
}

GrangerResult granger_test(std::span<const double> x,
                           std::span<const double> y, int max_lag) {
  if (x.size() != y.size())
    throw input_error("granger needs equal-length series");
  if (max_lag < 1 || max_lag > 20)
    throw input_error("granger max_lag must be in [1, 20]");
  std::size_t t_len = y.size();
  GrangerResult out;
  for (int lag = 1; lag <= max_lag; ++lag) {
    GrangerLag gl;
    gl.lag = lag;
    gl.df1 = static_cast<double>(lag);
    std::size_t l = static_cast<std::size_t>(lag);
    if (t_len <= l) {
      gl.skipped = true;
      out.lags.push_back(gl);
      continue;
    }
    std::size_t rows = t_len - l;
    double df2 = static_cast<double>(rows) - 2.0 * lag - 1.0;
    gl.df2 = df2;
    if (df2 <= 0.0) {
      gl.skipped = true;
      out.lags.push_back(gl);
      continue;
    }
    std::vector<std::vector<double>> xr(rows), xu(rows);
    std::vector<double> dep(rows);
    for (std::size_t t = l; t < t_len; ++t) {
      std::size_t r = t - l;
      dep[r] = y[t];
      xr[r].reserve(l + 1);
      xu[r].reserve(2 * l + 1);
      xr[r].push_back(1.0);
      for (std::size_t j = 1; j <= l; ++j) xr[r].push_back(y[t - j]);
      xu[r] = xr[r];
      for (std::size_t j = 1; j <= l; ++j) xu[r].push_back(x[t - j]);
    }
    Lstsq restricted = lstsq(xr, dep, false);
    Lstsq unrestricted = lstsq(xu, dep, false);
    double num = (restricted.ssr - unrestricted.ssr) / static_cast<double>(lag);
    double den = unrestricted.ssr / df2;
    if (den <= 0.0)
      throw insufficient_error("granger: perfect fit at lag " +
                               std::to_string(lag));
    gl.f = num / den;
    if (gl.f < 0.0) gl.f = 0.0;  // guard tiny negative from rounding
    gl.p = f_sf(gl.f, gl.df1, gl.df2);
    out.lags.push_back(gl);
  }
  return out;
}

GrangerPipelineResult granger_pipeline(std::span<const double> x,
                                       std::span<const double> y, int max_lag,
                                       double alpha, int max_diff) {
  if (x.size() != y.size())
    throw input_error("granger needs equal-length series");
  GrangerPipelineResult out;
  std::vector<double> dx(x.begin(), x.end());
  std::vector<double> dy(y.begin(), y.end());
  out.adf_x = adf_test(dx);
  while (out.adf_x.p_value >= alpha && out.order_x < max_diff) {
    dx = difference(dx, 1);
    ++out.order_x;
    out.adf_x = adf_test(dx);
  }
  out.adf_y = adf_test(dy);
  while (out.adf_y.p_value >= alpha && out.order_y < max_diff) {
    dy = difference(dy, 1);
    ++out.order_y;
    out.adf_y = adf_test(dy);
  }
  // align on the common tail so time indices still correspond
  std::size_t len = std::min(dx.size(), dy.size());
  std::vector<double> ax(dx.end() - static_cast<std::ptrdiff_t>(len), dx.end());
  std::vector<double> ay(dy.end() - static_cast<std::ptrdiff_t>(len), dy.end());
  out.result = granger_test(ax, ay, max_lag);
  out.result.diff_order_x = out.order_x;
  out.result.diff_order_y = out.order_y;
  return out;
}

namespace {

void append_num(std::string& out, double v, const char* fmt = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  out += buf;
}

}  // namespace

std::string variance_csv(const VarianceSeries& series) {
  std::string out = "month";
  for (const auto& f : series.feature_names) out += "," + f;
  out += ",composite,n\n";
  for (std::size_t m = 0; m < series.months.size(); ++m) {
    out += series.months[m].month_key();
    for (std::size_t j = 0; j < series.feature_names.size(); ++j) {
      out += ",";
      if (!missing(series.feature_variance[j][m]))
        append_num(out, series.feature_variance[j][m]);
    }
    out += ",";
    if (!missing(series.composite[m])) append_num(out, series.composite[m]);
    out += "," + std::to_string(series.doc_counts[m]) + "\n";
  }
  return out;
}

std::string dgm_csv(const DgmResult& result) {
  std::string out = "term,estimate,se,t,p,ci_low,ci_high\n";
  for (const auto& term : result.terms) {
    out += term.name;
    for (double v : {term.estimate, term.se, term.t, term.p, term.ci_low,
                     term.ci_high}) {
      out += ",";
      append_num(out, v);
    }
    out += "\n";
  }
  return out;
}

std::string granger_csv(const GrangerResult& result) {
  std::string out = "lag,F,df1,df2,p\n";
  for (const auto& gl : result.lags) {
    out += std::to_string(gl.lag) + ",";
    if (!gl.skipped) append_num(out, gl.f);
    out += ",";
    append_num(out, gl.df1);
    out += ",";
    append_num(out, gl.df2);
    out += ",";
    if (!gl.skipped) append_num(out, gl.p);
    out += "\n";
  }
  return out;
}

}  // namespace styvar::timeseries
