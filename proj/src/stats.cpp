#include "styvar/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "styvar/error.hpp"
#include "styvar/special.hpp"

namespace styvar::stats {

using namespace special;

double mean(std::span<const double> v) {
  if (v.empty()) throw input_error("mean of empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double median(std::span<const double> v) {
  if (v.empty()) throw input_error("median of empty sample");
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  std::size_t n = s.size();
  if (n % 2 == 1) return s[n / 2];
  return 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

double sample_variance(std::span<const double> v) {
  if (v.size() < 2) throw input_error("variance needs at least 2 values");
  double m = mean(v);
  double ss = 0.0;
  for (double x : v) {
    double d = x - m;
    ss += d * d;
  }
  return ss / static_cast<double>(v.size() - 1);
}

double sample_sd(std::span<const double> v) {
  return std::sqrt(sample_variance(v));
}

std::vector<double> zscores(std::span<const double> v) {
  double m = mean(v);
  double sd = sample_sd(v);
  if (sd <= 0.0)
    throw insufficient_error("cannot z-score a constant sample");
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - m) / sd;
  return out;
}

std::vector<double> ranks_with_ties(std::span<const double> v,
                                    std::vector<std::size_t>* tie_sizes) {
  std::size_t n = v.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = avg;
    if (tie_sizes && j > i) tie_sizes->push_back(j - i + 1);
    i = j + 1;
  }
  return ranks;
}

std::string cohen_d_label(double d) {
  double a = std::fabs(d);
  if (a < 0.2) return "negligible";
  if (a < 0.5) return "small";
  if (a < 0.8) return "medium";
  return "large";
}

TestResult levene(const std::vector<std::vector<double>>& groups,
                  Center center) {
  std::size_t k = groups.size();
  if (k < 2) throw input_error("levene needs at least 2 groups");
  std::size_t total = 0;
  for (const auto& g : groups) {
    if (g.size() < 2)
      throw insufficient_error("levene group with fewer than 2 values");
    total += g.size();
  }
  // Deviations from the group center, then a one-way anova on those.
  std::vector<std::vector<double>> z(k);
  for (std::size_t i = 0; i < k; ++i) {
    double c = center == Center::mean ? mean(groups[i]) : median(groups[i]);
    z[i].reserve(groups[i].size());
    for (double x : groups[i]) z[i].push_back(std::fabs(x - c));
  }
  double grand = 0.0;
  for (const auto& g : z)
    for (double x : g) grand += x;
  grand /= static_cast<double>(total);
  double between = 0.0, within = 0.0;
  for (const auto& g : z) {
    double zm = mean(g);
    between += static_cast<double>(g.size()) * (zm - grand) * (zm - grand);
    for (double x : g) within += (x - zm) * (x - zm);
  }
  double df1 = static_cast<double>(k - 1);
  double df2 = static_cast<double>(total - k);
  TestResult r;
  r.method = center == Center::mean ? "levene_mean" : "levene_median";
  r.df = df1;
  r.df2 = df2;
  for (const auto& g : groups) r.group_sizes.push_back(g.size());
  if (within <= 0.0) {
    // All deviations identical within groups: no evidence either way if the
    // between part also vanishes, otherwise infinitely strong evidence.
    if (between <= 0.0) {
      r.statistic = 0.0;
      r.p_value = 1.0;
    } else {
      r.statistic = std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
    }
    return r;
  }
  r.statistic = (df2 / df1) * (between / within);
  r.p_value = f_sf(r.statistic, df1, df2);
  return r;
}

TestResult t_test(std::span<const double> a, std::span<const double> b,
                  TTestMode mode) {
  TestResult r;
  if (mode == TTestMode::paired) {
    if (a.size() != b.size())
      throw input_error("paired t-test needs equal-length samples");
    if (a.size() < 2) throw insufficient_error("paired t-test needs n >= 2");
    std::size_t n = a.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
    double md = mean(d);
    double sd = sample_sd(d);
    if (sd <= 0.0)
      throw insufficient_error("paired t-test with zero-variance differences");
    r.method = "t_paired";
    r.statistic = md / (sd / std::sqrt(static_cast<double>(n)));
    r.df = static_cast<double>(n - 1);
    r.p_value = 2.0 * t_sf(std::fabs(r.statistic), r.df);
    r.effect_size = md / sd;
    r.effect_label = "cohen_d";
    r.group_sizes = {n, n};
    return r;
  }
  if (a.size() < 2 || b.size() < 2)
    throw insufficient_error("two-sample t-test needs n >= 2 per group");
  double n1 = static_cast<double>(a.size());
  double n2 = static_cast<double>(b.size());
  double m1 = mean(a), m2 = mean(b);
  double v1 = sample_variance(a), v2 = sample_variance(b);
  double pooled = ((n1 - 1.0) * v1 + (n2 - 1.0) * v2) / (n1 + n2 - 2.0);
  if (mode == TTestMode::student) {
    if (pooled <= 0.0)
      throw insufficient_error("t-test with zero pooled variance");
    r.method = "t_student";
    r.statistic =
        (m1 - m2) / std::sqrt(pooled * (1.0 / n1 + 1.0 / n2));
    r.df = n1 + n2 - 2.0;
  } else {
    double se2 = v1 / n1 + v2 / n2;
    if (se2 <= 0.0)
      throw insufficient_error("t-test with zero variance in both groups");
    r.method = "t_welch";
    r.statistic = (m1 - m2) / std::sqrt(se2);
    r.df = se2 * se2 /
           (v1 * v1 / (n1 * n1 * (n1 - 1.0)) + v2 * v2 / (n2 * n2 * (n2 - 1.0)));
  }
  r.p_value = 2.0 * t_sf(std::fabs(r.statistic), r.df);
  if (pooled > 0.0) {
    r.effect_size = (m1 - m2) / std::sqrt(pooled);
    r.effect_label = "cohen_d";
  }
  r.group_sizes = {a.size(), b.size()};
  return r;
}

namespace {

// Distribution of the positive rank sum under random sign flips, with the
// observed (possibly tied) ranks. Values are doubled internally so half
// ranks stay integral.
double exact_signed_rank_p(const std::vector<double>& ranks, double w_obs) {
  std::size_t n = ranks.size();
  std::int64_t total2 = 0;
  std::vector<std::int64_t> r2(n);
  for (std::size_t i = 0; i < n; ++i) {
    r2[i] = static_cast<std::int64_t>(std::llround(2.0 * ranks[i]));
    total2 += r2[i];
  }
  std::vector<double> count(static_cast<std::size_t>(total2) + 1, 0.0);
  count[0] = 1.0;
  std::int64_t reach = 0;
  for (std::size_t i = 0; i < n; ++i) {
    reach += r2[i];
    for (std::int64_t s = reach; s >= r2[i]; --s)
      count[static_cast<std::size_t>(s)] +=
          count[static_cast<std::size_t>(s - r2[i])];
  }
  double denom = std::ldexp(1.0, static_cast<int>(n));
  std::int64_t w2 = static_cast<std::int64_t>(std::llround(2.0 * w_obs));
  double lo = 0.0, hi = 0.0;
  for (std::int64_t s = 0; s <= total2; ++s) {
    double c = count[static_cast<std::size_t>(s)];
    if (s <= w2) lo += c;
    if (s >= total2 - w2) hi += c;
  }
  return std::min(1.0, (lo + hi) / denom);
}

}  // namespace

TestResult wilcoxon_signed_rank(std::span<const double> a,
                                std::span<const double> b) {
  if (a.size() != b.size())
    throw input_error("wilcoxon needs equal-length samples");
  std::vector<double> d;
  d.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    double di = a[i] - b[i];
    if (di != 0.0) d.push_back(di);  // discard exact zeros
  }
  std::size_t n = d.size();
  if (n == 0)
    throw insufficient_error("wilcoxon with all-zero differences");
  std::vector<double> absd(n);
  for (std::size_t i = 0; i < n; ++i) absd[i] = std::fabs(d[i]);
  std::vector<std::size_t> ties;
  std::vector<double> ranks = ranks_with_ties(absd, &ties);
  double r_plus = 0.0, r_minus = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] > 0.0)
      r_plus += ranks[i];
    else
      r_minus += ranks[i];
  }
  double w = std::min(r_plus, r_minus);
  TestResult r;
  r.method = "wilcoxon_signed_rank";
  r.statistic = w;
  r.df = static_cast<double>(n);
  r.group_sizes = {a.size(), b.size()};
  r.extras.emplace_back("rank_sum_positive", r_plus);
  r.extras.emplace_back("rank_sum_negative", r_minus);
  if (n <= 10) {
    r.p_value = exact_signed_rank_p(ranks, w);
    r.extras.emplace_back("exact", 1.0);
    return r;
  }
  double nn = static_cast<double>(n);
  double mn = nn * (nn + 1.0) / 4.0;
  double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
  for (std::size_t t : ties) {
    double td = static_cast<double>(t);
    var -= (td * td * td - td) / 48.0;
  }
  if (var <= 0.0)
    throw insufficient_error("wilcoxon variance degenerate under ties");
  double cc = 0.5 * ((w > mn) - (w < mn));  // continuity correction
  double z = (w - mn - cc) / std::sqrt(var);
  r.p_value = std::min(1.0, 2.0 * normal_sf(std::fabs(z)));
  r.extras.emplace_back("z", z);
  r.extras.emplace_back("exact", 0.0);
  return r;
}

namespace {

// Null distribution of U for untied sample sizes (m, n): grow the merged
// ordering one element at a time. Placing a sample-1 element after j
// sample-2 elements adds j to U. Small-sample path only, so the cubic cost
// is irrelevant.
std::vector<double> exact_u_counts(std::size_t m, std::size_t n) {
  std::size_t umax = m * n;
  std::vector<std::vector<double>> g(m + 1, std::vector<double>(umax + 1, 0.0));
  g[0][0] = 1.0;
  for (std::size_t step = 1; step <= m + n; ++step) {
    std::vector<std::vector<double>> h(m + 1,
                                       std::vector<double>(umax + 1, 0.0));
    for (std::size_t i = 0; i <= std::min(step - 1, m); ++i) {
      std::size_t j = step - 1 - i;
      if (j > n) continue;
      for (std::size_t u = 0; u <= umax; ++u) {
        double cnt = g[i][u];
        if (cnt == 0.0) continue;
        if (i + 1 <= m && u + j <= umax) h[i + 1][u + j] += cnt;
        if (j + 1 <= n) h[i][u] += cnt;
      }
    }
    g.swap(h);
  }
  return g[m];
}

}  // namespace

TestResult mann_whitney_u(std::span<const double> a,
                          std::span<const double> b) {
  if (a.empty() || b.empty())
    throw input_error("mann-whitney needs non-empty samples");
  std::size_t n1 = a.size(), n2 = b.size();
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::vector<std::size_t> ties;
  std::vector<double> ranks = ranks_with_ties(pooled, &ties);
  double r1 = 0.0;
  for (std::size_t i = 0; i < n1; ++i) r1 += ranks[i];
  double u1 = r1 - static_cast<double>(n1) * (static_cast<double>(n1) + 1.0) / 2.0;
  double u2 = static_cast<double>(n1) * static_cast<double>(n2) - u1;
  TestResult r;
  r.method = "mann_whitney_u";
  r.statistic = u1;  // U of the first sample
  r.group_sizes = {n1, n2};
  double nn1 = static_cast<double>(n1), nn2 = static_cast<double>(n2);
  r.effect_size = 2.0 * u1 / (nn1 * nn2) - 1.0;
  r.effect_label = "rank_biserial_r";
  if (ties.empty() && n1 <= 10 && n2 <= 10) {
    std::vector<double> counts = exact_u_counts(n1, n2);
    double denom = 0.0;
    for (double c : counts) denom += c;
    double lo = std::min(u1, u2);
    double tail = 0.0;
    for (std::size_t u = 0; u < counts.size(); ++u)
      if (static_cast<double>(u) <= lo + 1e-9) tail += counts[u];
    r.p_value = std::min(1.0, 2.0 * tail / denom);
    r.extras.emplace_back("exact", 1.0);
    return r;
  }
  double nt = nn1 + nn2;
  double tie_term = 0.0;
  for (std::size_t t : ties) {
    double td = static_cast<double>(t);
    tie_term += td * td * td - td;
  }
  double var = nn1 * nn2 / 12.0 * ((nt + 1.0) - tie_term / (nt * (nt - 1.0)));
  if (var <= 0.0)
    throw insufficient_error("mann-whitney variance degenerate under ties");
  double mu = nn1 * nn2 / 2.0;
  double ubig = std::max(u1, u2);
  double z = (ubig - mu - 0.5) / std::sqrt(var);  // continuity correction
  r.p_value = std::min(1.0, 2.0 * normal_sf(z));
  r.extras.emplace_back("z", z);
  r.extras.emplace_back("exact", 0.0);
  return r;
}

TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
  std::size_t k = groups.size();
  if (k < 2) throw input_error("kruskal-wallis needs at least 2 groups");
  std::vector<double> pooled;
  std::vector<std::size_t> sizes;
  for (const auto& g : groups) {
    if (g.empty()) throw input_error("kruskal-wallis with empty group");
    sizes.push_back(g.size());
    pooled.insert(pooled.end(), g.begin(), g.end());
  }
  if (pooled.size() < 5)
    throw insufficient_error("kruskal-wallis needs total n >= 5");
  double nt = static_cast<double>(pooled.size());
  std::vector<std::size_t> ties;
  std::vector<double> ranks = ranks_with_ties(pooled, &ties);
  double h = 0.0;
  std::size_t off = 0;
  for (std::size_t gi = 0; gi < k; ++gi) {
    double rs = 0.0;
    for (std::size_t i = 0; i < sizes[gi]; ++i) rs += ranks[off + i];
    h += rs * rs / static_cast<double>(sizes[gi]);
    off += sizes[gi];
  }
  h = 12.0 / (nt * (nt + 1.0)) * h - 3.0 * (nt + 1.0);
  double tie_term = 0.0;
  for (std::size_t t : ties) {
    double td = static_cast<double>(t);
    tie_term += td * td * td - td;
  }
  double correction = 1.0 - tie_term / (nt * nt * nt - nt);
  if (correction <= 0.0)
    throw insufficient_error("kruskal-wallis with all values identical");
  h /= correction;
  TestResult r;
  r.method = "kruskal_wallis";
  r.statistic = h;
  r.df = static_cast<double>(k - 1);
  r.p_value = chi_square_sf(h, r.df);
  r.group_sizes = sizes;
  // Epsilon-squared is the primary effect size; the H-based eta-squared
  // that some reports quote is kept alongside it.
  double eps2 = h / (nt - 1.0);
  double eta2 = (h - static_cast<double>(k) + 1.0) /
                (nt - static_cast<double>(k));
  r.effect_size = eps2;
  r.effect_label = "epsilon_sq";
  r.extras.emplace_back("eta_sq_h", eta2);
  return r;
}

std::vector<PairwiseResult> dunn_posthoc(
    const std::vector<std::vector<double>>& groups, Adjust adjust) {
  std::size_t k = groups.size();
  if (k < 2) throw input_error("dunn needs at least 2 groups");
  std::vector<double> pooled;
  std::vector<std::size_t> sizes;
  for (const auto& g : groups) {
    if (g.empty()) throw input_error("dunn with empty group");
    sizes.push_back(g.size());
    pooled.insert(pooled.end(), g.begin(), g.end());
  }
  double nt = static_cast<double>(pooled.size());
  std::vector<std::size_t> ties;
  std::vector<double> ranks = ranks_with_ties(pooled, &ties);
  std::vector<double> mean_rank(k, 0.0);
  std::size_t off = 0;
  for (std::size_t gi = 0; gi < k; ++gi) {
    double rs = 0.0;
    for (std::size_t i = 0; i < sizes[gi]; ++i) rs += ranks[off + i];
    mean_rank[gi] = rs / static_cast<double>(sizes[gi]);
    off += sizes[gi];
  }
  double tie_term = 0.0;
  for (std::size_t t : ties) {
    double td = static_cast<double>(t);
    tie_term += td * td * td - td;
  }
  double base = nt * (nt + 1.0) / 12.0 - tie_term / (12.0 * (nt - 1.0));
  if (base <= 0.0)
    throw insufficient_error("dunn variance degenerate under ties");
  std::vector<PairwiseResult> out;
  std::vector<double> raw;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      double se = std::sqrt(base * (1.0 / static_cast<double>(sizes[i]) +
                                    1.0 / static_cast<double>(sizes[j])));
      PairwiseResult pr;
      pr.group_a = i;
      pr.group_b = j;
      pr.z = (mean_rank[i] - mean_rank[j]) / se;
      pr.p_raw = std::min(1.0, 2.0 * normal_sf(std::fabs(pr.z)));
      raw.push_back(pr.p_raw);
      out.push_back(pr);
    }
  }
  std::vector<double> adj = adjust_pvalues(raw, adjust);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].p_adjusted = adj[i];
  return out;
}

TestResult pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw input_error("pearson needs equal-length samples");
  if (x.size() < 3) throw insufficient_error("pearson needs n >= 3");
  double n = static_cast<double>(x.size());
  double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0)
    throw insufficient_error("pearson with a constant input");
  double r = sxy / std::sqrt(sxx * syy);
  r = std::clamp(r, -1.0, 1.0);
  TestResult res;
  res.method = "pearson_r";
  res.statistic = r;
  res.df = n - 2.0;
  if (1.0 - r * r <= 0.0) {
    res.p_value = 0.0;
  } else {
    double t = r * std::sqrt((n - 2.0) / (1.0 - r * r));
    res.p_value = 2.0 * t_sf(std::fabs(t), n - 2.0);
    res.extras.emplace_back("t", t);
  }
  res.effect_size = r;
  res.effect_label = "r";
  res.group_sizes = {x.size()};
  return res;
}

std::vector<double> adjust_pvalues(std::span<const double> p, Adjust method) {
  for (double v : p)
    if (!(v >= 0.0 && v <= 1.0))
      throw input_error("p value outside [0,1]");
  std::size_t m = p.size();
  std::vector<double> out(p.begin(), p.end());
  if (method == Adjust::none || m == 0) return out;
  if (method == Adjust::bonferroni) {
    for (double& v : out) v = std::min(1.0, v * static_cast<double>(m));
    return out;
  }
  // Benjamini-Hochberg step-up: sort ascending, scale by m/rank, running
  // minimum from the largest p downward.
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  double running = 1.0;
  for (std::size_t r = m; r >= 1; --r) {
    std::size_t i = idx[r - 1];
    double scaled = p[i] * static_cast<double>(m) / static_cast<double>(r);
    running = std::min(running, scaled);
    out[i] = std::min(1.0, running);
  }
  return out;
}

Agreement gwet_ac1(const std::vector<std::vector<int>>& ratings,
                   int categories) {
  if (categories < 2)
    throw input_error("agreement needs at least 2 categories");
  std::size_t n = ratings.size();
  if (n < 2) throw insufficient_error("agreement needs at least 2 items");
  std::size_t raters = ratings.empty() ? 0 : ratings[0].size();
  if (raters < 2) throw input_error("agreement needs at least 2 raters");
  std::size_t q = static_cast<std::size_t>(categories);
  for (const auto& row : ratings) {
    if (row.size() != raters)
      throw input_error("ragged ratings matrix");
    for (int v : row)
      if (v < 0 || v >= categories)
        throw input_error("rating outside declared category set");
  }
  double rr = static_cast<double>(raters);
  double nn = static_cast<double>(n);
  std::vector<double> pi(q, 0.0);
  std::vector<double> pa_i(n, 0.0);
  std::vector<std::vector<double>> rik(n, std::vector<double>(q, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (int v : ratings[i]) rik[i][static_cast<std::size_t>(v)] += 1.0;
    double ai = 0.0;
    for (std::size_t c = 0; c < q; ++c) {
      ai += rik[i][c] * (rik[i][c] - 1.0);
      pi[c] += rik[i][c] / rr;
    }
    pa_i[i] = ai / (rr * (rr - 1.0));
  }
  for (std::size_t c = 0; c < q; ++c) pi[c] /= nn;
  double pa = 0.0;
  for (double v : pa_i) pa += v;
  pa /= nn;
  double pe = 0.0;
  for (std::size_t c = 0; c < q; ++c) pe += pi[c] * (1.0 - pi[c]);
  pe /= static_cast<double>(categories - 1);
  if (1.0 - pe <= 0.0)
    throw internal_error("degenerate chance agreement");
  double ac1 = (pa - pe) / (1.0 - pe);
  // Per-item linearized components for the variance (Gwet's multi-rater
  // estimator, finite-population factor dropped).
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double pe_i = 0.0;
    for (std::size_t c = 0; c < q; ++c)
      pe_i += (rik[i][c] / rr) * (1.0 - pi[c]);
    pe_i /= static_cast<double>(categories - 1);
    double gamma_i = (pa_i[i] - pe) / (1.0 - pe);
    double star = gamma_i - 2.0 * (1.0 - ac1) * (pe_i - pe) / (1.0 - pe);
    var += (star - ac1) * (star - ac1);
  }
  var /= nn * (nn - 1.0);
  double zq = normal_quantile(0.975);
  Agreement out;
  out.ac1 = ac1;
  out.ci_low = std::max(-1.0, ac1 - zq * std::sqrt(var));
  out.ci_high = std::min(1.0, ac1 + zq * std::sqrt(var));
  out.percent_agreement = pa;
  out.items = n;
  out.raters = raters;
  return out;
}

double dist_cdf(Dist kind, const DistParams& params, double x) {
  switch (kind) {
    case Dist::normal:
      if (params.sigma <= 0.0) throw input_error("normal cdf needs sigma > 0");
      return normal_cdf((x - params.mu) / params.sigma);
    case Dist::t:
      if (params.df1 <= 0.0) throw input_error("t cdf needs df > 0");
      return t_cdf(x, params.df1);
    case Dist::chi_square:
      if (params.df1 <= 0.0) throw input_error("chi-square cdf needs df > 0");
      return chi_square_cdf(x, params.df1);
    case Dist::f:
      if (params.df1 <= 0.0 || params.df2 <= 0.0)
        throw input_error("f cdf needs positive dfs");
      return f_cdf(x, params.df1, params.df2);
  }
  throw internal_error("unknown distribution kind");
}

}  // namespace styvar::stats
