#include "styvar/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "styvar/error.hpp"

namespace styvar::similarity {

double cosine_similarity(std::span<const double> u,
                         std::span<const double> v) {
  if (u.size() != v.size())
    throw input_error("cosine: dimension mismatch (" +
                      std::to_string(u.size()) + " vs " +
                      std::to_string(v.size()) + ")");
  if (u.empty()) throw input_error("cosine: empty vectors");
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu <= 0.0 || nv <= 0.0) throw input_error("cosine: zero vector");
  return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

namespace {

// Percentile with linear interpolation between order statistics.
double percentile(const std::vector<double>& sorted, double q) {
  double pos = q * static_cast<double>(sorted.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

SimilarityReport similarity_report(
    const std::vector<std::pair<corpus::Document, corpus::Document>>& pairs,
    double threshold) {
  SimilarityReport rep;
  rep.threshold = threshold;
  for (const auto& [orig, rw] : pairs) {
    if (!orig.embedding || !rw.embedding) {
      ++rep.skipped_pairs;
      continue;
    }
    PairScore ps;
    ps.original_id = orig.id;
    ps.rewrite_id = rw.id;
    ps.llm_tag = rw.llm_tag.value_or("");
    ps.prompt_tag = rw.prompt_tag.value_or("");
    ps.cosine = cosine_similarity(*orig.embedding, *rw.embedding);
    rep.scores.push_back(std::move(ps));
  }
  if (rep.scores.empty())
    throw insufficient_error("no pairs with embeddings on both sides");
  std::vector<double> vals;
  vals.reserve(rep.scores.size());
  std::size_t above = 0;
  double sum = 0.0;
  for (const auto& ps : rep.scores) {
    vals.push_back(ps.cosine);
    sum += ps.cosine;
    if (ps.cosine >= threshold) ++above;
  }
  std::sort(vals.begin(), vals.end());
  rep.mean = sum / static_cast<double>(vals.size());
  rep.median = percentile(vals, 0.5);
  for (int d = 1; d <= 9; ++d)
    rep.deciles[static_cast<std::size_t>(d - 1)] =
        percentile(vals, static_cast<double>(d) / 10.0);
  rep.fraction_at_or_above =
      static_cast<double>(above) / static_cast<double>(vals.size());
  return rep;
}

RatingSummary rating_summary(const std::vector<std::vector<int>>& ratings) {
  if (ratings.empty() || ratings[0].empty())
    throw input_error("empty ratings matrix");
  for (const auto& row : ratings)
    for (int v : row)
      if (v < 1 || v > 3)
        throw input_error("rating outside the {1,2,3} rubric scale");
  RatingSummary out;
  std::vector<double> flat;
  for (const auto& row : ratings)
    for (int v : row) flat.push_back(static_cast<double>(v));
  out.mean = stats::mean(flat);
  out.sd = flat.size() >= 2 ? stats::sample_sd(flat) : 0.0;
  // AC1 expects 0-based category codes
  std::vector<std::vector<int>> coded = ratings;
  for (auto& row : coded)
    for (int& v : row) v -= 1;
  out.agreement = stats::gwet_ac1(coded, 3);
  return out;
}

std::string similarity_csv(const SimilarityReport& report) {
  std::string out = "original_id,rewrite_id,llm,prompt,cosine\n";
  char buf[64];
  for (const auto& ps : report.scores) {
    out += ps.original_id + "," + ps.rewrite_id + "," + ps.llm_tag + "," +
           ps.prompt_tag;
    std::snprintf(buf, sizeof(buf), ",%.10g\n", ps.cosine);
    out += buf;
  }
  return out;
}

}  // namespace styvar::similarity
