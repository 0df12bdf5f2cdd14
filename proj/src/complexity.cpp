#include "styvar/complexity.hpp"

#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "styvar/error.hpp"

namespace styvar::complexity {

namespace {

std::unordered_map<std::string, std::size_t> type_counts(
    const corpus::TokenStream& ts) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& t : ts.tokens) ++counts[t];
  return counts;
}

}  // namespace

double simpson_index(const corpus::TokenStream& ts, bool biased) {
  std::size_t n = ts.tokens.size();
  if (n < 2)
    throw insufficient_error("simpson index needs at least 2 tokens ('" +
                             ts.source_id + "')");
  auto counts = type_counts(ts);
  double nd = static_cast<double>(n);
  double acc = 0.0;
  for (const auto& [tok, c] : counts) {
    double cd = static_cast<double>(c);
    acc += biased ? cd * cd : cd * (cd - 1.0);
  }
  return biased ? acc / (nd * nd) : acc / (nd * (nd - 1.0));
}

double shannon_entropy(const corpus::TokenStream& ts) {
  std::size_t n = ts.tokens.size();
  if (n == 0)
    throw insufficient_error("entropy of empty token stream ('" +
                             ts.source_id + "')");
  auto counts = type_counts(ts);
  double nd = static_cast<double>(n);
  double h = 0.0;
  for (const auto& [tok, c] : counts) {
    double p = static_cast<double>(c) / nd;
    h -= p * std::log2(p);
  }
  return h < 0.0 ? 0.0 : h;  // -0.0 guard for single-type streams
}

std::optional<double> avg_dependency_length(
    const std::vector<corpus::SentenceParse>& parses) {
  double total = 0.0;
  std::size_t arcs = 0;
  for (const auto& sp : parses) {
    for (std::size_t i = 0; i < sp.heads.size(); ++i) {
      if (sp.heads[i] == 0) continue;  // root arc has no linear distance
      total += std::fabs(static_cast<double>(sp.heads[i]) -
                         static_cast<double>(i + 1));
      ++arcs;
    }
  }
  if (arcs == 0) return std::nullopt;
  return total / static_cast<double>(arcs);
}

double type_token_ratio(const corpus::TokenStream& ts) {
  std::size_t n = ts.tokens.size();
  if (n == 0)
    throw insufficient_error("ttr of empty token stream ('" + ts.source_id +
                             "')");
  return static_cast<double>(type_counts(ts).size()) / static_cast<double>(n);
}

double hapax_ratio(const corpus::TokenStream& ts, std::size_t* raw_count) {
  std::size_t n = ts.tokens.size();
  if (n == 0)
    throw insufficient_error("hapax ratio of empty token stream ('" +
                             ts.source_id + "')");
  auto counts = type_counts(ts);
  std::size_t once = 0;
  for (const auto& [tok, c] : counts)
    if (c == 1) ++once;
  if (raw_count) *raw_count = once;
  return static_cast<double>(once) / static_cast<double>(n);
}

ComplexityVector compute_features(
    const corpus::TokenStream& ts,
    const std::vector<corpus::SentenceParse>* parses) {
  ComplexityVector v;
  v.source_id = ts.source_id;
  v.simpson = simpson_index(ts);
  v.shannon = shannon_entropy(ts);
  v.ttr = type_token_ratio(ts);
  v.hapax_ratio = hapax_ratio(ts, &v.hapax_count);
  if (parses) v.dep_length = avg_dependency_length(*parses);
  return v;
}

namespace {

FeatureMoment fit_moment(const std::vector<double>& values) {
  FeatureMoment m;
  if (values.size() < 2) return m;  // stays flagged constant
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  m.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  m.constant = m.sd <= 0.0;
  return m;
}

}  // namespace

StandardizationStats fit_standardization(
    const std::vector<ComplexityVector>& vectors) {
  if (vectors.size() < 2)
    throw insufficient_error("standardization needs at least 2 documents");
  std::vector<double> si, sh, dl, tt, hx;
  for (const auto& v : vectors) {
    si.push_back(v.simpson);
    sh.push_back(v.shannon);
    tt.push_back(v.ttr);
    hx.push_back(v.hapax_ratio);
    if (v.dep_length) dl.push_back(*v.dep_length);
  }
  StandardizationStats s;
  s.simpson = fit_moment(si);
  s.shannon = fit_moment(sh);
  s.dep_length = fit_moment(dl);
  s.ttr = fit_moment(tt);
  s.hapax_ratio = fit_moment(hx);
  return s;
}

double composite_score(const ComplexityVector& v,
                       const StandardizationStats& stats) {
  double sum = 0.0;
  std::size_t used = 0;
  auto add = [&](double value, const FeatureMoment& m) {
    if (m.constant) return;
    sum += (value - m.mean) / m.sd;
    ++used;
  };
  add(v.simpson, stats.simpson);
  add(v.shannon, stats.shannon);
  if (v.dep_length) add(*v.dep_length, stats.dep_length);
  add(v.ttr, stats.ttr);
  add(v.hapax_ratio, stats.hapax_ratio);
  if (used == 0)
    throw insufficient_error(
        "composite score undefined: every feature constant or absent ('" +
        v.source_id + "')");
  return sum / static_cast<double>(used);
}

std::string feature_csv(const std::vector<ComplexityVector>& vectors,
                        const StandardizationStats& stats) {
  std::string out =
      "id,simpson,shannon,dep_length,ttr,hapax_ratio,hapax_count,composite\n";
  char buf[64];
  for (const auto& v : vectors) {
    if (v.source_id.find_first_of(",\"\n") != std::string::npos) {
      out += '"';
      for (char c : v.source_id) {
        if (c == '"') out += '"';
        out += c;
      }
      out += '"';
    } else {
      out += v.source_id;
    }
    auto num = [&](double x) {
      std::snprintf(buf, sizeof(buf), ",%.10g", x);
      out += buf;
    };
    num(v.simpson);
    num(v.shannon);
    if (v.dep_length)
      num(*v.dep_length);
    else
      out += ",";
    num(v.ttr);
    num(v.hapax_ratio);
    std::snprintf(buf, sizeof(buf), ",%zu", v.hapax_count);
    out += buf;
    num(composite_score(v, stats));
    out += "\n";
  }
  return out;
}

}  // namespace styvar::complexity
