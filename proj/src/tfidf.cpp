#include "styvar/tfidf.hpp"

#include <cmath>
#include <set>

#include "styvar/error.hpp"

namespace styvar::tfidf {

TfidfModel tfidf_fit(const std::vector<corpus::TokenStream>& docs) {
  if (docs.empty()) throw input_error("tfidf fit on empty corpus");
  std::map<std::string, std::size_t> df_map;
  for (const auto& d : docs) {
    std::set<std::string> uniq(d.tokens.begin(), d.tokens.end());
    for (const auto& t : uniq) ++df_map[t];
  }
  if (df_map.empty()) throw insufficient_error("tfidf: empty vocabulary");
  TfidfModel m;
  m.fit_docs = docs.size();
  double n = static_cast<double>(docs.size());
  std::size_t col = 0;
  for (const auto& [term, df] : df_map) {
    m.vocabulary[term] = col++;
    m.doc_freq.push_back(df);
    m.idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(df))) +
                    1.0);
  }
  return m;
}

SparseVector tfidf_transform(const TfidfModel& model,
                             const corpus::TokenStream& doc) {
  std::map<std::size_t, double> counts;
  for (const auto& t : doc.tokens) {
    auto it = model.vocabulary.find(t);
    if (it != model.vocabulary.end()) counts[it->second] += 1.0;
  }
  SparseVector row;
  row.reserve(counts.size());
  double norm2 = 0.0;
  for (const auto& [col, tf] : counts) {
    double w = tf * model.idf[col];
    row.emplace_back(col, w);
    norm2 += w * w;
  }
  if (norm2 > 0.0) {
    double inv = 1.0 / std::sqrt(norm2);
    for (auto& [col, w] : row) w *= inv;
  }
  return row;
}

std::vector<SparseVector> tfidf_transform_batch(
    const TfidfModel& model, const std::vector<corpus::TokenStream>& docs) {
  std::vector<SparseVector> rows;
  rows.reserve(docs.size());
  for (const auto& d : docs) rows.push_back(tfidf_transform(model, d));
  return rows;
}

}  // namespace styvar::tfidf
