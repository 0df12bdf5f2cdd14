#ifndef STYVAR_TFIDF_HPP
#define STYVAR_TFIDF_HPP

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "styvar/corpus.hpp"

namespace styvar::tfidf {

// Sparse row: (column, weight) pairs sorted by column.
using SparseVector = std::vector<std::pair<std::size_t, double>>;

struct TfidfModel {
  std::map<std::string, std::size_t> vocabulary;  // term -> column
  std::vector<double> idf;                        // per column
  std::vector<std::size_t> doc_freq;              // per column
  std::size_t fit_docs = 0;
};

// idf = ln((1+N)/(1+df)) + 1; vocabulary columns in lexicographic term
// order for stable indexing.
TfidfModel tfidf_fit(const std::vector<corpus::TokenStream>& docs);

// Raw term counts weighted by idf, then L2-normalized. Unseen terms are
// ignored; a document of only unseen terms yields an empty (zero) vector.
SparseVector tfidf_transform(const TfidfModel& model,
                             const corpus::TokenStream& doc);

std::vector<SparseVector> tfidf_transform_batch(
    const TfidfModel& model, const std::vector<corpus::TokenStream>& docs);

}  // namespace styvar::tfidf

#endif
