#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "styvar/corpus.hpp"
#include "styvar/tfidf.hpp"

using namespace styvar;
using corpus::TokenStream;

namespace {

TokenStream stream(std::vector<std::string> tokens) {
  return {std::move(tokens), "test"};
}

double l2_norm(const tfidf::SparseVector& v) {
  double s = 0.0;
  for (const auto& [col, w] : v) s += w * w;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("idf follows the smoothed log formula") {
  auto model = tfidf::tfidf_fit({stream({"a", "b"}), stream({"a", "c"})});
  REQUIRE(model.vocabulary.size() == 3);
  REQUIRE(model.idf.size() == 3);
  CHECK(model.fit_docs == 2);
  // term seen in every doc: ln((1+2)/(1+2)) + 1 = 1
  CHECK(model.idf[model.vocabulary.at("a")] ==
        doctest::Approx(1.0).epsilon(1e-12));
  // term seen once: ln(3/2) + 1
  double rare = std::log(3.0 / 2.0) + 1.0;
  CHECK(model.idf[model.vocabulary.at("b")] ==
        doctest::Approx(rare).epsilon(1e-12));
  CHECK(model.idf[model.vocabulary.at("c")] ==
        doctest::Approx(rare).epsilon(1e-12));
  CHECK(model.doc_freq[model.vocabulary.at("a")] == 2);
  CHECK(model.doc_freq[model.vocabulary.at("b")] == 1);
}

TEST_CASE("vocabulary columns are assigned in lexicographic order") {
  auto model = tfidf::tfidf_fit({stream({"zebra", "apple", "mango"})});
  CHECK(model.vocabulary.at("apple") == 0);
  CHECK(model.vocabulary.at("mango") == 1);
  CHECK(model.vocabulary.at("zebra") == 2);
}

TEST_CASE("single-document fit gives idf one for all terms") {
  auto model = tfidf::tfidf_fit({stream({"x", "y", "x"})});
  for (double v : model.idf) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("transform weights counts by idf and normalizes to unit length") {
  auto model = tfidf::tfidf_fit({stream({"a", "b"}), stream({"a", "c"})});
  auto vec = tfidf::tfidf_transform(model, stream({"a", "a", "b"}));
  REQUIRE(vec.size() == 2);
  CHECK(l2_norm(vec) == doctest::Approx(1.0).epsilon(1e-12));
  // columns sorted
  CHECK(vec[0].first < vec[1].first);
  // pre-normalization weights: a -> 2*1.0, b -> 1*(ln(3/2)+1)
  double wa = 2.0, wb = std::log(3.0 / 2.0) + 1.0;
  double norm = std::sqrt(wa * wa + wb * wb);
  CHECK(vec[0].second == doctest::Approx(wa / norm).epsilon(1e-12));
  CHECK(vec[1].second == doctest::Approx(wb / norm).epsilon(1e-12));
}

TEST_CASE("unseen terms are dropped and an all-unseen doc is empty") {
  auto model = tfidf::tfidf_fit({stream({"a", "b"})});
  auto vec = tfidf::tfidf_transform(model, stream({"q", "z", "q"}));
  CHECK(vec.empty());
  auto mixed = tfidf::tfidf_transform(model, stream({"a", "q"}));
  REQUIRE(mixed.size() == 1);
  CHECK(mixed[0].first == model.vocabulary.at("a"));
  CHECK(l2_norm(mixed) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("batch transform matches per-document transform") {
  std::vector<TokenStream> docs{stream({"a", "b", "b"}), stream({"c", "a"}),
                                stream({"b", "c", "c", "a"})};
  auto model = tfidf::tfidf_fit(docs);
  auto batch = tfidf::tfidf_transform_batch(model, docs);
  REQUIRE(batch.size() == docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    auto single = tfidf::tfidf_transform(model, docs[i]);
    REQUIRE(batch[i].size() == single.size());
    for (std::size_t j = 0; j < single.size(); ++j) {
      CHECK(batch[i][j].first == single[j].first);
      CHECK(batch[i][j].second == single[j].second);
    }
  }
}

TEST_CASE("repeated fits over the same corpus are identical") {
  std::vector<TokenStream> docs{stream({"d", "a", "c"}), stream({"b", "a"})};
  auto m1 = tfidf::tfidf_fit(docs);
  auto m2 = tfidf::tfidf_fit(docs);
  CHECK(m1.vocabulary == m2.vocabulary);
  REQUIRE(m1.idf.size() == m2.idf.size());
  for (std::size_t i = 0; i < m1.idf.size(); ++i)
    CHECK(m1.idf[i] == m2.idf[i]);
}
