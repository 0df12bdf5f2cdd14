#include "doctest.h"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "styvar/corpus.hpp"
#include "styvar/error.hpp"
#include "styvar/rng.hpp"
#include "styvar/similarity.hpp"

using namespace styvar;
using corpus::Document;

namespace {

Document doc_with_embedding(std::string id, std::vector<double> emb) {
  Document d;
  d.id = std::move(id);
  d.date = {2020, 1, 1};
  d.embedding = std::move(emb);
  return d;
}

std::pair<Document, Document> embedded_pair(int idx, std::vector<double> a,
                                            std::vector<double> b) {
  auto orig = doc_with_embedding("o" + std::to_string(idx), std::move(a));
  auto rw = doc_with_embedding("r" + std::to_string(idx), std::move(b));
  rw.rewrite_of = orig.id;
  return {std::move(orig), std::move(rw)};
}

}  // namespace

TEST_CASE("cosine similarity on hand-checked vectors") {
  std::vector<double> a{1.0, 0.0};
  std::vector<double> b{0.0, 1.0};
  std::vector<double> c{-1.0, 0.0};
  std::vector<double> d{1.0, 1.0};
  CHECK(similarity::cosine_similarity(a, a) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(similarity::cosine_similarity(a, b) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(similarity::cosine_similarity(a, c) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(similarity::cosine_similarity(a, d) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("cosine similarity is scale invariant") {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> u(8), v(8);
    for (auto& x : u) x = rng.normal();
    for (auto& x : v) x = rng.normal();
    double base = similarity::cosine_similarity(u, v);
    std::vector<double> u2 = u, v2 = v;
    for (auto& x : u2) x *= 3.5;
    for (auto& x : v2) x *= 0.04;
    CHECK(similarity::cosine_similarity(u2, v2) ==
          doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("cosine similarity input validation") {
  std::vector<double> a{1.0, 2.0};
  std::vector<double> b{1.0, 2.0, 3.0};
  std::vector<double> z{0.0, 0.0};
  std::vector<double> e;
  CHECK_THROWS_AS(similarity::cosine_similarity(a, b), Error);
  CHECK_THROWS_AS(similarity::cosine_similarity(a, z), Error);
  CHECK_THROWS_AS(similarity::cosine_similarity(e, e), Error);
}

TEST_CASE("similarity report counts the fraction at or above threshold") {
  std::vector<std::pair<Document, Document>> pairs;
  // all identical embeddings: every cosine is exactly 1
  for (int i = 0; i < 5; ++i)
    pairs.push_back(embedded_pair(i, {1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}));
  auto rep = similarity::similarity_report(pairs, 0.8);
  CHECK(rep.scores.size() == 5);
  CHECK(rep.fraction_at_or_above == 1.0);
  CHECK(rep.mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.median == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.skipped_pairs == 0);
}

TEST_CASE("similarity report with a mix above and below threshold") {
  std::vector<std::pair<Document, Document>> pairs;
  for (int i = 0; i < 8; ++i)
    pairs.push_back(embedded_pair(i, {1.0, 0.0}, {1.0, 0.0}));  // cosine 1
  pairs.push_back(embedded_pair(8, {1.0, 0.0}, {0.0, 1.0}));    // cosine 0
  pairs.push_back(embedded_pair(9, {1.0, 0.0}, {-1.0, 0.0}));   // cosine -1
  auto rep = similarity::similarity_report(pairs, 0.9);
  CHECK(rep.scores.size() == 10);
  CHECK(rep.fraction_at_or_above == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(rep.mean == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(rep.median == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("similarity report skips pairs lacking embeddings") {
  std::vector<std::pair<Document, Document>> pairs;
  pairs.push_back(embedded_pair(0, {1.0, 1.0}, {1.0, 1.0}));
  auto p1 = embedded_pair(1, {1.0, 0.0}, {1.0, 0.0});
  p1.first.embedding.reset();
  pairs.push_back(std::move(p1));
  auto p2 = embedded_pair(2, {1.0, 0.0}, {1.0, 0.0});
  p2.second.embedding.reset();
  pairs.push_back(std::move(p2));
  auto rep = similarity::similarity_report(pairs, 0.5);
  CHECK(rep.scores.size() == 1);
  CHECK(rep.skipped_pairs == 2);

  std::vector<std::pair<Document, Document>> none;
  auto p3 = embedded_pair(3, {1.0}, {1.0});
  p3.first.embedding.reset();
  none.push_back(std::move(p3));
  CHECK_THROWS_AS(similarity::similarity_report(none, 0.5), Error);
}

TEST_CASE("report deciles are non-decreasing and bracket the data") {
  Rng rng(23);
  std::vector<std::pair<Document, Document>> pairs;
  for (int i = 0; i < 40; ++i) {
    std::vector<double> u(6), v(6);
    for (auto& x : u) x = rng.normal();
    for (auto& x : v) x = rng.normal();
    pairs.push_back(embedded_pair(i, u, v));
  }
  auto rep = similarity::similarity_report(pairs, 0.0);
  double lo = 1.0, hi = -1.0;
  for (const auto& ps : rep.scores) {
    lo = std::min(lo, ps.cosine);
    hi = std::max(hi, ps.cosine);
  }
  for (int d = 1; d < 9; ++d) CHECK(rep.deciles[d - 1] <= rep.deciles[d]);
  CHECK(rep.deciles[0] >= lo);
  CHECK(rep.deciles[8] <= hi);
  CHECK(rep.mean >= lo);
  CHECK(rep.mean <= hi);
  CHECK(rep.deciles[4] == doctest::Approx(rep.median).epsilon(1e-12));
}

TEST_CASE("rating summary on unanimous and split panels") {
  std::vector<std::vector<int>> unanimous(6, std::vector<int>{3, 3, 3});
  auto s = similarity::rating_summary(unanimous);
  CHECK(s.mean == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(s.sd == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s.agreement.ac1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.agreement.percent_agreement == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<std::vector<int>> split(4, std::vector<int>{1, 3});
  auto s2 = similarity::rating_summary(split);
  CHECK(s2.mean == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s2.sd > 0.0);
}

TEST_CASE("rating summary rejects off-scale values") {
  CHECK_THROWS_AS(similarity::rating_summary({{1, 2, 4}}), Error);
  CHECK_THROWS_AS(similarity::rating_summary({{0, 2, 3}}), Error);
  CHECK_THROWS_AS(similarity::rating_summary({}), Error);
}

TEST_CASE("similarity csv has one row per scored pair") {
  std::vector<std::pair<Document, Document>> pairs;
  for (int i = 0; i < 3; ++i) {
    auto p = embedded_pair(i, {1.0, 2.0}, {2.0, 1.0});
    p.second.llm_tag = "m1";
    p.second.prompt_tag = "R";
    pairs.push_back(std::move(p));
  }
  auto rep = similarity::similarity_report(pairs, 0.5);
  auto csv = similarity::similarity_csv(rep);
  std::size_t lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 4);  // header + 3 rows
  CHECK(csv.rfind("original_id,rewrite_id,llm,prompt,cosine\n", 0) == 0);
  CHECK(csv.find("o0,r0,m1,R,") != std::string::npos);
}
