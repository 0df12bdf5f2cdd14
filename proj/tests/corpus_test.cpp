#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "styvar/corpus.hpp"
#include "styvar/error.hpp"

using namespace styvar;
namespace fs = std::filesystem;

namespace {

// Writes `content` to a fresh file under the build temp dir and returns the
// path. Files accumulate per run; the directory is tiny and disposable.
std::string temp_file(const std::string& tag, const std::string& content) {
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() / "styvar_corpus_test";
  fs::create_directories(dir);
  fs::path p = dir / (tag + "_" + std::to_string(counter++) + ".jsonl");
  std::ofstream out(p);
  out << content;
  return p.string();
}

std::string repeat_words(const std::string& w, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) {
    if (i) s += ' ';
    s += w;
  }
  return s;
}

}  // namespace

TEST_CASE("tokenize lowercases and strips punctuation") {
  corpus::Document d;
  d.id = "t1";
  d.text = "The cat, the CAT!";
  auto ts = corpus::tokenize(d);
  CHECK(ts.tokens == std::vector<std::string>{"the", "cat", "the", "cat"});
  CHECK(ts.source_id == "t1");
}

TEST_CASE("tokenize keeps internal apostrophes and drops digits") {
  CHECK(corpus::tokenize_text("don't stop") ==
        std::vector<std::string>{"don't", "stop"});
  CHECK(corpus::tokenize_text("abc123 42 x9y") ==
        std::vector<std::string>{"abc", "x", "y"});
  CHECK(corpus::tokenize_text("well-known heat-map") ==
        std::vector<std::string>{"well", "known", "heat", "map"});
  // leading/trailing apostrophes are punctuation, not token content
  CHECK(corpus::tokenize_text("'quoted' rock'n'roll") ==
        std::vector<std::string>{"quoted", "rock'n'roll"});
}

TEST_CASE("tokenize rejects documents with no word content") {
  corpus::Document d;
  d.id = "dots";
  d.text = "...";
  CHECK_THROWS_AS(corpus::tokenize(d), Error);
}

TEST_CASE("tokenization is idempotent on its own output") {
  std::string text = "It's a well-oiled MACHINE, isn't it? 99 times!";
  auto once = corpus::tokenize_text(text);
  std::string joined;
  for (const auto& t : once) {
    if (!joined.empty()) joined += ' ';
    joined += t;
  }
  CHECK(corpus::tokenize_text(joined) == once);
}

TEST_CASE("date parsing") {
  auto d = corpus::parse_date("2022-11-30");
  CHECK(d.year == 2022);
  CHECK(d.month == 11);
  CHECK(d.day == 30);
  CHECK(d.month_key() == "2022-11");
  auto m = corpus::parse_month("2023-01");
  CHECK(m.year == 2023);
  CHECK(m.month == 1);
  CHECK(m.day == 1);
  CHECK_THROWS_AS(corpus::parse_date("2022-13-01"), Error);
  CHECK_THROWS_AS(corpus::parse_date("not a date"), Error);
  CHECK_THROWS_AS(corpus::parse_month("2023"), Error);
}

TEST_CASE("load_documents applies the min-words filter") {
  std::string lines =
      R"({"id": "a", "text": ")" + repeat_words("alpha", 250) +
      R"(", "date": "2020-01-02"})" + "\n" +
      R"({"id": "b", "text": ")" + repeat_words("beta", 150) +
      R"(", "date": "2020-01-03"})" + "\n" +
      R"({"id": "c", "text": ")" + repeat_words("gamma", 300) +
      R"(", "date": "2020-02-01"})" + "\n";
  std::string path = temp_file("minwords", lines);
  corpus::LoadReport rep;
  auto docs = corpus::load_documents(path, {.min_words = 200}, &rep);
  REQUIRE(docs.size() == 2);
  CHECK(docs[0].id == "a");
  CHECK(docs[1].id == "c");
  CHECK(rep.kept == 2);
  CHECK(rep.dropped_short == 1);
}

TEST_CASE("load_documents on an empty file returns an empty list") {
  std::string path = temp_file("empty", "");
  auto docs = corpus::load_documents(path, 0);
  CHECK(docs.empty());
}

TEST_CASE("load_documents rejects a record without a date") {
  std::string path =
      temp_file("nodate", R"({"id": "x", "text": "some words here"})" "\n");
  CHECK_THROWS_WITH_AS(corpus::load_documents(path, 0),
                       doctest::Contains("x"), Error);
}

TEST_CASE("load_documents rejects duplicate ids") {
  std::string rec = R"({"id": "dup", "text": "words", "date": "2020-01-01"})";
  std::string path = temp_file("dupid", rec + "\n" + rec + "\n");
  CHECK_THROWS_WITH_AS(corpus::load_documents(path, 0),
                       doctest::Contains("dup"), Error);
}

TEST_CASE("load_documents reports the line of a malformed record") {
  std::string path = temp_file(
      "badline",
      R"({"id": "ok", "text": "fine words", "date": "2020-01-01"})" "\n"
      "this is not json\n");
  CHECK_THROWS_WITH_AS(corpus::load_documents(path, 0),
                       doctest::Contains("2"), Error);
}

TEST_CASE("skip_bad counts malformed lines instead of failing") {
  std::string path = temp_file(
      "skipbad",
      R"({"id": "ok", "text": "fine words", "date": "2020-01-01"})" "\n"
      "not json at all\n"
      R"({"id": "ok2", "text": "more words", "date": "2020-01-05"})" "\n");
  corpus::LoadReport rep;
  auto docs =
      corpus::load_documents(path, {.min_words = 0, .skip_bad = true}, &rep);
  CHECK(docs.size() == 2);
  CHECK(rep.skipped_bad == 1);
}

TEST_CASE("load_documents parses optional fields") {
  std::string path = temp_file(
      "optional",
      R"({"id": "r", "text": "rewritten words", "date": "2021-03-04", )"
      R"("author": "auth1", "labels": {"age": 33, "gender": "f"}, )"
      R"("embedding": [0.5, -1.25], "detector_score": 0.75, )"
      R"("rewrite_of": "orig", "llm": "gpt", "prompt": "R"})" "\n");
  auto docs = corpus::load_documents(path, 0);
  REQUIRE(docs.size() == 1);
  const auto& d = docs[0];
  CHECK(d.author_id == "auth1");
  REQUIRE(d.embedding.has_value());
  CHECK((*d.embedding)[1] == -1.25);
  CHECK(d.detector_score == 0.75);
  CHECK(d.rewrite_of == "orig");
  CHECK(d.llm_tag == "gpt");
  CHECK(d.prompt_tag == "R");
  REQUIRE(d.labels.count("age"));
  CHECK(std::get<double>(d.labels.at("age")) == 33.0);
  CHECK(std::get<std::string>(d.labels.at("gender")) == "f");
}

TEST_CASE("load_documents rejects detector scores outside the unit range") {
  std::string path = temp_file(
      "badscore",
      R"({"id": "b", "text": "w", "date": "2020-01-01", "detector_score": 1.5})"
      "\n");
  CHECK_THROWS_AS(corpus::load_documents(path, 0), Error);
}

TEST_CASE("load_conllu extracts heads per document") {
  std::string content =
      "# doc_id = d1\n"
      "1\tThe\t_\t_\t_\t_\t2\t_\t_\t_\n"
      "2\tcat\t_\t_\t_\t_\t0\t_\t_\t_\n"
      "3\tsat\t_\t_\t_\t_\t2\t_\t_\t_\n"
      "\n"
      "# doc_id = d2\n"
      "1\tHi\t_\t_\t_\t_\t0\t_\t_\t_\n"
      "\n";
  std::string path = temp_file("conllu", content);
  auto parses = corpus::load_conllu(path);
  REQUIRE(parses.size() == 2);
  REQUIRE(parses.at("d1").size() == 1);
  const auto& sent = parses.at("d1")[0];
  CHECK(sent.heads == std::vector<int>{2, 0, 2});
  CHECK(parses.at("d2")[0].heads == std::vector<int>{0});
}

TEST_CASE("load_conllu rejects out-of-range heads") {
  std::string content =
      "# doc_id = d1\n"
      "1\ta\t_\t_\t_\t_\t5\t_\t_\t_\n"
      "2\tb\t_\t_\t_\t_\t0\t_\t_\t_\n"
      "3\tc\t_\t_\t_\t_\t1\t_\t_\t_\n"
      "\n";
  std::string path = temp_file("badhead", content);
  CHECK_THROWS_AS(corpus::load_conllu(path), Error);
}

TEST_CASE("load_conllu rejects self-heads and missing doc comments") {
  std::string self_head =
      "# doc_id = d1\n"
      "1\ta\t_\t_\t_\t_\t1\t_\t_\t_\n"
      "\n";
  CHECK_THROWS_AS(corpus::load_conllu(temp_file("selfhead", self_head)),
                  Error);
  std::string no_doc =
      "1\ta\t_\t_\t_\t_\t0\t_\t_\t_\n"
      "\n";
  CHECK_THROWS_AS(corpus::load_conllu(temp_file("nodoc", no_doc)), Error);
}

TEST_CASE("load_conllu skips multiword token ranges") {
  std::string content =
      "# doc_id = d1\n"
      "1-2\tdel\t_\t_\t_\t_\t_\t_\t_\t_\n"
      "1\tde\t_\t_\t_\t_\t2\t_\t_\t_\n"
      "2\tel\t_\t_\t_\t_\t0\t_\t_\t_\n"
      "\n";
  auto parses = corpus::load_conllu(temp_file("mwt", content));
  CHECK(parses.at("d1")[0].heads == std::vector<int>{2, 0});
}

namespace {

corpus::Document doc(const std::string& id, const std::string& rewrite_of = "",
                     const std::string& llm = "", const std::string& prompt = "") {
  corpus::Document d;
  d.id = id;
  d.text = "placeholder words";
  d.date = {2020, 1, 1};
  if (!rewrite_of.empty()) d.rewrite_of = rewrite_of;
  if (!llm.empty()) d.llm_tag = llm;
  if (!prompt.empty()) d.prompt_tag = prompt;
  return d;
}

}  // namespace

TEST_CASE("pair_rewrites matches by id in original order") {
  std::vector<corpus::Document> orig = {doc("a"), doc("b")};
  std::vector<corpus::Document> rw = {doc("rb", "b"), doc("ra", "a")};
  auto pairing = corpus::pair_rewrites(orig, rw);
  REQUIRE(pairing.pairs.size() == 2);
  CHECK(pairing.pairs[0].first.id == "a");
  CHECK(pairing.pairs[0].second.id == "ra");
  CHECK(pairing.pairs[1].first.id == "b");
  CHECK(pairing.pairs[1].second.id == "rb");
  CHECK(pairing.unpaired_original_ids.empty());
}

TEST_CASE("pair_rewrites reports originals without a rewrite") {
  std::vector<corpus::Document> orig = {doc("a"), doc("lonely")};
  std::vector<corpus::Document> rw = {doc("ra", "a")};
  auto pairing = corpus::pair_rewrites(orig, rw);
  CHECK(pairing.pairs.size() == 1);
  CHECK(pairing.unpaired_original_ids ==
        std::vector<std::string>{"lonely"});
}

TEST_CASE("pair_rewrites rejects dangling and duplicate rewrites") {
  std::vector<corpus::Document> orig = {doc("a")};
  std::vector<corpus::Document> dangling = {doc("rx", "ghost")};
  CHECK_THROWS_WITH_AS(corpus::pair_rewrites(orig, dangling),
                       doctest::Contains("ghost"), Error);
  std::vector<corpus::Document> no_ref = {doc("rx")};
  CHECK_THROWS_AS(corpus::pair_rewrites(orig, no_ref), Error);
  std::vector<corpus::Document> dup = {doc("r1", "a", "gpt", "R"),
                                       doc("r2", "a", "gpt", "R")};
  CHECK_THROWS_AS(corpus::pair_rewrites(orig, dup), Error);
}
