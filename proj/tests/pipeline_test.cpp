#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "styvar/error.hpp"
#include "styvar/pipeline.hpp"
#include "styvar/synthgen.hpp"

using namespace styvar;
namespace fs = std::filesystem;
using pipeline::Config;

namespace {

std::string temp_path(const std::string& name) {
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() / "styvar_pipeline_test";
  fs::create_directories(dir);
  return (dir / (std::to_string(counter++) + "_" + name)).string();
}

std::string write_file(const std::string& name, const std::string& content) {
  auto p = temp_path(name);
  std::ofstream out(p, std::ios::binary);
  out << content;
  return p;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

// small doc set with enough texture for features and variance
std::string demo_corpus_jsonl() {
  synthgen::SynthSpec spec;
  spec.docs_per_month = 3;
  spec.months = 10;
  spec.onset_index = 5;
  spec.doc_tokens = 40;
  spec.seed = 9;
  return synthgen::to_jsonl(synthgen::generate_shock_corpus(spec));
}

}  // namespace

TEST_CASE("config parsing handles sections, comments, and case") {
  auto path = write_file("conf.ini",
                         "# leading comment\n"
                         "[IO]\n"
                         "Documents = /Path/Docs.jsonl\n"
                         "; another comment\n"
                         "\n"
                         "[trend]\n"
                         "min_docs = 5\n"
                         "onset = 2020-03\n");
  Config cfg = pipeline::load_config(path);
  // section and key names fold to lowercase, values stay verbatim
  CHECK(cfg.get("io", "documents", "") == "/Path/Docs.jsonl");
  CHECK(cfg.get_int("trend", "min_docs", 0) == 5);
  CHECK(cfg.get("trend", "onset", "") == "2020-03");
  CHECK(!cfg.has("io", "missing"));
  CHECK(cfg.get("io", "missing", "fallback") == "fallback");
}

TEST_CASE("config parsing reports the offending line") {
  auto bad1 = write_file("bad.ini", "[io]\nkey_without_value\n");
  CHECK_THROWS_WITH_AS(pipeline::load_config(bad1),
                       doctest::Contains("line 2"), Error);
  auto bad2 = write_file("bad.ini", "key = before any section\n");
  CHECK_THROWS_WITH_AS(pipeline::load_config(bad2),
                       doctest::Contains("line 1"), Error);
  auto bad3 = write_file("bad.ini", "[unterminated\n");
  CHECK_THROWS_AS(pipeline::load_config(bad3), Error);
  auto bad4 = write_file("bad.ini", "[io]\n= naked value\n");
  CHECK_THROWS_AS(pipeline::load_config(bad4), Error);
  CHECK_THROWS_AS(pipeline::load_config("/nonexistent/conf.ini"), Error);
}

TEST_CASE("config typed accessors validate their values") {
  Config cfg;
  cfg.set("a", "num", "1.5");
  cfg.set("a", "int", "42");
  cfg.set("a", "flag", "yes");
  cfg.set("a", "junk", "zz");
  CHECK(cfg.get_num("a", "num", 0.0) == 1.5);
  CHECK(cfg.get_int("a", "int", 0) == 42);
  CHECK(cfg.get_flag("a", "flag", false));
  CHECK(cfg.get_flag("a", "absent", true));
  CHECK_THROWS_AS(cfg.get_num("a", "junk", 0.0), Error);
  CHECK_THROWS_AS(cfg.get_int("a", "num", 0), Error);  // "1.5" not integral
  CHECK_THROWS_AS(cfg.get_flag("a", "junk", false), Error);
  CHECK_THROWS_AS(cfg.require("a", "absent"), Error);
  CHECK(cfg.seed() == 1);  // default
  cfg.set("run", "seed", "-3");
  CHECK_THROWS_AS(cfg.seed(), Error);
  cfg.set("run", "seed", "77");
  CHECK(cfg.seed() == 77);
}

TEST_CASE("config hash covers values and ignores insertion order") {
  Config a, b;
  a.set("io", "documents", "x.jsonl");
  a.set("run", "seed", "5");
  b.set("run", "seed", "5");
  b.set("io", "documents", "x.jsonl");
  CHECK(a.hash() == b.hash());
  b.set("run", "seed", "6");
  CHECK(a.hash() != b.hash());
  Config c = a;
  c.set("io", "out_dir", "elsewhere");
  CHECK(a.hash() != c.hash());
}

TEST_CASE("features command writes a table and a report") {
  auto docs = write_file("docs.jsonl", demo_corpus_jsonl());
  auto out = temp_path("features_out");
  Config cfg;
  cfg.set("io", "documents", docs);
  cfg.set("io", "out_dir", out);
  REQUIRE(pipeline::cmd_features(cfg) == 0);
  auto csv = read_file(out + "/features.csv");
  CHECK(count_lines(csv) == 31);  // header + 30 documents
  CHECK(csv.rfind("id,", 0) == 0);
  auto report = nlohmann::json::parse(read_file(out + "/features_report.json"));
  CHECK(report["command"] == "features");
  CHECK(report["documents"] == 30);
  CHECK(report["config_hash"] == cfg.hash());
  CHECK(report["version"] == pipeline::kVersion);
}

TEST_CASE("features command exit codes") {
  Config cfg;
  cfg.set("io", "documents", "/nonexistent/docs.jsonl");
  cfg.set("io", "out_dir", temp_path("fe_out"));
  CHECK(pipeline::cmd_features(cfg) == 2);

  // a corpus of empty-token documents cannot be scored
  auto degenerate = write_file(
      "degenerate.jsonl",
      "{\"id\":\"d1\",\"date\":\"2020-01-01\",\"text\":\"one two three\"}\n");
  Config cfg2;
  cfg2.set("io", "documents", degenerate);
  cfg2.set("io", "out_dir", temp_path("fe_out"));
  CHECK(pipeline::cmd_features(cfg2) == 3);  // single doc, need 2

  Config cfg3;  // missing io.documents entirely
  cfg3.set("io", "out_dir", temp_path("fe_out"));
  CHECK(pipeline::cmd_features(cfg3) == 2);
}

TEST_CASE("features command with json output keeps cells as strings") {
  auto docs = write_file("docs.jsonl", demo_corpus_jsonl());
  auto out = temp_path("features_json_out");
  Config cfg;
  cfg.set("io", "documents", docs);
  cfg.set("io", "out_dir", out);
  cfg.set("io", "format", "json");
  REQUIRE(pipeline::cmd_features(cfg) == 0);
  auto table = nlohmann::json::parse(read_file(out + "/features.json"));
  REQUIRE(table.is_array());
  REQUIRE(table.size() == 30);
  for (const auto& [key, value] : table[0].items()) CHECK(value.is_string());
  CHECK(table[0].contains("simpson"));

  cfg.set("io", "format", "yaml");
  CHECK(pipeline::cmd_features(cfg) == 2);
}

TEST_CASE("trend command runs the full fit on a synthetic corpus") {
  auto docs = write_file("docs.jsonl", demo_corpus_jsonl());
  auto out = temp_path("trend_out");
  Config cfg;
  cfg.set("io", "documents", docs);
  cfg.set("io", "out_dir", out);
  cfg.set("trend", "onset", "2018-06");
  REQUIRE(pipeline::cmd_trend(cfg) == 0);
  auto report = nlohmann::json::parse(read_file(out + "/trend_report.json"));
  CHECK(report["months_total"] == 10);
  CHECK(report["months_observed"] == 10);
  CHECK(report["onset"] == "2018-06");
  REQUIRE(report["dgm"]["terms"].size() == 4);
  CHECK(report["dgm"]["terms"][0]["name"] == "Intercept");
  CHECK(report["dgm"]["n_obs"] == 10);
  // no detector scores: granger auto-skips and no granger block appears
  CHECK(!report.contains("granger"));
  CHECK(fs::exists(out + "/variance_series.csv"));
  CHECK(fs::exists(out + "/dgm.csv"));
}

TEST_CASE("trend command insufficiency and bad-config exits") {
  synthgen::SynthSpec spec;
  spec.docs_per_month = 3;
  spec.months = 4;  // too few observed months for any fit
  spec.onset_index = 2;
  spec.doc_tokens = 40;
  spec.seed = 3;
  auto docs = write_file(
      "short.jsonl",
      synthgen::to_jsonl(synthgen::generate_shock_corpus(spec)));
  Config cfg;
  cfg.set("io", "documents", docs);
  cfg.set("io", "out_dir", temp_path("trend_out"));
  cfg.set("trend", "onset", "2018-02");
  CHECK(pipeline::cmd_trend(cfg) == 3);

  auto full = write_file("docs.jsonl", demo_corpus_jsonl());
  Config cfg2;
  cfg2.set("io", "documents", full);
  cfg2.set("io", "out_dir", temp_path("trend_out"));
  cfg2.set("trend", "onset", "2019-06");  // outside the observed span
  CHECK(pipeline::cmd_trend(cfg2) == 2);

  Config cfg3;
  cfg3.set("io", "documents", full);
  cfg3.set("io", "out_dir", temp_path("trend_out"));
  cfg3.set("trend", "onset", "2018-06");
  cfg3.set("trend", "granger", "on");  // corpus carries no detector scores
  CHECK(pipeline::cmd_trend(cfg3) == 3);

  cfg3.set("trend", "granger", "sometimes");
  CHECK(pipeline::cmd_trend(cfg3) == 2);
}

TEST_CASE("identical configs produce byte-identical outputs") {
  auto docs = write_file("docs.jsonl", demo_corpus_jsonl());
  auto out = temp_path("determinism_out");
  Config cfg;
  cfg.set("io", "documents", docs);
  cfg.set("io", "out_dir", out);
  cfg.set("trend", "onset", "2018-06");
  REQUIRE(pipeline::cmd_trend(cfg) == 0);
  auto report1 = read_file(out + "/trend_report.json");
  auto series1 = read_file(out + "/variance_series.csv");
  auto dgm1 = read_file(out + "/dgm.csv");
  REQUIRE(pipeline::cmd_trend(cfg) == 0);
  CHECK(read_file(out + "/trend_report.json") == report1);
  CHECK(read_file(out + "/variance_series.csv") == series1);
  CHECK(read_file(out + "/dgm.csv") == dgm1);
}

TEST_CASE("synth command generates a lagged series table") {
  auto out = temp_path("synth_out");
  Config cfg;
  cfg.set("io", "out_dir", out);
  cfg.set("synth", "kind", "lagged");
  cfg.set("synth", "length", "50");
  cfg.set("synth", "lag", "2");
  REQUIRE(pipeline::cmd_synth(cfg) == 0);
  auto csv = read_file(out + "/lagged.csv");
  CHECK(count_lines(csv) == 51);
  CHECK(csv.rfind("t,x,y\n", 0) == 0);
  auto report = nlohmann::json::parse(read_file(out + "/synth_report.json"));
  CHECK(report["kind"] == "lagged");
  CHECK(report["lag"] == 2);

  cfg.set("synth", "kind", "nonsense");
  CHECK(pipeline::cmd_synth(cfg) == 2);
}

TEST_CASE("synth trait kind writes loadable original and rewrite corpora") {
  auto out = temp_path("synth_trait_out");
  Config cfg;
  cfg.set("io", "out_dir", out);
  cfg.set("synth", "kind", "trait");
  cfg.set("synth", "authors", "12");
  cfg.set("synth", "doc_tokens", "30");
  REQUIRE(pipeline::cmd_synth(cfg) == 0);
  CHECK(fs::exists(out + "/originals.jsonl"));
  CHECK(fs::exists(out + "/rewrites.jsonl"));
  auto report = nlohmann::json::parse(read_file(out + "/synth_report.json"));
  CHECK(report["authors"] == 12);
  CHECK(report["trait"] == "style_class");
}

TEST_CASE("run_command dispatches by name") {
  Config cfg;
  CHECK(pipeline::run_command("unknown", cfg) == 2);
  cfg.set("io", "documents", "/nonexistent.jsonl");
  cfg.set("io", "out_dir", temp_path("dispatch_out"));
  CHECK(pipeline::run_command("features", cfg) == 2);
}
