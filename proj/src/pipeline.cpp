#include "styvar/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"
#include "styvar/complexity.hpp"
#include "styvar/corpus.hpp"
#include "styvar/error.hpp"
#include "styvar/lexicon.hpp"
#include "styvar/similarity.hpp"
#include "styvar/stats.hpp"
#include "styvar/synthgen.hpp"
#include "styvar/timeseries.hpp"
#include "styvar/traitlab.hpp"

namespace styvar::pipeline {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  for (char& c : s)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

double json_safe(double v) {
  return std::isfinite(v) ? v : 0.0;
}

enum class Format { csv, json };

Format parse_format(const Config& cfg) {
  std::string f = lower(cfg.get("io", "format", "csv"));
  if (f == "csv") return Format::csv;
  if (f == "json") return Format::json;
  throw input_error("io.format must be csv or json, got '" + f + "'");
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write " + path.string());
  out << content;
  if (!out) throw input_error("failed writing " + path.string());
}

// Parses our own table output (quoted fields, doubled quotes) back into
// rows so the json format renders the exact same cells.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_open = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        field_open = true;
        break;
      case ',':
        row.push_back(field);
        field.clear();
        field_open = true;
        break;
      case '\n':
        if (!row.empty() || !field.empty() || field_open) {
          row.push_back(field);
          rows.push_back(row);
        }
        row.clear();
        field.clear();
        field_open = false;
        break;
      default:
        field += c;
    }
  }
  if (!row.empty() || !field.empty()) {
    row.push_back(field);
    rows.push_back(row);
  }
  return rows;
}

// Cells stay strings in the json rendering so ids like "0042" survive.
std::string csv_as_json(const std::string& csv) {
  std::vector<std::vector<std::string>> rows = parse_csv(csv);
  ojson out = ojson::array();
  if (rows.empty()) return out.dump(2) + "\n";
  const std::vector<std::string>& header = rows[0];
  for (std::size_t r = 1; r < rows.size(); ++r) {
    ojson obj;
    for (std::size_t c = 0; c < header.size() && c < rows[r].size(); ++c)
      obj[header[c]] = rows[r][c];
    out.push_back(obj);
  }
  return out.dump(2) + "\n";
}

std::string write_table(const fs::path& dir, const std::string& stem,
                        const std::string& csv, Format format) {
  if (format == Format::csv) {
    write_text(dir / (stem + ".csv"), csv);
    return stem + ".csv";
  }
  write_text(dir / (stem + ".json"), csv_as_json(csv));
  return stem + ".json";
}

fs::path out_dir(const Config& cfg) {
  fs::path dir = cfg.get("io", "out_dir", "out");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec && !fs::is_directory(dir))
    throw input_error("cannot create output directory " + dir.string());
  return dir;
}

ojson report_base(const char* command, const Config& cfg) {
  ojson j;
  j["command"] = command;
  j["version"] = kVersion;
  j["config_hash"] = cfg.hash();
  return j;
}

void write_report(const fs::path& dir, const char* command, const ojson& j) {
  write_text(dir / (std::string(command) + "_report.json"), j.dump(2) + "\n");
}

std::string require_file(const Config& cfg, const std::string& section,
                         const std::string& key) {
  std::string path = cfg.require(section, key);
  if (!fs::exists(path)) throw input_error("missing input file: " + path);
  return path;
}

std::optional<std::string> optional_file(const Config& cfg,
                                         const std::string& section,
                                         const std::string& key) {
  if (!cfg.has(section, key)) return std::nullopt;
  std::string path = cfg.get(section, key, "");
  if (!fs::exists(path)) throw input_error("missing input file: " + path);
  return path;
}

corpus::LoadOptions load_options(const Config& cfg) {
  corpus::LoadOptions opt;
  long long mw = cfg.get_int("corpus", "min_words", 0);
  if (mw < 0) throw input_error("corpus.min_words must be >= 0");
  opt.min_words = static_cast<std::size_t>(mw);
  opt.skip_bad = cfg.get_flag("corpus", "skip_bad", false);
  return opt;
}

std::vector<corpus::Document> load_docs(const Config& cfg,
                                        const std::string& key,
                                        corpus::LoadReport* report) {
  std::string path = require_file(cfg, "io", key);
  std::vector<corpus::Document> docs =
      corpus::load_documents(path, load_options(cfg), report);
  std::cerr << "[styvar] " << key << ": " << docs.size() << " documents from "
            << path;
  if (report && (report->dropped_short || report->skipped_bad))
    std::cerr << " (dropped_short " << report->dropped_short << ", skipped_bad "
              << report->skipped_bad << ")";
  std::cerr << "\n";
  return docs;
}

using ParseMap = std::map<std::string, std::vector<corpus::SentenceParse>>;

ParseMap load_parses(const Config& cfg) {
  std::optional<std::string> path = optional_file(cfg, "io", "parses");
  if (!path) return {};
  ParseMap parses = corpus::load_conllu(*path);
  std::cerr << "[styvar] parses: " << parses.size() << " documents from "
            << *path << "\n";
  return parses;
}

struct Featured {
  std::vector<corpus::Document> docs;  // documents that produced features
  std::vector<complexity::ComplexityVector> features;
  std::size_t skipped_degenerate = 0;
};

std::optional<complexity::ComplexityVector> feature_of(
    const corpus::Document& doc, const ParseMap& parses, bool skip_bad,
    std::size_t* skipped) {
  try {
    corpus::TokenStream ts = corpus::tokenize(doc);
    auto it = parses.find(doc.id);
    return complexity::compute_features(
        ts, it == parses.end() ? nullptr : &it->second);
  } catch (const Error&) {
    if (!skip_bad) throw;
    ++*skipped;
    return std::nullopt;
  }
}

Featured featurize(const std::vector<corpus::Document>& docs,
                   const ParseMap& parses, bool skip_bad) {
  Featured out;
  for (const corpus::Document& d : docs) {
    auto v = feature_of(d, parses, skip_bad, &out.skipped_degenerate);
    if (!v) continue;
    out.docs.push_back(d);
    out.features.push_back(std::move(*v));
  }
  if (out.skipped_degenerate)
    std::cerr << "[styvar] skipped " << out.skipped_degenerate
              << " degenerate documents\n";
  return out;
}

ojson test_json(const stats::TestResult& r) {
  ojson j;
  j["method"] = r.method;
  j["statistic"] = json_safe(r.statistic);
  j["p_value"] = json_safe(r.p_value);
  if (r.df > 0.0) j["df"] = json_safe(r.df);
  if (r.df2 > 0.0) j["df2"] = json_safe(r.df2);
  if (r.effect_size) {
    j["effect_size"] = json_safe(*r.effect_size);
    j["effect_label"] = r.effect_label;
  }
  return j;
}

const char* sig_marker(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    out += c;
    if (c == '"') out += '"';
  }
  out += "\"";
  return out;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::input: return 2;
    case ErrorKind::insufficient: return 3;
    case ErrorKind::internal: return 4;
  }
  return 4;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace

bool Config::has(const std::string& section, const std::string& key) const {
  auto s = sections.find(section);
  return s != sections.end() && s->second.count(key) > 0;
}

std::string Config::get(const std::string& section, const std::string& key,
                        const std::string& fallback) const {
  auto s = sections.find(section);
  if (s == sections.end()) return fallback;
  auto k = s->second.find(key);
  return k == s->second.end() ? fallback : k->second;
}

std::string Config::require(const std::string& section,
                            const std::string& key) const {
  if (!has(section, key))
    throw input_error("config lacks required key " + section + "." + key);
  return get(section, key, "");
}

double Config::get_num(const std::string& section, const std::string& key,
                       double fallback) const {
  if (!has(section, key)) return fallback;
  std::string v = get(section, key, "");
  char* end = nullptr;
  double out = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw input_error(section + "." + key + " is not a number: '" + v + "'");
  return out;
}

long long Config::get_int(const std::string& section, const std::string& key,
                          long long fallback) const {
  if (!has(section, key)) return fallback;
  std::string v = get(section, key, "");
  char* end = nullptr;
  long long out = std::strtoll(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw input_error(section + "." + key + " is not an integer: '" + v + "'");
  return out;
}

bool Config::get_flag(const std::string& section, const std::string& key,
                      bool fallback) const {
  if (!has(section, key)) return fallback;
  std::string v = lower(get(section, key, ""));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw input_error(section + "." + key + " is not a boolean: '" + v + "'");
}

void Config::set(const std::string& section, const std::string& key,
                 const std::string& value) {
  sections[section][key] = value;
}

std::uint64_t Config::seed() const {
  long long s = get_int("run", "seed", 1);
  if (s < 0) throw input_error("run.seed must be >= 0");
  return static_cast<std::uint64_t>(s);
}

std::string Config::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  for (const auto& [section, keys] : sections) {
    for (const auto& [key, value] : keys) {
      mix(section);
      mix(".");
      mix(key);
      mix("=");
      mix(value);
      mix("\n");
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("missing input file: " + path);
  Config cfg;
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw input_error(path + " line " + std::to_string(line_no) +
                          ": unterminated section header");
      section = lower(trim(t.substr(1, t.size() - 2)));
      if (section.empty())
        throw input_error(path + " line " + std::to_string(line_no) +
                          ": empty section name");
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw input_error(path + " line " + std::to_string(line_no) +
                        ": expected key = value");
    if (section.empty())
      throw input_error(path + " line " + std::to_string(line_no) +
                        ": key outside any [section]");
    std::string key = lower(trim(t.substr(0, eq)));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw input_error(path + " line " + std::to_string(line_no) +
                        ": empty key");
    cfg.sections[section][key] = value;
  }
  return cfg;
}

int cmd_features(const Config& cfg) {
  return guarded([&]() -> int {
    fs::path dir = out_dir(cfg);
    Format format = parse_format(cfg);
    corpus::LoadReport lr;
    std::vector<corpus::Document> docs = load_docs(cfg, "documents", &lr);
    ParseMap parses = load_parses(cfg);
    bool skip_bad = load_options(cfg).skip_bad;
    Featured f = featurize(docs, parses, skip_bad);
    if (f.features.size() < 2)
      throw insufficient_error("need at least 2 scoreable documents, got " +
                               std::to_string(f.features.size()));
    auto st = complexity::fit_standardization(f.features);
    std::string table = write_table(
        dir, "features", complexity::feature_csv(f.features, st), format);

    ojson rep = report_base("features", cfg);
    rep["documents"] = f.docs.size();
    rep["dropped_short"] = lr.dropped_short;
    rep["skipped_bad"] = lr.skipped_bad;
    rep["skipped_degenerate"] = f.skipped_degenerate;
    rep["outputs"] = ojson::array({table});
    write_report(dir, "features", rep);
    return 0;
  });
}

int cmd_trend(const Config& cfg) {
  return guarded([&]() -> int {
    fs::path dir = out_dir(cfg);
    Format format = parse_format(cfg);
    corpus::LoadReport lr;
    std::vector<corpus::Document> docs = load_docs(cfg, "documents", &lr);
    ParseMap parses = load_parses(cfg);
    bool skip_bad = load_options(cfg).skip_bad;
    Featured f = featurize(docs, parses, skip_bad);
    if (f.features.size() < 2)
      throw insufficient_error("need at least 2 scoreable documents");

    std::vector<timeseries::DatedVector> dated;
    dated.reserve(f.features.size());
    for (std::size_t i = 0; i < f.features.size(); ++i)
      dated.push_back({f.features[i], f.docs[i].date});
    long long min_docs = cfg.get_int("trend", "min_docs", 2);
    if (min_docs < 2) throw input_error("trend.min_docs must be >= 2");
    timeseries::VarianceSeries series =
        timeseries::monthly_variance(dated, static_cast<std::size_t>(min_docs));

    std::size_t observed = 0;
    for (double v : series.composite)
      if (!std::isnan(v)) ++observed;
    if (observed < 8)
      throw insufficient_error("insufficient series: " +
                               std::to_string(observed) +
                               " observed months, need at least 8");

    corpus::Date onset = corpus::parse_month(cfg.require("trend", "onset"));
    if (onset.month_index() < series.months.front().month_index() ||
        onset.month_index() > series.months.back().month_index())
      throw input_error("trend.onset " + onset.month_key() +
                        " lies outside the observed span " +
                        series.months.front().month_key() + ".." +
                        series.months.back().month_key());
    std::optional<double> fixed_rho;
    if (cfg.has("trend", "fixed_rho"))
      fixed_rho = cfg.get_num("trend", "fixed_rho", 0.0);
    timeseries::DgmResult dgm = timeseries::fit_dgm(series, onset, fixed_rho);

    // Reliability over feature variance series: months where every feature
    // that is observed at all has a value.
    std::vector<std::size_t> live_features;
    for (std::size_t k = 0; k < series.feature_names.size(); ++k) {
      bool any = false;
      for (double v : series.feature_variance[k])
        if (!std::isnan(v)) any = true;
      if (any) live_features.push_back(k);
    }
    ojson cronbach_json;
    std::vector<std::vector<double>> item_rows;
    for (std::size_t m = 0; m < series.months.size(); ++m) {
      std::vector<double> row;
      for (std::size_t k : live_features) {
        double v = series.feature_variance[k][m];
        if (std::isnan(v)) break;
        row.push_back(v);
      }
      if (row.size() == live_features.size() && !row.empty())
        item_rows.push_back(std::move(row));
    }
    try {
      timeseries::CronbachResult cr = timeseries::cronbach_alpha(item_rows);
      cronbach_json["alpha"] = json_safe(cr.alpha);
      cronbach_json["ci_low"] = json_safe(cr.ci_low);
      cronbach_json["ci_high"] = json_safe(cr.ci_high);
      cronbach_json["months"] = cr.rows;
      cronbach_json["features"] = cr.cols;
    } catch (const Error& e) {
      cronbach_json["skipped"] = e.what();
    }

    // AI attribution rate and Granger coupling.
    std::string granger_mode = lower(cfg.get("trend", "granger", "auto"));
    if (granger_mode != "auto" && granger_mode != "on" && granger_mode != "off")
      throw input_error("trend.granger must be auto, on, or off");
    std::size_t scored_docs = 0;
    for (const corpus::Document& d : f.docs)
      if (d.detector_score) ++scored_docs;
    if (granger_mode == "on" && scored_docs == 0)
      throw insufficient_error(
          "no detector scores for granger: add detector_score fields or set "
          "granger = off");
    bool run_granger =
        granger_mode == "on" || (granger_mode == "auto" && scored_docs > 0);

    std::optional<timeseries::RateSeries> rate;
    std::optional<timeseries::GrangerPipelineResult> granger;
    if (scored_docs > 0)
      rate = timeseries::monthly_ai_rate(f.docs,
                                         cfg.get_num("trend", "detector_threshold", 0.5));
    if (run_granger) {
      long long max_lag = cfg.get_int("trend", "granger_max_lag", 12);
      if (max_lag < 1 || max_lag > 20)
        throw input_error("trend.granger_max_lag must lie in [1, 20]");
      int lo = std::max(series.months.front().month_index(),
                        rate->months.front().month_index());
      int hi = std::min(series.months.back().month_index(),
                        rate->months.back().month_index());
      if (lo > hi) throw insufficient_error("variance and rate series do not overlap");
      std::vector<double> x, y;
      for (int idx = lo; idx <= hi; ++idx) {
        double xv = rate->rate[static_cast<std::size_t>(
            idx - rate->months.front().month_index())];
        double yv = series.composite[static_cast<std::size_t>(
            idx - series.months.front().month_index())];
        if (std::isnan(xv) || std::isnan(yv))
          throw insufficient_error(
              "aligned monthly series contain gaps; lower trend.min_docs or "
              "fill detector scores");
        x.push_back(xv);
        y.push_back(yv);
      }
      granger = timeseries::granger_pipeline(x, y, static_cast<int>(max_lag));
    }

    std::vector<std::string> outputs;
    outputs.push_back(
        write_table(dir, "variance_series", timeseries::variance_csv(series), format));
    outputs.push_back(write_table(dir, "dgm", timeseries::dgm_csv(dgm), format));
    if (granger)
      outputs.push_back(
          write_table(dir, "granger", timeseries::granger_csv(granger->result), format));

    // Long-format table for plotting: one row per (month, series) cell.
    std::string long_csv = "month,series,value\n";
    for (std::size_t m = 0; m < series.months.size(); ++m) {
      if (!std::isnan(series.composite[m]))
        long_csv += series.months[m].month_key() + ",composite," +
                    fmt(series.composite[m]) + "\n";
    }
    for (std::size_t k = 0; k < series.feature_names.size(); ++k) {
      for (std::size_t m = 0; m < series.months.size(); ++m) {
        double v = series.feature_variance[k][m];
        if (!std::isnan(v))
          long_csv += series.months[m].month_key() + "," +
                      series.feature_names[k] + "," + fmt(v) + "\n";
      }
    }
    if (rate) {
      for (std::size_t m = 0; m < rate->months.size(); ++m) {
        if (!std::isnan(rate->rate[m]))
          long_csv += rate->months[m].month_key() + ",ai_rate," +
                      fmt(rate->rate[m]) + "\n";
      }
    }
    outputs.push_back(write_table(dir, "trend_long", long_csv, format));

    ojson rep = report_base("trend", cfg);
    rep["documents"] = f.docs.size();
    rep["skipped_degenerate"] = f.skipped_degenerate;
    rep["months_total"] = series.months.size();
    rep["months_observed"] = observed;
    rep["onset"] = onset.month_key();
    rep["cronbach"] = cronbach_json;
    ojson dj;
    dj["rho"] = json_safe(dgm.rho);
    dj["n_obs"] = dgm.n_obs;
    dj["df"] = json_safe(dgm.df);
    ojson terms = ojson::array();
    for (const timeseries::DgmTerm& t : dgm.terms) {
      ojson tj;
      tj["name"] = t.name;
      tj["estimate"] = json_safe(t.estimate);
      tj["se"] = json_safe(t.se);
      tj["t"] = json_safe(t.t);
      tj["p"] = json_safe(t.p);
      tj["ci_low"] = json_safe(t.ci_low);
      tj["ci_high"] = json_safe(t.ci_high);
      terms.push_back(tj);
    }
    dj["terms"] = terms;
    rep["dgm"] = dj;
    rep["detector_scored_docs"] = scored_docs;
    if (granger) {
      ojson gj;
      gj["diff_order_x"] = granger->order_x;
      gj["diff_order_y"] = granger->order_y;
      gj["adf_x_p"] = json_safe(granger->adf_x.p_value);
      gj["adf_y_p"] = json_safe(granger->adf_y.p_value);
      rep["granger"] = gj;
    }
    rep["outputs"] = outputs;
    write_report(dir, "trend", rep);
    return 0;
  });
}

int cmd_compare(const Config& cfg) {
  return guarded([&]() -> int {
    fs::path dir = out_dir(cfg);
    Format format = parse_format(cfg);
    std::vector<corpus::Document> originals = load_docs(cfg, "documents", nullptr);
    std::vector<corpus::Document> rewrites = load_docs(cfg, "rewrites", nullptr);
    ParseMap parses = load_parses(cfg);
    bool skip_bad = load_options(cfg).skip_bad;

    corpus::RewritePairing pairing = corpus::pair_rewrites(originals, rewrites);
    if (pairing.pairs.empty()) throw insufficient_error("no pairs matched");

    Featured base = featurize(originals, parses, skip_bad);
    if (base.features.size() < 2)
      throw insufficient_error("need at least 2 scoreable originals");
    auto st = complexity::fit_standardization(base.features);

    struct Cell {
      std::vector<double> orig;
      std::vector<double> rewrite;
    };
    std::map<std::pair<std::string, std::string>, Cell> cells;
    std::size_t skipped_pairs = 0;
    for (const auto& [orig, rw] : pairing.pairs) {
      auto fo = feature_of(orig, parses, skip_bad, &skipped_pairs);
      if (!fo) continue;
      auto fr = feature_of(rw, parses, skip_bad, &skipped_pairs);
      if (!fr) continue;
      Cell& cell = cells[{rw.llm_tag.value_or(""), rw.prompt_tag.value_or("")}];
      cell.orig.push_back(complexity::composite_score(*fo, st));
      cell.rewrite.push_back(complexity::composite_score(*fr, st));
    }

    std::string csv = "llm,prompt,pairs,var_orig,var_rewrite,levene_f,p,marker\n";
    ojson cells_json = ojson::array();
    std::size_t small_cells = 0;
    for (const auto& [key, cell] : cells) {
      if (cell.orig.size() < 2) {
        ++small_cells;
        continue;
      }
      double vo = stats::sample_variance(cell.orig);
      double vr = stats::sample_variance(cell.rewrite);
      stats::TestResult lev = stats::levene({cell.orig, cell.rewrite});
      const char* marker = sig_marker(lev.p_value);
      csv += csv_escape(key.first) + "," + csv_escape(key.second) + "," +
             std::to_string(cell.orig.size()) + "," + fmt(vo) + "," + fmt(vr) +
             "," + fmt(lev.statistic) + "," + fmt(lev.p_value) + "," + marker +
             "\n";
      ojson cj;
      cj["llm"] = key.first;
      cj["prompt"] = key.second;
      cj["pairs"] = cell.orig.size();
      cj["var_orig"] = json_safe(vo);
      cj["var_rewrite"] = json_safe(vr);
      cj["levene_f"] = json_safe(lev.statistic);
      cj["p"] = json_safe(lev.p_value);
      cj["marker"] = marker;
      cells_json.push_back(cj);
    }
    if (cells_json.empty())
      throw insufficient_error("no (llm, prompt) cell has 2 or more scoreable pairs");

    std::vector<std::string> outputs;
    outputs.push_back(write_table(dir, "compare", csv, format));

    ojson rep = report_base("compare", cfg);
    rep["pairs"] = pairing.pairs.size();
    rep["unpaired_originals"] = pairing.unpaired_original_ids.size();
    rep["skipped_pair_documents"] = skipped_pairs;
    rep["small_cells"] = small_cells;
    rep["cells"] = cells_json;

    bool any_embeddings = false;
    for (const auto& [orig, rw] : pairing.pairs)
      if (orig.embedding && rw.embedding) any_embeddings = true;
    if (any_embeddings) {
      similarity::SimilarityReport sim = similarity::similarity_report(
          pairing.pairs, cfg.get_num("compare", "threshold", 0.95));
      ojson sj;
      sj["scored_pairs"] = sim.scores.size();
      sj["skipped_pairs"] = sim.skipped_pairs;
      sj["threshold"] = sim.threshold;
      sj["mean"] = json_safe(sim.mean);
      sj["median"] = json_safe(sim.median);
      sj["fraction_at_or_above"] = json_safe(sim.fraction_at_or_above);
      rep["similarity"] = sj;
    }
    rep["outputs"] = outputs;
    write_report(dir, "compare", rep);
    return 0;
  });
}

int cmd_similarity(const Config& cfg) {
  return guarded([&]() -> int {
    fs::path dir = out_dir(cfg);
    Format format = parse_format(cfg);
    std::vector<corpus::Document> originals = load_docs(cfg, "documents", nullptr);
    std::vector<corpus::Document> rewrites = load_docs(cfg, "rewrites", nullptr);
    corpus::RewritePairing pairing = corpus::pair_rewrites(originals, rewrites);
    if (pairing.pairs.empty()) throw insufficient_error("no pairs matched");

    double threshold = cfg.get_num("similarity", "threshold", 0.95);
    similarity::SimilarityReport report =
        similarity::similarity_report(pairing.pairs, threshold);

    std::vector<std::string> outputs;
    outputs.push_back(
        write_table(dir, "similarity", similarity::similarity_csv(report), format));

    ojson rep = report_base("similarity", cfg);
    rep["pairs"] = pairing.pairs.size();
    rep["scored_pairs"] = report.scores.size();
    rep["skipped_pairs"] = report.skipped_pairs;
    rep["threshold"] = threshold;
    rep["mean"] = json_safe(report.mean);
    rep["median"] = json_safe(report.median);
    ojson deciles = ojson::array();
    for (double d : report.deciles) deciles.push_back(json_safe(d));
    rep["deciles"] = deciles;
    rep["fraction_at_or_above"] = json_safe(report.fraction_at_or_above);

    std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
    for (const similarity::PairScore& s : report.scores)
      groups[{s.llm_tag, s.prompt_tag}].push_back(s.cosine);
    ojson gj = ojson::array();
    for (auto& [key, vals] : groups) {
      std::sort(vals.begin(), vals.end());
      double mean = 0.0;
      std::size_t at_or_above = 0;
      for (double v : vals) {
        mean += v;
        if (v >= threshold) ++at_or_above;
      }
      mean /= static_cast<double>(vals.size());
      double median = vals.size() % 2 == 1
                          ? vals[vals.size() / 2]
                          : 0.5 * (vals[vals.size() / 2 - 1] + vals[vals.size() / 2]);
      ojson g;
      g["llm"] = key.first;
      g["prompt"] = key.second;
      g["pairs"] = vals.size();
      g["mean"] = json_safe(mean);
      g["median"] = json_safe(median);
      g["fraction_at_or_above"] =
          json_safe(static_cast<double>(at_or_above) /
                    static_cast<double>(vals.size()));
      gj.push_back(g);
    }
    rep["groups"] = gj;

    if (cfg.has("similarity", "ratings")) {
      std::string rpath = *optional_file(cfg, "similarity", "ratings");
      std::ifstream in(rpath);
      if (!in) throw input_error("missing input file: " + rpath);
      std::vector<std::vector<int>> ratings;
      std::string line;
      std::size_t line_no = 0;
      while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty()) continue;
        std::vector<int> row;
        std::stringstream ss(t);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
          std::string c = trim(cell);
          char* end = nullptr;
          long v = std::strtol(c.c_str(), &end, 10);
          if (end == c.c_str() || *end != '\0') {
            numeric = false;
            break;
          }
          row.push_back(static_cast<int>(v));
        }
        if (!numeric) {
          if (line_no == 1) continue;  // header row
          throw input_error(rpath + " line " + std::to_string(line_no) +
                            ": non-numeric rating");
        }
        ratings.push_back(row);
      }
      similarity::RatingSummary rs = similarity::rating_summary(ratings);
      ojson rj;
      rj["mean"] = json_safe(rs.mean);
      rj["sd"] = json_safe(rs.sd);
      rj["ac1"] = json_safe(rs.agreement.ac1);
      rj["ac1_ci_low"] = json_safe(rs.agreement.ci_low);
      rj["ac1_ci_high"] = json_safe(rs.agreement.ci_high);
      rj["percent_agreement"] = json_safe(rs.agreement.percent_agreement);
      rj["items"] = rs.agreement.items;
      rj["raters"] = rs.agreement.raters;
      rep["ratings"] = rj;
    }
    rep["outputs"] = outputs;
    write_report(dir, "similarity", rep);
    return 0;
  });
}

namespace {

traitlab::ExperimentConfig traits_config(const Config& cfg) {
  traitlab::ExperimentConfig ec;
  ec.trait = cfg.require("traits", "trait");
  std::string cls = lower(cfg.get("traits", "classifier", "logistic"));
  if (cls == "logistic")
    ec.classifier = linear_model::Kind::logistic;
  else if (cls == "svm")
    ec.classifier = linear_model::Kind::svm;
  else
    throw input_error("traits.classifier must be logistic or svm");
  ec.k = static_cast<std::size_t>(cfg.get_int("traits", "k", 5));
  ec.n_seeds = static_cast<std::size_t>(cfg.get_int("traits", "seeds", 40));
  ec.root_seed = cfg.seed();
  if (cfg.has("traits", "reg_grid")) {
    ec.reg_grid.clear();
    std::stringstream ss(cfg.get("traits", "reg_grid", ""));
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::string c = trim(cell);
      char* end = nullptr;
      double v = std::strtod(c.c_str(), &end);
      if (end == c.c_str() || *end != '\0' || v <= 0.0)
        throw input_error("traits.reg_grid entries must be positive numbers");
      ec.reg_grid.push_back(v);
    }
    if (ec.reg_grid.empty()) throw input_error("traits.reg_grid is empty");
  }
  ec.baseline_trials =
      static_cast<std::size_t>(cfg.get_int("traits", "baseline_trials", 200));
  ec.min_successful =
      static_cast<std::size_t>(cfg.get_int("traits", "min_successful", 20));
  return ec;
}

ojson traits_report_json(const Config& cfg, const traitlab::ExperimentReport& rep) {
  ojson j = report_base("traits", cfg);
  j["trait"] = rep.trait;
  j["classifier"] = rep.classifier;
  j["n_classes"] = rep.n_classes;
  j["runs"] = rep.runs.size();
  j["successful"] = rep.successful;
  j["aggregate_valid"] = rep.aggregate_valid;
  j["mean_f1_orig"] = json_safe(rep.mean_f1_orig);
  j["mean_f1_rewrite"] = json_safe(rep.mean_f1_rewrite);
  j["mean_drop"] = json_safe(rep.mean_drop);
  j["drop_se"] = json_safe(rep.drop_se);
  j["drop_ci_low"] = json_safe(rep.drop_ci_low);
  j["drop_ci_high"] = json_safe(rep.drop_ci_high);
  j["baseline_empirical"] = json_safe(rep.baseline_empirical);
  j["baseline_uniform"] = json_safe(rep.baseline_uniform);
  j["shift_to_one"] = rep.shift_to_one;
  j["shift_to_zero"] = rep.shift_to_zero;
  if (rep.paired_t) j["paired_t"] = test_json(*rep.paired_t);
  if (rep.wilcoxon_delta) j["wilcoxon_delta"] = test_json(*rep.wilcoxon_delta);
  if (rep.shift_t) j["shift_t"] = test_json(*rep.shift_t);
  if (!rep.degenerate_note.empty()) j["degenerate_note"] = rep.degenerate_note;
  return j;
}

}  // namespace

int cmd_traits(const Config& cfg) {
  return guarded([&]() -> int {
    fs::path dir = out_dir(cfg);
    Format format = parse_format(cfg);
    std::vector<corpus::Document> originals = load_docs(cfg, "documents", nullptr);
    std::vector<corpus::Document> rewrites = load_docs(cfg, "rewrites", nullptr);

    if (cfg.has("traits", "llm")) {
      std::string want = cfg.get("traits", "llm", "");
      std::erase_if(rewrites, [&](const corpus::Document& d) {
        return d.llm_tag.value_or("") != want;
      });
    }
    if (cfg.has("traits", "prompt")) {
      std::string want = cfg.get("traits", "prompt", "");
      std::erase_if(rewrites, [&](const corpus::Document& d) {
        return d.prompt_tag.value_or("") != want;
      });
    }
    if (rewrites.empty())
      throw insufficient_error("no rewrites left after llm/prompt filtering");

    traitlab::ExperimentConfig ec = traits_config(cfg);

    traitlab::ExperimentReport report;
    if (cfg.has("traits", "predictions_orig") ||
        cfg.has("traits", "predictions_rewrite")) {
      std::string po = require_file(cfg, "traits", "predictions_orig");
      std::string pr = require_file(cfg, "traits", "predictions_rewrite");
      auto orig_preds = traitlab::load_predictions_csv(po);
      auto rw_preds = traitlab::load_predictions_csv(pr);
      traitlab::TraitLabels tl =
          traitlab::extract_trait_labels(originals, ec.trait);
      std::map<std::string, int> labels_by_doc;
      for (std::size_t i = 0; i < originals.size(); ++i)
        labels_by_doc[originals[i].id] = tl.codes[i];
      report = traitlab::score_external(orig_preds, rw_preds, labels_by_doc, ec);
    } else {
      report = traitlab::run_experiment(originals, rewrites, ec);
    }

    std::vector<std::string> outputs;
    outputs.push_back(write_table(dir, "trait_runs", traitlab::runs_csv(report), format));
    ojson rep = traits_report_json(cfg, report);
    rep["outputs"] = outputs;
    write_report(dir, "traits", rep);
    if (!report.aggregate_valid) {
      std::cerr << "warning: only " << report.successful << " successful runs ("
                << "minimum " << ec.min_successful
                << "); aggregate withheld, partial report written\n";
      return 3;
    }
    return 0;
  });
}

int cmd_lexicon(const Config& cfg) {
  return guarded([&]() -> int {
    fs::path dir = out_dir(cfg);
    Format format = parse_format(cfg);
    std::string lex_path = require_file(cfg, "lexicon", "path");
    std::string lex_fmt = lower(cfg.get("lexicon", "format", ""));
    lexicon::Format lf;
    if (lex_fmt.empty()) {
      if (lex_path.size() >= 4 && lex_path.substr(lex_path.size() - 4) == ".dic")
        lf = lexicon::Format::dic;
      else if (lex_path.size() >= 5 &&
               lex_path.substr(lex_path.size() - 5) == ".json")
        lf = lexicon::Format::json;
      else
        throw input_error("cannot infer lexicon format from " + lex_path +
                          "; set lexicon.format = dic or json");
    } else if (lex_fmt == "dic") {
      lf = lexicon::Format::dic;
    } else if (lex_fmt == "json") {
      lf = lexicon::Format::json;
    } else {
      throw input_error("lexicon.format must be dic or json");
    }
    lexicon::Lexicon lex = lexicon::load_lexicon(lex_path, lf);

    std::vector<corpus::Document> docs = load_docs(cfg, "documents", nullptr);
    bool skip_bad = load_options(cfg).skip_bad;
    auto tokenize_kept = [&](const std::vector<corpus::Document>& in,
                             std::vector<corpus::Document>* kept,
                             std::size_t* skipped) {
      std::vector<corpus::TokenStream> streams;
      for (const corpus::Document& d : in) {
        try {
          streams.push_back(corpus::tokenize(d));
          if (kept) kept->push_back(d);
        } catch (const Error&) {
          if (!skip_bad) throw;
          ++*skipped;
        }
      }
      return streams;
    };
    std::vector<corpus::Document> kept;
    std::size_t skipped = 0;
    std::vector<corpus::TokenStream> streams = tokenize_kept(docs, &kept, &skipped);
    lexicon::CategoryScores scores = lexicon::score_corpus(streams, lex);

    std::string scores_csv = "doc_id";
    for (const std::string& c : scores.categories)
      scores_csv += "," + csv_escape(c);
    scores_csv += "\n";
    for (std::size_t d = 0; d < scores.doc_ids.size(); ++d) {
      scores_csv += csv_escape(scores.doc_ids[d]);
      for (double v : scores.ratios[d]) scores_csv += "," + fmt(v);
      scores_csv += "\n";
    }
    std::vector<std::string> outputs;
    outputs.push_back(write_table(dir, "lexicon_scores", scores_csv, format));

    ojson rep = report_base("lexicon", cfg);
    rep["lexicon"] = lex.name;
    rep["categories"] = scores.categories.size();
    rep["documents"] = scores.doc_ids.size();
    rep["skipped_degenerate"] = skipped;

    if (cfg.has("lexicon", "trait")) {
      std::string trait = cfg.get("lexicon", "trait", "");
      bool any_num = false, any_str = false;
      std::vector<double> nums;
      std::vector<std::string> cats;
      for (const corpus::Document& d : kept) {
        auto it = d.labels.find(trait);
        if (it == d.labels.end())
          throw insufficient_error("document '" + d.id + "' lacks trait '" +
                                   trait + "'");
        if (std::holds_alternative<double>(it->second)) {
          any_num = true;
          nums.push_back(std::get<double>(it->second));
        } else {
          any_str = true;
          cats.push_back(std::get<std::string>(it->second));
        }
      }
      if (any_num && any_str)
        throw input_error("trait '" + trait + "' mixes numeric and categorical values");
      if (any_num) {
        lexicon::CorrelationTable table = lexicon::correlate_continuous(scores, nums);
        outputs.push_back(
            write_table(dir, "lexicon_battery", lexicon::correlation_csv(table), format));
        rep["battery"] = "continuous";
        rep["battery_rows"] = table.rows.size();
        rep["battery_skipped"] = table.skipped;
      } else {
        lexicon::GroupCompareTable table = lexicon::compare_categorical(scores, cats);
        outputs.push_back(
            write_table(dir, "lexicon_battery", lexicon::compare_csv(table), format));
        rep["battery"] = "categorical";
        rep["group_a"] = table.group_a;
        rep["group_b"] = table.group_b;
        rep["battery_rows"] = table.rows.size();
        rep["battery_skipped"] = table.skipped;
      }
    }

    if (cfg.has("io", "rewrites")) {
      std::vector<corpus::Document> rewrites = load_docs(cfg, "rewrites", nullptr);
      std::size_t skipped_rw = 0;
      std::vector<corpus::TokenStream> rw_streams =
          tokenize_kept(rewrites, nullptr, &skipped_rw);
      lexicon::CategoryScores rw_scores = lexicon::score_corpus(rw_streams, lex);
      std::vector<lexicon::ShiftRow> shift =
          lexicon::lexical_shift_report(scores, rw_scores);
      outputs.push_back(
          write_table(dir, "lexicon_shift", lexicon::shift_csv(shift), format));
      std::size_t low = 0;
      for (const lexicon::ShiftRow& r : shift)
        if (r.low_retention) ++low;
      rep["shift_rows"] = shift.size();
      rep["low_retention_categories"] = low;
      rep["rewrite_documents"] = rw_scores.doc_ids.size();
      rep["skipped_rewrites"] = skipped_rw;
    }

    rep["outputs"] = outputs;
    write_report(dir, "lexicon", rep);
    return 0;
  });
}

int cmd_synth(const Config& cfg) {
  return guarded([&]() -> int {
    fs::path dir = out_dir(cfg);
    std::string kind = lower(cfg.require("synth", "kind"));
    synthgen::SynthSpec spec;
    spec.docs_per_month =
        static_cast<std::size_t>(cfg.get_int("synth", "docs_per_month", 50));
    spec.months = static_cast<std::size_t>(cfg.get_int("synth", "months", 70));
    spec.onset_index =
        static_cast<std::size_t>(cfg.get_int("synth", "onset_index", 35));
    if (cfg.has("synth", "start"))
      spec.start = corpus::parse_month(cfg.get("synth", "start", ""));
    spec.pre_variance = cfg.get_num("synth", "pre_variance", 1.0);
    spec.post_variance = cfg.get_num("synth", "post_variance", 1.0);
    spec.rho = cfg.get_num("synth", "rho", 0.3);
    spec.marker_p = cfg.get_num("synth", "marker_p", 0.5);
    spec.strip_rate = cfg.get_num("synth", "strip_rate", 1.0);
    spec.authors = static_cast<std::size_t>(cfg.get_int("synth", "authors", 400));
    spec.doc_tokens =
        static_cast<std::size_t>(cfg.get_int("synth", "doc_tokens", 150));
    long long seed = cfg.get_int("synth", "seed",
                                 static_cast<long long>(cfg.seed()));
    if (seed < 0) throw input_error("synth.seed must be >= 0");
    spec.seed = static_cast<std::uint64_t>(seed);

    ojson rep = report_base("synth", cfg);
    rep["kind"] = kind;
    rep["seed"] = spec.seed;
    std::vector<std::string> outputs;
    if (kind == "shock") {
      std::vector<corpus::Document> docs = synthgen::generate_shock_corpus(spec);
      synthgen::write_jsonl((dir / "documents.jsonl").string(), docs);
      outputs.push_back("documents.jsonl");
      rep["documents"] = docs.size();
      rep["months"] = spec.months;
      rep["onset_index"] = spec.onset_index;
    } else if (kind == "trait") {
      synthgen::TraitCorpus tc = synthgen::generate_trait_corpus(spec);
      synthgen::write_jsonl((dir / "originals.jsonl").string(), tc.originals);
      synthgen::write_jsonl((dir / "rewrites.jsonl").string(), tc.rewrites);
      outputs.push_back("originals.jsonl");
      outputs.push_back("rewrites.jsonl");
      rep["trait"] = tc.trait;
      rep["authors"] = spec.authors;
    } else if (kind == "lagged") {
      long long length = cfg.get_int("synth", "length", 120);
      long long lag = cfg.get_int("synth", "lag", 3);
      double coupling = cfg.get_num("synth", "coupling", 0.9);
      double noise_sd = cfg.get_num("synth", "noise_sd", 1.0);
      if (length < 1 || lag < 1)
        throw input_error("synth.length and synth.lag must be >= 1");
      synthgen::LaggedPair pair = synthgen::generate_lagged_series(
          spec.seed, static_cast<std::size_t>(length),
          static_cast<std::size_t>(lag), coupling, noise_sd);
      std::string csv = "t,x,y\n";
      for (std::size_t t = 0; t < pair.x.size(); ++t)
        csv += std::to_string(t) + "," + fmt(pair.x[t]) + "," + fmt(pair.y[t]) + "\n";
      outputs.push_back(write_table(dir, "lagged", csv, parse_format(cfg)));
      rep["length"] = length;
      rep["lag"] = lag;
    } else {
      throw input_error("synth.kind must be shock, trait, or lagged");
    }
    rep["outputs"] = outputs;
    write_report(dir, "synth", rep);
    return 0;
  });
}

int run_command(const std::string& name, const Config& cfg) {
  if (name == "features") return cmd_features(cfg);
  if (name == "trend") return cmd_trend(cfg);
  if (name == "compare") return cmd_compare(cfg);
  if (name == "similarity") return cmd_similarity(cfg);
  if (name == "traits") return cmd_traits(cfg);
  if (name == "lexicon") return cmd_lexicon(cfg);
  if (name == "synth") return cmd_synth(cfg);
  std::cerr << "error: unknown command " << name << "\n";
  return 2;
}

}  // namespace styvar::pipeline
