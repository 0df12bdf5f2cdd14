#include "styvar/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "styvar/error.hpp"
#include "styvar/rng.hpp"

namespace styvar::synthgen {

namespace {

constexpr std::size_t kShockVocab = 500;
constexpr std::size_t kTraitVocab = 300;
constexpr double kMonthNoiseSd = 0.10;  // sd of the AR(1) log-scale wobble
constexpr std::size_t kMarkersPerDoc = 3;
constexpr std::size_t kMarkerVocab = 5;

// Cumulative Zipf weights over ranks 1..v with exponent s.
std::vector<double> zipf_cumulative(std::size_t v, double s) {
  std::vector<double> cum(v);
  double total = 0.0;
  for (std::size_t r = 0; r < v; ++r) {
    total += std::pow(static_cast<double>(r + 1), -s);
    cum[r] = total;
  }
  for (double& c : cum) c /= total;
  return cum;
}

std::size_t zipf_draw(const std::vector<double>& cum, Rng& rng) {
  double u = rng.uniform();
  return static_cast<std::size_t>(
      std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
}

// Tokens must be purely alphabetic to survive the tokenizer.
std::string alpha_id(std::size_t n) {
  std::string s;
  do {
    s += static_cast<char>('a' + n % 26);
    n /= 26;
  } while (n);
  return s;
}

corpus::Date month_date(const corpus::Date& start, std::size_t offset, int day) {
  int idx = start.month_index() + static_cast<int>(offset);
  return corpus::Date{idx / 12, idx % 12 + 1, day};
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

}  // namespace

void validate(const SynthSpec& spec) {
  if (spec.pre_variance < 0.0 || spec.post_variance < 0.0)
    throw input_error("synth variances must be >= 0");
  if (!(spec.rho > -1.0 && spec.rho < 1.0))
    throw input_error("synth rho must lie in (-1, 1)");
  if (spec.marker_p < 0.0 || spec.marker_p > 1.0)
    throw input_error("synth marker probability must lie in [0, 1]");
  if (spec.strip_rate < 0.0 || spec.strip_rate > 1.0)
    throw input_error("synth strip rate must lie in [0, 1]");
  if (spec.months == 0 || spec.docs_per_month == 0)
    throw input_error("synth span and docs per month must be positive");
  if (spec.doc_tokens < 2 * kMarkersPerDoc)
    throw input_error("synth doc_tokens too small");
}

std::vector<corpus::Document> generate_shock_corpus(const SynthSpec& spec) {
  validate(spec);
  if (spec.onset_index == 0 || spec.onset_index >= spec.months)
    throw input_error("degenerate span: onset leaves no pre or post months");
  Rng rng(derive_seed(spec.seed, "shock"));
  std::vector<corpus::Document> docs;
  docs.reserve(spec.months * spec.docs_per_month);
  double wobble = 0.0;
  double innov_sd = kMonthNoiseSd * std::sqrt(1.0 - spec.rho * spec.rho);
  for (std::size_t m = 0; m < spec.months; ++m) {
    if (m == 0)
      wobble = kMonthNoiseSd * rng.normal();
    else
      wobble = spec.rho * wobble + innov_sd * rng.normal();
    double base = m < spec.onset_index ? spec.pre_variance : spec.post_variance;
    double month_sd = std::sqrt(base) * std::exp(wobble);
    for (std::size_t i = 0; i < spec.docs_per_month; ++i) {
      double style = month_sd * rng.normal();
      // logistic squash keeps the exponent in (1.05, 1.95)
      double exponent = 1.05 + 0.9 / (1.0 + std::exp(-style));
      std::vector<double> cum = zipf_cumulative(kShockVocab, exponent);
      std::vector<std::string> tokens;
      tokens.reserve(spec.doc_tokens);
      for (std::size_t t = 0; t < spec.doc_tokens; ++t)
        tokens.push_back("w" + alpha_id(zipf_draw(cum, rng)));
      corpus::Document d;
      char id[32];
      std::snprintf(id, sizeof(id), "shock-%04zu-%04zu", m, i);
      d.id = id;
      d.text = join(tokens);
      d.date = month_date(spec.start, m, 1 + static_cast<int>(rng.below(28)));
      docs.push_back(std::move(d));
    }
  }
  return docs;
}

TraitCorpus generate_trait_corpus(const SynthSpec& spec) {
  validate(spec);
  if (spec.marker_p == 0.0 && spec.strip_rate > 0.0)
    throw input_error("marker probability 0 with stripping requested");
  if (spec.authors < 4) throw input_error("trait corpus needs at least 4 authors");
  Rng rng(derive_seed(spec.seed, "trait"));
  std::vector<double> cum = zipf_cumulative(kTraitVocab, 1.2);
  TraitCorpus out;
  out.trait = "style_class";
  std::size_t base_tokens = spec.doc_tokens - kMarkersPerDoc;
  for (std::size_t a = 0; a < spec.authors; ++a) {
    bool class_one = a % 2 == 1;  // alternating keeps the split balanced
    std::vector<std::string> tokens;
    tokens.reserve(spec.doc_tokens);
    for (std::size_t t = 0; t < base_tokens; ++t)
      tokens.push_back("c" + alpha_id(zipf_draw(cum, rng)));
    // Each class has its own marker vocabulary; a document carries markers
    // with probability p, padded with ordinary tokens otherwise so length
    // never leaks the class.
    bool marked = rng.uniform() < spec.marker_p;
    std::vector<std::size_t> marker_slots;
    for (std::size_t k = 0; k < kMarkersPerDoc; ++k) {
      if (marked) {
        std::size_t v = rng.below(kMarkerVocab);
        tokens.push_back((class_one ? "amk" : "bmk") + alpha_id(v));
        marker_slots.push_back(tokens.size() - 1);
      } else {
        tokens.push_back("c" + alpha_id(zipf_draw(cum, rng)));
      }
    }
    char author[16];
    std::snprintf(author, sizeof(author), "a%04zu", a);
    corpus::Document orig;
    orig.id = std::string(author) + "-o";
    orig.text = join(tokens);
    orig.date = corpus::Date{2024, 1, 1};
    orig.author_id = author;
    orig.labels[out.trait] = std::string(class_one ? "beta" : "alpha");
    std::vector<std::string> rewritten = tokens;
    for (std::size_t slot : marker_slots) {
      if (rng.uniform() < spec.strip_rate)
        rewritten[slot] = "nt" + alpha_id(rng.below(kMarkerVocab));
    }
    corpus::Document rw;
    rw.id = std::string(author) + "-r";
    rw.text = join(rewritten);
    rw.date = corpus::Date{2024, 2, 1};
    rw.author_id = author;
    rw.rewrite_of = orig.id;
    rw.llm_tag = "synth-llm";
    rw.prompt_tag = "R";
    out.originals.push_back(std::move(orig));
    out.rewrites.push_back(std::move(rw));
  }
  return out;
}

LaggedPair generate_lagged_series(std::uint64_t seed, std::size_t length,
                                  std::size_t lag, double coupling,
                                  double noise_sd) {
  if (lag == 0) throw input_error("lag must be >= 1");
  if (noise_sd < 0.0) throw input_error("noise sd must be >= 0");
  if (length < lag + 10)
    throw insufficient_error("series too short for the requested lag");
  Rng rng(derive_seed(seed, "lagged"));
  LaggedPair out;
  out.x.resize(length);
  out.y.resize(length);
  for (std::size_t t = 0; t < length; ++t) out.x[t] = rng.normal();
  for (std::size_t t = 0; t < length; ++t) {
    double driven = t >= lag ? coupling * out.x[t - lag] : 0.0;
    out.y[t] = driven + noise_sd * rng.normal();
  }
  return out;
}

std::string to_jsonl(const std::vector<corpus::Document>& docs) {
  std::string out;
  for (const corpus::Document& d : docs) {
    nlohmann::ordered_json j;
    j["id"] = d.id;
    j["date"] = d.date.month_key() + "-" +
                (d.date.day < 10 ? "0" : "") + std::to_string(d.date.day);
    j["text"] = d.text;
    if (d.author_id) j["author"] = *d.author_id;
    if (!d.labels.empty()) {
      nlohmann::ordered_json labels;
      for (const auto& [key, value] : d.labels) {
        if (std::holds_alternative<double>(value))
          labels[key] = std::get<double>(value);
        else
          labels[key] = std::get<std::string>(value);
      }
      j["labels"] = labels;
    }
    if (d.embedding) j["embedding"] = *d.embedding;
    if (d.detector_score) j["detector_score"] = *d.detector_score;
    if (d.rewrite_of) j["rewrite_of"] = *d.rewrite_of;
    if (d.llm_tag) j["llm"] = *d.llm_tag;
    if (d.prompt_tag) j["prompt"] = *d.prompt_tag;
    out += j.dump();
    out += '\n';
  }
  return out;
}

void write_jsonl(const std::string& path, const std::vector<corpus::Document>& docs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write " + path);
  out << to_jsonl(docs);
  if (!out) throw input_error("failed writing " + path);
}

}  // namespace styvar::synthgen
