#ifndef STYVAR_CORPUS_HPP
#define STYVAR_CORPUS_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace styvar::corpus {

struct Date {
  int year = 0;
  int month = 0;  // 1..12
  int day = 0;    // 1..31

  // Months since year 0, for binning and ordering.
  int month_index() const { return year * 12 + (month - 1); }
  std::string month_key() const;  // "YYYY-MM"
  auto operator<=>(const Date&) const = default;
};

// Parses "YYYY-MM-DD"; throws on malformed input.
Date parse_date(const std::string& s);
// Parses "YYYY-MM" into a Date with day = 1.
Date parse_month(const std::string& s);

using LabelValue = std::variant<double, std::string>;

struct Document {
  std::string id;
  std::string text;
  Date date;
  std::optional<std::string> author_id;
  std::map<std::string, LabelValue> labels;
  std::optional<std::vector<double>> embedding;
  std::optional<double> detector_score;  // in [0,1]
  std::optional<std::string> rewrite_of;
  std::optional<std::string> llm_tag;
  std::optional<std::string> prompt_tag;  // "R" or "SG"
};

struct TokenStream {
  std::vector<std::string> tokens;
  std::string source_id;
};

struct SentenceParse {
  std::vector<int> heads;  // 1-based head per token, 0 = root
  std::string source_id;
};

struct LoadOptions {
  std::size_t min_words = 0;
  bool skip_bad = false;  // skip malformed lines instead of failing
};

struct LoadReport {
  std::size_t kept = 0;
  std::size_t dropped_short = 0;
  std::size_t skipped_bad = 0;
};

std::vector<Document> load_documents(const std::string& path,
                                     const LoadOptions& opt,
                                     LoadReport* report = nullptr);
std::vector<Document> load_documents(const std::string& path,
                                     std::size_t min_words);

// Lowercased word tokens: maximal letter runs, apostrophes kept when
// flanked by letters on both sides. Digits and punctuation never appear.
std::vector<std::string> tokenize_text(const std::string& text);
TokenStream tokenize(const Document& doc);

std::map<std::string, std::vector<SentenceParse>> load_conllu(
    const std::string& path);

struct RewritePairing {
  std::vector<std::pair<Document, Document>> pairs;  // (original, rewrite)
  std::vector<std::string> unpaired_original_ids;
};

RewritePairing pair_rewrites(const std::vector<Document>& originals,
                             const std::vector<Document>& rewrites);

}  // namespace styvar::corpus

#endif
