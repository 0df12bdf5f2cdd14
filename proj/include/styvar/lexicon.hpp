#ifndef STYVAR_LEXICON_HPP
#define STYVAR_LEXICON_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "styvar/corpus.hpp"

namespace styvar::lexicon {

// Patterns are literal words, trailing-* prefixes, or two-word phrases
// ("good morning"); wildcards anywhere else are rejected at load.
struct Lexicon {
  std::string name;
  std::map<std::string, std::vector<std::string>> categories;
};

enum class Format { dic, json };

Lexicon load_lexicon(const std::string& path, Format format);

struct CategoryScores {
  std::vector<std::string> categories;  // column order
  std::vector<std::string> doc_ids;
  std::vector<std::vector<double>> ratios;  // [doc][category]
};

// Per category: tokens matching any pattern (each token counted once per
// category; phrase matches add one hit) divided by total token count.
std::vector<double> category_ratios(const corpus::TokenStream& tokens,
                                    const Lexicon& lex);

CategoryScores score_corpus(const std::vector<corpus::TokenStream>& docs,
                            const Lexicon& lex);

// Column z-scores over the scored corpus; constant columns reported
// separately and left NaN.
struct ZScoredScores {
  CategoryScores scores;  // same shape, z-scored cells
  std::vector<std::string> constant_categories;
};
ZScoredScores zscore_scores(const CategoryScores& scores);

struct CorrelationRow {
  std::string category;
  double r = 0.0;
  double p_raw = 1.0;
  double p_adjusted = 1.0;
  bool significant = false;  // at alpha = .05 after adjustment
};

struct CorrelationTable {
  std::vector<CorrelationRow> rows;
  std::vector<std::string> skipped;  // constant categories, with reason
};

// Pearson r of each category's z-scored ratios against the z-scored trait,
// Bonferroni-adjusted across the battery.
CorrelationTable correlate_continuous(const CategoryScores& scores,
                                      const std::vector<double>& trait);

struct GroupCompareRow {
  std::string category;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double t = 0.0;
  double p_raw = 1.0;
  double p_adjusted = 1.0;
  bool significant = false;
};

struct GroupCompareTable {
  std::string group_a;
  std::string group_b;
  std::vector<GroupCompareRow> rows;
  std::vector<std::string> skipped;
};

// Welch t per category between exactly two trait groups.
GroupCompareTable compare_categorical(const CategoryScores& scores,
                                      const std::vector<std::string>& trait);

struct ShiftRow {
  std::string category;
  double var_orig = 0.0;      // variance of min-max-scaled ratios
  double var_rewrite = 0.0;
  double u_stat = 0.0;
  double u_p = 1.0;
  double levene_stat = 0.0;
  double levene_p = 1.0;
  int direction = 0;          // -1 variance fell, +1 rose (significant only)
  double retention = 1.0;     // fraction of rewrites with a nonzero ratio
  bool low_retention = false; // retention <= 10%
  bool constant = false;      // category constant across both corpora
};

// Appendix-style per-category shift battery between paired corpora scored
// on the same lexicon: min-max scaling over the combined values, Mann-
// Whitney distribution shift, Levene variance change with direction.
std::vector<ShiftRow> lexical_shift_report(const CategoryScores& orig,
                                           const CategoryScores& rewritten);

std::string correlation_csv(const CorrelationTable& table);
std::string compare_csv(const GroupCompareTable& table);
std::string shift_csv(const std::vector<ShiftRow>& rows);

}  // namespace styvar::lexicon

#endif
