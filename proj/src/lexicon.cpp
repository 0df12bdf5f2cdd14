#include "styvar/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "styvar/error.hpp"
#include "styvar/stats.hpp"

namespace styvar::lexicon {

namespace {

std::string lower_ascii(std::string s) {
  for (char& c : s)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string field;
  while (in >> field) out.push_back(field);
  return out;
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

// Splits a pattern into words and enforces the wildcard rules: '*' may only
// terminate a single-word pattern.
std::vector<std::string> check_pattern(const std::string& pattern,
                                       const std::string& where) {
  std::vector<std::string> words = split_ws(pattern);
  if (words.empty())
    throw input_error(where + ": empty pattern");
  if (words.size() > 2)
    throw input_error(where + ": phrases longer than two words are not supported: '" +
                      pattern + "'");
  for (std::size_t w = 0; w < words.size(); ++w) {
    const std::string& word = words[w];
    std::size_t star = word.find('*');
    if (star == std::string::npos) continue;
    bool trailing = star == word.size() - 1;
    if (!trailing || words.size() > 1 || word.size() == 1)
      throw input_error(where + ": wildcard only supported as a trailing prefix: '" +
                        pattern + "'");
  }
  return words;
}

void add_pattern(Lexicon& lex, const std::string& category,
                 const std::string& pattern, const std::string& where) {
  check_pattern(pattern, where);
  lex.categories[category].push_back(lower_ascii(pattern));
}

Lexicon load_dic(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open lexicon: " + path);
  Lexicon lex;
  lex.name = path;
  std::unordered_map<std::string, std::string> id_to_name;
  std::set<std::string> seen_names;
  int percent_seen = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string where = path + " line " + std::to_string(line_no);
    std::vector<std::string> fields = split_ws(line);
    if (fields.empty()) continue;
    if (fields.size() == 1 && fields[0] == "%") {
      ++percent_seen;
      if (percent_seen > 2) throw input_error(where + ": stray % delimiter");
      continue;
    }
    if (percent_seen == 0)
      throw input_error(where + ": expected % header before content");
    if (percent_seen == 1) {
      if (fields.size() != 2 || !all_digits(fields[0]))
        throw input_error(where + ": malformed header line (want 'id name')");
      if (id_to_name.count(fields[0]))
        throw input_error(where + ": duplicate category id " + fields[0]);
      if (!seen_names.insert(fields[1]).second)
        throw input_error(where + ": duplicate category name " + fields[1]);
      id_to_name[fields[0]] = fields[1];
      lex.categories[fields[1]];  // reserve even if no words follow
      continue;
    }
    // body: leading pattern words, trailing category ids
    std::size_t first_id = fields.size();
    while (first_id > 0 && all_digits(fields[first_id - 1])) --first_id;
    if (first_id == 0 || first_id == fields.size())
      throw input_error(where + ": expected 'pattern id [id ...]'");
    std::string pattern = fields[0];
    for (std::size_t w = 1; w < first_id; ++w) pattern += " " + fields[w];
    for (std::size_t f = first_id; f < fields.size(); ++f) {
      auto it = id_to_name.find(fields[f]);
      if (it == id_to_name.end())
        throw input_error(where + ": undeclared category id " + fields[f]);
      add_pattern(lex, it->second, pattern, where);
    }
  }
  if (percent_seen < 2)
    throw input_error(path + ": missing % header delimiters");
  if (lex.categories.empty()) throw input_error(path + ": no categories");
  return lex;
}

Lexicon load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open lexicon: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw input_error(path + ": invalid json: " + e.what());
  }
  if (!doc.is_object()) throw input_error(path + ": expected a json object");
  Lexicon lex;
  lex.name = path;
  const nlohmann::json* cats = &doc;
  if (doc.contains("categories")) {
    if (!doc["categories"].is_object())
      throw input_error(path + ": categories must be an object");
    cats = &doc["categories"];
    if (doc.contains("name") && doc["name"].is_string())
      lex.name = doc["name"].get<std::string>();
  }
  for (auto it = cats->begin(); it != cats->end(); ++it) {
    if (!it.value().is_array())
      throw input_error(path + ": category '" + it.key() +
                        "' must be an array of patterns");
    lex.categories[it.key()];
    for (const auto& p : it.value()) {
      if (!p.is_string())
        throw input_error(path + ": non-string pattern in '" + it.key() + "'");
      add_pattern(lex, it.key(), p.get<std::string>(), path + " category " + it.key());
    }
  }
  if (lex.categories.empty()) throw input_error(path + ": no categories");
  return lex;
}

struct Matcher {
  std::unordered_set<std::string> exact;
  std::unordered_set<std::string> prefixes;
  std::size_t max_prefix = 0;
  std::set<std::pair<std::string, std::string>> phrases;

  bool matches_token(const std::string& tok) const {
    if (exact.count(tok)) return true;
    std::size_t limit = std::min(max_prefix, tok.size());
    for (std::size_t len = 1; len <= limit; ++len) {
      if (prefixes.count(tok.substr(0, len))) return true;
    }
    return false;
  }
};

Matcher build_matcher(const std::vector<std::string>& patterns) {
  Matcher m;
  for (const std::string& p : patterns) {
    std::size_t space = p.find(' ');
    if (space != std::string::npos) {
      m.phrases.emplace(p.substr(0, space), p.substr(space + 1));
    } else if (!p.empty() && p.back() == '*') {
      std::string stem = p.substr(0, p.size() - 1);
      m.prefixes.insert(stem);
      m.max_prefix = std::max(m.max_prefix, stem.size());
    } else {
      m.exact.insert(p);
    }
  }
  return m;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
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

std::vector<double> column(const CategoryScores& scores, std::size_t c) {
  std::vector<double> out(scores.doc_ids.size());
  for (std::size_t d = 0; d < out.size(); ++d) out[d] = scores.ratios[d][c];
  return out;
}

}  // namespace

Lexicon load_lexicon(const std::string& path, Format format) {
  return format == Format::dic ? load_dic(path) : load_json(path);
}

std::vector<double> category_ratios(const corpus::TokenStream& tokens,
                                    const Lexicon& lex) {
  if (tokens.tokens.empty())
    throw insufficient_error("no tokens to score: " + tokens.source_id);
  std::vector<double> out;
  out.reserve(lex.categories.size());
  double total = static_cast<double>(tokens.tokens.size());
  for (const auto& [name, patterns] : lex.categories) {
    Matcher m = build_matcher(patterns);
    std::size_t hits = 0;
    for (const std::string& tok : tokens.tokens)
      if (m.matches_token(tok)) ++hits;
    for (std::size_t i = 0; i + 1 < tokens.tokens.size(); ++i)
      if (m.phrases.count({tokens.tokens[i], tokens.tokens[i + 1]})) ++hits;
    hits = std::min(hits, tokens.tokens.size());
    out.push_back(static_cast<double>(hits) / total);
  }
  return out;
}

CategoryScores score_corpus(const std::vector<corpus::TokenStream>& docs,
                            const Lexicon& lex) {
  if (docs.empty()) throw insufficient_error("no documents to score");
  CategoryScores out;
  for (const auto& [name, patterns] : lex.categories) out.categories.push_back(name);
  for (const corpus::TokenStream& ts : docs) {
    out.doc_ids.push_back(ts.source_id);
    out.ratios.push_back(category_ratios(ts, lex));
  }
  return out;
}

ZScoredScores zscore_scores(const CategoryScores& scores) {
  if (scores.doc_ids.size() < 2)
    throw insufficient_error("need at least 2 documents to z-score");
  ZScoredScores out;
  out.scores = scores;
  double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t c = 0; c < scores.categories.size(); ++c) {
    std::vector<double> col = column(scores, c);
    double sd = stats::sample_sd(col);
    if (sd == 0.0) {
      out.constant_categories.push_back(scores.categories[c]);
      for (auto& row : out.scores.ratios) row[c] = nan;
      continue;
    }
    double mu = stats::mean(col);
    for (std::size_t d = 0; d < col.size(); ++d)
      out.scores.ratios[d][c] = (col[d] - mu) / sd;
  }
  return out;
}

CorrelationTable correlate_continuous(const CategoryScores& scores,
                                      const std::vector<double>& trait) {
  if (trait.size() != scores.doc_ids.size())
    throw input_error("trait values do not align with scored documents");
  if (trait.size() < 3)
    throw insufficient_error("need at least 3 documents to correlate");
  if (stats::sample_sd(trait) == 0.0)
    throw input_error("trait is constant");
  std::vector<double> trait_z = stats::zscores(trait);
  CorrelationTable table;
  std::vector<double> raw_ps;
  for (std::size_t c = 0; c < scores.categories.size(); ++c) {
    std::vector<double> col = column(scores, c);
    if (stats::sample_sd(col) == 0.0) {
      table.skipped.push_back(scores.categories[c] + ": constant scores");
      continue;
    }
    stats::TestResult r = stats::pearson_r(stats::zscores(col), trait_z);
    CorrelationRow row;
    row.category = scores.categories[c];
    row.r = r.statistic;
    row.p_raw = r.p_value;
    table.rows.push_back(row);
    raw_ps.push_back(r.p_value);
  }
  std::vector<double> adj = stats::adjust_pvalues(raw_ps, stats::Adjust::bonferroni);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    table.rows[i].p_adjusted = adj[i];
    table.rows[i].significant = adj[i] < 0.05;
  }
  return table;
}

GroupCompareTable compare_categorical(const CategoryScores& scores,
                                      const std::vector<std::string>& trait) {
  if (trait.size() != scores.doc_ids.size())
    throw input_error("trait labels do not align with scored documents");
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t d = 0; d < trait.size(); ++d) groups[trait[d]].push_back(d);
  if (groups.size() > 2)
    throw input_error("more than two trait groups: use kruskal_wallis instead");
  if (groups.size() < 2)
    throw input_error("need exactly two trait groups, got " +
                      std::to_string(groups.size()));
  for (const auto& [label, idx] : groups) {
    if (idx.size() < 2)
      throw insufficient_error("trait group '" + label + "' has fewer than 2 documents");
  }
  GroupCompareTable table;
  auto it = groups.begin();
  table.group_a = it->first;
  const std::vector<std::size_t>& ia = it->second;
  ++it;
  table.group_b = it->first;
  const std::vector<std::size_t>& ib = it->second;
  std::vector<double> raw_ps;
  for (std::size_t c = 0; c < scores.categories.size(); ++c) {
    std::vector<double> a, b;
    for (std::size_t d : ia) a.push_back(scores.ratios[d][c]);
    for (std::size_t d : ib) b.push_back(scores.ratios[d][c]);
    if (stats::sample_variance(a) == 0.0 && stats::sample_variance(b) == 0.0) {
      table.skipped.push_back(scores.categories[c] + ": constant in both groups");
      continue;
    }
    stats::TestResult t = stats::t_test(a, b, stats::TTestMode::welch);
    GroupCompareRow row;
    row.category = scores.categories[c];
    row.mean_a = stats::mean(a);
    row.mean_b = stats::mean(b);
    row.t = t.statistic;
    row.p_raw = t.p_value;
    table.rows.push_back(row);
    raw_ps.push_back(t.p_value);
  }
  std::vector<double> adj = stats::adjust_pvalues(raw_ps, stats::Adjust::bonferroni);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    table.rows[i].p_adjusted = adj[i];
    table.rows[i].significant = adj[i] < 0.05;
  }
  return table;
}

std::vector<ShiftRow> lexical_shift_report(const CategoryScores& orig,
                                           const CategoryScores& rewritten) {
  if (orig.categories != rewritten.categories)
    throw input_error("category absent in one corpus: score both with the same lexicon");
  if (orig.doc_ids.size() < 2 || rewritten.doc_ids.size() < 2)
    throw insufficient_error("need at least 2 documents per corpus for the shift report");
  std::vector<ShiftRow> rows;
  for (std::size_t c = 0; c < orig.categories.size(); ++c) {
    ShiftRow row;
    row.category = orig.categories[c];
    std::vector<double> a = column(orig, c);
    std::vector<double> b = column(rewritten, c);
    std::size_t kept = 0;
    for (double v : b)
      if (v > 0.0) ++kept;
    row.retention = static_cast<double>(kept) / static_cast<double>(b.size());
    row.low_retention = row.retention <= 0.10;
    double lo = a[0], hi = a[0];
    for (double v : a) { lo = std::min(lo, v); hi = std::max(hi, v); }
    for (double v : b) { lo = std::min(lo, v); hi = std::max(hi, v); }
    if (hi == lo) {
      row.constant = true;
      rows.push_back(row);
      continue;
    }
    auto scale = [lo, hi](std::vector<double>& v) {
      for (double& x : v) x = (x - lo) / (hi - lo);
    };
    scale(a);
    scale(b);
    row.var_orig = stats::sample_variance(a);
    row.var_rewrite = stats::sample_variance(b);
    stats::TestResult u = stats::mann_whitney_u(a, b);
    row.u_stat = u.statistic;
    row.u_p = u.p_value;
    stats::TestResult lev = stats::levene({a, b});
    row.levene_stat = lev.statistic;
    row.levene_p = lev.p_value;
    if (lev.p_value < 0.05)
      row.direction = row.var_rewrite < row.var_orig ? -1 : 1;
    rows.push_back(row);
  }
  return rows;
}

std::string correlation_csv(const CorrelationTable& table) {
  std::string out = "category,r,p_raw,p_adjusted,significant\n";
  for (const CorrelationRow& row : table.rows) {
    out += csv_escape(row.category) + "," + fmt(row.r) + "," + fmt(row.p_raw) + "," +
           fmt(row.p_adjusted) + "," + (row.significant ? "1" : "0") + "\n";
  }
  return out;
}

std::string compare_csv(const GroupCompareTable& table) {
  std::string out = "category,mean_" + csv_escape(table.group_a) + ",mean_" +
                    csv_escape(table.group_b) + ",t,p_raw,p_adjusted,significant\n";
  for (const GroupCompareRow& row : table.rows) {
    out += csv_escape(row.category) + "," + fmt(row.mean_a) + "," + fmt(row.mean_b) +
           "," + fmt(row.t) + "," + fmt(row.p_raw) + "," + fmt(row.p_adjusted) + "," +
           (row.significant ? "1" : "0") + "\n";
  }
  return out;
}

std::string shift_csv(const std::vector<ShiftRow>& rows) {
  std::string out =
      "category,var_orig,var_rewrite,u,u_p,levene,levene_p,direction,"
      "retention,low_retention,constant\n";
  for (const ShiftRow& row : rows) {
    const char* dir = row.direction < 0 ? "down" : row.direction > 0 ? "up" : "none";
    out += csv_escape(row.category) + "," + fmt(row.var_orig) + "," +
           fmt(row.var_rewrite) + "," + fmt(row.u_stat) + "," + fmt(row.u_p) + "," +
           fmt(row.levene_stat) + "," + fmt(row.levene_p) + "," + dir + "," +
           fmt(row.retention) + "," + (row.low_retention ? "1" : "0") + "," +
           (row.constant ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace styvar::lexicon
