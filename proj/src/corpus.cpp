#include "styvar/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "styvar/error.hpp"

namespace styvar::corpus {

using nlohmann::json;

std::string Date::month_key() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
  return buf;
}

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

int days_in_month(int year, int month) {
  static const int base[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2) {
    bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return leap ? 29 : 28;
  }
  return base[month - 1];
}

}  // namespace

Date parse_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-')
    throw input_error("bad date '" + s + "' (expected YYYY-MM-DD)");
  std::string ys = s.substr(0, 4), ms = s.substr(5, 2), ds = s.substr(8, 2);
  if (!all_digits(ys) || !all_digits(ms) || !all_digits(ds))
    throw input_error("bad date '" + s + "' (expected YYYY-MM-DD)");
  Date d{std::stoi(ys), std::stoi(ms), std::stoi(ds)};
  if (d.month < 1 || d.month > 12 || d.day < 1 ||
      d.day > days_in_month(d.year, d.month))
    throw input_error("date out of range: '" + s + "'");
  return d;
}

Date parse_month(const std::string& s) {
  if (s.size() != 7 || s[4] != '-')
    throw input_error("bad month '" + s + "' (expected YYYY-MM)");
  std::string ys = s.substr(0, 4), ms = s.substr(5, 2);
  if (!all_digits(ys) || !all_digits(ms))
    throw input_error("bad month '" + s + "' (expected YYYY-MM)");
  Date d{std::stoi(ys), std::stoi(ms), 1};
  if (d.month < 1 || d.month > 12)
    throw input_error("month out of range: '" + s + "'");
  return d;
}

namespace {

Document parse_record(const json& j, std::size_t line_no) {
  auto fail = [line_no](const std::string& what) -> Error {
    return input_error("line " + std::to_string(line_no) + ": " + what);
  };
  if (!j.is_object()) throw fail("record is not an object");
  Document d;
  if (!j.contains("id") || !j["id"].is_string() ||
      j["id"].get<std::string>().empty())
    throw fail("missing or empty 'id'");
  d.id = j["id"].get<std::string>();
  if (!j.contains("text") || !j["text"].is_string())
    throw fail("record '" + d.id + "' missing 'text'");
  d.text = j["text"].get<std::string>();
  std::string trimmed = d.text;
  trimmed.erase(0, trimmed.find_first_not_of(" \t\r\n"));
  if (trimmed.empty()) throw fail("record '" + d.id + "' has empty text");
  if (!j.contains("date") || !j["date"].is_string())
    throw fail("record '" + d.id + "' missing 'date'");
  try {
    d.date = parse_date(j["date"].get<std::string>());
  } catch (const Error& e) {
    throw fail("record '" + d.id + "': " + e.what());
  }
  if (j.contains("author") && j["author"].is_string())
    d.author_id = j["author"].get<std::string>();
  if (j.contains("labels")) {
    if (!j["labels"].is_object())
      throw fail("record '" + d.id + "': 'labels' must be an object");
    for (auto it = j["labels"].begin(); it != j["labels"].end(); ++it) {
      if (it.value().is_number())
        d.labels[it.key()] = it.value().get<double>();
      else if (it.value().is_string())
        d.labels[it.key()] = it.value().get<std::string>();
      else
        throw fail("record '" + d.id + "': label '" + it.key() +
                   "' must be number or string");
    }
  }
  if (j.contains("embedding")) {
    if (!j["embedding"].is_array())
      throw fail("record '" + d.id + "': 'embedding' must be an array");
    std::vector<double> emb;
    for (const auto& v : j["embedding"]) {
      if (!v.is_number())
        throw fail("record '" + d.id + "': non-numeric embedding entry");
      emb.push_back(v.get<double>());
    }
    d.embedding = std::move(emb);
  }
  if (j.contains("detector_score")) {
    if (!j["detector_score"].is_number())
      throw fail("record '" + d.id + "': 'detector_score' must be a number");
    double s = j["detector_score"].get<double>();
    if (s < 0.0 || s > 1.0)
      throw fail("record '" + d.id + "': detector_score outside [0,1]");
    d.detector_score = s;
  }
  if (j.contains("rewrite_of") && j["rewrite_of"].is_string())
    d.rewrite_of = j["rewrite_of"].get<std::string>();
  if (j.contains("llm") && j["llm"].is_string())
    d.llm_tag = j["llm"].get<std::string>();
  if (j.contains("prompt") && j["prompt"].is_string())
    d.prompt_tag = j["prompt"].get<std::string>();
  return d;
}

}  // namespace

std::vector<Document> load_documents(const std::string& path,
                                     const LoadOptions& opt,
                                     LoadReport* report) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open document file: " + path);
  std::vector<Document> docs;
  std::set<std::string> seen;
  LoadReport rep;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Document d;
    try {
      json j = json::parse(line, nullptr, true);
      d = parse_record(j, line_no);
    } catch (const json::exception& e) {
      if (opt.skip_bad) {
        ++rep.skipped_bad;
        continue;
      }
      throw input_error("line " + std::to_string(line_no) +
                        ": invalid record: " + e.what());
    } catch (const Error&) {
      if (opt.skip_bad) {
        ++rep.skipped_bad;
        continue;
      }
      throw;
    }
    if (!seen.insert(d.id).second)
      throw input_error("line " + std::to_string(line_no) +
                        ": duplicate document id '" + d.id + "'");
    if (opt.min_words > 0 &&
        tokenize_text(d.text).size() < opt.min_words) {
      ++rep.dropped_short;
      continue;
    }
    docs.push_back(std::move(d));
    ++rep.kept;
  }
  if (report) *report = rep;
  return docs;
}

std::vector<Document> load_documents(const std::string& path,
                                     std::size_t min_words) {
  LoadOptions opt;
  opt.min_words = min_words;
  return load_documents(path, opt, nullptr);
}

namespace {

// Minimal UTF-8 decoding; malformed bytes are treated as non-letters.
std::uint32_t decode_utf8(const std::string& s, std::size_t& i) {
  unsigned char c = static_cast<unsigned char>(s[i]);
  if (c < 0x80) {
    ++i;
    return c;
  }
  int extra;
  std::uint32_t cp;
  if ((c & 0xE0) == 0xC0) {
    extra = 1;
    cp = c & 0x1F;
  } else if ((c & 0xF0) == 0xE0) {
    extra = 2;
    cp = c & 0x0F;
  } else if ((c & 0xF8) == 0xF0) {
    extra = 3;
    cp = c & 0x07;
  } else {
    ++i;
    return 0xFFFD;
  }
  for (int k = 1; k <= extra; ++k) {
    if (i + static_cast<std::size_t>(k) >= s.size()) {
      ++i;
      return 0xFFFD;
    }
    unsigned char cc = static_cast<unsigned char>(s[i + k]);
    if ((cc & 0xC0) != 0x80) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (cc & 0x3F);
  }
  i += static_cast<std::size_t>(extra) + 1;
  return cp;
}

// Letter coverage: ASCII plus the Latin-1/Extended, Greek and Cyrillic
// blocks. These bound what the lowercase mapping below knows how to fold.
bool is_letter_cp(std::uint32_t cp) {
  if ((cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z')) return true;
  if (cp >= 0xC0 && cp <= 0x24F) return cp != 0xD7 && cp != 0xF7;
  if (cp >= 0x370 && cp <= 0x3FF) return true;   // Greek
  if (cp >= 0x400 && cp <= 0x4FF) return true;   // Cyrillic
  if (cp >= 0x1E00 && cp <= 0x1EFF) return true; // Latin extended additional
  return false;
}

std::uint32_t lower_cp(std::uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if (cp >= 0x100 && cp <= 0x137) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp >= 0x139 && cp <= 0x148) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x14A && cp <= 0x177) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x179 && cp <= 0x17E) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  if (cp >= 0x1E00 && cp <= 0x1EFF) return (cp % 2 == 0) ? cp + 1 : cp;
  return cp;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_apostrophe(std::uint32_t cp) {
  return cp == '\'' || cp == 0x2019;  // ASCII or right single quote
}

}  // namespace

std::vector<std::string> tokenize_text(const std::string& text) {
  // Decode once into (codepoint, class) form, then scan for tokens.
  std::vector<std::uint32_t> cps;
  cps.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) cps.push_back(decode_utf8(text, i));

  std::vector<std::string> tokens;
  std::size_t n = cps.size();
  std::size_t pos = 0;
  while (pos < n) {
    if (!is_letter_cp(cps[pos])) {
      ++pos;
      continue;
    }
    std::string tok;
    while (pos < n) {
      if (is_letter_cp(cps[pos])) {
        append_utf8(tok, lower_cp(cps[pos]));
        ++pos;
      } else if (is_apostrophe(cps[pos]) && pos + 1 < n &&
                 is_letter_cp(cps[pos + 1])) {
        // internal apostrophe: letters on both sides (left side holds,
        // since the token is nonempty here)
        tok.push_back('\'');
        ++pos;
      } else {
        break;
      }
    }
    tokens.push_back(std::move(tok));
  }
  return tokens;
}

TokenStream tokenize(const Document& doc) {
  TokenStream ts;
  ts.source_id = doc.id;
  ts.tokens = tokenize_text(doc.text);
  if (ts.tokens.empty())
    throw insufficient_error("document '" + doc.id +
                             "' has no word tokens");
  return ts;
}

std::map<std::string, std::vector<SentenceParse>> load_conllu(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open parse file: " + path);
  std::map<std::string, std::vector<SentenceParse>> out;
  std::string cur_doc;
  std::vector<std::pair<int, int>> sent;  // (token id, head)
  std::string line;
  std::size_t line_no = 0;

  auto flush_sentence = [&](std::size_t at_line) {
    if (sent.empty()) return;
    if (cur_doc.empty())
      throw input_error("line " + std::to_string(at_line) +
                        ": sentence without a doc_id comment");
    int n = static_cast<int>(sent.size());
    SentenceParse sp;
    sp.source_id = cur_doc;
    sp.heads.resize(sent.size());
    int expect = 1;
    for (const auto& [tid, head] : sent) {
      if (tid != expect)
        throw input_error("line " + std::to_string(at_line) +
                          ": non-contiguous token ids in sentence (doc '" +
                          cur_doc + "')");
      if (head < 0 || head > n)
        throw input_error("doc '" + cur_doc + "': head " +
                          std::to_string(head) + " out of range for a " +
                          std::to_string(n) + "-token sentence");
      if (head == tid)
        throw input_error("doc '" + cur_doc + "': token " +
                          std::to_string(tid) + " is its own head");
      sp.heads[static_cast<std::size_t>(tid - 1)] = head;
      ++expect;
    }
    if (std::none_of(sp.heads.begin(), sp.heads.end(),
                     [](int h) { return h == 0; }))
      throw input_error("doc '" + cur_doc + "': sentence has no root");
    out[cur_doc].push_back(std::move(sp));
    sent.clear();
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush_sentence(line_no);
      continue;
    }
    if (line[0] == '#') {
      // only `# doc_id = x` matters; other comments pass through
      std::string body = line.substr(1);
      std::size_t eq = body.find('=');
      if (eq != std::string::npos) {
        std::string key = body.substr(0, eq);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t") + 1);
        if (key == "doc_id") {
          flush_sentence(line_no);
          std::string val = body.substr(eq + 1);
          val.erase(0, val.find_first_not_of(" \t"));
          val.erase(val.find_last_not_of(" \t") + 1);
          if (val.empty())
            throw input_error("line " + std::to_string(line_no) +
                              ": empty doc_id");
          cur_doc = val;
        }
      }
      continue;
    }
    // token line: ID FORM LEMMA UPOS XPOS FEATS HEAD DEPREL DEPS MISC
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      std::size_t tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() < 7)
      throw input_error("line " + std::to_string(line_no) +
                        ": expected at least 7 tab-separated columns");
    const std::string& ids = cols[0];
    if (ids.find('-') != std::string::npos) continue;  // multiword range
    if (ids.find('.') != std::string::npos) continue;  // empty node
    if (!all_digits(ids))
      throw input_error("line " + std::to_string(line_no) +
                        ": bad token id '" + ids + "'");
    const std::string& heads = cols[6];
    if (!all_digits(heads))
      throw input_error("line " + std::to_string(line_no) +
                        ": bad head '" + heads + "'");
    sent.emplace_back(std::stoi(ids), std::stoi(heads));
  }
  flush_sentence(line_no);
  return out;
}

RewritePairing pair_rewrites(const std::vector<Document>& originals,
                             const std::vector<Document>& rewrites) {
  std::map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < originals.size(); ++i) {
    by_id[originals[i].id] = i;
  }
  std::set<std::string> dedup;
  std::vector<std::vector<const Document*>> matched(originals.size());
  for (const auto& rw : rewrites) {
    if (!rw.rewrite_of)
      throw input_error("rewrite '" + rw.id + "' lacks rewrite_of");
    auto it = by_id.find(*rw.rewrite_of);
    if (it == by_id.end())
      throw input_error("rewrite '" + rw.id +
                        "' references missing original '" + *rw.rewrite_of +
                        "'");
    std::string key = *rw.rewrite_of + "\x1f" + rw.llm_tag.value_or("") +
                      "\x1f" + rw.prompt_tag.value_or("");
    if (!dedup.insert(key).second)
      throw input_error("duplicate rewrite of '" + *rw.rewrite_of +
                        "' with the same llm/prompt tags");
    matched[it->second].push_back(&rw);
  }
  RewritePairing out;
  for (std::size_t i = 0; i < originals.size(); ++i) {
    if (matched[i].empty()) {
      out.unpaired_original_ids.push_back(originals[i].id);
      continue;
    }
    for (const Document* rw : matched[i])
      out.pairs.emplace_back(originals[i], *rw);
  }
  return out;
}

}  // namespace styvar::corpus
