#include "styvar/traitlab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>

#include "styvar/error.hpp"
#include "styvar/rng.hpp"
#include "styvar/special.hpp"
#include "styvar/tfidf.hpp"

namespace styvar::traitlab {

using namespace special;

std::vector<int> median_split(std::span<const double> values) {
  if (values.size() < 2)
    throw insufficient_error("median split needs at least 2 values");
  std::vector<double> z = stats::zscores(values);  // throws on constants
  double med = stats::median(z);
  std::vector<int> labels(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) labels[i] = z[i] > med ? 1 : 0;
  return labels;
}

std::vector<Fold> kfold_split(const std::vector<int>& labels, std::size_t k,
                              std::uint64_t seed) {
  if (k < 2) throw input_error("k must be at least 2");
  if (labels.empty()) throw input_error("no labels to split");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i)
    by_class[labels[i]].push_back(i);
  for (const auto& [cls, idx] : by_class)
    if (idx.size() < k)
      throw insufficient_error("class " + std::to_string(cls) + " has " +
                               std::to_string(idx.size()) +
                               " items, fewer than k=" + std::to_string(k));
  std::vector<std::vector<std::size_t>> buckets(k);
  for (auto& [cls, idx] : by_class) {
    Rng rng(derive_seed(seed, "fold_class", static_cast<std::uint64_t>(cls)));
    rng.shuffle(idx);
    for (std::size_t i = 0; i < idx.size(); ++i)
      buckets[i % k].push_back(idx[i]);
  }
  for (auto& b : buckets) std::sort(b.begin(), b.end());
  std::vector<Fold> folds(k);
  for (std::size_t i = 0; i < k; ++i) {
    folds[i].test = buckets[i];
    std::size_t v = (i + 1) % k;
    folds[i].validation = buckets[v];
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i || j == v) continue;
      folds[i].train.insert(folds[i].train.end(), buckets[j].begin(),
                            buckets[j].end());
    }
    std::sort(folds[i].train.begin(), folds[i].train.end());
  }
  return folds;
}

double f1_macro(std::span<const int> predictions,
                std::span<const int> labels) {
  if (predictions.size() != labels.size())
    throw input_error("predictions/labels length mismatch");
  if (predictions.empty()) throw input_error("f1 of empty predictions");
  std::set<int> classes(labels.begin(), labels.end());
  classes.insert(predictions.begin(), predictions.end());
  double sum = 0.0;
  for (int c : classes) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      bool pred_c = predictions[i] == c;
      bool is_c = labels[i] == c;
      if (pred_c && is_c)
        ++tp;
      else if (pred_c)
        ++fp;
      else if (is_c)
        ++fn;
    }
    double denom = static_cast<double>(2 * tp + fp + fn);
    sum += denom > 0.0 ? 2.0 * static_cast<double>(tp) / denom : 0.0;
  }
  return sum / static_cast<double>(classes.size());
}

double delta_imbalance(std::span<const int> predictions,
                       std::size_t n_classes) {
  if (predictions.empty()) throw input_error("delta of empty predictions");
  int max_seen = 0;
  for (int p : predictions) {
    if (p < 0) throw input_error("negative class code");
    max_seen = std::max(max_seen, p);
  }
  std::size_t k = n_classes > 0
                      ? n_classes
                      : std::max<std::size_t>(
                            2, static_cast<std::size_t>(max_seen) + 1);
  if (static_cast<std::size_t>(max_seen) >= k)
    throw input_error("prediction outside declared class set");
  std::vector<double> counts(k, 0.0);
  for (int p : predictions) counts[static_cast<std::size_t>(p)] += 1.0;
  double pmax = *std::max_element(counts.begin(), counts.end());
  double pmin = *std::min_element(counts.begin(), counts.end());
  return (pmax - pmin) / (pmax + pmin);
}

ShiftTable prediction_shift(std::span<const int> orig_preds,
                            std::span<const int> rewrite_preds,
                            std::span<const int> labels) {
  if (orig_preds.size() != rewrite_preds.size() ||
      orig_preds.size() != labels.size())
    throw input_error("prediction shift inputs misaligned");
  ShiftTable t;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (orig_preds[i] != labels[i]) continue;  // only correct originals
    ++t.considered;
    if (rewrite_preds[i] == orig_preds[i]) continue;
    ++t.changed;
    if (orig_preds[i] == 0 && rewrite_preds[i] == 1) ++t.to_one;
    if (orig_preds[i] == 1 && rewrite_preds[i] == 0) ++t.to_zero;
  }
  return t;
}

double random_baseline(std::span<const int> labels, std::uint64_t seed,
                       std::size_t trials, BaselineKind kind) {
  if (labels.empty()) throw input_error("baseline of empty labels");
  if (trials == 0) throw input_error("baseline needs at least 1 trial");
  std::vector<int> classes(labels.begin(), labels.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  Rng rng(seed);
  std::vector<int> draw(labels.size());
  double sum = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    for (std::size_t i = 0; i < draw.size(); ++i) {
      if (kind == BaselineKind::empirical)
        draw[i] = labels[rng.below(labels.size())];
      else
        draw[i] = classes[rng.below(classes.size())];
    }
    sum += f1_macro(draw, labels);
  }
  return sum / static_cast<double>(trials);
}

TraitLabels extract_trait_labels(const std::vector<corpus::Document>& docs,
                                 const std::string& trait) {
  TraitLabels out;
  std::vector<double> numeric;
  std::vector<std::string> categorical;
  bool any_num = false, any_str = false;
  for (const auto& d : docs) {
    auto it = d.labels.find(trait);
    if (it == d.labels.end())
      throw insufficient_error("document '" + d.id + "' lacks trait '" +
                               trait + "'");
    if (std::holds_alternative<double>(it->second)) {
      any_num = true;
      numeric.push_back(std::get<double>(it->second));
    } else {
      any_str = true;
      categorical.push_back(std::get<std::string>(it->second));
    }
  }
  if (any_num && any_str)
    throw input_error("trait '" + trait + "' mixes numeric and categorical "
                      "values");
  if (any_num) {
    out.codes = median_split(numeric);
    out.class_names = {"low", "high"};
    out.n_classes = 2;
    return out;
  }
  std::set<std::string> uniq(categorical.begin(), categorical.end());
  if (uniq.size() < 2)
    throw insufficient_error("trait '" + trait + "' has a single class");
  std::map<std::string, int> code;
  for (const auto& name : uniq) {
    code[name] = static_cast<int>(out.class_names.size());
    out.class_names.push_back(name);
  }
  for (const auto& name : categorical) out.codes.push_back(code[name]);
  out.n_classes = uniq.size();
  return out;
}

namespace {

struct MultiModel {
  std::vector<linear_model::LinearModel> models;  // 1 if binary
  std::size_t n_classes = 2;
};

MultiModel train_multi(linear_model::Kind kind,
                       const std::vector<tfidf::SparseVector>& x,
                       const std::vector<int>& y, std::size_t n_classes,
                       std::size_t dim, double reg, std::uint64_t seed) {
  MultiModel mm;
  mm.n_classes = n_classes;
  if (n_classes == 2) {
    mm.models.push_back(
        linear_model::train_linear(kind, x, y, dim, reg, seed));
    return mm;
  }
  for (std::size_t c = 0; c < n_classes; ++c) {
    std::vector<int> yb(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
      yb[i] = y[i] == static_cast<int>(c) ? 1 : 0;
    mm.models.push_back(linear_model::train_linear(
        kind, x, yb, dim, reg, derive_seed(seed, "ovr_class", c)));
  }
  return mm;
}

int predict_multi(const MultiModel& mm, const tfidf::SparseVector& x) {
  if (mm.n_classes == 2) return linear_model::predict(mm.models[0], x);
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < mm.models.size(); ++c) {
    double s = linear_model::decision_value(mm.models[c], x);
    if (s > best_score) {
      best_score = s;
      best = static_cast<int>(c);
    }
  }
  return best;
}

void aggregate(ExperimentReport& rep, const ExperimentConfig& config) {
  std::vector<double> f1o, f1r, dlo, dlr, base_e, base_u, s_one, s_zero;
  for (const auto& run : rep.runs) {
    if (!run.success) continue;
    f1o.push_back(run.f1_orig);
    f1r.push_back(run.f1_rewrite);
    dlo.push_back(run.delta_orig);
    dlr.push_back(run.delta_rewrite);
    base_e.push_back(run.baseline);
    base_u.push_back(run.baseline_uniform);
    s_one.push_back(static_cast<double>(run.shift.to_one));
    s_zero.push_back(static_cast<double>(run.shift.to_zero));
    rep.shift_to_one += run.shift.to_one;
    rep.shift_to_zero += run.shift.to_zero;
  }
  rep.successful = f1o.size();
  rep.aggregate_valid = rep.successful >= config.min_successful;
  if (!rep.aggregate_valid) return;
  rep.mean_f1_orig = stats::mean(f1o);
  rep.mean_f1_rewrite = stats::mean(f1r);
  std::vector<double> drop(f1o.size());
  for (std::size_t i = 0; i < f1o.size(); ++i) drop[i] = f1o[i] - f1r[i];
  rep.mean_drop = stats::mean(drop);
  double n = static_cast<double>(drop.size());
  double sd = stats::sample_sd(drop);
  rep.drop_se = sd / std::sqrt(n);
  double t_crit = t_quantile(0.975, n - 1.0);
  rep.drop_ci_low = rep.mean_drop - t_crit * rep.drop_se;
  rep.drop_ci_high = rep.mean_drop + t_crit * rep.drop_se;
  rep.baseline_empirical = stats::mean(base_e);
  rep.baseline_uniform = stats::mean(base_u);
  try {
    rep.paired_t = stats::t_test(f1o, f1r, stats::TTestMode::paired);
  } catch (const Error& e) {
    rep.degenerate_note += std::string("paired t skipped: ") + e.what() + "; ";
  }
  try {
    rep.wilcoxon_delta = stats::wilcoxon_signed_rank(dlo, dlr);
  } catch (const Error& e) {
    rep.degenerate_note += std::string("wilcoxon skipped: ") + e.what() + "; ";
  }
  try {
    rep.shift_t = stats::t_test(s_one, s_zero, stats::TTestMode::paired);
  } catch (const Error& e) {
    rep.degenerate_note += std::string("shift t skipped: ") + e.what() + "; ";
  }
}

}  // namespace

ExperimentReport run_experiment(const std::vector<corpus::Document>& originals,
                                const std::vector<corpus::Document>& rewrites,
                                const ExperimentConfig& config) {
  if (config.trait.empty()) throw input_error("config lacks a trait name");
  if (config.reg_grid.empty())
    throw input_error("config lacks a regularization grid");
  if (originals.empty()) throw input_error("no original documents");
  TraitLabels tl = extract_trait_labels(originals, config.trait);

  std::map<std::string, const corpus::Document*> rewrite_of;
  for (const auto& rw : rewrites) {
    if (!rw.rewrite_of)
      throw input_error("rewrite '" + rw.id + "' lacks rewrite_of");
    if (!rewrite_of.emplace(*rw.rewrite_of, &rw).second)
      throw input_error("multiple rewrites of '" + *rw.rewrite_of +
                        "'; filter by llm/prompt first");
  }

  std::vector<corpus::TokenStream> orig_tokens;
  orig_tokens.reserve(originals.size());
  for (const auto& d : originals) orig_tokens.push_back(corpus::tokenize(d));
  std::map<std::string, corpus::TokenStream> rewrite_tokens;
  for (const auto& [oid, rw] : rewrite_of)
    rewrite_tokens.emplace(oid, corpus::tokenize(*rw));

  ExperimentReport rep;
  rep.trait = config.trait;
  rep.classifier =
      config.classifier == linear_model::Kind::logistic ? "logistic" : "svm";
  rep.n_classes = tl.n_classes;

  for (std::size_t si = 0; si < config.n_seeds; ++si) {
    std::uint64_t seed = derive_seed(config.root_seed, "run", si);
    auto folds = kfold_split(tl.codes, config.k, seed);
    for (std::size_t fi = 0; fi < folds.size(); ++fi) {
      const Fold& fold = folds[fi];
      std::vector<corpus::TokenStream> train_docs;
      std::vector<int> train_y;
      for (std::size_t idx : fold.train) {
        train_docs.push_back(orig_tokens[idx]);
        train_y.push_back(tl.codes[idx]);
      }
      tfidf::TfidfModel fm = tfidf::tfidf_fit(train_docs);
      std::size_t dim = fm.vocabulary.size();
      auto train_x = tfidf::tfidf_transform_batch(fm, train_docs);

      std::vector<tfidf::SparseVector> val_x;
      std::vector<int> val_y;
      for (std::size_t idx : fold.validation) {
        val_x.push_back(tfidf::tfidf_transform(fm, orig_tokens[idx]));
        val_y.push_back(tl.codes[idx]);
      }

      // pick regularization on the validation fold; first grid entry wins
      // ties
      double best_f1 = -1.0;
      double best_reg = config.reg_grid[0];
      MultiModel best_model;
      for (std::size_t ri = 0; ri < config.reg_grid.size(); ++ri) {
        MultiModel mm =
            train_multi(config.classifier, train_x, train_y, tl.n_classes,
                        dim, config.reg_grid[ri],
                        derive_seed(seed, "train", fi));
        std::vector<int> vp(val_x.size());
        for (std::size_t i = 0; i < val_x.size(); ++i)
          vp[i] = predict_multi(mm, val_x[i]);
        double f1 = f1_macro(vp, val_y);
        if (f1 > best_f1) {
          best_f1 = f1;
          best_reg = config.reg_grid[ri];
          best_model = std::move(mm);
        }
      }

      ExperimentRun run;
      run.seed = seed;
      run.fold = fi;
      run.chosen_reg = best_reg;
      std::vector<int> test_y;
      for (std::size_t idx : fold.test) {
        const std::string& oid = originals[idx].id;
        auto rit = rewrite_tokens.find(oid);
        if (rit == rewrite_tokens.end())
          throw input_error("no rewrite for test document '" + oid + "'");
        run.test_ids.push_back(oid);
        test_y.push_back(tl.codes[idx]);
        run.preds_orig.push_back(predict_multi(
            best_model, tfidf::tfidf_transform(fm, orig_tokens[idx])));
        run.preds_rewrite.push_back(predict_multi(
            best_model, tfidf::tfidf_transform(fm, rit->second)));
      }
      run.f1_orig = f1_macro(run.preds_orig, test_y);
      run.f1_rewrite = f1_macro(run.preds_rewrite, test_y);
      run.delta_orig = delta_imbalance(run.preds_orig, tl.n_classes);
      run.delta_rewrite = delta_imbalance(run.preds_rewrite, tl.n_classes);
      run.baseline =
          random_baseline(test_y, derive_seed(seed, "baseline", fi),
                          config.baseline_trials, BaselineKind::empirical);
      run.baseline_uniform =
          random_baseline(test_y, derive_seed(seed, "baseline_uniform", fi),
                          config.baseline_trials, BaselineKind::uniform);
      run.success = run.f1_orig > run.baseline;
      run.shift = prediction_shift(run.preds_orig, run.preds_rewrite, test_y);
      rep.runs.push_back(std::move(run));
    }
  }
  aggregate(rep, config);
  return rep;
}

std::map<std::string, std::map<std::string, int>> load_predictions_csv(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open predictions file: " + path);
  std::map<std::string, std::map<std::string, int>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("doc_id,", 0) == 0) continue;  // header
    std::size_t c1 = line.find(',');
    std::size_t c2 = c1 == std::string::npos ? std::string::npos
                                             : line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw input_error("line " + std::to_string(line_no) +
                        ": expected doc_id,run_id,label");
    std::string doc = line.substr(0, c1);
    std::string run = line.substr(c1 + 1, c2 - c1 - 1);
    std::string lab = line.substr(c2 + 1);
    try {
      int code = std::stoi(lab);
      if (code < 0) throw std::invalid_argument("negative");
      if (!out[run].emplace(doc, code).second)
        throw input_error("line " + std::to_string(line_no) +
                          ": duplicate prediction for doc '" + doc +
                          "' in run '" + run + "'");
    } catch (const std::invalid_argument&) {
      throw input_error("line " + std::to_string(line_no) +
                        ": bad label '" + lab + "'");
    } catch (const std::out_of_range&) {
      throw input_error("line " + std::to_string(line_no) +
                        ": bad label '" + lab + "'");
    }
  }
  if (out.empty()) throw input_error("predictions file empty: " + path);
  return out;
}

ExperimentReport score_external(
    const std::map<std::string, std::map<std::string, int>>& orig_preds,
    const std::map<std::string, std::map<std::string, int>>& rewrite_preds,
    const std::map<std::string, int>& labels_by_doc,
    const ExperimentConfig& config) {
  ExperimentReport rep;
  rep.trait = config.trait;
  rep.classifier = "external";
  int max_code = 0;
  for (const auto& [doc, code] : labels_by_doc)
    max_code = std::max(max_code, code);
  rep.n_classes = static_cast<std::size_t>(max_code) + 1;
  if (rep.n_classes < 2) rep.n_classes = 2;

  std::size_t fold = 0;
  for (const auto& [run_id, preds] : orig_preds) {
    auto rit = rewrite_preds.find(run_id);
    if (rit == rewrite_preds.end())
      throw input_error("run '" + run_id + "' has no rewrite predictions");
    ExperimentRun run;
    run.seed = derive_seed(0, "external_run:" + run_id);
    run.fold = fold++;
    std::vector<int> test_y;
    for (const auto& [doc, pred] : preds) {
      auto lit = labels_by_doc.find(doc);
      if (lit == labels_by_doc.end())
        throw input_error("no label for predicted doc '" + doc + "'");
      auto rp = rit->second.find(doc);
      if (rp == rit->second.end())
        throw input_error("run '" + run_id +
                          "' lacks a rewrite prediction for doc '" + doc +
                          "'");
      run.test_ids.push_back(doc);
      test_y.push_back(lit->second);
      run.preds_orig.push_back(pred);
      run.preds_rewrite.push_back(rp->second);
    }
    run.f1_orig = f1_macro(run.preds_orig, test_y);
    run.f1_rewrite = f1_macro(run.preds_rewrite, test_y);
    run.delta_orig = delta_imbalance(run.preds_orig, rep.n_classes);
    run.delta_rewrite = delta_imbalance(run.preds_rewrite, rep.n_classes);
    run.baseline = random_baseline(test_y, derive_seed(run.seed, "baseline"),
                                   config.baseline_trials,
                                   BaselineKind::empirical);
    run.baseline_uniform = random_baseline(
        test_y, derive_seed(run.seed, "baseline_uniform"),
        config.baseline_trials, BaselineKind::uniform);
    run.success = run.f1_orig > run.baseline;
    run.shift = prediction_shift(run.preds_orig, run.preds_rewrite, test_y);
    rep.runs.push_back(std::move(run));
  }
  aggregate(rep, config);
  return rep;
}

std::string runs_csv(const ExperimentReport& report) {
  std::string out =
      "seed,fold,f1_orig,f1_rewrite,delta_orig,delta_rewrite,baseline,"
      "success,chosen_reg,shift_to_one,shift_to_zero\n";
  char buf[256];
  for (const auto& run : report.runs) {
    std::snprintf(buf, sizeof(buf),
                  "%llu,%zu,%.10g,%.10g,%.10g,%.10g,%.10g,%d,%.10g,%zu,%zu\n",
                  static_cast<unsigned long long>(run.seed), run.fold,
                  run.f1_orig, run.f1_rewrite, run.delta_orig,
                  run.delta_rewrite, run.baseline, run.success ? 1 : 0,
                  run.chosen_reg, run.shift.to_one, run.shift.to_zero);
    out += buf;
  }
  return out;
}

}  // namespace styvar::traitlab
