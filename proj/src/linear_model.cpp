#include "styvar/linear_model.hpp"

#include <cmath>

#include "styvar/error.hpp"
#include "styvar/rng.hpp"

namespace styvar::linear_model {

namespace {

double sparse_dot(const std::vector<double>& w,
                  const tfidf::SparseVector& x) {
  double s = 0.0;
  for (const auto& [col, v] : x) s += w[col] * v;
  return s;
}

void validate(const std::vector<tfidf::SparseVector>& x,
              const std::vector<int>& y, std::size_t dim) {
  if (x.size() != y.size())
    throw input_error("feature/label count mismatch");
  if (x.empty()) throw input_error("training on empty data");
  std::size_t pos = 0, neg = 0;
  for (int v : y) {
    if (v == 1)
      ++pos;
    else if (v == 0)
      ++neg;
    else
      throw input_error("binary trainer got label outside {0,1}");
  }
  if (pos < 2 || neg < 2)
    throw insufficient_error("need at least 2 examples per class");
  for (const auto& row : x)
    for (const auto& [col, v] : row) {
      if (col >= dim) throw input_error("feature column out of range");
      if (!std::isfinite(v)) throw input_error("non-finite feature value");
    }
}

LinearModel train_logistic(const std::vector<tfidf::SparseVector>& x,
                           const std::vector<int>& y, std::size_t dim,
                           double reg, std::uint64_t seed) {
  std::size_t n = x.size();
  double nd = static_cast<double>(n);
  LinearModel m;
  m.kind = Kind::logistic;
  m.weights.assign(dim, 0.0);
  m.reg = reg;
  m.seed = seed;

  auto objective = [&](const std::vector<double>& w, double b) {
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double margin = (y[i] == 1 ? 1.0 : -1.0) * (sparse_dot(w, x[i]) + b);
      // stable log(1 + exp(-margin))
      loss += margin > 0.0 ? std::log1p(std::exp(-margin))
                           : -margin + std::log1p(std::exp(margin));
    }
    loss /= nd;
    double w2 = 0.0;
    for (double wi : w) w2 += wi * wi;
    return loss + 0.5 * reg * w2;
  };

  std::vector<double> grad_w(dim, 0.0);
  double grad_b = 0.0;
  const int max_iter = 500;
  const double tol = 1e-9;
  double step_init = 1.0;
  for (int iter = 0; iter < max_iter; ++iter) {
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    grad_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double yi = y[i] == 1 ? 1.0 : -1.0;
      double margin = yi * (sparse_dot(m.weights, x[i]) + m.bias);
      double sig = 1.0 / (1.0 + std::exp(margin));  // d/dz log(1+e^-z)
      double coeff = -yi * sig / nd;
      for (const auto& [col, v] : x[i]) grad_w[col] += coeff * v;
      grad_b += coeff;
    }
    double gnorm2 = grad_b * grad_b;
    for (std::size_t j = 0; j < dim; ++j) {
      grad_w[j] += reg * m.weights[j];
      gnorm2 += grad_w[j] * grad_w[j];
    }
    if (gnorm2 < tol * tol) break;
    // Armijo backtracking from the last accepted step
    double f0 = objective(m.weights, m.bias);
    double step = step_init * 2.0;
    std::vector<double> cand(dim, 0.0);
    bool accepted = false;
    for (int bt = 0; bt < 40 && !accepted; ++bt) {
      for (std::size_t j = 0; j < dim; ++j)
        cand[j] = m.weights[j] - step * grad_w[j];
      double cand_b = m.bias - step * grad_b;
      double f1 = objective(cand, cand_b);
      if (f1 <= f0 - 1e-4 * step * gnorm2) {
        m.weights.swap(cand);
        m.bias = cand_b;
        step_init = step;
        accepted = true;
      } else {
        step *= 0.5;
      }
    }
    if (!accepted) break;  // cannot make progress at any scale
  }
  return m;
}

LinearModel train_svm(const std::vector<tfidf::SparseVector>& x,
                      const std::vector<int>& y, std::size_t dim, double reg,
                      std::uint64_t seed) {
  std::size_t n = x.size();
  LinearModel m;
  m.kind = Kind::svm;
  m.weights.assign(dim, 0.0);
  m.reg = reg;
  m.seed = seed;
  double lambda = reg;
  const int epochs = 50;
  Rng rng(derive_seed(seed, "svm_epochs"));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::size_t t = 0;
  for (int e = 0; e < epochs; ++e) {
    rng.shuffle(order);
    for (std::size_t idx : order) {
      ++t;
      double eta = 1.0 / (lambda * static_cast<double>(t));
      double yi = y[idx] == 1 ? 1.0 : -1.0;
      double margin = yi * (sparse_dot(m.weights, x[idx]) + m.bias);
      double shrink = 1.0 - eta * lambda;
      for (double& w : m.weights) w *= shrink;
      m.bias *= shrink;
      if (margin < 1.0) {
        for (const auto& [col, v] : x[idx]) m.weights[col] += eta * yi * v;
        m.bias += eta * yi;
      }
    }
  }
  return m;
}

}  // namespace

LinearModel train_linear(Kind kind, const std::vector<tfidf::SparseVector>& x,
                         const std::vector<int>& y, std::size_t dim,
                         double reg, std::uint64_t seed) {
  validate(x, y, dim);
  if (reg <= 0.0) throw input_error("regularization must be positive");
  return kind == Kind::logistic ? train_logistic(x, y, dim, reg, seed)
                                : train_svm(x, y, dim, reg, seed);
}

double decision_value(const LinearModel& model, const tfidf::SparseVector& x) {
  return sparse_dot(model.weights, x) + model.bias;
}

int predict(const LinearModel& model, const tfidf::SparseVector& x) {
  return decision_value(model, x) > 0.0 ? 1 : 0;
}

}  // namespace styvar::linear_model
