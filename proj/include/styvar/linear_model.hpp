#ifndef STYVAR_LINEAR_MODEL_HPP
#define STYVAR_LINEAR_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "styvar/tfidf.hpp"

namespace styvar::linear_model {

enum class Kind { logistic, svm };

struct LinearModel {
  Kind kind = Kind::logistic;
  std::vector<double> weights;
  double bias = 0.0;
  double reg = 1.0;
  std::uint64_t seed = 0;
};

// Binary trainer; y entries are 0 or 1. Logistic: L2-regularized log loss
// by full-batch gradient descent with backtracking line search (the seed is
// recorded but unused). SVM: L2-regularized hinge loss by epoch-ordered
// stochastic subgradient steps with a seeded permutation per epoch. Both
// are bit-reproducible given identical inputs.
LinearModel train_linear(Kind kind, const std::vector<tfidf::SparseVector>& x,
                         const std::vector<int>& y, std::size_t dim,
                         double reg, std::uint64_t seed);

double decision_value(const LinearModel& model, const tfidf::SparseVector& x);

int predict(const LinearModel& model, const tfidf::SparseVector& x);

}  // namespace styvar::linear_model

#endif
