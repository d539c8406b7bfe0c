#pragma once

#include <cmath>
#include <utility>

#include <Eigen/Core>

namespace logicrank {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Numerically stable logistic function. Saturates to exactly 1 at +inf and
/// exactly 0 at -inf.
template <typename Scalar>
Scalar logistic(Scalar x) {
  if (x >= Scalar(0)) {
    return Scalar(1) / (Scalar(1) + std::exp(-x));
  }
  const Scalar e = std::exp(x);
  return e / (Scalar(1) + e);
}

/// Returns (logistic(x), logistic(-x)) such that first + second == 1 exactly.
///
/// The larger member is computed directly and the smaller as its complement;
/// 1 - p is exact in floating point for p in [0.5, 1].
template <typename Scalar>
std::pair<Scalar, Scalar> logistic_pair(Scalar x) {
  if (x >= Scalar(0)) {
    const Scalar p = logistic(x);
    return {p, Scalar(1) - p};
  }
  const Scalar q = logistic(-x);
  return {Scalar(1) - q, q};
}

/// P(count >= k) for independent Bernoulli trials with success
/// probabilities `probs` (Poisson-binomial upper tail).
///
/// O(E * k) dynamic program. State j < k holds P(count == j); state k
/// absorbs every outcome with count >= k, so the tail is accumulated
/// directly instead of as 1 - P(count < k).
template <typename Derived>
typename Derived::Scalar poisson_binomial_tail(const Eigen::MatrixBase<Derived>& probs, int k) {
  using Scalar = typename Derived::Scalar;
  if (k <= 0) {
    return Scalar(1);
  }
  const Eigen::Index trials = probs.size();
  if (k > trials) {
    return Scalar(0);
  }
  Vector<Scalar> state = Vector<Scalar>::Zero(k + 1);
  state(0) = Scalar(1);
  for (Eigen::Index e = 0; e < trials; ++e) {
    const Scalar p = probs(e);
    state(k) += state(k - 1) * p;
    for (int j = k - 1; j >= 1; --j) {
      state(j) = state(j) * (Scalar(1) - p) + state(j - 1) * p;
    }
    state(0) *= Scalar(1) - p;
  }
  return state(k);
}

}  // namespace logicrank
