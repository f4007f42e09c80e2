#pragma once

#include <cstddef>
#include <span>

#include "pmlfs/matrix.hpp"

namespace pmlfs {

inline constexpr double kRidgeLambda = 1e-2;
inline constexpr double kDecisionThreshold = 0.5;

struct LabelScores {
  Matrix scores;       // n_test×l, larger = more relevant
  Matrix predictions;  // 1 where score >= kDecisionThreshold
};

/// Binary-relevance ridge regression on the `selected` feature columns:
/// one linear model per label with an unpenalized intercept and penalty
/// `lambda` on the weights.
LabelScores train_predict(const Matrix& train_x, const Matrix& train_y, const Matrix& test_x,
                          std::span<const std::size_t> selected, double lambda = kRidgeLambda);

}  // namespace pmlfs
