#include "pmlfs/classifier.hpp"

#include "pmlfs/errors.hpp"

namespace pmlfs {

LabelScores train_predict(const Matrix& train_x, const Matrix& train_y, const Matrix& test_x,
                          std::span<const std::size_t> selected, double lambda) {
  if (selected.empty()) throw ConfigError("no features selected");
  if (train_x.rows() != train_y.rows() || train_x.rows() == 0) {
    throw ShapeError("training features and labels differ in row count");
  }
  const Matrix xs = select_cols(train_x, selected);
  const std::size_t n = xs.rows(), p = xs.cols(), l = train_y.cols();

  std::vector<double> x_mean(p, 0.0), y_mean(l, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < p; ++c) x_mean[c] += xs(i, c);
    for (std::size_t j = 0; j < l; ++j) y_mean[j] += train_y(i, j);
  }
  for (double& v : x_mean) v /= static_cast<double>(n);
  for (double& v : y_mean) v /= static_cast<double>(n);

  Matrix xc = xs, yc = train_y;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < p; ++c) xc(i, c) -= x_mean[c];
    for (std::size_t j = 0; j < l; ++j) yc(i, j) -= y_mean[j];
  }

  Matrix gram = matmul_tn(xc, xc);
  for (std::size_t c = 0; c < p; ++c) gram(c, c) += lambda;
  const Matrix weights = solve_spd(gram, matmul_tn(xc, yc));

  const Matrix test_s = select_cols(test_x, selected);
  LabelScores out{matmul(test_s, weights), Matrix(test_s.rows(), l)};
  for (std::size_t j = 0; j < l; ++j) {
    double bias = y_mean[j];
    for (std::size_t c = 0; c < p; ++c) bias -= x_mean[c] * weights(c, j);
    for (std::size_t i = 0; i < test_s.rows(); ++i) {
      out.scores(i, j) += bias;
      out.predictions(i, j) = out.scores(i, j) >= kDecisionThreshold ? 1.0 : 0.0;
    }
  }
  return out;
}

}  // namespace pmlfs
