#pragma once

#include <cstddef>

#include "pmlfs/matrix.hpp"

namespace pmlfs {

/// F1 over true/false positives and false negatives pooled across all labels.
/// 0 when there are no positives in either matrix.
double micro_f1(const Matrix& pred, const Matrix& truth);

/// Unweighted mean of per-label F1; a label with 0/0 F1 contributes 0.
double macro_f1(const Matrix& pred, const Matrix& truth);

/// Rank-based metrics over label scores. Labels are ranked per instance by
/// descending score, ties by ascending label index; rank 1 is the top.
///
/// Rows without any relevant label are skipped for average precision and
/// coverage; rows that are all relevant or all irrelevant are skipped for
/// ranking loss. A metric with every row skipped is NaN.
struct RankingMetrics {
  double average_precision = 0.0;
  double ranking_loss = 0.0;
  /// (deepest relevant rank − 1) / l, averaged over instances.
  double coverage = 0.0;
  std::size_t ap_excluded = 0;
  std::size_t ranking_loss_excluded = 0;
  std::size_t coverage_excluded = 0;
};

RankingMetrics ranking_metrics(const Matrix& scores, const Matrix& truth);

}  // namespace pmlfs
