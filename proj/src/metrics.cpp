#include "pmlfs/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "pmlfs/errors.hpp"

namespace pmlfs {

namespace {

struct Confusion {
  double tp = 0, fp = 0, fn = 0;
};

double f1(const Confusion& c) {
  const double denom = 2.0 * c.tp + c.fp + c.fn;
  return denom > 0.0 ? 2.0 * c.tp / denom : 0.0;
}

void require_same_shape(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("metric inputs differ in shape");
  }
}

std::vector<Confusion> per_label(const Matrix& pred, const Matrix& truth) {
  require_same_shape(pred, truth);
  std::vector<Confusion> counts(truth.cols());
  for (std::size_t i = 0; i < truth.rows(); ++i) {
    for (std::size_t j = 0; j < truth.cols(); ++j) {
      const bool p = pred(i, j) != 0.0, t = truth(i, j) != 0.0;
      if (p && t) counts[j].tp += 1;
      if (p && !t) counts[j].fp += 1;
      if (!p && t) counts[j].fn += 1;
    }
  }
  return counts;
}

}  // namespace

double micro_f1(const Matrix& pred, const Matrix& truth) {
  Confusion pooled;
  for (const auto& c : per_label(pred, truth)) {
    pooled.tp += c.tp;
    pooled.fp += c.fp;
    pooled.fn += c.fn;
  }
  return f1(pooled);
}

double macro_f1(const Matrix& pred, const Matrix& truth) {
  const auto counts = per_label(pred, truth);
  if (counts.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& c : counts) sum += f1(c);
  return sum / static_cast<double>(counts.size());
}

RankingMetrics ranking_metrics(const Matrix& scores, const Matrix& truth) {
  require_same_shape(scores, truth);
  const std::size_t l = truth.cols();
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  RankingMetrics out;
  double ap_sum = 0.0, loss_sum = 0.0, cov_sum = 0.0;
  std::size_t ap_rows = 0, loss_rows = 0, cov_rows = 0;

  std::vector<std::size_t> order(l);
  std::vector<std::size_t> rank(l);
  for (std::size_t i = 0; i < truth.rows(); ++i) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto s = scores.row(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });
    for (std::size_t pos = 0; pos < l; ++pos) rank[order[pos]] = pos + 1;

    std::size_t n_rel = 0;
    for (std::size_t j = 0; j < l; ++j) n_rel += truth(i, j) != 0.0;
    const std::size_t n_irr = l - n_rel;

    if (n_rel == 0) {
      ++out.ap_excluded;
      ++out.coverage_excluded;
      ++out.ranking_loss_excluded;
      continue;
    }

    // Walk down the ranking once: precision at every relevant position,
    // and for each irrelevant label, how many relevant ones sit below it.
    double precision_sum = 0.0;
    std::size_t rel_seen = 0, irr_seen = 0, bad_pairs = 0, deepest = 0;
    for (std::size_t pos = 0; pos < l; ++pos) {
      if (truth(i, order[pos]) != 0.0) {
        ++rel_seen;
        precision_sum += static_cast<double>(rel_seen) / static_cast<double>(pos + 1);
        bad_pairs += irr_seen;
        deepest = pos + 1;
      } else {
        ++irr_seen;
      }
    }
    ap_sum += precision_sum / static_cast<double>(n_rel);
    ++ap_rows;
    cov_sum += static_cast<double>(deepest - 1) / static_cast<double>(l);
    ++cov_rows;

    if (n_irr == 0) {
      ++out.ranking_loss_excluded;
      continue;
    }
    // Pairs tied on score count as mis-ordered regardless of index order.
    for (std::size_t a = 0; a < l; ++a) {
      if (truth(i, a) == 0.0) continue;
      for (std::size_t b = 0; b < l; ++b) {
        if (truth(i, b) != 0.0 || s[a] != s[b]) continue;
        if (rank[a] < rank[b]) ++bad_pairs;
      }
    }
    loss_sum += static_cast<double>(bad_pairs) / static_cast<double>(n_rel * n_irr);
    ++loss_rows;
  }

  out.average_precision = ap_rows ? ap_sum / static_cast<double>(ap_rows) : nan;
  out.coverage = cov_rows ? cov_sum / static_cast<double>(cov_rows) : nan;
  out.ranking_loss = loss_rows ? loss_sum / static_cast<double>(loss_rows) : nan;
  return out;
}

}  // namespace pmlfs
