#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pmlfs/dataset.hpp"
#include "pmlfs/metrics.hpp"
#include "pmlfs/ranking.hpp"

namespace pmlfs {

enum class Metric { MicroF1, MacroF1, AveragePrecision, RankingLoss, Coverage };

inline constexpr std::array<Metric, 5> kAllMetrics = {
    Metric::MicroF1, Metric::MacroF1, Metric::AveragePrecision, Metric::RankingLoss,
    Metric::Coverage};

std::string_view metric_name(Metric m);

/// Metrics for one (budget, fold) cell.
struct FoldMetrics {
  double fraction = 0.0;
  std::size_t n_selected = 0;
  std::size_t fold = 0;
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  RankingMetrics ranking;

  double value(Metric m) const;
};

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

struct MetricsReport {
  std::string method;
  std::vector<FoldMetrics> rows;  // ordered by fraction, then fold

  std::vector<double> fractions() const;
  /// Mean ± std over folds at one budget.
  MetricSummary at_fraction(double fraction, Metric m) const;
  /// Mean ± std across budgets of the per-budget fold means.
  MetricSummary overall(Metric m) const;
};

/// Mean and population std, skipping NaN; NaN if nothing remains.
MetricSummary mean_std(std::span<const double> values);

/// Produces rankings from a training split that carries partial labels.
/// Every call must return the same number of rankings in the same order.
using RankingProvider =
    std::function<std::vector<FeatureRanking>(const PmlDataset& train_partial, std::size_t fold)>;

/// For every fold: rank features from the training rows' partial labels,
/// then for every budget train the ridge classifier on the training rows'
/// ground truth and score the held-out rows against their ground truth.
/// Returns one report per ranking the provider yields.
std::vector<MetricsReport> cross_validate(const PmlDataset& partial, const Matrix& truth,
                                          const RankingProvider& provider,
                                          std::span<const double> fractions,
                                          const FoldPlan& plan);

/// Long form: dataset, method, fraction, fold, metric, value.
void write_report_csv(const std::filesystem::path& path, std::string_view dataset,
                      std::span<const MetricsReport> reports);

/// Per method: overall and per-fraction mean ± std of every metric.
void write_summary_json(const std::filesystem::path& path, std::string_view dataset,
                        std::span<const MetricsReport> reports);

}  // namespace pmlfs
