#include "pmlfs/cross_validation.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <limits>

#include "json.hpp"
#include "pmlfs/classifier.hpp"
#include "pmlfs/errors.hpp"

namespace pmlfs {

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::MicroF1:
      return "micro_f1";
    case Metric::MacroF1:
      return "macro_f1";
    case Metric::AveragePrecision:
      return "average_precision";
    case Metric::RankingLoss:
      return "ranking_loss";
    case Metric::Coverage:
      return "coverage";
  }
  return "?";
}

double FoldMetrics::value(Metric m) const {
  switch (m) {
    case Metric::MicroF1:
      return micro_f1;
    case Metric::MacroF1:
      return macro_f1;
    case Metric::AveragePrecision:
      return ranking.average_precision;
    case Metric::RankingLoss:
      return ranking.ranking_loss;
    case Metric::Coverage:
      return ranking.coverage;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

MetricSummary mean_std(std::span<const double> values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    sum += v;
    ++n;
  }
  if (n == 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan};
  }
  const double mean = sum / static_cast<double>(n);
  double sq = 0.0;
  for (double v : values)
    if (!std::isnan(v)) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / static_cast<double>(n))};
}

std::vector<double> MetricsReport::fractions() const {
  std::vector<double> out;
  for (const auto& r : rows)
    if (out.empty() || out.back() != r.fraction) out.push_back(r.fraction);
  return out;
}

MetricSummary MetricsReport::at_fraction(double fraction, Metric m) const {
  std::vector<double> v;
  for (const auto& r : rows)
    if (r.fraction == fraction) v.push_back(r.value(m));
  return mean_std(v);
}

MetricSummary MetricsReport::overall(Metric m) const {
  std::vector<double> means;
  for (double f : fractions()) means.push_back(at_fraction(f, m).mean);
  return mean_std(means);
}

namespace {

struct FoldResult {
  std::vector<std::string> methods;
  std::vector<std::vector<FoldMetrics>> cells;  // [ranking][fraction]
};

FoldResult evaluate_fold(const PmlDataset& partial, const Matrix& truth,
                                                    const RankingProvider& provider,
                                                    std::span<const double> fractions,
                                                    const FoldPlan& plan, std::size_t fold) {
  const auto train_idx = plan.train_indices(fold);
  const auto test_idx = plan.test_indices(fold);
  const PmlDataset train = subset(partial, train_idx);
  const Matrix train_truth = select_rows(truth, train_idx);
  const Matrix test_x = select_rows(partial.x, test_idx);
  const Matrix test_truth = select_rows(truth, test_idx);

  const auto rankings = provider(train, fold);
  FoldResult out{{}, std::vector<std::vector<FoldMetrics>>(rankings.size())};
  for (std::size_t r = 0; r < rankings.size(); ++r) {
    out.methods.emplace_back(method_name(rankings[r].method));
    for (double fraction : fractions) {
      const auto selected = select_top(rankings[r], fraction);
      const auto pred = train_predict(train.x, train_truth, test_x, selected);
      FoldMetrics m;
      m.fraction = fraction;
      m.n_selected = selected.size();
      m.fold = fold;
      m.micro_f1 = micro_f1(pred.predictions, test_truth);
      m.macro_f1 = macro_f1(pred.predictions, test_truth);
      m.ranking = ranking_metrics(pred.scores, test_truth);
      out.cells[r].push_back(m);
    }
  }
  return out;
}

}  // namespace

std::vector<MetricsReport> cross_validate(const PmlDataset& partial, const Matrix& truth,
                                          const RankingProvider& provider,
                                          std::span<const double> fractions,
                                          const FoldPlan& plan) {
  if (truth.rows() != partial.n_instances() || truth.cols() != partial.n_labels()) {
    throw DataError("ground-truth labels do not match the partial label matrix shape");
  }
  if (plan.assignments.size() != partial.n_instances()) {
    throw ConfigError("fold plan does not cover the dataset");
  }
  if (fractions.empty()) throw ConfigError("no feature budgets given");
  for (double f : fractions) budget_size(partial.n_features(), f);

  std::vector<std::future<FoldResult>> jobs;
  for (std::size_t fold = 0; fold < plan.n_folds; ++fold) {
    jobs.push_back(std::async(std::launch::async, evaluate_fold, std::cref(partial),
                              std::cref(truth), std::cref(provider), fractions, std::cref(plan),
                              fold));
  }
  std::vector<FoldResult> per_fold;
  for (auto& job : jobs) per_fold.push_back(job.get());

  const auto& methods = per_fold.front().methods;
  for (const auto& fr : per_fold) {
    if (fr.methods != methods) {
      throw ConfigError("ranking provider returned different rankings across folds");
    }
  }
  std::vector<MetricsReport> reports(methods.size());
  for (std::size_t r = 0; r < methods.size(); ++r) reports[r].method = methods[r];
  // Row order: fraction-major, fold-minor, regardless of completion order.
  for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
    for (std::size_t fold = 0; fold < plan.n_folds; ++fold) {
      for (std::size_t r = 0; r < methods.size(); ++r) {
        reports[r].rows.push_back(per_fold[fold].cells[r][fi]);
      }
    }
  }
  return reports;
}

void write_report_csv(const std::filesystem::path& path, std::string_view dataset,
                      std::span<const MetricsReport> reports) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "dataset,method,fraction,fold,metric,value\n";
  for (const auto& report : reports) {
    for (const auto& row : report.rows) {
      for (Metric m : kAllMetrics) {
        out << dataset << ',' << report.method << ',' << format_number(row.fraction) << ','
            << row.fold << ',' << metric_name(m) << ',' << format_number(row.value(m)) << '\n';
      }
    }
  }
}

void write_summary_json(const std::filesystem::path& path, std::string_view dataset,
                        std::span<const MetricsReport> reports) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["dataset"] = dataset;
  doc["classifier"] = "binary-relevance ridge regression (lambda = 0.01, threshold = 0.5)";
  doc["aggregation"] = "mean and population std across feature budgets of per-budget fold means";
  ordered_json methods = ordered_json::object();
  for (const auto& report : reports) {
    ordered_json entry;
    for (Metric m : kAllMetrics) {
      const auto s = report.overall(m);
      entry["overall"][std::string(metric_name(m))] = {{"mean", s.mean}, {"std", s.std}};
    }
    ordered_json per_fraction = ordered_json::array();
    for (double f : report.fractions()) {
      ordered_json cell;
      cell["fraction"] = f;
      std::size_t ap_excluded = 0, loss_excluded = 0, cov_excluded = 0;
      for (const auto& row : report.rows) {
        if (row.fraction != f) continue;
        ap_excluded += row.ranking.ap_excluded;
        loss_excluded += row.ranking.ranking_loss_excluded;
        cov_excluded += row.ranking.coverage_excluded;
      }
      for (Metric m : kAllMetrics) {
        const auto s = report.at_fraction(f, m);
        cell[std::string(metric_name(m))] = {{"mean", s.mean}, {"std", s.std}};
      }
      cell["rows_excluded"] = {{"average_precision", ap_excluded},
                               {"ranking_loss", loss_excluded},
                               {"coverage", cov_excluded}};
      per_fraction.push_back(cell);
    }
    entry["per_fraction"] = per_fraction;
    methods[report.method] = entry;
  }
  doc["methods"] = methods;

  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace pmlfs
