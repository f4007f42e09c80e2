#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include "pmlfs/cross_validation.hpp"
#include "pmlfs/errors.hpp"
#include "pmlfs/pipeline.hpp"
#include "pmlfs/rng.hpp"

using namespace pmlfs;

namespace {

// Column 0 holds i / (n - 1) so a provider can tell which rows it saw.
PartialLabelData tagged_dataset(std::size_t n) {
  Rng rng(3);
  Matrix x(n, 6), y(n, 3);
  for (std::size_t i = 0; i < n; ++i) {
    x(i, 0) = static_cast<double>(i) / static_cast<double>(n - 1);
    for (std::size_t c = 1; c < 6; ++c) x(i, c) = rng.uniform();
    y(i, 0) = x(i, 1) > 0.5 ? 1.0 : 0.0;
    y(i, 1) = x(i, 2) > 0.5 ? 1.0 : 0.0;
    y(i, 2) = 1.0 - y(i, 0);
  }
  return inject_candidate_noise(make_dataset(x, y), 0.2, 5);
}

RankingProvider fixed_provider() {
  return [](const PmlDataset& train, std::size_t) {
    std::vector<double> s(train.n_features());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = static_cast<double>(j);
    return std::vector<FeatureRanking>{rank_by_scores(s, RankingMethod::QR)};
  };
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("mean and population std") {
  const std::vector<double> v{1.0, 3.0, std::nan("")};
  auto s = mean_std(v);
  CHECK(s.mean == 2.0);
  CHECK(s.std == 1.0);
  CHECK(std::isnan(mean_std(std::vector<double>{std::nan("")}).mean));
}

TEST_CASE("one row per fold and budget, in a fixed order") {
  auto data = tagged_dataset(100);
  const std::vector<double> fractions{0.5, 1.0};
  auto plan = make_folds(100, 10, 1);
  auto reports = cross_validate(data.partial, data.truth, fixed_provider(), fractions, plan);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].method == "QR");
  REQUIRE(reports[0].rows.size() == 20);
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(reports[0].rows[i].fraction == fractions[i / 10]);
    CHECK(reports[0].rows[i].fold == i % 10);
    CHECK(reports[0].rows[i].n_selected == (i < 10 ? 3u : 6u));
  }
  CHECK(reports[0].fractions() == fractions);
}

TEST_CASE("repeated runs give identical reports") {
  auto data = tagged_dataset(60);
  const std::vector<double> fractions{1.0};
  auto plan = make_folds(60, 5, 2);
  auto a = cross_validate(data.partial, data.truth, fixed_provider(), fractions, plan);
  auto b = cross_validate(data.partial, data.truth, fixed_provider(), fractions, plan);
  auto dir = std::filesystem::temp_directory_path();
  write_report_csv(dir / "pmlfs_cv_a.csv", "toy", a);
  write_report_csv(dir / "pmlfs_cv_b.csv", "toy", b);
  CHECK(slurp(dir / "pmlfs_cv_a.csv") == slurp(dir / "pmlfs_cv_b.csv"));
  write_summary_json(dir / "pmlfs_cv_a.json", "toy", a);
  write_summary_json(dir / "pmlfs_cv_b.json", "toy", b);
  CHECK(slurp(dir / "pmlfs_cv_a.json") == slurp(dir / "pmlfs_cv_b.json"));
}

TEST_CASE("the ranking only ever sees training rows with partial labels") {
  auto data = tagged_dataset(50);
  auto plan = make_folds(50, 5, 7);
  std::mutex mu;
  bool leaked = false;
  RankingProvider spy = [&](const PmlDataset& train, std::size_t fold) {
    std::set<std::size_t> test;
    for (auto i : plan.test_indices(fold)) test.insert(i);
    std::lock_guard lock(mu);
    leaked = leaked || train.n_instances() != plan.train_indices(fold).size();
    for (std::size_t i = 0; i < train.n_instances(); ++i) {
      const auto id = static_cast<std::size_t>(std::lround(train.x(i, 0) * 49.0));
      leaked = leaked || test.count(id) > 0;
      for (std::size_t j = 0; j < train.n_labels(); ++j)
        leaked = leaked || train.y(i, j) != data.partial.y(id, j);
    }
    return fixed_provider()(train, fold);
  };
  const std::vector<double> fractions{1.0};
  cross_validate(data.partial, data.truth, spy, fractions, plan);
  CHECK_FALSE(leaked);
}

TEST_CASE("input checks") {
  auto data = tagged_dataset(30);
  const std::vector<double> fractions{1.0};
  const std::vector<double> none;
  auto plan = make_folds(30, 3, 0);
  CHECK_THROWS_AS(cross_validate(data.partial, Matrix(30, 2), fixed_provider(), fractions, plan),
                  DataError);
  CHECK_THROWS_AS(cross_validate(data.partial, data.truth, fixed_provider(), none, plan),
                  ConfigError);
  CHECK_THROWS_AS(
      cross_validate(data.partial, data.truth, fixed_provider(), fractions, make_folds(20, 3, 0)),
      ConfigError);
}

TEST_CASE("random provider yields distinct seeded orders") {
  auto data = tagged_dataset(30);
  auto provider = random_provider(3, 10);
  auto a = provider(data.partial, 0);
  auto b = provider(data.partial, 4);
  REQUIRE(a.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a[i].order == b[i].order);
    CHECK(a[i].method == RankingMethod::RANDOM);
  }
  CHECK(a[0].order != a[1].order);
}

TEST_CASE("aggregation across budgets") {
  MetricsReport r;
  r.method = "QR";
  for (double f : {0.5, 1.0}) {
    for (std::size_t fold = 0; fold < 2; ++fold) {
      FoldMetrics m;
      m.fraction = f;
      m.fold = fold;
      m.micro_f1 = f + 0.1 * static_cast<double>(fold);
      r.rows.push_back(m);
    }
  }
  CHECK(r.at_fraction(0.5, Metric::MicroF1).mean == doctest::Approx(0.55));
  CHECK(r.at_fraction(0.5, Metric::MicroF1).std == doctest::Approx(0.05));
  CHECK(r.overall(Metric::MicroF1).mean == doctest::Approx(0.8));
  CHECK(r.overall(Metric::MicroF1).std == doctest::Approx(0.25));
}
