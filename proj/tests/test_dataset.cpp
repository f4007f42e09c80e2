#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "pmlfs/dataset.hpp"
#include "pmlfs/errors.hpp"

using namespace pmlfs;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  auto dir = fs::temp_directory_path() / "pmlfs_test_dataset";
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& body) {
  auto p = scratch_dir() / name;
  std::ofstream(p) << body;
  return p;
}

// Smallest and largest counts of the central 99% of Binomial(n, p).
std::pair<int, int> binomial_99(int n, double p) {
  double cdf = 0.0;
  int lo = -1, hi = -1;
  for (int k = 0; k <= n; ++k) {
    const double log_pmf = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                           k * std::log(p) + (n - k) * std::log1p(-p);
    cdf += std::exp(log_pmf);
    if (lo < 0 && cdf > 0.005) lo = k;
    if (hi < 0 && cdf >= 0.995) hi = k;
  }
  return {lo, hi};
}

}  // namespace

TEST_CASE("validate catches each broken invariant") {
  CHECK_NOTHROW(make_dataset(Matrix{{0.5}, {1.0}}, Matrix{{1, 0}, {0, 1}}));
  CHECK_THROWS_AS(make_dataset(Matrix{{0.5}}, Matrix{{1}, {1}}), DataError);
  CHECK_THROWS_AS(make_dataset(Matrix(0, 1), Matrix(0, 1)), DataError);
  CHECK_THROWS_AS(make_dataset(Matrix{{0.5}}, Matrix{{0.5}}), DataError);
  CHECK_THROWS_AS(make_dataset(Matrix{{0.5}}, Matrix{{0, 0}}), DataError);
  CHECK_THROWS_AS(make_dataset(Matrix{{INFINITY}}, Matrix{{1}}), DataError);
  CHECK_THROWS_AS(make_dataset(Matrix{{0.5}}, Matrix{{1}}, {"a", "b"}), DataError);
}

TEST_CASE("default names") {
  auto ds = make_dataset(Matrix{{1, 2}}, Matrix{{1}});
  CHECK(ds.feature_names == std::vector<std::string>{"f0", "f1"});
  CHECK(ds.label_names == std::vector<std::string>{"l0"});
}

TEST_CASE("csv pair loading") {
  auto x = write_file("x.csv", "a,b\n1,2\n3,4\n");
  auto y = write_file("y.csv", "1,0\n0,1\n");
  auto ds = load_csv_pair(x, y);
  CHECK(ds.n_instances() == 2);
  CHECK(ds.feature_names == std::vector<std::string>{"a", "b"});
  CHECK(ds.x == Matrix{{1, 2}, {3, 4}});
  CHECK(ds.y == Matrix{{1, 0}, {0, 1}});
}

TEST_CASE("csv errors carry locations") {
  auto y = write_file("y_ok.csv", "1\n1\n");
  CHECK_THROWS_AS(load_csv_pair(scratch_dir() / "missing.csv", y), DataError);

  auto ragged = write_file("ragged.csv", "1,2\n3\n");
  CHECK_THROWS_WITH_AS(read_csv(ragged), doctest::Contains(":2:"), DataError);

  auto bad = write_file("bad.csv", "1,2\n3,x\n");
  CHECK_THROWS_WITH_AS(read_csv(bad), doctest::Contains("column 2"), DataError);

  auto nan = write_file("nan.csv", "1,nan\n");
  CHECK_THROWS_AS(read_csv(nan), DataError);

  auto x = write_file("x2.csv", "1\n2\n");
  auto nonbinary = write_file("y_bad.csv", "1\n2\n");
  CHECK_THROWS_AS(load_csv_pair(x, nonbinary), DataError);
  auto short_y = write_file("y_short.csv", "1\n");
  CHECK_THROWS_AS(load_csv_pair(x, short_y), DataError);
}

TEST_CASE("csv round trip keeps every bit") {
  const Matrix m{{0.1, 1.0 / 3.0}, {-2.5e-300, 12345678.9}};
  auto p = scratch_dir() / "round.csv";
  write_csv(p, m);
  CHECK(read_csv(p).values == m);
}

TEST_CASE("minmax normalization") {
  auto ds = make_dataset(Matrix{{2, 0, 5}, {4, 0.5, 5}, {6, 1, 5}}, Matrix{{1}, {1}, {1}});
  auto n = normalize_minmax(ds);
  CHECK(n.x == Matrix{{0, 0, 0}, {0.5, 0.5, 0}, {1, 1, 0}});
  CHECK(normalize_minmax(n).x == n.x);
}

TEST_CASE("candidate noise") {
  Matrix x(1000, 1, 0.0);
  Matrix y2(1000, 2, 0.0);
  for (std::size_t i = 0; i < 1000; ++i) y2(i, 1) = 1;
  auto ds = make_dataset(x, y2);

  auto none = inject_candidate_noise(ds, 0.0, 1);
  CHECK(none.partial.y == ds.y);
  CHECK(none.truth == ds.y);

  auto all = inject_candidate_noise(ds, 1.0, 1);
  CHECK(all.partial.y == Matrix(1000, 2, 1.0));

  auto some = inject_candidate_noise(ds, 0.3, 9);
  int flipped = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    flipped += static_cast<int>(some.partial.y(i, 0));
    CHECK(some.partial.y(i, 1) == 1.0);
  }
  const auto [lo, hi] = binomial_99(1000, 0.3);
  CHECK(flipped >= lo);
  CHECK(flipped <= hi);

  CHECK(inject_candidate_noise(ds, 0.3, 9).partial.y == some.partial.y);
  CHECK_THROWS_AS(inject_candidate_noise(ds, -0.1, 1), ConfigError);
  CHECK_THROWS_AS(inject_candidate_noise(ds, 1.5, 1), ConfigError);
}

TEST_CASE("fold plans") {
  auto p10 = make_folds(10, 10, 0);
  for (std::size_t f = 0; f < 10; ++f) CHECK(p10.test_indices(f).size() == 1);

  auto p23 = make_folds(23, 10, 4);
  std::map<std::size_t, int> sizes;
  std::vector<int> seen(23, 0);
  for (std::size_t f = 0; f < 10; ++f) {
    auto test = p23.test_indices(f);
    auto train = p23.train_indices(f);
    ++sizes[test.size()];
    CHECK(test.size() + train.size() == 23);
    for (auto i : test) ++seen[i];
  }
  CHECK(sizes == std::map<std::size_t, int>{{2, 7}, {3, 3}});
  CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));

  CHECK(make_folds(23, 10, 4).assignments == p23.assignments);
  CHECK_THROWS_AS(make_folds(5, 10, 0), ConfigError);
  CHECK_THROWS_AS(make_folds(5, 1, 0), ConfigError);
}

TEST_CASE("planted dataset") {
  PlantedConfig cfg;
  auto p = make_planted_dataset(cfg);
  CHECK(p.data.n_instances() == cfg.n);
  CHECK(p.data.n_features() == cfg.d);
  CHECK(p.data.n_labels() == cfg.l);
  CHECK(p.informative.size() == cfg.n_informative);
  CHECK(std::is_sorted(p.informative.begin(), p.informative.end()));
  CHECK(min_entry(p.data.x) >= 0.0);
  CHECK(max_entry(p.data.x) <= 1.0);
  CHECK_NOTHROW(validate(p.data));
  CHECK(make_planted_dataset(cfg).data.x == p.data.x);
}
