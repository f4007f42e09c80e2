#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "pmlfs/dataset.hpp"
#include "pmlfs/errors.hpp"
#include "pmlfs/optics.hpp"
#include "pmlfs/rng.hpp"

using namespace pmlfs;

namespace {

Matrix two_blobs() {
  Matrix pts(10, 2);
  for (std::size_t i = 0; i < 5; ++i) {
    pts(i, 0) = 0.1 * static_cast<double>(i);
    pts(5 + i, 0) = 10.0 + 0.1 * static_cast<double>(i);
    pts(5 + i, 1) = 0.05;
  }
  return pts;
}

Matrix random_points(Rng& rng, std::size_t m, std::size_t dim) {
  Matrix pts(m, dim);
  for (auto& v : pts.data()) v = rng.uniform();
  return pts;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(optics_order(Matrix(2, 2), {0.0, 5}), ConfigError);
  CHECK_THROWS_AS(optics_order(Matrix(2, 2), {1.0, 1}), ConfigError);
}

TEST_CASE("single point") {
  auto plot = optics_order(Matrix{{1.0, 2.0}}, {1.0, 2});
  CHECK(plot.order == std::vector<std::size_t>{0});
  CHECK(plot.reachability[0] == kUndefinedDistance);
}

TEST_CASE("identical points") {
  auto plot = optics_order(Matrix(6, 3, 0.25), {1.0, 3});
  for (std::size_t i = 0; i < 6; ++i) CHECK(plot.core_distance[i] == 0.0);
  for (std::size_t pos = 1; pos < 6; ++pos) CHECK(plot.reachability[plot.order[pos]] == 0.0);
}

TEST_CASE("two tight clusters show a single spike") {
  auto plot = optics_order(two_blobs(), {1.0, 3});
  std::size_t spikes = 0;
  for (std::size_t pos = 1; pos < 10; ++pos) {
    const double r = plot.reachability[plot.order[pos]];
    if (r > 1.0) {
      ++spikes;
      CHECK(plot.order[pos] == 5);
    } else {
      CHECK(r <= 0.2 + 1e-12);
    }
  }
  CHECK(spikes == 1);
  auto count = extract_cluster_count(plot, {1.0, 3}, 10);
  CHECK(count.k == 2);
  CHECK(count.raw_clusters == 2);
  CHECK_FALSE(count.warning.has_value());
}

TEST_CASE("reachability is never below the predecessor's core distance") {
  Rng rng(17);
  for (int t = 0; t < 20; ++t) {
    const Matrix pts = random_points(rng, 5 + rng.below(30), 1 + rng.below(4));
    auto plot = optics_order(pts, {0.5, 3});
    for (std::size_t pos = 1; pos < plot.order.size(); ++pos) {
      const double r = plot.reachability[plot.order[pos]];
      if (r == kUndefinedDistance) continue;
      bool explained = false;
      for (std::size_t q = 0; q < pos; ++q) {
        const std::size_t o = plot.order[q];
        const double expect = std::max(plot.core_distance[o],
                                       oracle::distance(pts, o, plot.order[pos]));
        CHECK(r <= expect + 1e-12);
        explained = explained || std::abs(r - expect) < 1e-12;
        CHECK(r >= 0.0);
      }
      CHECK(explained);
    }
  }
}

TEST_CASE("cluster count matches brute-force DBSCAN") {
  Rng rng(23);
  for (int t = 0; t < 40; ++t) {
    const Matrix pts = random_points(rng, 1 + rng.below(40), 1 + rng.below(4));
    const OpticsParams params{0.1 + 0.4 * rng.uniform(), 2 + rng.below(4)};
    auto plot = optics_order(pts, params);
    CHECK(extract_dbscan(plot, params.radius).n_clusters ==
          oracle::dbscan_clusters(pts, params.radius, params.min_pts));
  }
}

TEST_CASE("cluster count is invariant under point permutation") {
  Rng rng(29);
  for (int t = 0; t < 10; ++t) {
    const Matrix pts = random_points(rng, 30, 2);
    std::vector<std::size_t> perm(30);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    const OpticsParams params{0.2, 3};
    CHECK(extract_dbscan(optics_order(pts, params), 0.2).n_clusters ==
          extract_dbscan(optics_order(select_rows(pts, perm), params), 0.2).n_clusters);
  }
}

TEST_CASE("clamping and fallback") {
  auto single = optics_order(Matrix(6, 1, 0.0), {1.0, 2});
  auto one = extract_cluster_count(single, {1.0, 2}, 5);
  CHECK(one.raw_clusters == 1);
  CHECK(one.k == 2);

  Matrix spread(5, 1);
  for (std::size_t i = 0; i < 5; ++i) spread(i, 0) = 10.0 * static_cast<double>(i);
  auto none = extract_cluster_count(optics_order(spread, {1.0, 2}), {1.0, 2}, 5);
  CHECK(none.raw_clusters == 0);
  CHECK(none.k == 2);
  CHECK(none.warning.has_value());
}

TEST_CASE("latent dimension of duplicated feature groups") {
  Matrix x(8, 6);
  Rng rng(2);
  for (std::size_t i = 0; i < 8; ++i) {
    const double a = rng.uniform(), b = 5.0 + rng.uniform();
    for (std::size_t c = 0; c < 3; ++c) {
      x(i, c) = a;
      x(i, 3 + c) = b;
    }
  }
  Matrix y(8, 4, 0.0);
  for (std::size_t i = 0; i < 8; ++i) y(i, i % 4) = 1;
  auto ds = make_dataset(x, y);

  auto k = latent_dim(ds, {1.0, 2});
  CHECK(k.k == 2);
  CHECK(k.raw_clusters == 2);

  auto tiny = latent_dim(ds, {1e-300, 5});
  CHECK(tiny.k == 2);
  CHECK(tiny.warning.has_value());

  auto narrow = make_dataset(Matrix{{0.0, 1.0}, {1.0, 0.0}}, Matrix{{1, 0, 0}, {0, 1, 1}});
  CHECK(latent_dim(narrow, {1.0, 2}).k == 2);
}
