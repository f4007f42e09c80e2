#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "pmlfs/errors.hpp"
#include "pmlfs/ranking.hpp"
#include "pmlfs/rng.hpp"

using namespace pmlfs;

namespace {

FactorState with_factors(Matrix q, Matrix r) {
  FactorState s;
  s.q_mat = std::move(q);
  s.r_mat = std::move(r);
  return s;
}

std::vector<std::size_t> iota_vec(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

TEST_CASE("QR scores") {
  auto r = score_qr(with_factors(Matrix{{2}, {1}}, Matrix{{3, 4}}));
  CHECK(r.scores == std::vector<double>{10.0, 5.0});
  CHECK(r.order == std::vector<std::size_t>{0, 1});
  CHECK(r.method == RankingMethod::QR);

  auto zero = score_qr(with_factors(Matrix(5, 2), Matrix(2, 3, 1.0)));
  CHECK(zero.scores == std::vector<double>(5, 0.0));
  CHECK(zero.order == iota_vec(5));
}

TEST_CASE("QR scores are row norms of the product") {
  Rng rng(2);
  Matrix q(12, 3), r(3, 5);
  for (auto& v : q.data()) v = rng.uniform();
  for (auto& v : r.data()) v = rng.uniform();
  CHECK(score_qr(with_factors(q, r)).scores == row_l2_norms(matmul(q, r)));
}

TEST_CASE("Q-only scores") {
  auto r = score_q_only(with_factors(Matrix{{0, 0}, {3, 4}}, Matrix(2, 1)));
  CHECK(r.scores == std::vector<double>{0.0, 5.0});
  CHECK(r.order == std::vector<std::size_t>{1, 0});
  auto id = score_q_only(with_factors(Matrix::identity(3), Matrix(3, 1)));
  CHECK(id.scores == std::vector<double>(3, 1.0));
  CHECK(id.order == iota_vec(3));
}

TEST_CASE("ties break by ascending index") {
  auto r = rank_by_scores({1.0, 3.0, 1.0, 3.0}, RankingMethod::QR);
  CHECK(r.order == std::vector<std::size_t>{1, 3, 0, 2});
}

TEST_CASE("budgets") {
  auto r = rank_by_scores(std::vector<double>(100, 1.0), RankingMethod::QR);
  CHECK(select_top(r, 0.2).size() == 20);
  auto r16 = rank_by_scores(std::vector<double>(16, 1.0), RankingMethod::QR);
  CHECK(select_top(r16, 1.0).size() == 16);
  auto r10 = rank_by_scores(std::vector<double>(10, 1.0), RankingMethod::QR);
  CHECK(select_top(r10, 0.01) == std::vector<std::size_t>{0});
  CHECK(budget_size(50, 0.06) == 3);
  CHECK(budget_size(100, 0.07) == 7);
  CHECK_THROWS_AS(select_top(r10, 0.0), ConfigError);
  CHECK_THROWS_AS(select_top(r10, 1.01), ConfigError);
}

TEST_CASE("default fractions") {
  auto wide = default_fractions(103);
  CHECK(wide.size() == 20);
  CHECK(wide.front() == doctest::Approx(0.01));
  CHECK(wide.back() == doctest::Approx(0.20));
  auto narrow = default_fractions(16);
  CHECK(narrow.size() == 16);
  for (std::size_t i = 0; i < 16; ++i) CHECK(budget_size(16, narrow[i]) == i + 1);
}

TEST_CASE("random rankings are seeded permutations") {
  auto a = random_ranking(30, 5);
  CHECK(a.order == random_ranking(30, 5).order);
  CHECK(a.order != random_ranking(30, 6).order);
  auto sorted = a.order;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == iota_vec(30));
  CHECK(rank_by_scores(a.scores, RankingMethod::RANDOM).order == a.order);
}

TEST_CASE("method names") {
  CHECK(method_name(RankingMethod::QR) == "QR");
  CHECK(method_name(RankingMethod::Q_ONLY) == "Q_ONLY");
  CHECK(parse_method("q-only") == RankingMethod::Q_ONLY);
  CHECK(parse_method("QR") == RankingMethod::QR);
  CHECK_THROWS_AS(parse_method("bogus"), ConfigError);
}

TEST_CASE("ranking csv") {
  auto path = std::filesystem::temp_directory_path() / "pmlfs_ranking.csv";
  auto r = rank_by_scores({0.5, 2.0}, RankingMethod::Q_ONLY);
  const std::vector<std::string> names{"a", "b"};
  write_ranking_csv(path, r, names);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "rank,feature_index,feature_name,score,method\n1,1,b,2,Q_ONLY\n2,0,a,0.5,Q_ONLY\n");
}
