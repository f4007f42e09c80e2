#include "pmlfs/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "pmlfs/dataset.hpp"
#include "pmlfs/errors.hpp"
#include "pmlfs/rng.hpp"

namespace pmlfs {

std::string_view method_name(RankingMethod m) {
  switch (m) {
    case RankingMethod::QR:
      return "QR";
    case RankingMethod::Q_ONLY:
      return "Q_ONLY";
    case RankingMethod::RANDOM:
      return "RANDOM";
  }
  return "?";
}

RankingMethod parse_method(std::string_view name) {
  if (name == "qr" || name == "QR") return RankingMethod::QR;
  if (name == "q-only" || name == "Q_ONLY") return RankingMethod::Q_ONLY;
  if (name == "random" || name == "RANDOM") return RankingMethod::RANDOM;
  throw ConfigError("unknown ranking method '" + std::string(name) + "'");
}

FeatureRanking rank_by_scores(std::vector<double> scores, RankingMethod method) {
  FeatureRanking r{std::move(scores), {}, method};
  r.order.resize(r.scores.size());
  std::iota(r.order.begin(), r.order.end(), std::size_t{0});
  std::stable_sort(r.order.begin(), r.order.end(),
                   [&](std::size_t a, std::size_t b) { return r.scores[a] > r.scores[b]; });
  return r;
}

FeatureRanking score_qr(const FactorState& state) {
  return rank_by_scores(row_l2_norms(matmul(state.q_mat, state.r_mat)), RankingMethod::QR);
}

FeatureRanking score_q_only(const FactorState& state) {
  return rank_by_scores(row_l2_norms(state.q_mat), RankingMethod::Q_ONLY);
}

FeatureRanking random_ranking(std::size_t d, std::uint64_t seed) {
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(perm);
  std::vector<double> scores(d);
  for (std::size_t pos = 0; pos < d; ++pos) scores[perm[pos]] = static_cast<double>(d - pos);
  return FeatureRanking{std::move(scores), std::move(perm), RankingMethod::RANDOM};
}

std::size_t budget_size(std::size_t d, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ConfigError("feature fraction must lie in (0, 1], got " + format_number(fraction));
  }
  // 0.29 * 100 = 28.999999999999996
  const auto count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(d) + 1e-9));
  return std::clamp<std::size_t>(count, 1, d);
}

std::vector<std::size_t> select_top(const FeatureRanking& ranking, double fraction) {
  const std::size_t count = budget_size(ranking.order.size(), fraction);
  return {ranking.order.begin(), ranking.order.begin() + static_cast<std::ptrdiff_t>(count)};
}

std::vector<double> default_fractions(std::size_t d) {
  std::vector<double> out;
  if (d <= 20) {
    for (std::size_t i = 1; i <= d; ++i) out.push_back(static_cast<double>(i) / static_cast<double>(d));
  } else {
    for (int p = 1; p <= 20; ++p) out.push_back(p / 100.0);
  }
  return out;
}

void write_ranking_csv(const std::filesystem::path& path, const FeatureRanking& ranking,
                       std::span<const std::string> feature_names) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "rank,feature_index,feature_name,score,method\n";
  for (std::size_t pos = 0; pos < ranking.order.size(); ++pos) {
    const std::size_t f = ranking.order[pos];
    out << pos + 1 << ',' << f << ',' << (f < feature_names.size() ? feature_names[f] : "") << ','
        << format_number(ranking.scores[f]) << ',' << method_name(ranking.method) << '\n';
  }
}

}  // namespace pmlfs
