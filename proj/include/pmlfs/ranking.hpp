#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pmlfs/factorization.hpp"

namespace pmlfs {

enum class RankingMethod {
  QR,      // ‖(Q·R)_i·‖₂
  Q_ONLY,  // ‖Q_i·‖₂
  RANDOM,  // seeded random order, used as an evaluation baseline
};

std::string_view method_name(RankingMethod m);
RankingMethod parse_method(std::string_view name);

struct FeatureRanking {
  std::vector<double> scores;
  /// Feature indices by descending score, ties by ascending index.
  std::vector<std::size_t> order;
  RankingMethod method = RankingMethod::QR;
};

/// Builds a ranking from scores, sorting as documented on FeatureRanking.
FeatureRanking rank_by_scores(std::vector<double> scores, RankingMethod method);

FeatureRanking score_qr(const FactorState& state);
FeatureRanking score_q_only(const FactorState& state);

/// Uniformly random permutation; scores are d - position so the order is
/// consistent with them.
FeatureRanking random_ranking(std::size_t d, std::uint64_t seed);

/// Number of features kept at `fraction`: max(1, floor(fraction · d)).
std::size_t budget_size(std::size_t d, double fraction);

/// First budget_size(d, fraction) entries of `ranking.order`.
std::vector<std::size_t> select_top(const FeatureRanking& ranking, double fraction);

/// 0.01, 0.02, ..., 0.20 when d > 20, otherwise i/d for i = 1..d.
std::vector<double> default_fractions(std::size_t d);

/// Columns: rank, feature_index, feature_name, score, method.
void write_ranking_csv(const std::filesystem::path& path, const FeatureRanking& ranking,
                       std::span<const std::string> feature_names);

}  // namespace pmlfs
