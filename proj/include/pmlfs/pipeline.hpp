#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pmlfs/cross_validation.hpp"
#include "pmlfs/factorization.hpp"
#include "pmlfs/optics.hpp"
#include "pmlfs/ranking.hpp"

namespace pmlfs {

struct PipelineConfig {
  OpticsParams optics;
  HyperParams hp;
  /// Skips clustering and uses this latent dimension.
  std::optional<std::size_t> fixed_k;
};

struct PipelineResult {
  ClusterCount cluster;
  FactorState state;
};

/// Latent dimension from OPTICS on the feature columns, then the joint
/// factorization. Expects features already scaled to [0, 1].
PipelineResult run_pipeline(const PmlDataset& ds, const PipelineConfig& cfg);

FeatureRanking rank_features(const FactorState& state, RankingMethod method);

/// Fits once per training split and scores it with each of `methods`.
RankingProvider fsla_provider(PipelineConfig cfg, std::vector<RankingMethod> methods);

/// Ignores the data; yields `count` random orders seeded seed, seed+1, ...
RankingProvider random_provider(std::size_t count, std::uint64_t seed);

}  // namespace pmlfs
