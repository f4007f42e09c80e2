#include "pmlfs/pipeline.hpp"

#include "pmlfs/errors.hpp"

namespace pmlfs {

PipelineResult run_pipeline(const PmlDataset& ds, const PipelineConfig& cfg) {
  PipelineResult out;
  if (cfg.fixed_k) {
    out.cluster.k = *cfg.fixed_k;
    out.cluster.raw_clusters = *cfg.fixed_k;
  } else {
    out.cluster = latent_dim(ds, cfg.optics);
  }
  out.state = fit(ds, out.cluster.k, cfg.hp);
  return out;
}

FeatureRanking rank_features(const FactorState& state, RankingMethod method) {
  switch (method) {
    case RankingMethod::QR:
      return score_qr(state);
    case RankingMethod::Q_ONLY:
      return score_q_only(state);
    case RankingMethod::RANDOM:
      break;
  }
  throw ConfigError("random ranking does not come from a fitted state");
}

RankingProvider fsla_provider(PipelineConfig cfg, std::vector<RankingMethod> methods) {
  return [cfg = std::move(cfg), methods = std::move(methods)](const PmlDataset& train,
                                                               std::size_t) {
    const auto result = run_pipeline(train, cfg);
    std::vector<FeatureRanking> out;
    for (RankingMethod m : methods) out.push_back(rank_features(result.state, m));
    return out;
  };
}

RankingProvider random_provider(std::size_t count, std::uint64_t seed) {
  return [count, seed](const PmlDataset& train, std::size_t) {
    std::vector<FeatureRanking> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_ranking(train.n_features(), seed + i));
    return out;
  };
}

}  // namespace pmlfs
