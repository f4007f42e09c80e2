#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pmlfs/dataset.hpp"
#include "pmlfs/matrix.hpp"

namespace pmlfs {

struct OpticsParams {
  /// Generating distance: neighbourhoods never extend past it.
  double radius = 1.0;
  /// Neighbourhood size (the point itself included) that makes a point core.
  std::size_t min_pts = 5;

  void validate() const;
};

inline constexpr double kUndefinedDistance = std::numeric_limits<double>::infinity();

/// OPTICS output. `reachability` and `core_distance` are indexed by point,
/// `order` lists points in processing order.
struct ReachabilityPlot {
  std::vector<std::size_t> order;
  std::vector<double> reachability;
  std::vector<double> core_distance;
};

/// Orders the rows of `points` under Euclidean distance. Expansion ties are
/// broken by lowest point index and new components start at the lowest
/// unprocessed index.
ReachabilityPlot optics_order(const Matrix& points, const OpticsParams& params);

struct ClusterExtraction {
  /// Cluster id per point, -1 for noise.
  std::vector<int> labels;
  std::size_t n_clusters = 0;
};

/// Flat DBSCAN-equivalent extraction at distance `threshold`.
ClusterExtraction extract_dbscan(const ReachabilityPlot& plot, double threshold);

struct ClusterCount {
  std::size_t k = 2;
  /// Clusters found before clamping.
  std::size_t raw_clusters = 0;
  std::optional<std::string> warning;
};

/// Cluster count at threshold = radius, clamped to [2, max_k].
ClusterCount extract_cluster_count(const ReachabilityPlot& plot, const OpticsParams& params,
                                   std::size_t max_k);

/// Clusters the feature columns of `ds` and returns the latent dimension,
/// clamped to [2, min(d, l, d - 1)].
ClusterCount latent_dim(const PmlDataset& ds, const OpticsParams& params);

/// Same as `latent_dim` but also returns the plot that produced it.
ClusterCount latent_dim(const PmlDataset& ds, const OpticsParams& params, ReachabilityPlot& plot);

}  // namespace pmlfs
