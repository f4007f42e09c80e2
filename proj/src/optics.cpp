#include "pmlfs/optics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "pmlfs/errors.hpp"

namespace pmlfs {

void OpticsParams::validate() const {
  if (!(std::isfinite(radius) && radius > 0.0)) {
    throw ConfigError("OPTICS radius must be finite and positive");
  }
  if (min_pts < 2) throw ConfigError("OPTICS min_pts must be at least 2");
}

namespace {

// Full symmetric distance table; rows are points.
std::vector<double> pairwise_distances(const Matrix& points) {
  const std::size_t m = points.rows();
  std::vector<double> dist(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    auto a = points.row(i);
    for (std::size_t j = i + 1; j < m; ++j) {
      auto b = points.row(j);
      double s = 0.0;
      for (std::size_t c = 0; c < a.size(); ++c) {
        const double diff = a[c] - b[c];
        s += diff * diff;
      }
      dist[i * m + j] = dist[j * m + i] = std::sqrt(s);
    }
  }
  return dist;
}

}  // namespace

ReachabilityPlot optics_order(const Matrix& points, const OpticsParams& params) {
  params.validate();
  const std::size_t m = points.rows();
  const auto dist = pairwise_distances(points);
  auto d = [&](std::size_t i, std::size_t j) { return dist[i * m + j]; };

  ReachabilityPlot plot{{}, std::vector<double>(m, kUndefinedDistance),
                        std::vector<double>(m, kUndefinedDistance)};
  plot.order.reserve(m);

  std::vector<double> within;
  for (std::size_t p = 0; p < m; ++p) {
    within.clear();
    for (std::size_t o = 0; o < m; ++o)
      if (d(p, o) <= params.radius) within.push_back(d(p, o));
    if (within.size() >= params.min_pts) {
      std::nth_element(within.begin(), within.begin() + (params.min_pts - 1), within.end());
      plot.core_distance[p] = within[params.min_pts - 1];
    }
  }

  std::vector<bool> processed(m, false);
  std::set<std::pair<double, std::size_t>> seeds;

  auto expand_from = [&](std::size_t p) {
    const double core = plot.core_distance[p];
    for (std::size_t o = 0; o < m; ++o) {
      if (processed[o] || d(p, o) > params.radius) continue;
      const double reach = std::max(core, d(p, o));
      if (reach < plot.reachability[o]) {
        seeds.erase({plot.reachability[o], o});
        plot.reachability[o] = reach;
        seeds.insert({reach, o});
      }
    }
  };

  for (std::size_t start = 0; start < m; ++start) {
    if (processed[start]) continue;
    processed[start] = true;
    plot.order.push_back(start);
    if (!std::isfinite(plot.core_distance[start])) continue;
    expand_from(start);
    while (!seeds.empty()) {
      const std::size_t q = seeds.begin()->second;
      seeds.erase(seeds.begin());
      processed[q] = true;
      plot.order.push_back(q);
      if (std::isfinite(plot.core_distance[q])) expand_from(q);
    }
  }
  return plot;
}

ClusterExtraction extract_dbscan(const ReachabilityPlot& plot, double threshold) {
  ClusterExtraction out{std::vector<int>(plot.reachability.size(), -1), 0};
  int current = -1;
  for (std::size_t p : plot.order) {
    if (plot.reachability[p] > threshold) {
      if (plot.core_distance[p] <= threshold) {
        current = static_cast<int>(out.n_clusters++);
        out.labels[p] = current;
      } else {
        out.labels[p] = -1;
      }
    } else {
      out.labels[p] = current;
    }
  }
  return out;
}

ClusterCount extract_cluster_count(const ReachabilityPlot& plot, const OpticsParams& params,
                                   std::size_t max_k) {
  ClusterCount out;
  out.raw_clusters = extract_dbscan(plot, params.radius).n_clusters;
  if (out.raw_clusters == 0) {
    out.k = 2;
    out.warning = "OPTICS found no clusters at radius " + format_number(params.radius) +
                  " (every point is noise); using k = 2";
    return out;
  }
  out.k = std::max<std::size_t>(2, std::min(out.raw_clusters, max_k));
  return out;
}

ClusterCount latent_dim(const PmlDataset& ds, const OpticsParams& params,
                        ReachabilityPlot& plot) {
  const std::size_t d = ds.n_features();
  plot = optics_order(transpose(ds.x), params);
  const std::size_t max_k = std::min({d, ds.n_labels(), d > 0 ? d - 1 : 0});
  return extract_cluster_count(plot, params, max_k);
}

ClusterCount latent_dim(const PmlDataset& ds, const OpticsParams& params) {
  ReachabilityPlot plot;
  return latent_dim(ds, params, plot);
}

}  // namespace pmlfs
