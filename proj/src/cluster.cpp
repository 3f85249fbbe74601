#include "mrp/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mrp/parallel.hpp"

namespace mrp {
namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);  // smaller root wins, keeps ids stable
    parent[b] = a;
    return true;
  }
};

Vertex pick_first_center(const WeightedGraph& g) {
  Vertex best = 0;
  for (int v = 1; v < g.size(); ++v)
    if (g.vertex_weight(v) > g.vertex_weight(best)) best = v;
  return best;
}

}  // namespace

MergeResult merge_safe_sets(const WeightedGraph& g,
                            const std::vector<VertexSet>& sets,
                            double phi_threshold) {
  int n = static_cast<int>(sets.size());
  UnionFind uf(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (!sets_disjoint(sets[i], sets[j])) {
        uf.unite(i, j);  // overlapping inputs are pre-unioned
        continue;
      }
      if (mutual_conductance(g, sets[i], sets[j]) > phi_threshold)
        uf.unite(i, j);
    }

  MergeResult result;
  result.component.assign(n, -1);
  std::vector<int> root_to_out;
  for (int i = 0; i < n; ++i) {
    int r = uf.find(i);
    auto it = std::find(root_to_out.begin(), root_to_out.end(), r);
    int out;
    if (it == root_to_out.end()) {
      out = static_cast<int>(root_to_out.size());
      root_to_out.push_back(r);
      result.merged.emplace_back();
    } else {
      out = static_cast<int>(it - root_to_out.begin());
    }
    result.component[i] = out;
    result.merged[out] = set_union(result.merged[out], sets[i]);
  }
  return result;
}

Galaxy build_galaxy(const WeightedGraph& g, const MrpParams& params) {
  if (!g.connected()) throw std::invalid_argument("build_galaxy: disconnected");
  if (params.centers < 1) throw std::invalid_argument("need at least 1 center");

  Vertex first = pick_first_center(g);
  PolarEmbedding emb = polar_embed(g, first);

  Galaxy galaxy;
  std::vector<char> unclaimed(g.size(), 1);
  std::vector<Vertex> centers;
  // min hop distance to any already-chosen center
  std::vector<int> center_dist(g.size(), kUnreachable);

  for (int k = 0; k < params.centers; ++k) {
    Vertex center = -1;
    if (k == 0) {
      center = first;
    } else {
      // farthest unclaimed vertex from the chosen centers
      int best_d = -1;
      for (int v = 0; v < g.size(); ++v)
        if (unclaimed[v] && center_dist[v] > best_d) {
          best_d = center_dist[v];
          center = v;
        }
    }
    if (center < 0 || !unclaimed[center]) {
      galaxy.truncated = true;
      break;
    }
    SolarSystem ss = build_solar_system(g, center, params.scale,
                                        params.blocks_per_ring, unclaimed, emb);
    for (Vertex v : ss.claimed()) unclaimed[v] = 0;
    auto d = shortest_path_distances(g, center);
    for (int v = 0; v < g.size(); ++v)
      center_dist[v] = std::min(center_dist[v], d[v]);
    centers.push_back(center);
    galaxy.systems.push_back(std::move(ss));
  }
  if (static_cast<int>(galaxy.systems.size()) < params.centers)
    galaxy.truncated = true;
  return galaxy;
}

Clustering cluster_mrp(const WeightedGraph& g, const MrpParams& params) {
  if (!g.connected()) throw std::invalid_argument("cluster_mrp: disconnected");
  if (params.repeats < 1 || params.centers < 1 ||
      !(params.fraction > 0.0) || !(params.ra_threshold > 0.0) ||
      !(params.phi_threshold >= 0.0))
    throw std::invalid_argument("invalid clustering parameters");

  Clustering best;
  double best_score = std::numeric_limits<double>::infinity();
  bool have_best = false;

  for (int rep = 0; rep < params.repeats; ++rep) {
    std::uint64_t rep_seed = derive_seed(params.seed, rep);
    Galaxy galaxy = build_galaxy(g, params);

    Clustering result;
    for (std::size_t si = 0; si < galaxy.systems.size(); ++si) {
      const SolarSystem& ss = galaxy.systems[si];
      auto candidates =
          find_safe_sets(g, ss, params.fraction, params.ra_threshold,
                         derive_seed(rep_seed, si), params.threads);
      std::vector<VertexSet> safe;
      std::vector<int> safe_ring;
      for (const auto& cand : candidates)
        if (cand.safe && !cand.vertices.empty()) {
          safe.push_back(cand.vertices);
          safe_ring.push_back(cand.ring);
        }
      if (safe.empty()) continue;
      MergeResult merged = merge_safe_sets(g, safe, params.phi_threshold);
      // ring span per merged component decides the giant tag
      std::vector<std::vector<int>> rings(merged.merged.size());
      for (std::size_t i = 0; i < safe.size(); ++i)
        rings[merged.component[i]].push_back(safe_ring[i]);
      for (std::size_t m = 0; m < merged.merged.size(); ++m) {
        std::sort(rings[m].begin(), rings[m].end());
        rings[m].erase(std::unique(rings[m].begin(), rings[m].end()),
                       rings[m].end());
        std::string tag = rings[m].size() >= 3 ? "giant" : "safe-merge";
        // a merged union can straddle a sparse cut; keep components whole
        for (auto& comp : g.induced_components(merged.merged[m])) {
          result.clusters.push_back(std::move(comp));
          result.tags.push_back(tag + ":center=" + std::to_string(ss.center));
        }
      }
    }

    // attach leftover vertices to the neighboring cluster with the largest
    // connection weight, sweeping until stable
    std::vector<int> label(g.size(), -1);
    for (std::size_t ci = 0; ci < result.clusters.size(); ++ci)
      for (Vertex v : result.clusters[ci]) label[v] = static_cast<int>(ci);
    bool changed = !result.clusters.empty();
    while (changed) {
      changed = false;
      for (int v = 0; v < g.size(); ++v) {
        if (label[v] != -1) continue;
        std::vector<double> pull(result.clusters.size(), 0.0);
        for (const auto& [u, w] : g.neighbors(v))
          if (label[u] != -1) pull[label[u]] += w;
        int best_c = -1;
        for (std::size_t ci = 0; ci < pull.size(); ++ci)
          if (pull[ci] > 0.0 &&
              (best_c < 0 || pull[ci] > pull[best_c]))
            best_c = static_cast<int>(ci);
        if (best_c >= 0) {
          label[v] = best_c;
          changed = true;
        }
      }
    }
    for (int v = 0; v < g.size(); ++v) {
      if (label[v] == -1)
        result.unassigned.push_back(v);
      else
        result.clusters[label[v]] = set_union(result.clusters[label[v]],
                                              VertexSet{v});
    }
    // a cluster may have been fully re-sorted above; rebuild cleanly
    for (auto& c : result.clusters) c = make_vertex_set(std::move(c));

    ClusterMetrics metrics = evaluate_clustering(g, result);
    double score = metrics.mean_conductance;
    if (!have_best || score < best_score) {
      best = std::move(result);
      best_score = score;
      have_best = true;
    }
  }
  return best;
}

ClusterMetrics evaluate_clustering(const WeightedGraph& g,
                                   const Clustering& c) {
  ClusterMetrics metrics;
  double sum = 0.0;
  int defined = 0;
  int assigned = 0;
  for (const auto& cluster : c.clusters) {
    assigned += static_cast<int>(cluster.size());
    if (cluster.empty() || static_cast<int>(cluster.size()) == g.size()) {
      metrics.cluster_conductance.push_back(
          std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    double phi = conductance(g, cluster);
    metrics.cluster_conductance.push_back(phi);
    sum += phi;
    ++defined;
  }
  metrics.mean_conductance =
      defined > 0 ? sum / defined : std::numeric_limits<double>::infinity();
  metrics.coverage = g.size() > 0
                         ? static_cast<double>(assigned) / g.size()
                         : 0.0;
  return metrics;
}

}  // namespace mrp
