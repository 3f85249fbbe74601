#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mrp/graph.hpp"
#include "mrp/solar.hpp"

namespace mrp {

struct Clustering {
  std::vector<VertexSet> clusters;
  std::vector<std::string> tags;  // provenance per cluster
  VertexSet unassigned;
};

struct MrpParams {
  int centers = 4;
  int scale = 2;
  int blocks_per_ring = 8;
  double fraction = 0.5;
  double ra_threshold = 1.0;
  double phi_threshold = 0.1;
  int repeats = 3;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct MergeResult {
  std::vector<VertexSet> merged;
  std::vector<int> component;  // input set index -> merged set index
};

// Union-find over pairs with mutual conductance above phi_threshold.
MergeResult merge_safe_sets(const WeightedGraph& g,
                            const std::vector<VertexSet>& sets,
                            double phi_threshold);

struct Galaxy {
  std::vector<SolarSystem> systems;
  bool truncated = false;  // fewer systems than requested centers
};

// Disjoint solar systems; centers by greedy farthest-point sampling starting
// from the max-weight vertex, each system claiming only unclaimed vertices.
Galaxy build_galaxy(const WeightedGraph& g, const MrpParams& params);

// Algorithm: embed, build the galaxy, sample per-block candidate sets, solve
// the harmonic systems, keep safe sets, merge by mutual conductance, then
// attach leftover vertices to their best-connected cluster. Best repeat by
// mean intra-cluster conductance.
Clustering cluster_mrp(const WeightedGraph& g, const MrpParams& params);

struct ClusterMetrics {
  std::vector<double> cluster_conductance;  // NaN where undefined (S = V)
  double mean_conductance;                  // over defined entries
  double coverage;                          // assigned fraction of V
};

ClusterMetrics evaluate_clustering(const WeightedGraph& g, const Clustering& c);

}  // namespace mrp
