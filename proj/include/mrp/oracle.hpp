#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "mrp/cluster.hpp"
#include "mrp/graph.hpp"
#include "mrp/walk.hpp"

namespace mrp {

struct SbmSpec {
  std::vector<int> block_sizes;
  double p_in = 0.5;
  double p_out = 0.01;
  std::uint64_t seed = 0;
};

struct SbmInstance {
  WeightedGraph graph;
  std::vector<int> membership;  // planted block per vertex
  bool regenerated = false;     // a disconnected draw was re-rolled
};

// Unit-weight SBM draw; re-rolled with a derived seed while disconnected
// (up to a bounded number of attempts, then returned as-is with the flag).
SbmInstance generate_sbm(const SbmSpec& spec);

// Monte-Carlo estimate of P(hit U before the exterior boundary of B).
Estimate mc_hit_probability(const WeightedGraph& g, const VertexSet& b,
                            const VertexSet& u, Vertex start,
                            std::int64_t samples, std::uint64_t seed);

// Exhaustive maximum of the expected reward over all Markov stopping rules
// (stop decisions indexed by (time, state), terminal time forced). Reward:
// stop at (t, s) pays stop_payoff(s); continuing pays running_reward(s).
// Throws when states * horizon > 20.
double brute_force_stopping_value(const Eigen::MatrixXd& kernel,
                                  const Eigen::VectorXd& stop_payoff,
                                  const Eigen::VectorXd& running_reward,
                                  int horizon, int start);

// Same enumeration for a time-dependent payoff with no running reward,
// matching the Snell-envelope setting.
double brute_force_snell_value(const Eigen::MatrixXd& kernel,
                               const std::vector<Eigen::VectorXd>& payoff,
                               int start);

// Chance-corrected partition agreement; unassigned vertices count as
// singleton classes. Both clusterings must cover the same vertex universe.
double adjusted_rand_index(const Clustering& a, const Clustering& b, int n);

Clustering clustering_from_labels(const std::vector<int>& labels);

}  // namespace mrp
