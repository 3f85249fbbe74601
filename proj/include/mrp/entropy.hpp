#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "mrp/graph.hpp"

namespace mrp {

struct Ball {
  Vertex center;
  int radius;
  VertexSet vertices;
};

struct Covering {
  std::vector<Ball> balls;
};

// Greedy cover: repeatedly take the lowest-id uncovered vertex and add its
// radius-rho ball.
Covering ball_cover(const WeightedGraph& g, int rho);

// Finite-horizon optimal-stopping value for payoff d_G(x, X_tau) plus one
// unit of running reward per step spent inside omega before stopping.
// Backward induction over N steps; returns V(x).
double value_function(const WeightedGraph& g, Vertex x, const VertexSet& omega,
                      int n_steps);

// Same recursion on an explicit substochastic kernel and payoff/reward
// vectors; state space = kernel rows.
double value_function_kernel(const Eigen::MatrixXd& kernel,
                             const Eigen::VectorXd& stop_payoff,
                             const Eigen::VectorXd& running_reward, int n_steps,
                             int start);

struct SnellEnvelope {
  int horizon;
  // values[n](state) for n = 0..N; values[N] equals the terminal payoff.
  std::vector<Eigen::VectorXd> values;
};

// B_N = M_N, B_n = max(M_n, E[B_{n+1} | state]); payoff[n] is M_n per state.
SnellEnvelope snell_envelope(const std::vector<Eigen::VectorXd>& payoff,
                             const Eigen::MatrixXd& kernel);

// tau(n, state) semantics: stop at the first k >= n with B_k = M_k.
struct StopRule {
  // stop[n](state) != 0 when B_n(state) == M_n(state)
  std::vector<std::vector<char>> stop;
};

StopRule optimal_stop_rule(const SnellEnvelope& env,
                           const std::vector<Eigen::VectorXd>& payoff);

// Expected payoff E[M_tau] when following the rule from (0, start).
double expected_stopped_payoff(const StopRule& rule,
                               const std::vector<Eigen::VectorXd>& payoff,
                               const Eigen::MatrixXd& kernel, int start);

// H_beta(x) = (1/n) sum_i V_i(x) log V_i(x) over the covering balls, with
// 0 log 0 = 0; for a set K the mean over its members.
double beta_entropy(const WeightedGraph& g, const VertexSet& k,
                    const Covering& cov, int n_steps);

struct EntropyParams {
  int cardinality = 8;
  int n_sets = 32;
  int top_m = 5;
  int radius = 1;
  int horizon = 0;  // 0 means 4 * diameter
  std::uint64_t seed = 0;
  int threads = 1;
};

struct RankedSet {
  VertexSet vertices;
  double score;
  int sample_index;
};

// Random fixed-cardinality sets ranked by beta-entropy, highest first.
std::vector<RankedSet> cluster_entropy(const WeightedGraph& g,
                                       const EntropyParams& params);

}  // namespace mrp
