#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mrp/graph.hpp"

namespace mrp {

struct WalkPath {
  Vertex start;
  std::vector<Vertex> vertices;  // includes the start
  std::uint64_t seed;
};

// Subordinated-walk configuration: the walk is observed at clock times
// tau_n = R_1 + ... + R_n with R_i uniform on {1, ..., 2^s}, and stopped
// at the first n with tau_n >= t_threshold.
struct MrpConfig {
  int scale = 2;
  std::int64_t t_threshold = 0;  // 0 means the default 100 * 4^s

  std::int64_t effective_threshold() const;
};

// G_A(x, y) = expected visits to y before leaving A, started at x.
// Indexed by position within the sorted domain set.
struct KilledGreen {
  VertexSet domain;
  Eigen::MatrixXd values;

  double at(Vertex x, Vertex y) const;
};

WalkPath simulate_walk(const WeightedGraph& g, Vertex start, int steps,
                       std::uint64_t seed);

WalkPath simulate_mrp(const WeightedGraph& g, Vertex start,
                      const MrpConfig& cfg, std::uint64_t seed);

// Distribution of a +1/-1 walk after n steps: k -> P(S_n = k).
std::map<int, double> rw_step_distribution(int n, double p_up);

// Chebyshev polynomial of the first kind via the three-term recurrence.
double chebyshev_poly(int k, double t);
Eigen::MatrixXd chebyshev_poly(int k, const Eigen::MatrixXd& p);

// Max-entry residual of P^n = sum_k P(S_n = k) H_{|k|}(P).
double verify_duality(const Eigen::MatrixXd& p, int n);

struct CarneReport {
  int violations = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  int checked = 0;
};

// p^t(x,y) <= 2 sqrt(w_y / w_x) exp(-d(x,y)^2 / (2t)) for 1 <= t <= t_max.
CarneReport carne_check(const WeightedGraph& g, int t_max);

struct HoeffdingReport {
  int violations = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  int checked = 0;
};

// sum_{|k| >= d} P(S_n = k) <= 2 exp(-d^2 / (2n)) for the simple walk,
// all 1 <= n <= n_max and 1 <= d <= n.
HoeffdingReport hoeffding_tail_check(int n_max);

KilledGreen killed_green(const WeightedGraph& g, const VertexSet& a);

struct GreenReturnResult {
  double green_cc;
  double escape_probability;
  double residual;  // |G_A(c,c) * P_escape - 1|
};

GreenReturnResult green_return_identity(const WeightedGraph& g,
                                        const VertexSet& a, Vertex c);

// Max over start vertices x in B of the last-exit identity residual,
// P^x(hit A before leaving B) vs sum_y G_B(x,y) P^y(no return to A before
// leaving B). Requires A subset of B.
double last_exit_identity(const WeightedGraph& g, const VertexSet& a,
                          const VertexSet& b);

struct BoundCheck {
  double value;
  double bound;
  bool satisfied;
};

struct WalkStatistics {
  std::optional<int> mixing_time;  // nullopt for periodic chains
  double relaxation_time;
  double max_hitting_time;
  BoundCheck oliveira;                     // t_hit vs 20 (d_avg/d_min) n sqrt(t_rel+1)
  std::optional<BoundCheck> lovasz;        // only computed for n <= 14, aperiodic
};

WalkStatistics walk_statistics(const WeightedGraph& g, double epsilon);

struct Estimate {
  double value;
  double stderr_;
  std::int64_t samples;
};

// Monte-Carlo estimate of P(T(x, Omega) - d(x, Omega) > C d(x, Omega)).
Estimate discrepancy_probability(const WeightedGraph& g, Vertex x,
                                 const VertexSet& omega, double c,
                                 std::int64_t samples, std::uint64_t seed);

// One step of the weighted walk; shared by the simulators and oracles.
Vertex walk_step(const WeightedGraph& g, Vertex u, std::mt19937_64& rng);

}  // namespace mrp
