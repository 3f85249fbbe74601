#include "mrp/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "mrp/parallel.hpp"

namespace mrp {
namespace {

int graph_diameter(const WeightedGraph& g) {
  int diam = 0;
  for (int v = 0; v < g.size(); ++v) {
    auto d = shortest_path_distances(g, v);
    for (int x : d)
      if (x != kUnreachable) diam = std::max(diam, x);
  }
  return diam;
}

}  // namespace

Covering ball_cover(const WeightedGraph& g, int rho) {
  if (rho < 0) throw std::invalid_argument("negative radius");
  Covering cov;
  std::vector<char> covered(g.size(), 0);
  for (int v = 0; v < g.size(); ++v) {
    if (covered[v]) continue;
    auto d = shortest_path_distances(g, v);
    VertexSet ball;
    for (int u = 0; u < g.size(); ++u)
      if (d[u] != kUnreachable && d[u] <= rho) {
        ball.push_back(u);
        covered[u] = 1;
      }
    cov.balls.push_back(Ball{v, rho, std::move(ball)});
  }
  return cov;
}

double value_function_kernel(const Eigen::MatrixXd& kernel,
                             const Eigen::VectorXd& stop_payoff,
                             const Eigen::VectorXd& running_reward, int n_steps,
                             int start) {
  if (n_steps < 0) throw std::invalid_argument("negative horizon");
  Eigen::VectorXd value = stop_payoff;  // V_N
  for (int n = n_steps - 1; n >= 0; --n) {
    Eigen::VectorXd cont = running_reward + kernel * value;
    value = stop_payoff.cwiseMax(cont);
  }
  return value(start);
}

double value_function(const WeightedGraph& g, Vertex x, const VertexSet& omega,
                      int n_steps) {
  if (!g.valid_vertex(x)) throw std::invalid_argument("invalid start vertex");
  auto dist = shortest_path_distances(g, x);
  int n = g.size();
  Eigen::VectorXd payoff(n), reward(n);
  for (int v = 0; v < n; ++v) {
    payoff(v) = dist[v] == kUnreachable ? 0.0 : dist[v];
    reward(v) = set_contains(omega, v) ? 1.0 : 0.0;
  }
  return value_function_kernel(transition_matrix(g), payoff, reward, n_steps,
                               x);
}

SnellEnvelope snell_envelope(const std::vector<Eigen::VectorXd>& payoff,
                             const Eigen::MatrixXd& kernel) {
  if (payoff.empty()) throw std::invalid_argument("empty payoff table");
  int horizon = static_cast<int>(payoff.size()) - 1;
  SnellEnvelope env;
  env.horizon = horizon;
  env.values.resize(horizon + 1);
  env.values[horizon] = payoff[horizon];
  for (int n = horizon - 1; n >= 0; --n)
    env.values[n] = payoff[n].cwiseMax(kernel * env.values[n + 1]);
  return env;
}

StopRule optimal_stop_rule(const SnellEnvelope& env,
                           const std::vector<Eigen::VectorXd>& payoff) {
  StopRule rule;
  rule.stop.resize(env.values.size());
  for (std::size_t n = 0; n < env.values.size(); ++n) {
    int states = static_cast<int>(env.values[n].size());
    rule.stop[n].assign(states, 0);
    for (int s = 0; s < states; ++s)
      if (env.values[n](s) <= payoff[n](s) + 1e-12) rule.stop[n][s] = 1;
  }
  // terminal time always stops
  std::fill(rule.stop.back().begin(), rule.stop.back().end(), 1);
  return rule;
}

double expected_stopped_payoff(const StopRule& rule,
                               const std::vector<Eigen::VectorXd>& payoff,
                               const Eigen::MatrixXd& kernel, int start) {
  int horizon = static_cast<int>(payoff.size()) - 1;
  int states = static_cast<int>(kernel.rows());
  Eigen::VectorXd value = payoff[horizon];
  for (int n = horizon - 1; n >= 0; --n) {
    Eigen::VectorXd cont = kernel * value;
    Eigen::VectorXd next(states);
    for (int s = 0; s < states; ++s)
      next(s) = rule.stop[n][s] ? payoff[n](s) : cont(s);
    value = std::move(next);
  }
  return value(start);
}

double beta_entropy(const WeightedGraph& g, const VertexSet& k,
                    const Covering& cov, int n_steps) {
  if (k.empty()) throw std::invalid_argument("empty vertex set");
  if (n_steps < 1) throw std::invalid_argument("horizon must be >= 1");
  double total = 0.0;
  int n_balls = static_cast<int>(cov.balls.size());
  for (Vertex x : k) {
    double h = 0.0;
    for (const auto& ball : cov.balls) {
      double v = value_function(g, x, ball.vertices, n_steps);
      if (v > 0.0) h += v * std::log(v);
    }
    total += h / n_balls;
  }
  return total / static_cast<double>(k.size());
}

std::vector<RankedSet> cluster_entropy(const WeightedGraph& g,
                                       const EntropyParams& params) {
  if (params.cardinality < 1 || params.cardinality > g.size())
    throw std::invalid_argument("cardinality outside [1, n]");
  if (params.n_sets < params.top_m || params.top_m < 1)
    throw std::invalid_argument("need n_sets >= top_m >= 1");

  int horizon = params.horizon > 0 ? params.horizon : 4 * graph_diameter(g);
  horizon = std::max(horizon, 1);
  Covering cov = ball_cover(g, params.radius);

  std::vector<RankedSet> sets(params.n_sets);
  std::vector<Vertex> all(g.size());
  for (int v = 0; v < g.size(); ++v) all[v] = v;

  // sample first so scoring can run in parallel over fixed inputs
  for (int l = 0; l < params.n_sets; ++l) {
    std::mt19937_64 rng(derive_seed(params.seed, l));
    std::vector<Vertex> pool = all;
    std::shuffle(pool.begin(), pool.end(), rng);
    sets[l].vertices =
        make_vertex_set({pool.begin(), pool.begin() + params.cardinality});
    sets[l].sample_index = l;
  }
  parallel_for(params.n_sets, params.threads, [&](int l) {
    sets[l].score = beta_entropy(g, sets[l].vertices, cov, horizon);
  });

  std::stable_sort(sets.begin(), sets.end(),
                   [](const RankedSet& a, const RankedSet& b) {
                     if (a.score != b.score) return a.score > b.score;
                     return a.sample_index < b.sample_index;
                   });
  sets.resize(params.top_m);
  return sets;
}

}  // namespace mrp
