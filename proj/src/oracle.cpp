#include "mrp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "mrp/parallel.hpp"

namespace mrp {
namespace {

WeightedGraph draw_sbm(const SbmSpec& spec, std::uint64_t seed,
                       std::vector<int>* membership) {
  int n = 0;
  membership->clear();
  for (std::size_t b = 0; b < spec.block_sizes.size(); ++b) {
    n += spec.block_sizes[b];
    membership->insert(membership->end(), spec.block_sizes[b],
                       static_cast<int>(b));
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<WeightedGraph::Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      double p = (*membership)[u] == (*membership)[v] ? spec.p_in : spec.p_out;
      if (unif(rng) < p) edges.push_back({u, v, 1.0});
    }
  return WeightedGraph(n, edges);
}

}  // namespace

SbmInstance generate_sbm(const SbmSpec& spec) {
  if (spec.block_sizes.empty())
    throw std::invalid_argument("no blocks specified");
  if (!(spec.p_out >= 0.0 && spec.p_out < spec.p_in && spec.p_in <= 1.0))
    throw std::invalid_argument("need 0 <= p_out < p_in <= 1");

  SbmInstance inst;
  const int max_attempts = 64;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::uint64_t seed =
        attempt == 0 ? spec.seed : derive_seed(spec.seed, attempt);
    try {
      inst.graph = draw_sbm(spec, seed, &inst.membership);
    } catch (const std::exception&) {
      // isolated vertex; treat like a disconnected draw
      inst.regenerated = true;
      continue;
    }
    if (inst.graph.connected()) return inst;
    inst.regenerated = true;
  }
  return inst;  // disconnected after all attempts, flagged
}

Estimate mc_hit_probability(const WeightedGraph& g, const VertexSet& b,
                            const VertexSet& u, Vertex start,
                            std::int64_t samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  if (!set_contains(b, start) || set_contains(u, start))
    throw std::invalid_argument("start must lie in B \\ U");
  VertexSet boundary = exterior_boundary(g, b);
  if (boundary.empty()) throw std::invalid_argument("B has no exterior boundary");

  std::mt19937_64 rng(seed);
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < samples; ++i) {
    Vertex v = start;
    for (;;) {
      v = walk_step(g, v, rng);
      if (set_contains(u, v)) {
        ++hits;
        break;
      }
      if (!set_contains(b, v)) break;  // reached the boundary
    }
  }
  double p = static_cast<double>(hits) / samples;
  double se = std::sqrt(p * (1.0 - p) / samples);
  return Estimate{p, se, samples};
}

double brute_force_stopping_value(const Eigen::MatrixXd& kernel,
                                  const Eigen::VectorXd& stop_payoff,
                                  const Eigen::VectorXd& running_reward,
                                  int horizon, int start) {
  int states = static_cast<int>(kernel.rows());
  int bits = states * horizon;
  if (bits > 20) throw std::invalid_argument("enumeration cap exceeded");

  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t rule = 0; rule < (1ULL << bits); ++rule) {
    // e[t][s] computed backward; stop bit for (t, s) is rule bit t*states+s
    Eigen::VectorXd value = stop_payoff;
    for (int t = horizon - 1; t >= 0; --t) {
      Eigen::VectorXd cont = running_reward + kernel * value;
      Eigen::VectorXd next(states);
      for (int s = 0; s < states; ++s) {
        bool stop = (rule >> (static_cast<std::uint64_t>(t) * states + s)) & 1;
        next(s) = stop ? stop_payoff(s) : cont(s);
      }
      value = std::move(next);
    }
    best = std::max(best, value(start));
  }
  return best;
}

double brute_force_snell_value(const Eigen::MatrixXd& kernel,
                               const std::vector<Eigen::VectorXd>& payoff,
                               int start) {
  int states = static_cast<int>(kernel.rows());
  int horizon = static_cast<int>(payoff.size()) - 1;
  int bits = states * horizon;
  if (bits > 20) throw std::invalid_argument("enumeration cap exceeded");

  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t rule = 0; rule < (1ULL << bits); ++rule) {
    Eigen::VectorXd value = payoff[horizon];
    for (int t = horizon - 1; t >= 0; --t) {
      Eigen::VectorXd cont = kernel * value;
      Eigen::VectorXd next(states);
      for (int s = 0; s < states; ++s) {
        bool stop = (rule >> (static_cast<std::uint64_t>(t) * states + s)) & 1;
        next(s) = stop ? payoff[t](s) : cont(s);
      }
      value = std::move(next);
    }
    best = std::max(best, value(start));
  }
  return best;
}

Clustering clustering_from_labels(const std::vector<int>& labels) {
  Clustering c;
  int max_label = -1;
  for (int l : labels) max_label = std::max(max_label, l);
  c.clusters.resize(max_label + 1);
  for (int v = 0; v < static_cast<int>(labels.size()); ++v) {
    if (labels[v] < 0)
      c.unassigned.push_back(v);
    else
      c.clusters[labels[v]].push_back(v);
  }
  c.clusters.erase(std::remove_if(c.clusters.begin(), c.clusters.end(),
                                  [](const VertexSet& s) { return s.empty(); }),
                   c.clusters.end());
  c.tags.assign(c.clusters.size(), "reference");
  return c;
}

double adjusted_rand_index(const Clustering& a, const Clustering& b, int n) {
  auto labels_of = [n](const Clustering& c) {
    std::vector<int> label(n, -1);
    int next = 0;
    for (const auto& cluster : c.clusters) {
      for (Vertex v : cluster) {
        if (v < 0 || v >= n || label[v] != -1)
          throw std::invalid_argument("clustering outside universe or overlapping");
        label[v] = next;
      }
      ++next;
    }
    for (int v = 0; v < n; ++v)
      if (label[v] == -1) label[v] = next++;  // unassigned -> singleton
    return label;
  };
  auto la = labels_of(a);
  auto lb = labels_of(b);

  int ka = *std::max_element(la.begin(), la.end()) + 1;
  int kb = *std::max_element(lb.begin(), lb.end()) + 1;
  std::vector<std::vector<long long>> table(ka, std::vector<long long>(kb, 0));
  for (int v = 0; v < n; ++v) ++table[la[v]][lb[v]];

  auto choose2 = [](long long x) { return x * (x - 1) / 2; };
  long long sum_cells = 0, sum_rows = 0, sum_cols = 0;
  for (int i = 0; i < ka; ++i) {
    long long row = 0;
    for (int j = 0; j < kb; ++j) {
      sum_cells += choose2(table[i][j]);
      row += table[i][j];
    }
    sum_rows += choose2(row);
  }
  for (int j = 0; j < kb; ++j) {
    long long col = 0;
    for (int i = 0; i < ka; ++i) col += table[i][j];
    sum_cols += choose2(col);
  }
  double total = choose2(n);
  double expected = sum_rows * sum_cols / total;
  double max_index = 0.5 * (sum_rows + sum_cols);
  if (max_index == expected) return 1.0;  // both trivial partitions
  return (sum_cells - expected) / (max_index - expected);
}

}  // namespace mrp
