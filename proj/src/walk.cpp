#include "mrp/walk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mrp {
namespace {

// Index of v within a sorted vertex set, or -1.
int set_index(const VertexSet& s, Vertex v) {
  auto it = std::lower_bound(s.begin(), s.end(), v);
  if (it == s.end() || *it != v) return -1;
  return static_cast<int>(it - s.begin());
}

// Kernel restricted to the sorted set a (substochastic).
Eigen::MatrixXd restricted_kernel(const WeightedGraph& g, const VertexSet& a) {
  int m = static_cast<int>(a.size());
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (const auto& [v, w] : g.neighbors(a[i])) {
      int j = set_index(a, v);
      if (j >= 0) q(i, j) = w / g.vertex_weight(a[i]);
    }
  return q;
}

void require_escapable(const WeightedGraph& g, const VertexSet& a) {
  for (const auto& comp : g.induced_components(a)) {
    bool has_exit = false;
    for (Vertex u : comp) {
      for (const auto& [v, w] : g.neighbors(u)) {
        (void)w;
        if (!set_contains(a, v)) {
          has_exit = true;
          break;
        }
      }
      if (has_exit) break;
    }
    if (!has_exit)
      throw std::invalid_argument(
          "killed_green: set is absorbing, Green function diverges");
  }
}

double log_binom(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

std::int64_t MrpConfig::effective_threshold() const {
  if (t_threshold > 0) return t_threshold;
  std::int64_t t = 100;
  for (int i = 0; i < scale; ++i) t *= 4;
  return t;
}

double KilledGreen::at(Vertex x, Vertex y) const {
  int i = set_index(domain, x);
  int j = set_index(domain, y);
  if (i < 0 || j < 0) throw std::invalid_argument("vertex outside Green domain");
  return values(i, j);
}

Vertex walk_step(const WeightedGraph& g, Vertex u, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, g.vertex_weight(u));
  double r = unif(rng);
  double acc = 0.0;
  const auto& nb = g.neighbors(u);
  for (const auto& [v, w] : nb) {
    acc += w;
    if (r < acc) return v;
  }
  return nb.back().first;  // guard against rounding at the top end
}

WalkPath simulate_walk(const WeightedGraph& g, Vertex start, int steps,
                       std::uint64_t seed) {
  if (!g.valid_vertex(start)) throw std::invalid_argument("invalid start vertex");
  if (steps < 0) throw std::invalid_argument("negative step count");
  std::mt19937_64 rng(seed);
  WalkPath path{start, {start}, seed};
  path.vertices.reserve(steps + 1);
  Vertex u = start;
  for (int i = 0; i < steps; ++i) {
    u = walk_step(g, u, rng);
    path.vertices.push_back(u);
  }
  return path;
}

WalkPath simulate_mrp(const WeightedGraph& g, Vertex start,
                      const MrpConfig& cfg, std::uint64_t seed) {
  if (!g.valid_vertex(start)) throw std::invalid_argument("invalid start vertex");
  if (cfg.scale < 0) throw std::invalid_argument("negative scale");
  std::int64_t t_th = cfg.effective_threshold();
  std::int64_t r_max = 1;
  for (int i = 0; i < cfg.scale; ++i) r_max *= 2;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> increment(1, r_max);
  WalkPath path{start, {start}, seed};
  Vertex u = start;
  std::int64_t clock = 0;
  while (clock < t_th) {
    // r_max == 1 draws nothing so the s=0 walk shares the plain walk's stream
    std::int64_t r = (r_max == 1) ? 1 : increment(rng);
    for (std::int64_t i = 0; i < r; ++i) u = walk_step(g, u, rng);
    clock += r;
    path.vertices.push_back(u);
  }
  return path;
}

std::map<int, double> rw_step_distribution(int n, double p_up) {
  if (n < 0) throw std::invalid_argument("negative step count");
  if (p_up < 0.0 || p_up > 1.0) throw std::invalid_argument("p_up outside [0,1]");
  std::map<int, double> dist;
  double q = 1.0 - p_up;
  for (int up = 0; up <= n; ++up) {
    int k = 2 * up - n;
    double logp = log_binom(n, up);
    if (up > 0) logp += up * std::log(p_up);
    if (up < n) logp += (n - up) * std::log(q);
    if ((up > 0 && p_up == 0.0) || (up < n && q == 0.0)) continue;
    dist[k] = std::exp(logp);
  }
  if (dist.empty()) dist[0] = 1.0;  // n == 0 with degenerate p
  return dist;
}

double chebyshev_poly(int k, double t) {
  if (k < 0) throw std::invalid_argument("negative degree");
  double prev = 1.0, cur = t;
  if (k == 0) return prev;
  for (int i = 1; i < k; ++i) {
    double next = 2.0 * t * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

Eigen::MatrixXd chebyshev_poly(int k, const Eigen::MatrixXd& p) {
  if (k < 0) throw std::invalid_argument("negative degree");
  Eigen::MatrixXd prev = Eigen::MatrixXd::Identity(p.rows(), p.cols());
  if (k == 0) return prev;
  Eigen::MatrixXd cur = p;
  for (int i = 1; i < k; ++i) {
    Eigen::MatrixXd next = 2.0 * p * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

double verify_duality(const Eigen::MatrixXd& p, int n) {
  if (n < 0) throw std::invalid_argument("negative power");
  int m = static_cast<int>(p.rows());
  Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(m, m);
  for (int i = 0; i < n; ++i) lhs = lhs * p;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m, m);
  for (const auto& [k, prob] : rw_step_distribution(n, 0.5))
    rhs += prob * chebyshev_poly(std::abs(k), p);
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

CarneReport carne_check(const WeightedGraph& g, int t_max) {
  if (!g.connected()) throw std::invalid_argument("carne_check: disconnected graph");
  int n = g.size();
  std::vector<std::vector<int>> dist(n);
  for (int x = 0; x < n; ++x) dist[x] = shortest_path_distances(g, x);
  Eigen::MatrixXd p = transition_matrix(g);
  Eigen::MatrixXd pt = p;
  CarneReport report;
  for (int t = 1; t <= t_max; ++t) {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        double d = dist[x][y];
        double bound = 2.0 * std::sqrt(g.vertex_weight(y) / g.vertex_weight(x)) *
                       std::exp(-d * d / (2.0 * t));
        double slack = bound - pt(x, y);
        report.min_slack = std::min(report.min_slack, slack);
        if (slack < 0.0) ++report.violations;
        ++report.checked;
      }
    pt = pt * p;
  }
  return report;
}

HoeffdingReport hoeffding_tail_check(int n_max) {
  HoeffdingReport report;
  for (int n = 1; n <= n_max; ++n) {
    auto dist = rw_step_distribution(n, 0.5);
    for (int d = 1; d <= n; ++d) {
      double tail = 0.0;
      for (const auto& [k, prob] : dist)
        if (std::abs(k) >= d) tail += prob;
      double bound = 2.0 * std::exp(-static_cast<double>(d) * d / (2.0 * n));
      double slack = bound - tail;
      report.min_slack = std::min(report.min_slack, slack);
      if (slack < 0.0) ++report.violations;
      ++report.checked;
    }
  }
  return report;
}

KilledGreen killed_green(const WeightedGraph& g, const VertexSet& a) {
  if (a.empty()) throw std::invalid_argument("killed_green: empty set");
  require_escapable(g, a);
  Eigen::MatrixXd q = restricted_kernel(g, a);
  int m = static_cast<int>(a.size());
  Eigen::MatrixXd green =
      (Eigen::MatrixXd::Identity(m, m) - q).partialPivLu().solve(
          Eigen::MatrixXd::Identity(m, m));
  return KilledGreen{a, std::move(green)};
}

GreenReturnResult green_return_identity(const WeightedGraph& g,
                                        const VertexSet& a, Vertex c) {
  if (!set_contains(a, c)) throw std::invalid_argument("center outside set");
  KilledGreen green = killed_green(g, a);

  // h(y) = P^y(exit A before hitting c), harmonic on A \ {c}.
  VertexSet interior = set_difference(a, VertexSet{c});
  int m = static_cast<int>(interior.size());
  Eigen::MatrixXd sys = Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < m; ++i)
    for (const auto& [v, w] : g.neighbors(interior[i])) {
      double p = w / g.vertex_weight(interior[i]);
      if (v == c) continue;  // h(c) = 0
      int j = set_index(interior, v);
      if (j >= 0)
        sys(i, j) -= p;
      else
        rhs(i) += p;  // exited A
    }
  Eigen::VectorXd h = sys.partialPivLu().solve(rhs);

  double escape = 0.0;
  for (const auto& [v, w] : g.neighbors(c)) {
    double p = w / g.vertex_weight(c);
    if (v == c) continue;
    int j = set_index(interior, v);
    if (j >= 0)
      escape += p * h(j);
    else if (!set_contains(a, v))
      escape += p;
  }

  double gcc = green.at(c, c);
  return GreenReturnResult{gcc, escape, std::abs(gcc * escape - 1.0)};
}

double last_exit_identity(const WeightedGraph& g, const VertexSet& a,
                          const VertexSet& b) {
  if (!is_subset(a, b)) throw std::invalid_argument("A must be a subset of B");
  KilledGreen green = killed_green(g, b);

  // u(x) = P^x(hit A before leaving B); u = 1 on A, 0 outside B.
  VertexSet mid = set_difference(b, a);
  int m = static_cast<int>(mid.size());
  Eigen::MatrixXd sys = Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < m; ++i)
    for (const auto& [v, w] : g.neighbors(mid[i])) {
      double p = w / g.vertex_weight(mid[i]);
      if (set_contains(a, v)) {
        rhs(i) += p;
      } else {
        int j = set_index(mid, v);
        if (j >= 0) sys(i, j) -= p;
        // outside B contributes 0
      }
    }
  Eigen::VectorXd u_mid = sys.partialPivLu().solve(rhs);
  auto lhs_at = [&](Vertex x) {
    if (set_contains(a, x)) return 1.0;
    return u_mid(set_index(mid, x));
  };

  // w(z) = P^z(leave B before hitting A); w = 1 outside B, 0 on A.
  Eigen::VectorXd w_mid(m);
  for (int i = 0; i < m; ++i) w_mid(i) = 1.0 - u_mid(i);
  auto escape_at = [&](Vertex z) {
    if (set_contains(a, z)) return 0.0;
    if (!set_contains(b, z)) return 1.0;
    return w_mid(set_index(mid, z));
  };

  // v(y) = P^y(tau_A > eta_B) with tau_A the first *return* time to A.
  std::vector<double> v_of_a(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    double acc = 0.0;
    for (const auto& [z, w] : g.neighbors(a[i]))
      acc += (w / g.vertex_weight(a[i])) * escape_at(z);
    v_of_a[i] = acc;
  }

  double residual = 0.0;
  for (Vertex x : b) {
    double rhs_val = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      rhs_val += green.at(x, a[i]) * v_of_a[i];
    residual = std::max(residual, std::abs(lhs_at(x) - rhs_val));
  }
  return residual;
}

WalkStatistics walk_statistics(const WeightedGraph& g, double epsilon) {
  if (!g.connected()) throw std::invalid_argument("walk_statistics: disconnected");
  int n = g.size();
  Eigen::MatrixXd p = transition_matrix(g);

  Eigen::VectorXd pi(n);
  for (int i = 0; i < n; ++i) pi(i) = g.vertex_weight(i) / g.total_volume();

  // Relaxation time from the symmetrized kernel.
  Eigen::MatrixXd sym(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      sym(i, j) = std::sqrt(g.vertex_weight(i) / g.vertex_weight(j)) * p(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (sym + sym.transpose()));
  double lambda2 = es.eigenvalues()(n - 2);
  double t_rel = 1.0 / (1.0 - lambda2);

  // Exact epsilon-mixing time by matrix powering (periodic chains never mix).
  WalkStatistics stats;
  stats.relaxation_time = t_rel;
  if (!g.bipartite()) {
    Eigen::MatrixXd pt = p;
    const int cap = 200000;
    for (int t = 1; t <= cap; ++t) {
      double max_tv = 0.0;
      for (int x = 0; x < n; ++x) {
        double tv = 0.5 * (pt.row(x).transpose() - pi).cwiseAbs().sum();
        max_tv = std::max(max_tv, tv);
      }
      if (max_tv <= epsilon) {
        stats.mixing_time = t;
        break;
      }
      pt = pt * p;
    }
  }

  // Max expected hitting time, one linear solve per target.
  double t_hit = 0.0;
  for (int target = 0; target < n; ++target) {
    VertexSet rest;
    for (int v = 0; v < n; ++v)
      if (v != target) rest.push_back(v);
    Eigen::MatrixXd q = restricted_kernel(g, rest);
    int m = n - 1;
    Eigen::VectorXd h = (Eigen::MatrixXd::Identity(m, m) - q)
                            .partialPivLu()
                            .solve(Eigen::VectorXd::Ones(m));
    t_hit = std::max(t_hit, h.maxCoeff());
  }
  stats.max_hitting_time = t_hit;

  double d_avg = g.total_volume() / n;
  double d_min = std::numeric_limits<double>::infinity();
  for (int v = 0; v < n; ++v) d_min = std::min(d_min, g.vertex_weight(v));
  double oliveira_bound = 20.0 * (d_avg / d_min) * n * std::sqrt(t_rel + 1.0);
  stats.oliveira = BoundCheck{t_hit, oliveira_bound, t_hit <= oliveira_bound};

  // Lovasz integral bound on tau(1/4), brute-force conductance profile.
  if (n <= 14 && !g.bipartite()) {
    double pi_star = pi.minCoeff();
    // (pi(S), phi(S)) over all nonempty proper subsets.
    std::vector<std::pair<double, double>> profile;
    for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
      VertexSet s;
      for (int v = 0; v < n; ++v)
        if (mask & (1u << v)) s.push_back(v);
      double pis = 0.0;
      for (Vertex v : s) pis += pi(v);
      profile.emplace_back(pis, conductance(g, s));
    }
    std::sort(profile.begin(), profile.end());
    // Phi(u) = min conductance over pi(S) <= u; integrate du / (u Phi^2).
    auto phi_at = [&](double u) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& [pis, phi] : profile) {
        if (pis > u) break;
        best = std::min(best, phi);
      }
      return best;
    };
    std::vector<double> breaks{pi_star};
    for (const auto& [pis, phi] : profile) {
      (void)phi;
      if (pis > pi_star && pis < 0.75) breaks.push_back(pis);
    }
    breaks.push_back(0.75);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      double phi = phi_at(breaks[i]);
      integral += std::log(breaks[i + 1] / breaks[i]) / (phi * phi);
    }
    double bound = 2000.0 * integral;
    // tau(1/4) for the Lovasz check, independent of the requested epsilon
    double tau_quarter;
    {
      Eigen::MatrixXd pt = p;
      int t = 1;
      for (;; ++t) {
        double max_tv = 0.0;
        for (int x = 0; x < n; ++x)
          max_tv = std::max(
              max_tv, 0.5 * (pt.row(x).transpose() - pi).cwiseAbs().sum());
        if (max_tv <= 0.25) break;
        pt = pt * p;
      }
      tau_quarter = t;
    }
    stats.lovasz = BoundCheck{tau_quarter, bound, tau_quarter <= bound};
  }

  return stats;
}

Estimate discrepancy_probability(const WeightedGraph& g, Vertex x,
                                 const VertexSet& omega, double c,
                                 std::int64_t samples, std::uint64_t seed) {
  if (omega.empty()) throw std::invalid_argument("empty target set");
  if (!(c > 0.0)) throw std::invalid_argument("C must be positive");
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  if (!g.valid_vertex(x)) throw std::invalid_argument("invalid start vertex");
  auto dist = distances_to_set(g, omega);
  int d = dist[x];
  if (d == 0) return Estimate{0.0, 0.0, samples};
  if (d == kUnreachable)
    throw std::invalid_argument("target set unreachable from start");

  // The event T - d > C d only depends on the first floor((1+C) d) steps.
  auto horizon = static_cast<std::int64_t>(std::floor((1.0 + c) * d));
  std::int64_t hits_late = 0;
  std::mt19937_64 rng(seed);
  for (std::int64_t i = 0; i < samples; ++i) {
    Vertex u = x;
    bool hit = false;
    for (std::int64_t t = 1; t <= horizon; ++t) {
      u = walk_step(g, u, rng);
      if (set_contains(omega, u)) {
        hit = true;
        break;
      }
    }
    if (!hit) ++hits_late;
  }
  double p = static_cast<double>(hits_late) / samples;
  double se = std::sqrt(p * (1.0 - p) / samples);
  return Estimate{p, se, samples};
}

}  // namespace mrp
