#include "mrp/solar.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "mrp/parallel.hpp"

namespace mrp {
namespace {

std::vector<int> restricted_distances(const WeightedGraph& g, Vertex source,
                                      const std::vector<char>& allowed) {
  std::vector<int> dist(g.size(), kUnreachable);
  if (!allowed[source]) return dist;
  dist[source] = 0;
  std::deque<Vertex> queue{source};
  while (!queue.empty()) {
    Vertex u = queue.front();
    queue.pop_front();
    for (const auto& [v, w] : g.neighbors(u)) {
      (void)w;
      if (allowed[v] && dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

SolarSystem build_from_distances(const WeightedGraph& g, Vertex center,
                                 int scale, int blocks_per_ring,
                                 const std::vector<int>& dist,
                                 const PolarEmbedding& emb) {
  SolarSystem ss;
  ss.center = center;
  ss.scale = scale;
  ss.blocks_per_ring = blocks_per_ring;
  ss.rings.assign(kRingCount, {});
  ss.blocks.assign(kRingCount, {});

  int width = 1 << scale;
  for (int v = 0; v < g.size(); ++v) {
    if (dist[v] == kUnreachable) continue;
    int r = dist[v] / width;
    if (r < kRingCount) ss.rings[r].push_back(v);
  }

  for (int r = 0; r < kRingCount; ++r) {
    // angular quantile split; ties broken by id for determinism
    std::vector<Vertex> order = ss.rings[r];
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
      return emb.angle[a] < emb.angle[b];
    });
    int total = static_cast<int>(order.size());
    int base = blocks_per_ring > 0 ? total / blocks_per_ring : 0;
    int rem = blocks_per_ring > 0 ? total % blocks_per_ring : 0;
    int pos = 0;
    ss.blocks[r].resize(blocks_per_ring);
    for (int b = 0; b < blocks_per_ring; ++b) {
      int len = base + (b < rem ? 1 : 0);
      std::vector<Vertex> chunk(order.begin() + pos, order.begin() + pos + len);
      ss.blocks[r][b] = make_vertex_set(std::move(chunk));
      pos += len;
    }
  }
  return ss;
}

}  // namespace

PolarEmbedding polar_embed(const WeightedGraph& g, Vertex center) {
  if (!g.valid_vertex(center)) throw std::invalid_argument("invalid center");
  if (!g.connected()) throw std::invalid_argument("polar_embed: disconnected graph");
  int n = g.size();
  PolarEmbedding emb;
  emb.radius = shortest_path_distances(g, center);
  emb.angle.assign(n, 0.0);
  if (n < 3) return emb;

  // Normalized Laplacian L = I - D^{-1/2} W D^{-1/2}.
  Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(n, n);
  for (int u = 0; u < n; ++u)
    for (const auto& [v, w] : g.neighbors(u))
      lap(u, v) -= w / std::sqrt(g.vertex_weight(u) * g.vertex_weight(v));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap);
  Eigen::VectorXd e2 = es.eigenvectors().col(1);
  Eigen::VectorXd e3 = es.eigenvectors().col(2);
  auto fix_sign = [n](Eigen::VectorXd& v) {
    for (int i = 0; i < n; ++i) {
      if (std::abs(v(i)) > 1e-12) {
        if (v(i) < 0) v = -v;
        return;
      }
    }
  };
  fix_sign(e2);
  fix_sign(e3);

  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (int v = 0; v < n; ++v) {
    if (std::abs(e2(v)) < 1e-12 && std::abs(e3(v)) < 1e-12) continue;
    double a = std::atan2(e3(v), e2(v));
    if (a < 0) a += two_pi;
    emb.angle[v] = a;
  }
  return emb;
}

VertexSet SolarSystem::claimed() const {
  VertexSet all;
  for (const auto& ring : rings) all = set_union(all, ring);
  return all;
}

SolarSystem build_solar_system(const WeightedGraph& g, Vertex center, int scale,
                               int blocks_per_ring) {
  if (!g.valid_vertex(center)) throw std::invalid_argument("invalid center");
  if (scale < 0 || blocks_per_ring < 1)
    throw std::invalid_argument("invalid solar-system parameters");
  PolarEmbedding emb = polar_embed(g, center);
  return build_from_distances(g, center, scale, blocks_per_ring, emb.radius,
                              emb);
}

SolarSystem build_solar_system(const WeightedGraph& g, Vertex center, int scale,
                               int blocks_per_ring,
                               const std::vector<char>& allowed,
                               const PolarEmbedding& embedding) {
  if (!g.valid_vertex(center) || !allowed[center])
    throw std::invalid_argument("invalid center");
  if (scale < 0 || blocks_per_ring < 1)
    throw std::invalid_argument("invalid solar-system parameters");
  auto dist = restricted_distances(g, center, allowed);
  return build_from_distances(g, center, scale, blocks_per_ring, dist,
                              embedding);
}

CandidateSet sample_candidate_set(const WeightedGraph& g,
                                  const VertexSet& block, double fraction,
                                  int max_tries, std::uint64_t seed) {
  if (block.empty()) throw std::invalid_argument("empty block");
  if (!(fraction > 0.0) || fraction > 1.0)
    throw std::invalid_argument("fraction outside (0, 1]");
  CandidateSet cand;
  int target = static_cast<int>(
      std::ceil(fraction * static_cast<double>(block.size())));
  target = std::max(target, 1);

  auto comps = g.induced_components(block);
  std::size_t largest = 0;
  for (const auto& c : comps) largest = std::max(largest, c.size());
  if (static_cast<int>(largest) < target) {
    // no connected subset of the requested size exists
    const VertexSet* best = &comps.front();
    for (const auto& c : comps)
      if (c.size() > best->size()) best = &c;
    cand.vertices = *best;
    cand.connected = true;
    cand.shrunk = true;
    return cand;
  }

  std::mt19937_64 rng(seed);
  if (target == static_cast<int>(block.size())) {
    cand.vertices = block;
    cand.connected = g.induced_connected(block);
    return cand;
  }

  std::vector<Vertex> pool = block;
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    std::vector<Vertex> shuffled = pool;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    VertexSet u = make_vertex_set(
        {shuffled.begin(), shuffled.begin() + target});
    if (g.induced_connected(u)) {
      cand.vertices = std::move(u);
      cand.connected = true;
      return cand;
    }
  }

  // Fallback: randomized growth inside the block from a component that is
  // large enough.
  std::vector<Vertex> roots;
  for (const auto& c : comps)
    if (static_cast<int>(c.size()) >= target)
      roots.insert(roots.end(), c.begin(), c.end());
  Vertex root = roots[std::uniform_int_distribution<std::size_t>(
      0, roots.size() - 1)(rng)];
  std::vector<Vertex> grown{root};
  std::vector<char> in_grown(g.size(), 0);
  in_grown[root] = 1;
  std::vector<Vertex> frontier;
  auto extend_frontier = [&](Vertex u) {
    for (const auto& [v, w] : g.neighbors(u)) {
      (void)w;
      if (!in_grown[v] && set_contains(block, v)) frontier.push_back(v);
    }
  };
  extend_frontier(root);
  while (static_cast<int>(grown.size()) < target) {
    frontier.erase(std::remove_if(frontier.begin(), frontier.end(),
                                  [&](Vertex v) { return in_grown[v]; }),
                   frontier.end());
    std::sort(frontier.begin(), frontier.end());
    frontier.erase(std::unique(frontier.begin(), frontier.end()),
                   frontier.end());
    Vertex pick = frontier[std::uniform_int_distribution<std::size_t>(
        0, frontier.size() - 1)(rng)];
    in_grown[pick] = 1;
    grown.push_back(pick);
    extend_frontier(pick);
  }
  cand.vertices = make_vertex_set(std::move(grown));
  cand.connected = true;
  return cand;
}

HarmonicField harmonic_hit_probability(const WeightedGraph& g,
                                       const VertexSet& b, const VertexSet& u) {
  if (!is_subset(u, b)) throw std::invalid_argument("U must lie inside B");
  VertexSet boundary = exterior_boundary(g, b);
  if (boundary.empty())
    throw std::invalid_argument("B has no exterior boundary");

  HarmonicField field;
  field.domain = b;
  field.targets = u;
  field.boundary = boundary;
  field.q.assign(g.size(), 0.0);
  for (Vertex v : u) field.q[v] = 1.0;
  if (u.empty()) return field;

  VertexSet interior = set_difference(b, u);
  int m = static_cast<int>(interior.size());
  if (m == 0) return field;
  auto idx_of = [&](Vertex v) {
    auto it = std::lower_bound(interior.begin(), interior.end(), v);
    return (it != interior.end() && *it == v)
               ? static_cast<int>(it - interior.begin())
               : -1;
  };
  Eigen::MatrixXd sys = Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < m; ++i)
    for (const auto& [v, w] : g.neighbors(interior[i])) {
      double p = w / g.vertex_weight(interior[i]);
      if (set_contains(u, v)) {
        rhs(i) += p;
      } else {
        int j = idx_of(v);
        if (j >= 0) sys(i, j) -= p;
        // boundary and beyond contribute 0
      }
    }
  Eigen::VectorXd sol = sys.partialPivLu().solve(rhs);
  for (int i = 0; i < m; ++i) field.q[interior[i]] = sol(i);
  return field;
}

double relative_absorption(const WeightedGraph& g, const HarmonicField& field) {
  VertexSet interior = set_difference(field.domain, field.targets);
  if (interior.empty()) return 0.0;
  auto dist = distances_to_set(g, field.boundary);
  double ra = 0.0;
  for (Vertex i : interior) {
    double d = (dist[i] == kUnreachable) ? 1.0 : std::max(1, dist[i]);
    ra += field.q[i] / d;
  }
  return ra;
}

std::vector<CandidateSet> find_safe_sets(const WeightedGraph& g,
                                         const SolarSystem& ss, double fraction,
                                         double ra_threshold,
                                         std::uint64_t seed, int threads) {
  struct Task {
    int ring, block;
  };
  std::vector<Task> tasks;
  for (int r = 0; r < kRingCount; ++r)
    for (int b = 0; b < ss.blocks_per_ring; ++b)
      if (!ss.blocks[r][b].empty()) tasks.push_back({r, b});

  std::vector<CandidateSet> out(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), threads, [&](int i) {
    const auto& [r, b] = tasks[i];
    const VertexSet& block = ss.blocks[r][b];
    std::uint64_t block_seed =
        derive_seed(seed, static_cast<std::uint64_t>(r) * 1000 + b);
    CandidateSet cand = sample_candidate_set(g, block, fraction, 50, block_seed);
    cand.ring = r;
    cand.block = b;
    try {
      HarmonicField field =
          harmonic_hit_probability(g, block, cand.vertices);
      cand.absorption = relative_absorption(g, field);
      cand.safe = cand.absorption < ra_threshold;
    } catch (const std::exception&) {
      // block with no exterior boundary (covers a whole component)
      cand.safe = false;
    }
    out[i] = std::move(cand);
  });
  return out;
}

}  // namespace mrp
