#pragma once

#include <cstdint>
#include <vector>

#include "mrp/graph.hpp"

namespace mrp {

inline constexpr int kRingCount = 10;

struct PolarEmbedding {
  std::vector<int> radius;    // hop distance from the center
  std::vector<double> angle;  // radians in [0, 2pi)
};

// Hop radii plus angles from the 2nd/3rd eigenvectors of the normalized
// Laplacian. Requires a connected graph.
PolarEmbedding polar_embed(const WeightedGraph& g, Vertex center);

struct SolarSystem {
  Vertex center;
  int scale;
  int blocks_per_ring;
  // rings[r] holds vertices at hop distance in [r*2^s, (r+1)*2^s); the
  // center sits in rings[0]. Always kRingCount entries, possibly empty.
  std::vector<VertexSet> rings;
  // blocks[r] partitions rings[r] into blocks_per_ring angular segments.
  std::vector<std::vector<VertexSet>> blocks;

  VertexSet claimed() const;  // union of all rings
};

SolarSystem build_solar_system(const WeightedGraph& g, Vertex center, int scale,
                               int blocks_per_ring);

// Variant restricted to `allowed` vertices: radii come from BFS inside the
// induced subgraph, so the system never claims vertices outside `allowed`.
SolarSystem build_solar_system(const WeightedGraph& g, Vertex center, int scale,
                               int blocks_per_ring,
                               const std::vector<char>& allowed,
                               const PolarEmbedding& embedding);

struct CandidateSet {
  int ring = -1;
  int block = -1;
  VertexSet vertices;
  bool connected = false;
  bool shrunk = false;  // block had no connected subset of the requested size
  double absorption = 0.0;
  bool safe = false;
};

// Random connected subset of ceil(fraction * |block|) vertices: uniform
// rejection for max_tries attempts, then randomized BFS growth.
CandidateSet sample_candidate_set(const WeightedGraph& g,
                                  const VertexSet& block, double fraction,
                                  int max_tries, std::uint64_t seed);

struct HarmonicField {
  VertexSet domain;    // B
  VertexSet targets;   // U
  VertexSet boundary;  // exterior boundary of B
  std::vector<double> q;  // size n; 1 on U, 0 on boundary and outside
};

// q(i) = P^i(hit U before the exterior boundary of B), solved exactly.
HarmonicField harmonic_hit_probability(const WeightedGraph& g,
                                       const VertexSet& b, const VertexSet& u);

// RA = sum over i in B \ U of q(i) / max(1, d_G(i, boundary)).
double relative_absorption(const WeightedGraph& g, const HarmonicField& field);

// One candidate per nonempty block; safe iff RA < ra_threshold. Per-block
// solves run concurrently; output ordered by (ring, block).
std::vector<CandidateSet> find_safe_sets(const WeightedGraph& g,
                                         const SolarSystem& ss, double fraction,
                                         double ra_threshold,
                                         std::uint64_t seed, int threads = 1);

}  // namespace mrp
