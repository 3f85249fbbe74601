#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace mrp {

using Vertex = int;

// Sorted, duplicate-free list of vertex ids.
using VertexSet = std::vector<Vertex>;

VertexSet make_vertex_set(std::vector<Vertex> ids);
bool set_contains(const VertexSet& s, Vertex v);
VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);
bool sets_disjoint(const VertexSet& a, const VertexSet& b);
bool is_subset(const VertexSet& a, const VertexSet& b);

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

// Undirected graph with strictly positive edge weights. Immutable after
// construction; all operations below are pure.
class WeightedGraph {
 public:
  struct Edge {
    Vertex u, v;
    double w;
  };

  WeightedGraph() = default;
  WeightedGraph(int n, const std::vector<Edge>& edges);

  int size() const { return static_cast<int>(adj_.size()); }
  int edge_count() const { return edge_count_; }

  const std::vector<std::pair<Vertex, double>>& neighbors(Vertex u) const {
    return adj_[u];
  }

  // omega_u = sum of incident edge weights.
  double vertex_weight(Vertex u) const { return weight_[u]; }
  double total_volume() const { return total_volume_; }
  double volume(const VertexSet& s) const;

  // Total weight of edges with one endpoint in a and the other in b.
  double cut_weight(const VertexSet& a, const VertexSet& b) const;
  // Weight crossing from s to its complement.
  double boundary_weight(const VertexSet& s) const;

  double edge_weight(Vertex u, Vertex v) const;
  bool has_edge(Vertex u, Vertex v) const;

  bool valid_vertex(Vertex u) const { return u >= 0 && u < size(); }

  // True when the induced subgraph on s is connected (s nonempty).
  bool induced_connected(const VertexSet& s) const;
  std::vector<VertexSet> induced_components(const VertexSet& s) const;

  bool connected() const;
  bool bipartite() const;

 private:
  std::vector<std::vector<std::pair<Vertex, double>>> adj_;
  std::vector<double> weight_;
  double total_volume_ = 0.0;
  int edge_count_ = 0;
};

// Parses edge-list text: one "u v [w]" per line, '#' comments, duplicate
// edges summed. Throws std::runtime_error with a line number on bad input.
WeightedGraph load_graph(const std::string& text);
WeightedGraph load_graph_file(const std::string& path);

// phi(S) = w(S, S-bar) / min(vol S, vol S-bar). Throws on S empty or S = V.
double conductance(const WeightedGraph& g, const VertexSet& s);

// phi(A,B) = w(A,B) / min(vol A, vol B) for disjoint nonempty A, B.
double mutual_conductance(const WeightedGraph& g, const VertexSet& a,
                          const VertexSet& b);

// Hop distances from source; kUnreachable for vertices in other components.
std::vector<int> shortest_path_distances(const WeightedGraph& g, Vertex source);

// Hop distance from v to the nearest member of s (kUnreachable if none).
std::vector<int> distances_to_set(const WeightedGraph& g, const VertexSet& s);

// {x : d_G(x, B) = 1, x not in B}.
VertexSet exterior_boundary(const WeightedGraph& g, const VertexSet& b);

// Row-stochastic kernel p(u,v) = w_uv / omega_u, dense.
Eigen::MatrixXd transition_matrix(const WeightedGraph& g);

}  // namespace mrp
