#include "mrp/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mrp {

VertexSet make_vertex_set(std::vector<Vertex> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

bool set_contains(const VertexSet& s, Vertex v) {
  return std::binary_search(s.begin(), s.end(), v);
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

bool sets_disjoint(const VertexSet& a, const VertexSet& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia == *ib) return false;
    if (*ia < *ib)
      ++ia;
    else
      ++ib;
  }
  return true;
}

bool is_subset(const VertexSet& a, const VertexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

WeightedGraph::WeightedGraph(int n, const std::vector<Edge>& edges) {
  adj_.resize(n);
  weight_.assign(n, 0.0);
  for (const auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
      throw std::runtime_error("edge endpoint out of range");
    if (e.u == e.v) throw std::runtime_error("self-loop rejected");
    if (!(e.w > 0.0)) throw std::runtime_error("nonpositive edge weight");
    adj_[e.u].emplace_back(e.v, e.w);
    adj_[e.v].emplace_back(e.u, e.w);
    weight_[e.u] += e.w;
    weight_[e.v] += e.w;
    total_volume_ += 2.0 * e.w;
    ++edge_count_;
  }
  for (auto& nb : adj_)
    std::sort(nb.begin(), nb.end());
  for (int u = 0; u < n; ++u)
    if (!(weight_[u] > 0.0))
      throw std::runtime_error("isolated vertex " + std::to_string(u));
}

double WeightedGraph::volume(const VertexSet& s) const {
  double v = 0.0;
  for (Vertex u : s) v += weight_[u];
  return v;
}

double WeightedGraph::cut_weight(const VertexSet& a, const VertexSet& b) const {
  double w = 0.0;
  for (Vertex u : a)
    for (const auto& [v, wv] : adj_[u])
      if (set_contains(b, v)) w += wv;
  return w;
}

double WeightedGraph::boundary_weight(const VertexSet& s) const {
  double w = 0.0;
  for (Vertex u : s)
    for (const auto& [v, wv] : adj_[u])
      if (!set_contains(s, v)) w += wv;
  return w;
}

double WeightedGraph::edge_weight(Vertex u, Vertex v) const {
  for (const auto& [x, w] : adj_[u])
    if (x == v) return w;
  return 0.0;
}

bool WeightedGraph::has_edge(Vertex u, Vertex v) const {
  return edge_weight(u, v) > 0.0;
}

bool WeightedGraph::induced_connected(const VertexSet& s) const {
  return !s.empty() && induced_components(s).size() == 1;
}

std::vector<VertexSet> WeightedGraph::induced_components(
    const VertexSet& s) const {
  std::vector<VertexSet> comps;
  std::vector<char> seen(size(), 0);
  for (Vertex root : s) {
    if (seen[root]) continue;
    std::vector<Vertex> comp;
    std::deque<Vertex> queue{root};
    seen[root] = 1;
    while (!queue.empty()) {
      Vertex u = queue.front();
      queue.pop_front();
      comp.push_back(u);
      for (const auto& [v, w] : adj_[u]) {
        (void)w;
        if (!seen[v] && set_contains(s, v)) {
          seen[v] = 1;
          queue.push_back(v);
        }
      }
    }
    comps.push_back(make_vertex_set(std::move(comp)));
  }
  return comps;
}

bool WeightedGraph::connected() const {
  if (size() == 0) return false;
  auto d = shortest_path_distances(*this, 0);
  return std::none_of(d.begin(), d.end(),
                      [](int x) { return x == kUnreachable; });
}

bool WeightedGraph::bipartite() const {
  std::vector<int> color(size(), -1);
  for (int root = 0; root < size(); ++root) {
    if (color[root] != -1) continue;
    color[root] = 0;
    std::deque<Vertex> queue{root};
    while (!queue.empty()) {
      Vertex u = queue.front();
      queue.pop_front();
      for (const auto& [v, w] : adj_[u]) {
        (void)w;
        if (color[v] == -1) {
          color[v] = 1 - color[u];
          queue.push_back(v);
        } else if (color[v] == color[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

WeightedGraph load_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::map<std::pair<Vertex, Vertex>, double> merged;
  Vertex max_id = -1;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    long long u, v;
    if (!(ls >> u)) continue;  // blank or comment-only line
    double w = 1.0;
    if (!(ls >> v))
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": expected two vertex ids");
    ls >> w;
    std::string trailing;
    if (ls >> trailing)
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": trailing tokens");
    if (u < 0 || v < 0)
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": negative vertex id");
    if (u == v)
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": self-loop");
    if (!(w > 0.0))
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": nonpositive weight");
    auto a = static_cast<Vertex>(std::min(u, v));
    auto b = static_cast<Vertex>(std::max(u, v));
    merged[{a, b}] += w;
    max_id = std::max<Vertex>(max_id, b);
  }
  if (max_id < 0) throw std::runtime_error("empty graph input");
  std::vector<WeightedGraph::Edge> edges;
  edges.reserve(merged.size());
  for (const auto& [key, w] : merged)
    edges.push_back({key.first, key.second, w});
  return WeightedGraph(max_id + 1, edges);
}

WeightedGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_graph(buf.str());
}

double conductance(const WeightedGraph& g, const VertexSet& s) {
  if (s.empty() || static_cast<int>(s.size()) == g.size())
    throw std::invalid_argument("conductance of degenerate set");
  double cut = g.boundary_weight(s);
  double vol = g.volume(s);
  double denom = std::min(vol, g.total_volume() - vol);
  return cut / denom;
}

double mutual_conductance(const WeightedGraph& g, const VertexSet& a,
                          const VertexSet& b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("mutual_conductance of empty set");
  if (!sets_disjoint(a, b))
    throw std::invalid_argument("mutual_conductance of overlapping sets");
  double cut = g.cut_weight(a, b);
  double denom = std::min(g.volume(a), g.volume(b));
  return cut / denom;
}

std::vector<int> shortest_path_distances(const WeightedGraph& g,
                                         Vertex source) {
  if (!g.valid_vertex(source))
    throw std::invalid_argument("invalid source vertex");
  std::vector<int> dist(g.size(), kUnreachable);
  dist[source] = 0;
  std::deque<Vertex> queue{source};
  while (!queue.empty()) {
    Vertex u = queue.front();
    queue.pop_front();
    for (const auto& [v, w] : g.neighbors(u)) {
      (void)w;
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

std::vector<int> distances_to_set(const WeightedGraph& g, const VertexSet& s) {
  std::vector<int> dist(g.size(), kUnreachable);
  std::deque<Vertex> queue;
  for (Vertex v : s) {
    dist[v] = 0;
    queue.push_back(v);
  }
  while (!queue.empty()) {
    Vertex u = queue.front();
    queue.pop_front();
    for (const auto& [v, w] : g.neighbors(u)) {
      (void)w;
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

VertexSet exterior_boundary(const WeightedGraph& g, const VertexSet& b) {
  std::vector<Vertex> out;
  for (Vertex u : b)
    for (const auto& [v, w] : g.neighbors(u)) {
      (void)w;
      if (!set_contains(b, v)) out.push_back(v);
    }
  return make_vertex_set(std::move(out));
}

Eigen::MatrixXd transition_matrix(const WeightedGraph& g) {
  int n = g.size();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int u = 0; u < n; ++u)
    for (const auto& [v, w] : g.neighbors(u))
      p(u, v) = w / g.vertex_weight(u);
  return p;
}

}  // namespace mrp
