#include "mrp/graph.hpp"

#include <cmath>

#include "doctest.h"
#include "test_util.hpp"

using namespace mrp;
using mrp::testing::complete_graph;
using mrp::testing::path_graph;
using mrp::testing::random_connected_graph;

TEST_CASE("load_graph parses a path with unit weights") {
  auto g = load_graph("0 1\n1 2");
  CHECK(g.size() == 3);
  CHECK(g.vertex_weight(0) == doctest::Approx(1.0));
  CHECK(g.vertex_weight(1) == doctest::Approx(2.0));
  CHECK(g.vertex_weight(2) == doctest::Approx(1.0));
}

TEST_CASE("load_graph sums duplicate edges") {
  auto g = load_graph("0 1 2.5\n1 0 2.5");
  CHECK(g.edge_count() == 1);
  CHECK(g.edge_weight(0, 1) == doctest::Approx(5.0));
}

TEST_CASE("load_graph rejects bad input with line numbers") {
  CHECK_THROWS_WITH_AS(load_graph("0 1 -1"), doctest::Contains("line 1"),
                       std::runtime_error);
  CHECK_THROWS_AS(load_graph("0 0"), std::runtime_error);
  CHECK_THROWS_AS(load_graph("0 1\n1 2 0"), std::runtime_error);
  CHECK_THROWS_AS(load_graph("3"), std::runtime_error);
}

TEST_CASE("load_graph skips comments and blank lines") {
  auto g = load_graph("# header\n0 1  # inline\n\n1 2\n");
  CHECK(g.size() == 3);
  CHECK(g.edge_count() == 2);
}

TEST_CASE("conductance on K4 and P3") {
  auto k4 = complete_graph(4);
  CHECK(conductance(k4, {0, 1}) == doctest::Approx(4.0 / 6.0));
  auto p3 = path_graph(3);
  CHECK(conductance(p3, {0}) == doctest::Approx(1.0));
  VertexSet all{0, 1, 2};
  CHECK_THROWS_AS(conductance(p3, all), std::invalid_argument);
  CHECK_THROWS_AS(conductance(p3, {}), std::invalid_argument);
}

TEST_CASE("conductance is complement-symmetric on all subsets") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto g = random_connected_graph(8, 0.3, seed, true);
    for (unsigned mask = 1; mask + 1 < (1u << g.size()); ++mask) {
      VertexSet s, comp;
      for (int v = 0; v < g.size(); ++v)
        (mask & (1u << v) ? s : comp).push_back(v);
      CHECK(conductance(g, s) == doctest::Approx(conductance(g, comp)));
    }
  }
}

TEST_CASE("mutual conductance") {
  auto p4 = path_graph(4);
  CHECK(mutual_conductance(p4, {0, 1}, {2, 3}) == doctest::Approx(1.0 / 3.0));
  CHECK(mutual_conductance(p4, {2, 3}, {0, 1}) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(mutual_conductance(p4, {0, 1}, {1, 2}),
                  std::invalid_argument);

  // no crossing edges between far apart sets
  auto p5 = path_graph(5);
  CHECK(mutual_conductance(p5, {0}, {3, 4}) == doctest::Approx(0.0));
}

TEST_CASE("hop distances") {
  auto p4 = path_graph(4);
  CHECK(shortest_path_distances(p4, 0) == std::vector<int>{0, 1, 2, 3});
  auto k4 = complete_graph(4);
  CHECK(shortest_path_distances(k4, 2) == std::vector<int>{1, 1, 0, 1});
  auto two = load_graph("0 1\n2 3");
  CHECK(shortest_path_distances(two, 0)[3] == kUnreachable);
}

TEST_CASE("hop metric satisfies the triangle inequality") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto g = random_connected_graph(10, 0.2, seed);
    std::vector<std::vector<int>> d(g.size());
    for (int v = 0; v < g.size(); ++v) d[v] = shortest_path_distances(g, v);
    for (int a = 0; a < g.size(); ++a)
      for (int b = 0; b < g.size(); ++b)
        for (int c = 0; c < g.size(); ++c)
          REQUIRE(d[a][c] <= d[a][b] + d[b][c]);
  }
}

TEST_CASE("exterior boundary") {
  auto p4 = path_graph(4);
  CHECK(exterior_boundary(p4, {1, 2}) == VertexSet{0, 3});
  CHECK(exterior_boundary(p4, {0, 1, 2, 3}).empty());
  auto k4 = complete_graph(4);
  CHECK(exterior_boundary(k4, {1}) == VertexSet{0, 2, 3});
}

TEST_CASE("transition matrix rows and reversibility") {
  auto p3 = path_graph(3);
  auto p = transition_matrix(p3);
  CHECK(p(1, 0) == doctest::Approx(0.5));
  CHECK(p(1, 2) == doctest::Approx(0.5));

  auto weighted = load_graph("0 1 1\n0 2 3");
  auto pw = transition_matrix(weighted);
  CHECK(pw(0, 1) == doctest::Approx(0.25));
  CHECK(pw(0, 2) == doctest::Approx(0.75));

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = random_connected_graph(12, 0.3, seed, true);
    auto kernel = transition_matrix(g);
    for (int u = 0; u < g.size(); ++u) {
      REQUIRE(kernel.row(u).sum() == doctest::Approx(1.0).epsilon(1e-12));
      for (int v = 0; v < g.size(); ++v) {
        double balance = g.vertex_weight(u) * kernel(u, v) -
                         g.vertex_weight(v) * kernel(v, u);
        REQUIRE(std::abs(balance) <= 1e-12 * g.total_volume());
      }
    }
  }
}

TEST_CASE("vertex set helpers") {
  auto s = make_vertex_set({3, 1, 3, 2});
  CHECK(s == VertexSet{1, 2, 3});
  CHECK(set_contains(s, 2));
  CHECK(!set_contains(s, 0));
  CHECK(set_union({1, 3}, {2, 3}) == VertexSet{1, 2, 3});
  CHECK(set_difference({1, 2, 3}, {2}) == VertexSet{1, 3});
  CHECK(sets_disjoint({1, 2}, {3}));
  CHECK(!sets_disjoint({1, 2}, {2, 3}));
  CHECK(is_subset({2}, {1, 2, 3}));
  CHECK(!is_subset({0, 2}, {1, 2, 3}));
}

TEST_CASE("induced components") {
  auto p5 = path_graph(5);
  auto comps = p5.induced_components({0, 1, 3, 4});
  CHECK(comps.size() == 2);
  CHECK(p5.induced_connected({1, 2, 3}));
  CHECK(!p5.induced_connected({1, 3}));
}
