#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "plap/graph.hpp"

using namespace plap;

TEST_CASE("graph construction normalizes and sorts edges") {
  Graph g(4, {{2, 1, 1.0}, {0, 3, 2.0}, {0, 1, 3.0}});
  REQUIRE(g.num_edges() == 3);
  CHECK(g.edge(0) == Edge{0, 1, 3.0});
  CHECK(g.edge(1) == Edge{0, 3, 2.0});
  CHECK(g.edge(2) == Edge{1, 2, 1.0});
  for (const Edge& e : g.edges()) CHECK(e.k1 < e.k2);
}

TEST_CASE("graph construction rejects bad input") {
  CHECK_THROWS_AS(Graph(3, {{0, 1, 1.0}, {1, 0, 2.0}}), GraphError);
  CHECK_THROWS_AS(Graph(3, {{1, 1, 1.0}}), GraphError);
  CHECK_THROWS_AS(Graph(3, {{0, 1, 0.0}}), GraphError);
  CHECK_THROWS_AS(Graph(3, {{0, 1, -1.0}}), GraphError);
  CHECK_THROWS_AS(Graph(3, {{0, 3, 1.0}}), GraphError);
}

TEST_CASE("neighbors are ascending") {
  Graph g(4, {{0, 2, 1.0}, {2, 3, 1.0}, {1, 2, 1.0}});
  const auto nb = g.neighbors(2);
  REQUIRE(nb.size() == 3);
  CHECK(nb[0].node == 0);
  CHECK(nb[1].node == 1);
  CHECK(nb[2].node == 3);
}

TEST_CASE("incidence_apply") {
  const Graph path = oracle::path_graph(3);
  const Eigen::Vector3d x(1, 2, 4);
  CHECK(incidence_apply(path, x) == Eigen::Vector2d(1, 2));
  CHECK(incidence_apply(path, Eigen::Vector3d::Constant(7.5)).isZero(0));
  CHECK(incidence_apply(oracle::triangle(), Eigen::Vector3d(3, 1, 0)) == Eigen::Vector3d(-2, -3, -1));
  CHECK_THROWS_AS(incidence_apply(path, Eigen::Vector2d(1, 2)), DimensionError);
}

TEST_CASE("incidence_transpose_apply") {
  const Graph path = oracle::path_graph(3);
  CHECK(incidence_transpose_apply(path, Eigen::Vector2d(1, 1)) == Eigen::Vector3d(-1, 0, 1));
  CHECK(incidence_transpose_apply(path, Eigen::Vector2d::Zero()).isZero(0));
  CHECK_THROWS_AS(incidence_transpose_apply(path, Eigen::Vector3d::Zero()), DimensionError);
}

TEST_CASE("incidence operators agree with the dense incidence matrix and L = D - W") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 7);
    const Graph g = oracle::random_graph(rng, n, 0.5, false, false);
    const Eigen::VectorXd x = oracle::random_vector(rng, n);
    const Eigen::MatrixXd b = oracle::dense_incidence(g);
    CHECK((incidence_apply(g, x) - b * x).norm() == 0.0);
    const Eigen::VectorXd lx =
        incidence_transpose_apply(g, edge_weight_vector(g).cwiseProduct(incidence_apply(g, x)));
    CHECK((lx - oracle::dense_laplacian(g) * x).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((laplacian(g) - oracle::dense_laplacian(g)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("incidence rows flip sign when edge endpoints swap roles") {
  std::mt19937_64 rng(3);
  const Graph g = oracle::random_graph(rng, 6, 0.6);
  const Eigen::VectorXd x = oracle::random_vector(rng, 6);
  const Eigen::VectorXd bx = incidence_apply(g, x);
  Index k = 0;
  for (const Edge& e : g.edges()) {
    CHECK(bx[k] == -(x[e.k1] - x[e.k2]));
    ++k;
  }
}

TEST_CASE("degree and edge weight vectors") {
  CHECK(degree_vector(oracle::triangle()) == Eigen::Vector3d(2, 2, 2));
  CHECK(degree_vector(Graph(2, {{0, 1, 3.0}})) == Eigen::Vector2d(3, 3));
  CHECK(degree_vector(Graph(3, {{0, 1, 2.0}, {1, 2, 5.0}})) == Eigen::Vector3d(2, 7, 5));
  CHECK(edge_weight_vector(oracle::triangle(1, 2, 3)) == Eigen::Vector3d(1, 2, 3));
  CHECK(edge_weight_vector(oracle::path_graph(5)).isOnes(0));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = oracle::random_graph(rng, 8, 0.4, false, false);
    CHECK(degree_vector(g).sum() == doctest::Approx(2.0 * edge_weight_vector(g).sum()).epsilon(1e-14));
  }
}

TEST_CASE("connectivity") {
  CHECK(is_connected(oracle::triangle()));
  CHECK_FALSE(is_connected(Graph(4, {{0, 1, 1.0}, {2, 3, 1.0}})));
  CHECK_FALSE(is_connected(Graph(3, {})));
  CHECK(connected_components(Graph(4, {{0, 1, 1.0}, {2, 3, 1.0}})) == std::vector<Index>{0, 0, 1, 1});
}

TEST_CASE("edge list text format") {
  std::istringstream in("# a comment\n#nodes 5\n1 0 2.5\n\n  3 4 1\n");
  const Graph g = read_edge_list(in);
  CHECK(g.num_nodes() == 5);
  CHECK(g.edge(0) == Edge{0, 1, 2.5});
  CHECK(g.edge(1) == Edge{3, 4, 1.0});

  std::istringstream inferred("0 1 1\n1 6 0.5\n");
  CHECK(read_edge_list(inferred).num_nodes() == 7);

  std::istringstream bad("0 1\n");
  CHECK_THROWS_AS(read_edge_list(bad), GraphError);
  std::istringstream too_many("#nodes 2\n0 2 1\n");
  CHECK_THROWS_AS(read_edge_list(too_many), GraphError);
  std::istringstream dup("0 1 1\n1 0 1\n");
  CHECK_THROWS_AS(read_edge_list(dup), GraphError);
}

TEST_CASE("edge list dump reconstructs the identical graph") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = oracle::random_graph(rng, 1 + static_cast<Index>(rng() % 12), 0.3, false, false);
    std::stringstream s;
    write_edge_list(s, g);
    CHECK(read_edge_list(s) == g);
  }
}
