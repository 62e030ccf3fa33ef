#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <utility>

#include "plap/cluster.hpp"
#include "plap/graph.hpp"

namespace plap {

/**
 * Seeded random stream with a fully specified output sequence:
 *
 *  - engine: std::mt19937_64 (the standard fixes its exact output), seeded with the 64-bit seed;
 *  - uniform(): (next() >> 11) * 2^-53, in [0, 1);
 *  - normal(): Marsaglia polar method on pairs u, v = 2 uniform() - 1, rejecting
 *    s = u^2 + v^2 outside (0, 1); returns u * f first and caches v * f for the
 *    next call, f = sqrt(-2 ln s / s).
 *
 * std::uniform_real_distribution and std::normal_distribution are avoided
 * because their algorithms are implementation defined.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> cached_normal_;
};

struct SbmParams {
  Index n_c = 100;
  double q_in = 0.8;
  double q_out = 0.3;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument unless 0 <= q_out <= q_in <= 1 and n_c >= 2.
  void validate() const;
};

struct SbmGraph {
  Graph graph;
  /// Node i belongs to community 0 for i < n_c, community 1 otherwise.
  Partition truth;
  /// Seed that produced the connected graph (seed + number of rejected attempts).
  std::uint64_t seed_used = 0;
};

/**
 * Two-community stochastic block model with unit weights. Pairs (i, j), i < j,
 * are visited in lexical order and each draws one uniform() against q_in
 * (same community) or q_out. A disconnected draw is discarded and the seed
 * incremented, up to 100 attempts; then DisconnectedGraphError.
 */
SbmGraph sbm_generate(const SbmParams& params);

struct MoonsParams {
  Index n_c = 400;
  Index d = 10;
  double sigma2 = 0.02;
  Index k = 10;
  std::uint64_t seed = 1;
  /// Place angles on an even grid instead of sampling them.
  bool equispaced = false;

  void validate() const;
};

struct PointCloud {
  /// One point per row, 2 n_c rows, d columns.
  MatrixX<double> points;
  Partition truth;
};

/**
 * Noisy two moons. Moon 0: upper unit semicircle centred at (0, 0); moon 1:
 * lower unit semicircle centred at (1, 0.5). The 2-D points are zero padded to
 * d dimensions and every coordinate gets N(0, sigma2) noise.
 *
 * Draw order, point by point (moon 0 first): one uniform() for the angle
 * (skipped when equispaced), then d normal() values for the coordinates.
 */
PointCloud moons_generate(const MoonsParams& params);

enum class ScaleRule {
  /// sigma_i = distance from i to its nearest neighbour.
  NearestNeighbor,
  /// sigma_i = distance from i to its k-th nearest neighbour.
  KthNeighbor,
};

/**
 * Symmetric kNN graph: (i, j) is an edge when j is among the k nearest points
 * of i or vice versa (ties by lower index). Weight
 *   max(exp(-2 ||x_i - x_j||^2 / sigma_i^2), exp(-2 ||x_i - x_j||^2 / sigma_j^2)),
 * floored at the smallest normal double so that no edge is lost to underflow.
 *
 * Throws GraphError if some sigma_i is zero (duplicate points).
 */
Graph knn_similarity_graph(const PointCloud& cloud, Index k,
                           ScaleRule rule = ScaleRule::NearestNeighbor);

/// CSV with header x1,...,xd,label.
void write_point_csv(std::ostream& out, const PointCloud& cloud);

/// One label per line.
void write_labels(std::ostream& out, const Partition& part);
Partition read_labels(std::istream& in);

}  // namespace plap
