#pragma once

#include <cstdint>
#include <vector>

#include "plap/graph.hpp"

namespace plap {

/// Two-way split of the nodes; labels are 0 or 1.
struct Partition {
  std::vector<std::uint8_t> labels;

  Index size() const { return static_cast<Index>(labels.size()); }
  friend bool operator==(const Partition&, const Partition&) = default;
};

struct CutMetrics {
  double cut = 0.0;
  double rcut = 0.0;
  double rcc = 0.0;
  double ncut = 0.0;
  double ncc = 0.0;
  /// |C| and |C^c|, C being the nodes labelled 1.
  Index size_in = 0;
  Index size_out = 0;
  double vol_in = 0.0;
  double vol_out = 0.0;
};

/**
 * cut  = sum of weights of edges crossing the split
 * rcut = (1/|C| + 1/|C^c|) cut        rcc = cut / min(|C|, |C^c|)
 * ncut = (1/vol C + 1/vol C^c) cut    ncc = cut / min(vol C, vol C^c)
 *
 * Throws std::invalid_argument if either side is empty.
 */
CutMetrics cut_metrics(const Graph& g, const Partition& part);

struct SweepResult {
  Partition partition;
  CutMetrics metrics;
  /// Nodes with score > threshold are labelled 1.
  double threshold = 0.0;
};

/**
 * Bipartition minimizing the ratio Cheeger cut among all splits of the
 * sorted scores. Splits only fall between strictly increasing values, at the
 * midpoint. Ties in RCC go to the smaller cut, then the smaller threshold.
 * The cut is updated incrementally, O(m + n log n) overall.
 *
 * Throws std::invalid_argument if all scores are equal.
 */
SweepResult threshold_sweep(const Graph& g, const NodeVector& scores);

/// Fraction of agreeing labels under the better of the two label matchings.
double partition_accuracy(const Partition& part, const Partition& truth);

}  // namespace plap
