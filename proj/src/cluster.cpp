#include "plap/cluster.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace plap {

namespace {

CutMetrics metrics_from(double cut, Index size_in, Index size_out, double vol_in, double vol_out) {
  CutMetrics m;
  m.cut = cut;
  m.size_in = size_in;
  m.size_out = size_out;
  m.vol_in = vol_in;
  m.vol_out = vol_out;
  const double s_in = static_cast<double>(size_in);
  const double s_out = static_cast<double>(size_out);
  m.rcut = (1.0 / s_in + 1.0 / s_out) * cut;
  m.rcc = cut / std::min(s_in, s_out);
  m.ncut = (1.0 / vol_in + 1.0 / vol_out) * cut;
  m.ncc = cut / std::min(vol_in, vol_out);
  return m;
}

}  // namespace

CutMetrics cut_metrics(const Graph& g, const Partition& part) {
  detail::require_length(part.size(), g.num_nodes(), "cut_metrics");
  double cut = 0.0;
  double vol_in = 0.0;
  double vol_out = 0.0;
  for (const Edge& e : g.edges()) {
    const bool a = part.labels[static_cast<std::size_t>(e.k1)] != 0;
    const bool b = part.labels[static_cast<std::size_t>(e.k2)] != 0;
    if (a != b) cut += e.w;
    (a ? vol_in : vol_out) += e.w;
    (b ? vol_in : vol_out) += e.w;
  }
  const auto size_in = static_cast<Index>(std::count_if(
      part.labels.begin(), part.labels.end(), [](std::uint8_t l) { return l != 0; }));
  const Index size_out = part.size() - size_in;
  if (size_in == 0 || size_out == 0) throw std::invalid_argument("cut_metrics: empty side");
  return metrics_from(cut, size_in, size_out, vol_in, vol_out);
}

SweepResult threshold_sweep(const Graph& g, const NodeVector& scores) {
  detail::require_length(scores.size(), g.num_nodes(), "threshold_sweep");
  const Index n = g.num_nodes();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return scores[i] < scores[j]; });
  if (n < 2 || scores[order.front()] == scores[order.back()]) {
    throw std::invalid_argument("threshold_sweep: scores need at least two distinct values");
  }

  const VectorX<double> degree = degree_vector(g);
  const double total_vol = degree.sum();

  // Nodes are moved one by one from the upper side (label 1) to the lower side.
  std::vector<bool> lower(static_cast<std::size_t>(n), false);
  double cut = 0.0;
  double vol_lower = 0.0;
  bool have_best = false;
  Index best_split = 0;
  CutMetrics best;
  for (Index pos = 0; pos + 1 < n; ++pos) {
    const Index u = order[static_cast<std::size_t>(pos)];
    for (const Neighbor& nb : g.neighbors(u)) {
      cut += lower[static_cast<std::size_t>(nb.node)] ? -nb.w : nb.w;
    }
    lower[static_cast<std::size_t>(u)] = true;
    vol_lower += degree[u];

    const Index next = order[static_cast<std::size_t>(pos + 1)];
    if (!(scores[u] < scores[next])) continue;
    const Index size_lower = pos + 1;
    const CutMetrics m =
        metrics_from(cut, n - size_lower, size_lower, total_vol - vol_lower, vol_lower);
    const bool better = !have_best || m.rcc < best.rcc || (m.rcc == best.rcc && m.cut < best.cut);
    if (better) {
      have_best = true;
      best = m;
      best_split = pos;
    }
  }

  SweepResult out;
  const double lo = scores[order[static_cast<std::size_t>(best_split)]];
  const double hi = scores[order[static_cast<std::size_t>(best_split + 1)]];
  out.threshold = lo + 0.5 * (hi - lo);
  out.partition.labels.assign(static_cast<std::size_t>(n), 0);
  for (Index i = 0; i < n; ++i) {
    out.partition.labels[static_cast<std::size_t>(i)] = scores[i] > out.threshold ? 1 : 0;
  }
  // Recompute from scratch so the reported metrics carry no incremental rounding.
  out.metrics = cut_metrics(g, out.partition);
  return out;
}

double partition_accuracy(const Partition& part, const Partition& truth) {
  if (part.size() != truth.size()) throw std::invalid_argument("partition_accuracy: size mismatch");
  if (part.size() == 0) throw std::invalid_argument("partition_accuracy: empty partition");
  Index agree = 0;
  for (std::size_t i = 0; i < part.labels.size(); ++i) {
    agree += (part.labels[i] != 0) == (truth.labels[i] != 0) ? 1 : 0;
  }
  const double frac = static_cast<double>(agree) / static_cast<double>(part.size());
  return std::max(frac, 1.0 - frac);
}

}  // namespace plap
