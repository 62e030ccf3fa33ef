#include "plap/data.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "plap/text.hpp"

namespace plap {

double Rng::normal() {
  if (cached_normal_) {
    const double v = *cached_normal_;
    cached_normal_.reset();
    return v;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  cached_normal_ = v * f;
  return u * f;
}

void SbmParams::validate() const {
  if (n_c < 2) throw std::invalid_argument("sbm: n_c must be >= 2");
  if (!(q_out >= 0.0 && q_out <= q_in && q_in <= 1.0)) {
    throw std::invalid_argument("sbm: need 0 <= q_out <= q_in <= 1");
  }
}

SbmGraph sbm_generate(const SbmParams& params) {
  params.validate();
  const Index n = 2 * params.n_c;
  constexpr int kMaxAttempts = 100;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const std::uint64_t seed = params.seed + static_cast<std::uint64_t>(attempt);
    Rng rng(seed);
    std::vector<Edge> edges;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const bool same = (i < params.n_c) == (j < params.n_c);
        if (rng.uniform() < (same ? params.q_in : params.q_out)) edges.push_back({i, j, 1.0});
      }
    }
    Graph g(n, std::move(edges));
    if (!is_connected(g)) continue;
    SbmGraph out{std::move(g), {}, seed};
    out.truth.labels.assign(static_cast<std::size_t>(n), 0);
    std::fill(out.truth.labels.begin() + params.n_c, out.truth.labels.end(), 1);
    return out;
  }
  throw DisconnectedGraphError("sbm: no connected graph after 100 seeds starting at " +
                               std::to_string(params.seed));
}

void MoonsParams::validate() const {
  if (k < 1) throw std::invalid_argument("moons: k must be >= 1");
  if (n_c < k + 1) throw std::invalid_argument("moons: n_c must be >= k + 1");
  if (d < 2) throw std::invalid_argument("moons: d must be >= 2");
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
    throw std::invalid_argument("moons: sigma2 must be >= 0");
  }
}

PointCloud moons_generate(const MoonsParams& params) {
  params.validate();
  const Index n = 2 * params.n_c;
  const double sigma = std::sqrt(params.sigma2);
  Rng rng(params.seed);
  PointCloud cloud;
  cloud.points = MatrixX<double>::Zero(n, params.d);
  cloud.truth.labels.assign(static_cast<std::size_t>(n), 0);
  for (Index i = 0; i < n; ++i) {
    const bool second = i >= params.n_c;
    const Index local = second ? i - params.n_c : i;
    const double t = params.equispaced
                         ? static_cast<double>(local) / static_cast<double>(params.n_c - 1)
                         : rng.uniform();
    const double angle = std::numbers::pi * (second ? 1.0 + t : t);
    const double cx = second ? 1.0 : 0.0;
    const double cy = second ? 0.5 : 0.0;
    cloud.points(i, 0) = cx + std::cos(angle);
    cloud.points(i, 1) = cy + std::sin(angle);
    for (Index c = 0; c < params.d; ++c) cloud.points(i, c) += sigma * rng.normal();
    cloud.truth.labels[static_cast<std::size_t>(i)] = second ? 1 : 0;
  }
  return cloud;
}

Graph knn_similarity_graph(const PointCloud& cloud, Index k, ScaleRule rule) {
  const Index n = cloud.points.rows();
  if (k < 1 || k >= n) throw std::invalid_argument("knn: need 1 <= k < number of points");

  MatrixX<double> dist2(n, n);
  for (Index i = 0; i < n; ++i) {
    dist2(i, i) = 0.0;
    for (Index j = i + 1; j < n; ++j) {
      const double d2 = (cloud.points.row(i) - cloud.points.row(j)).squaredNorm();
      dist2(i, j) = d2;
      dist2(j, i) = d2;
    }
  }

  std::vector<std::vector<Index>> nearest(static_cast<std::size_t>(n));
  VectorX<double> scale2(n);
  std::vector<Index> others;
  for (Index i = 0; i < n; ++i) {
    others.clear();
    for (Index j = 0; j < n; ++j) {
      if (j != i) others.push_back(j);
    }
    auto closer = [&](Index a, Index b) {
      return dist2(i, a) != dist2(i, b) ? dist2(i, a) < dist2(i, b) : a < b;
    };
    std::partial_sort(others.begin(), others.begin() + k, others.end(), closer);
    nearest[static_cast<std::size_t>(i)].assign(others.begin(), others.begin() + k);
    const Index ref = rule == ScaleRule::NearestNeighbor ? others[0] : others[static_cast<std::size_t>(k - 1)];
    scale2[i] = dist2(i, ref);
    if (scale2[i] == 0.0) {
      throw GraphError("knn: points " + std::to_string(i) + " and " + std::to_string(ref) +
                       " coincide, so the kernel width is zero");
    }
  }

  std::vector<Edge> edges;
  for (Index i = 0; i < n; ++i) {
    for (Index j : nearest[static_cast<std::size_t>(i)]) {
      const Index lo = std::min(i, j);
      const Index hi = std::max(i, j);
      // The kernel is monotone in sigma, so the max picks the wider of the two.
      const double s2 = std::max(scale2[lo], scale2[hi]);
      const double w = std::max(std::exp(-2.0 * dist2(lo, hi) / s2),
                                std::numeric_limits<double>::min());
      edges.push_back({lo, hi, w});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.k1 != b.k1 ? a.k1 < b.k1 : a.k2 < b.k2;
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const Edge& a, const Edge& b) { return a.k1 == b.k1 && a.k2 == b.k2; }),
              edges.end());
  return Graph(n, std::move(edges));
}

void write_point_csv(std::ostream& out, const PointCloud& cloud) {
  const Index d = cloud.points.cols();
  for (Index c = 0; c < d; ++c) out << 'x' << (c + 1) << ',';
  out << "label\n";
  for (Index i = 0; i < cloud.points.rows(); ++i) {
    for (Index c = 0; c < d; ++c) out << format_double(cloud.points(i, c)) << ',';
    out << int(cloud.truth.labels[static_cast<std::size_t>(i)]) << '\n';
  }
}

void write_labels(std::ostream& out, const Partition& part) {
  for (auto l : part.labels) out << int(l) << '\n';
}

Partition read_labels(std::istream& in) {
  Partition part;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(first, last - first + 1);
    if (token != "0" && token != "1") throw std::invalid_argument("labels: expected 0 or 1, got " + token);
    part.labels.push_back(token == "1" ? 1 : 0);
  }
  return part;
}

}  // namespace plap
