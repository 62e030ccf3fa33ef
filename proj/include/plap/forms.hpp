#pragma once

#include <Eigen/SparseCore>

#include <cmath>
#include <string>
#include <vector>

#include "plap/p_laplacian.hpp"

namespace plap {

/// Smoothing parameter a > 0 of the softabs function.
class SoftabsParam {
 public:
  explicit SoftabsParam(double a) : a_(a) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw std::domain_error("softabs parameter must be positive and finite, got " +
                              std::to_string(a));
    }
  }
  double value() const { return a_; }

 private:
  double a_;
};

/**
 * sf_a(y) = (log(1 + e^{-a y}) + log(1 + e^{a y})) / a, the sum of two
 * integrated sigmoids approximating max(y, 0) + max(-y, 0).
 *
 * Evaluated as |y| + 2 log1p(e^{-a|y|}) / a, which never overflows. The
 * result is strictly positive and 0 < sf_a(y) - |y| <= 2 ln 2 / a.
 */
template <typename Scalar>
Scalar softabs(Scalar y, Scalar a) {
  using std::abs, std::exp, std::log1p;
  const Scalar ay = abs(y);
  return ay + Scalar(2) * log1p(exp(-a * ay)) / a;
}

template <typename Derived>
VectorX<typename Derived::Scalar> softabs(const Eigen::MatrixBase<Derived>& y, SoftabsParam a) {
  using Scalar = typename Derived::Scalar;
  const Scalar av(a.value());
  return y.unaryExpr([av](Scalar v) { return softabs(v, av); });
}

/// Unregularized Form-1 edge factors w_k |Bx|_k^(p-2). Throws ConstraintViolation if (Bx)_k == 0.
template <typename Derived>
VectorX<typename Derived::Scalar> form1_edge_factors(const Graph& g,
                                                     const Eigen::MatrixBase<Derived>& x,
                                                     typename Derived::Scalar p) {
  using Scalar = typename Derived::Scalar;
  const VectorX<Scalar> bx = incidence_apply(g, x);
  VectorX<Scalar> c(bx.size());
  Index k = 0;
  for (const Edge& e : g.edges()) {
    if (bx[k] == Scalar(0)) {
      throw ConstraintViolation("Form 1 requires (Bx)_k != 0; violated on edge (" +
                                std::to_string(e.k1) + "," + std::to_string(e.k2) + ")");
    }
    c[k] = Scalar(e.w) * detail::abs_pow(bx[k], p - Scalar(2));
    ++k;
  }
  return c;
}

/// N(x) z = B^T D^w diag(|Bx|)^(p-2) B z.
template <typename DerivedX, typename DerivedZ>
VectorX<typename DerivedX::Scalar> form1_N_apply(const Graph& g,
                                                 const Eigen::MatrixBase<DerivedX>& x,
                                                 typename DerivedX::Scalar p,
                                                 const Eigen::MatrixBase<DerivedZ>& z) {
  detail::require_length(z.size(), g.num_nodes(), "form1_N_apply");
  const auto c = form1_edge_factors(g, x, p);
  return incidence_transpose_apply(g, c.cwiseProduct(incidence_apply(g, z)));
}

/// Dense N(x).
template <typename Derived>
MatrixX<typename Derived::Scalar> form1_N_dense(const Graph& g, const Eigen::MatrixBase<Derived>& x,
                                                typename Derived::Scalar p) {
  return weighted_laplacian(g, form1_edge_factors(g, x, p));
}

/// Diagonal of R(x) = diag(|x|)^(p-2). Throws ConstraintViolation if some x_i == 0.
template <typename Derived>
VectorX<typename Derived::Scalar> form1_R_diag(const Eigen::MatrixBase<Derived>& x,
                                               typename Derived::Scalar p) {
  using Scalar = typename Derived::Scalar;
  VectorX<Scalar> r(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    if (x(i) == Scalar(0)) {
      throw ConstraintViolation("Form 1 requires x_i != 0; violated at node " + std::to_string(i));
    }
    r[i] = detail::abs_pow(x(i), p - Scalar(2));
  }
  return r;
}

/// Diagonals of the softabs-regularized Form 1:
///   N_a(x) = B^T diag(edge) B,  edge_k = w_k sf_a((Bx)_k)^(p-2)
///   R_a(x) = diag(node),        node_i = sf_a(x_i)^(p-2)
template <typename Scalar>
struct RegularizedDiagonals {
  VectorX<Scalar> edge;
  VectorX<Scalar> node;
};

template <typename Derived>
RegularizedDiagonals<typename Derived::Scalar> form1_regularized(const Graph& g,
                                                                 const Eigen::MatrixBase<Derived>& x,
                                                                 typename Derived::Scalar p,
                                                                 SoftabsParam a) {
  using Scalar = typename Derived::Scalar;
  detail::require_length(x.size(), g.num_nodes(), "form1_regularized");
  const Scalar e = p - Scalar(2);
  const Scalar av(a.value());
  RegularizedDiagonals<Scalar> d;
  d.edge.resize(g.num_edges());
  d.node.resize(g.num_nodes());
  Index k = 0;
  for (const Edge& ed : g.edges()) {
    d.edge[k++] = Scalar(ed.w) * detail::abs_pow(softabs(x(ed.k2) - x(ed.k1), av), e);
  }
  for (Index i = 0; i < x.size(); ++i) {
    d.node[i] = detail::abs_pow(softabs(Scalar(x(i)), av), e);
  }
  if (!d.edge.allFinite() || !d.node.allFinite() || (d.edge.array() <= Scalar(0)).any() ||
      (d.node.array() <= Scalar(0)).any()) {
    throw RegimeError("softabs-regularized factors left the floating-point range (a = " +
                      std::to_string(a.value()) + ", p = " + std::to_string(double(p)) + ")");
  }
  return d;
}

/// Dense N_a(x).
template <typename Derived>
MatrixX<typename Derived::Scalar> regularized_N_dense(const Graph& g,
                                                      const Eigen::MatrixBase<Derived>& x,
                                                      typename Derived::Scalar p, SoftabsParam a) {
  return weighted_laplacian(g, form1_regularized(g, x, p, a).edge);
}

/**
 * Symmetric SCF matrix R_a(x)^{-1/2} N_a(x) R_a(x)^{-1/2}, assembled densely.
 *
 * Each off-diagonal value is computed once and written to both (i,j) and
 * (j,i), so the result is bitwise symmetric. The same loop over edges would
 * fill a sparse matrix of nnz = n + 2m if larger graphs are ever needed.
 */
template <typename Scalar>
MatrixX<Scalar> scf_matrix_from(const Graph& g, const RegularizedDiagonals<Scalar>& d) {
  const Index n = g.num_nodes();
  const VectorX<Scalar> s = d.node.cwiseSqrt().cwiseInverse();
  MatrixX<Scalar> m = MatrixX<Scalar>::Zero(n, n);
  Index k = 0;
  for (const Edge& e : g.edges()) {
    const Scalar c = d.edge[k++];
    m(e.k1, e.k1) += c;
    m(e.k2, e.k2) += c;
    const Scalar off = -(s[e.k1] * c) * s[e.k2];
    m(e.k1, e.k2) = off;
    m(e.k2, e.k1) = off;
  }
  for (Index i = 0; i < n; ++i) m(i, i) *= s[i] * s[i];
  if (!m.allFinite()) throw RegimeError("scf_matrix: non-finite entries");
  return m;
}

template <typename Derived>
MatrixX<typename Derived::Scalar> scf_matrix(const Graph& g, const Eigen::MatrixBase<Derived>& x,
                                             typename Derived::Scalar p, SoftabsParam a) {
  if (x.isZero(0)) throw DegenerateError("scf_matrix: zero vector");
  return scf_matrix_from(g, form1_regularized(g, x, p, a));
}

/// ||N_a(x) x - lambda R_a(x) x|| / ||N_a(x) x||.
template <typename Derived>
typename Derived::Scalar regularized_residual(const Graph& g, const Eigen::MatrixBase<Derived>& x,
                                              typename Derived::Scalar lambda,
                                              typename Derived::Scalar p, SoftabsParam a) {
  using Scalar = typename Derived::Scalar;
  const auto d = form1_regularized(g, x, p, a);
  const VectorX<Scalar> nx = incidence_transpose_apply(g, d.edge.cwiseProduct(incidence_apply(g, x)));
  const Scalar denom = nx.norm();
  if (denom == Scalar(0)) throw DegenerateError("regularized_residual: N_a(x) x vanishes");
  return (nx - lambda * d.node.cwiseProduct(x)).norm() / denom;
}

/// Sparse m x n matrix whose rows are unit rows, negated unit rows, B rows or zero.
using SignMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class SignRowRule {
  /// Row equals B's row when x_{k1} == x_{k2}.
  IncidenceOnEquality,
  /// Row is zero when x_{k1} == x_{k2}.
  ZeroOnEquality,
};

/**
 * Form-2 selection matrix P(x), one row per edge, chosen so that
 * sign(Bx) = P(x) sign(x). Cases are tested in order:
 *
 *   x_{k1} ==  x_{k2}        -> B_k (or 0 under ZeroOnEquality)
 *   x_{k1} == -x_{k2}        -> +e_{k2}
 *   |x_{k1}| < |x_{k2}|      -> +e_{k2}
 *   |x_{k1}| > |x_{k2}|      -> -e_{k1}
 */
template <typename Derived>
SignMatrix form2_P(const Graph& g, const Eigen::MatrixBase<Derived>& x,
                   SignRowRule rule = SignRowRule::IncidenceOnEquality) {
  using std::abs;
  detail::require_length(x.size(), g.num_nodes(), "form2_P");
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(2 * g.num_edges()));
  Index k = 0;
  for (const Edge& e : g.edges()) {
    const auto a = x(e.k1);
    const auto b = x(e.k2);
    if (a == b) {
      if (rule == SignRowRule::IncidenceOnEquality) {
        triplets.emplace_back(k, e.k1, -1.0);
        triplets.emplace_back(k, e.k2, 1.0);
      }
    } else if (a == -b || abs(a) < abs(b)) {
      triplets.emplace_back(k, e.k2, 1.0);
    } else {
      triplets.emplace_back(k, e.k1, -1.0);
    }
    ++k;
  }
  SignMatrix p(g.num_edges(), g.num_nodes());
  p.setFromTriplets(triplets.begin(), triplets.end());
  return p;
}

/// Elementwise sign in {-1, 0, 1}.
template <typename Derived>
VectorX<typename Derived::Scalar> sign_vector(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  return x.unaryExpr([](Scalar v) { return Scalar((v > Scalar(0)) - (v < Scalar(0))); });
}

}  // namespace plap
