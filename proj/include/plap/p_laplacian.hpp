#pragma once

#include <cmath>
#include <string>

#include "plap/graph.hpp"

namespace plap {

/// Exponent p accepted by the solver: 1 < p <= 2.
class PValue {
 public:
  explicit PValue(double p) : p_(p) {
    if (!(p > 1.0 && p <= 2.0)) {
      throw std::domain_error("p must lie in (1, 2], got " + std::to_string(p));
    }
  }
  double value() const { return p_; }
  operator double() const { return p_; }

 private:
  double p_;
};

namespace detail {

inline void require_eval_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw std::domain_error("p must be finite and >= 1, got " + std::to_string(p));
  }
}

/// |y|^e for y != 0, via exp(e * ln|y|).
template <typename Scalar>
Scalar abs_pow(Scalar y, Scalar e) {
  using std::abs, std::exp, std::log;
  return exp(e * log(abs(y)));
}

/// y * |y|^(p-2) with 0 -> 0. Exact identity at p = 2 since exp(0) == 1.
template <typename Scalar>
Scalar phi_scalar(Scalar y, Scalar p) {
  if (y == Scalar(0)) return Scalar(0);
  return y * abs_pow(y, p - Scalar(2));
}

}  // namespace detail

/// Elementwise |y_i|^(p-1) sign(y_i).
template <typename Derived>
VectorX<typename Derived::Scalar> phi_p(const Eigen::MatrixBase<Derived>& y,
                                        typename Derived::Scalar p) {
  using Scalar = typename Derived::Scalar;
  detail::require_eval_p(static_cast<double>(p));
  return y.unaryExpr([p](Scalar v) { return detail::phi_scalar(v, p); });
}

/// Delta_p(x) = B^T D^w Phi_p(Bx).
template <typename Derived>
VectorX<typename Derived::Scalar> plap_apply(const Graph& g, const Eigen::MatrixBase<Derived>& x,
                                             typename Derived::Scalar p) {
  using Scalar = typename Derived::Scalar;
  detail::require_length(x.size(), g.num_nodes(), "plap_apply");
  const VectorX<Scalar> edge_flux =
      edge_weight_vector<Scalar>(g).cwiseProduct(phi_p(incidence_apply(g, x), p));
  return incidence_transpose_apply(g, edge_flux);
}

/// Sum_i |x_i|^p.
template <typename Derived>
typename Derived::Scalar p_norm_pow(const Eigen::MatrixBase<Derived>& x,
                                    typename Derived::Scalar p) {
  using Scalar = typename Derived::Scalar;
  Scalar s(0);
  for (Index i = 0; i < x.size(); ++i) {
    if (x(i) != Scalar(0)) s += detail::abs_pow(x(i), p);
  }
  return s;
}

/// Q_p(x) = x^T Delta_p(x) / ||x||_p^p.
template <typename Derived>
typename Derived::Scalar rayleigh_qp(const Graph& g, const Eigen::MatrixBase<Derived>& x,
                                     typename Derived::Scalar p) {
  const auto denom = p_norm_pow(x, p);
  if (denom == 0) throw DegenerateError("rayleigh_qp: zero vector");
  return x.dot(plap_apply(g, x, p)) / denom;
}

/**
 * Relative residual of the eigenproblem B^T D^w Phi_p(Bx) = lambda Phi_p(x):
 *
 *   || Delta_p(x) - lambda Phi_p(x) ||_2 / || Delta_p(x) ||_2
 *
 * Both terms scale by |alpha|^(p-1) under x -> alpha x, so the value is
 * scale invariant.
 */
template <typename Derived>
typename Derived::Scalar eig_residual(const Graph& g, const Eigen::MatrixBase<Derived>& x,
                                      typename Derived::Scalar lambda,
                                      typename Derived::Scalar p) {
  using Scalar = typename Derived::Scalar;
  if (x.isZero(0)) throw DegenerateError("eig_residual: zero vector");
  const VectorX<Scalar> lhs = plap_apply(g, x, p);
  const Scalar denom = lhs.norm();
  if (denom == Scalar(0)) throw DegenerateError("eig_residual: Delta_p(x) vanishes");
  return (lhs - lambda * phi_p(x, p)).norm() / denom;
}

}  // namespace plap
