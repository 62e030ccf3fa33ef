#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "plap/graph.hpp"

namespace plap {

/// Full symmetric eigendecomposition, eigenvalues ascending, columns orthonormal
/// and sign-fixed (see fix_sign).
template <typename Scalar>
struct Spectrum {
  VectorX<Scalar> eigenvalues;
  MatrixX<Scalar> eigenvectors;
};

template <typename Scalar>
struct Eigenpair {
  Scalar lambda;
  VectorX<Scalar> vector;
};

/// All eigenvalues plus the eigenvector of the second smallest one.
template <typename Scalar>
struct SecondEigenpair {
  VectorX<Scalar> eigenvalues;
  Scalar lambda;
  VectorX<Scalar> vector;
};

/// Flip v so that its largest-magnitude entry is positive; the lowest index wins ties.
template <typename Derived>
void fix_sign(Eigen::MatrixBase<Derived>& v) {
  using std::abs;
  if (v.size() == 0) return;
  Index best = 0;
  for (Index i = 1; i < v.size(); ++i) {
    if (abs(v(i)) > abs(v(best))) best = i;
  }
  if (v(best) < 0) v = -v;
}

template <typename Derived>
void fix_sign(Eigen::MatrixBase<Derived>&& v) {
  fix_sign(v);
}

namespace detail {

template <typename Derived>
void require_symmetric(const Eigen::MatrixBase<Derived>& m, const char* what) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix is not square");
  }
  if (!m.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entries");
  const Scalar scale = m.cwiseAbs().maxCoeff();
  const Scalar asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > Scalar(1e-10) * scale) {
    throw std::invalid_argument(std::string(what) + ": matrix is not symmetric");
  }
}

/**
 * One eigenvector of the symmetric tridiagonal T = tridiag(sub, diag, sub)
 * by inverse iteration at the given shift. T - shift I is factored once by
 * Gaussian elimination with partial pivoting (upper factor has two
 * superdiagonals); zero pivots are replaced by eps * ||T||.
 */
template <typename Scalar>
VectorX<Scalar> tridiagonal_inverse_iteration(const VectorX<Scalar>& diag, const VectorX<Scalar>& sub,
                                              Scalar shift, int sweeps = 4) {
  using std::abs;
  const Index n = diag.size();
  VectorX<Scalar> z(n);
  if (n == 1) {
    z[0] = Scalar(1);
    return z;
  }
  Scalar tnorm = abs(diag[0]) + abs(sub[0]);
  for (Index i = 1; i < n; ++i) {
    tnorm = std::max(tnorm, abs(diag[i]) + abs(sub[i - 1]) + (i + 1 < n ? abs(sub[i]) : Scalar(0)));
  }
  const Scalar tiny = std::max(std::numeric_limits<Scalar>::epsilon() * tnorm,
                               std::numeric_limits<Scalar>::min());

  VectorX<Scalar> d = diag.array() - shift;
  VectorX<Scalar> du = sub;
  VectorX<Scalar> dl = sub;
  VectorX<Scalar> du2 = VectorX<Scalar>::Zero(std::max<Index>(n - 2, 0));
  std::vector<bool> swapped(static_cast<std::size_t>(n - 1), false);
  for (Index i = 0; i + 1 < n; ++i) {
    if (abs(d[i]) >= abs(dl[i])) {
      if (d[i] == Scalar(0)) d[i] = tiny;
      const Scalar l = dl[i] / d[i];
      dl[i] = l;
      d[i + 1] -= l * du[i];
    } else {
      swapped[static_cast<std::size_t>(i)] = true;
      const Scalar l = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = l;
      const Scalar upper = du[i];
      du[i] = d[i + 1];
      d[i + 1] = upper - l * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -l * du[i + 1];
      }
    }
  }
  if (d[n - 1] == Scalar(0)) d[n - 1] = tiny;

  // Fixed, non-degenerate start vector so results are reproducible.
  for (Index i = 0; i < n; ++i) {
    z[i] = Scalar(1) + Scalar(0.5) * std::sin(Scalar(1.7) * Scalar(i + 1));
  }
  z.normalize();
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (Index i = 0; i + 1 < n; ++i) {
      if (!swapped[static_cast<std::size_t>(i)]) {
        z[i + 1] -= dl[i] * z[i];
      } else {
        const Scalar t = z[i];
        z[i] = z[i + 1];
        z[i + 1] = t - dl[i] * z[i];
      }
    }
    z[n - 1] /= d[n - 1];
    z[n - 2] = (z[n - 2] - du[n - 2] * z[n - 1]) / d[n - 2];
    for (Index i = n - 3; i >= 0; --i) {
      z[i] = (z[i] - du[i] * z[i + 1] - du2[i] * z[i + 2]) / d[i];
    }
    const Scalar nz = z.norm();
    if (!std::isfinite(static_cast<double>(nz)) || nz == Scalar(0)) {
      throw std::runtime_error("tridiagonal inverse iteration broke down");
    }
    z /= nz;
  }
  return z;
}

}  // namespace detail

/// Full spectrum of a real symmetric matrix (Householder tridiagonalization
/// followed by implicit symmetric QR).
template <typename Derived>
Spectrum<typename Derived::Scalar> sym_eig(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  detail::require_symmetric(m, "sym_eig");
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(m.derived());
  if (solver.info() != Eigen::Success) throw std::runtime_error("sym_eig: QR iteration failed");
  Spectrum<Scalar> s{solver.eigenvalues(), solver.eigenvectors()};
  for (Index j = 0; j < s.eigenvectors.cols(); ++j) fix_sign(s.eigenvectors.col(j));
  return s;
}

template <typename Scalar>
Eigenpair<Scalar> second_smallest(const Spectrum<Scalar>& s) {
  if (s.eigenvalues.size() < 2) throw std::invalid_argument("second_smallest: need n >= 2");
  return {s.eigenvalues[1], s.eigenvectors.col(1)};
}

/// min(lambda_2 - lambda_1, lambda_3 - lambda_2) of an ascending spectrum.
template <typename Derived>
typename Derived::Scalar eigen_gap(const Eigen::MatrixBase<Derived>& ascending) {
  if (ascending.size() < 3) throw std::invalid_argument("eigen_gap: need n >= 3");
  return std::min(ascending(1) - ascending(0), ascending(2) - ascending(1));
}

template <typename Scalar>
Scalar eigen_gap(const Spectrum<Scalar>& s) {
  return eigen_gap(s.eigenvalues);
}

/**
 * All eigenvalues and the second eigenvector, without accumulating the full
 * eigenvector basis: eigenvalues come from QR on the tridiagonal form, the
 * vector from inverse iteration on that tridiagonal form, mapped back through
 * the Householder reflectors. Roughly 5x cheaper than sym_eig at n ~ 800.
 */
template <typename Derived>
SecondEigenpair<typename Derived::Scalar> second_eigenpair(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  detail::require_symmetric(m, "second_eigenpair");
  if (m.rows() < 2) throw std::invalid_argument("second_eigenpair: need n >= 2");
  Eigen::Tridiagonalization<MatrixX<Scalar>> tri(m.derived());
  const VectorX<Scalar> diag = tri.diagonal();
  const VectorX<Scalar> sub = tri.subDiagonal();
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> values;
  values.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (values.info() != Eigen::Success) throw std::runtime_error("second_eigenpair: QR iteration failed");

  SecondEigenpair<Scalar> out;
  out.eigenvalues = values.eigenvalues();
  out.lambda = out.eigenvalues[1];
  const VectorX<Scalar> z = detail::tridiagonal_inverse_iteration(diag, sub, out.lambda);
  out.vector = tri.matrixQ() * z;
  out.vector.normalize();
  fix_sign(out.vector);
  return out;
}

}  // namespace plap
