#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "plap/forms.hpp"

namespace plap {

/// Knobs of the p-continuation SCF solver.
struct ScfConfig {
  double p_target = 1.2;
  double delta_p = 0.1;
  /// Softabs smoothing parameter.
  double a = 1e10;
  /// Stop a stage once ||v_{k+1} - v_k||_2 <= tol. About five digits are
  /// usually enough to threshold a clustering; the default is stricter.
  double tol = 1e-8;
  int max_iter_per_p = 500;
  /// Keep every iterate in the trace so residual curves can be recomputed.
  bool record_true_residual = false;
  /// Recorded in run manifests; the solver itself draws no random numbers.
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on p_target outside (1, 2], delta_p <= 0, tol <= 0, a <= 0
  /// or max_iter_per_p < 1.
  void validate() const;
};

struct ScfRecord {
  double p;
  int iter;
  double lambda;
  double step_error;
  double relres_reg;
  /// Residual of the unregularized problem at p_target.
  double relres_true;
};

struct StageSummary {
  double p;
  int iterations;
  bool converged;
  double lambda;
  /// min(lambda2 - lambda1, lambda3 - lambda2) of the last SCF matrix of the stage.
  double delta_gap;
  NodeVector vector;
};

struct ScfTrace {
  double a = 0.0;
  /// Ordered by stage (p descending), then iteration.
  std::vector<ScfRecord> records;
  /// Iterate v_{k+1} for each record; filled only when record_true_residual is set.
  std::vector<NodeVector> iterates;
  std::vector<StageSummary> stages;
};

struct ScfResult {
  double lambda = 0.0;
  /// Unit 2-norm, largest-magnitude entry positive.
  NodeVector vector;
  bool converged = false;
  /// The p = 2 linear solve that seeds the continuation.
  StageSummary initial;
  ScfTrace trace;
};

struct InnerOptions {
  /// Exponent at which relres_true is evaluated; NaN is recorded when absent.
  std::optional<double> residual_p;
  bool keep_iterates = false;
};

struct InnerResult {
  double lambda = 0.0;
  /// Unit 2-norm, sign aligned with the starting vector.
  NodeVector vector;
  int iterations = 0;
  bool converged = false;
  double delta_gap = 0.0;
  std::vector<ScfRecord> records;
  std::vector<NodeVector> iterates;
};

/**
 * SCF iteration on the softabs-regularized Form 1 at a fixed p.
 *
 * Each step builds M_k = R_a(v_k)^{-1/2} N_a(v_k) R_a(v_k)^{-1/2}, takes its
 * second smallest eigenpair (lambda, y), sets v_{k+1} = R_a(v_k)^{-1/2} y,
 * normalizes it and flips it to agree in sign with v_k. Stops once
 * ||v_{k+1} - v_k|| <= tol or after max_iter steps (converged = false).
 */
InnerResult scf_inner(const Graph& g, const NodeVector& v0, PValue p, SoftabsParam a, double tol,
                      int max_iter, const InnerOptions& options = {});

/// Stage exponents 2 - delta_p, 2 - 2 delta_p, ... with the last one clamped to p_target.
std::vector<double> p_schedule(double p_target, double delta_p);

/**
 * p-continuation: start from the second eigenvector of L, then run scf_inner
 * for each p in p_schedule, warm-starting from the previous stage. Stops at
 * the first stage that fails to converge and returns converged = false with
 * the partial trace.
 *
 * Throws DisconnectedGraphError if g is not connected, std::invalid_argument
 * if n < 3 or the config is invalid.
 */
ScfResult scf_continuation(const Graph& g, const ScfConfig& cfg);

struct ResidualPoint {
  double p;
  int iter;
  double relres_reg;
  double relres_true;
};

/// Recomputes both residual series from the stored iterates. Requires a trace
/// recorded with record_true_residual.
std::vector<ResidualPoint> true_residual_curve(const ScfTrace& trace, const Graph& g, double p_target);

/// Median of step_error[k+1] / step_error[k] over one stage's records.
double median_step_ratio(const ScfTrace& trace, std::size_t stage);

}  // namespace plap
