#include "plap/scf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "plap/eig.hpp"

namespace plap {

void ScfConfig::validate() const {
  if (!(p_target > 1.0 && p_target <= 2.0)) {
    throw std::invalid_argument("p_target must lie in (1, 2], got " + std::to_string(p_target));
  }
  if (!(delta_p > 0.0) || !std::isfinite(delta_p)) {
    throw std::invalid_argument("delta_p must be positive");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("a must be positive and finite");
  if (max_iter_per_p < 1) throw std::invalid_argument("max_iter_per_p must be >= 1");
}

std::vector<double> p_schedule(double p_target, double delta_p) {
  ScfConfig{.p_target = p_target, .delta_p = delta_p}.validate();
  std::vector<double> ps;
  if (p_target == 2.0) return {2.0};
  // Values within this slack of p_target are snapped, so 2 - 8 * 0.1 lands on 1.2.
  const double slack = 1e-9 * delta_p;
  for (int j = 1;; ++j) {
    // Rounded to 12 decimals so 2 - 3 * 0.1 is stored as 1.7, not 1.7000000000000002.
    const double p = std::round((2.0 - j * delta_p) * 1e12) / 1e12;
    if (p <= p_target + slack) {
      ps.push_back(p_target);
      break;
    }
    ps.push_back(p);
  }
  return ps;
}

InnerResult scf_inner(const Graph& g, const NodeVector& v0, PValue p, SoftabsParam a, double tol,
                      int max_iter, const InnerOptions& options) {
  detail::require_length(v0.size(), g.num_nodes(), "scf_inner");
  const double n0 = v0.norm();
  if (n0 == 0.0) throw DegenerateError("scf_inner: zero starting vector");

  InnerResult out;
  NodeVector v = v0 / n0;
  for (int k = 1; k <= max_iter; ++k) {
    const auto diag = form1_regularized(g, v, p.value(), a);
    const MatrixX<double> m = scf_matrix_from(g, diag);
    const auto pair = second_eigenpair(m);

    NodeVector next = diag.node.cwiseSqrt().cwiseInverse().cwiseProduct(pair.vector);
    next.normalize();
    if (next.dot(v) < 0.0) next = -next;

    const double step = (next - v).norm();
    const double relres_reg = regularized_residual(g, next, pair.lambda, p.value(), a);
    const double relres_true = options.residual_p
                                   ? eig_residual(g, next, pair.lambda, *options.residual_p)
                                   : std::numeric_limits<double>::quiet_NaN();
    out.records.push_back({p.value(), k, pair.lambda, step, relres_reg, relres_true});
    if (options.keep_iterates) out.iterates.push_back(next);

    v = std::move(next);
    out.lambda = pair.lambda;
    out.iterations = k;
    out.delta_gap = eigen_gap(pair.eigenvalues);
    if (step <= tol) {
      out.converged = true;
      break;
    }
  }
  out.vector = std::move(v);
  return out;
}

ScfResult scf_continuation(const Graph& g, const ScfConfig& cfg) {
  cfg.validate();
  if (g.num_nodes() < 3) throw std::invalid_argument("scf_continuation: need at least 3 nodes");
  if (!is_connected(g)) throw DisconnectedGraphError("scf_continuation: graph is not connected");

  ScfResult result;
  result.trace.a = cfg.a;

  const auto spectrum = sym_eig(laplacian(g));
  const auto [lambda2, v2] = second_smallest(spectrum);
  result.initial = {2.0, 0, true, lambda2, eigen_gap(spectrum), v2};

  const SoftabsParam a(cfg.a);
  const InnerOptions options{cfg.p_target, cfg.record_true_residual};
  NodeVector v = v2;
  double lambda = lambda2;
  bool converged = true;
  for (const double p : p_schedule(cfg.p_target, cfg.delta_p)) {
    InnerResult stage = scf_inner(g, v, PValue(p), a, cfg.tol, cfg.max_iter_per_p, options);
    auto& trace = result.trace;
    trace.records.insert(trace.records.end(), stage.records.begin(), stage.records.end());
    for (auto& it : stage.iterates) trace.iterates.push_back(std::move(it));
    trace.stages.push_back(
        {p, stage.iterations, stage.converged, stage.lambda, stage.delta_gap, stage.vector});
    v = std::move(stage.vector);
    lambda = stage.lambda;
    if (!stage.converged) {
      converged = false;
      break;
    }
  }

  fix_sign(v);
  result.vector = std::move(v);
  result.lambda = lambda;
  result.converged = converged;
  return result;
}

std::vector<ResidualPoint> true_residual_curve(const ScfTrace& trace, const Graph& g,
                                               double p_target) {
  if (trace.iterates.size() != trace.records.size()) {
    throw std::invalid_argument(
        "true_residual_curve: trace was recorded without iterates (enable record_true_residual)");
  }
  const SoftabsParam a(trace.a);
  std::vector<ResidualPoint> out;
  out.reserve(trace.records.size());
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const ScfRecord& r = trace.records[i];
    const NodeVector& v = trace.iterates[i];
    out.push_back({r.p, r.iter, regularized_residual(g, v, r.lambda, r.p, a),
                   eig_residual(g, v, r.lambda, p_target)});
  }
  return out;
}

double median_step_ratio(const ScfTrace& trace, std::size_t stage) {
  if (stage >= trace.stages.size()) throw std::out_of_range("median_step_ratio: no such stage");
  const double p = trace.stages[stage].p;
  std::vector<double> errors;
  for (const ScfRecord& r : trace.records) {
    if (r.p == p) errors.push_back(r.step_error);
  }
  std::vector<double> ratios;
  for (std::size_t k = 1; k < errors.size(); ++k) {
    if (errors[k - 1] > 0.0) ratios.push_back(errors[k] / errors[k - 1]);
  }
  if (ratios.empty()) return 0.0;
  const auto mid = ratios.begin() + static_cast<std::ptrdiff_t>(ratios.size() / 2);
  std::nth_element(ratios.begin(), mid, ratios.end());
  if (ratios.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(ratios.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace plap
