#include "lyapfix/lyapunov.hpp"

#include <Eigen/SVD>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include "lyapfix/errors.hpp"

namespace lyapfix {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw PreconditionError("alpha must be a positive finite number, got " + std::to_string(alpha));
  }
}

void require_square_operand(const LtiSystem& sys, const SymmetricMatrix& m, const char* what) {
  if (m.size() != sys.states()) {
    throw DimensionError(std::string(what) + " is " + std::to_string(m.size()) + "x" +
                         std::to_string(m.size()) + ", system has " +
                         std::to_string(sys.states()) + " states");
  }
}

void require_on_slice(const SymmetricMatrix& x) {
  if (std::abs(trace(x) - 1.0) > kSliceTolerance) {
    throw PreconditionError("slice point must have unit trace, got " + std::to_string(trace(x)));
  }
  if (min_eigenvalue(x) < -kSliceTolerance) {
    throw PreconditionError("slice point must be positive semidefinite");
  }
}

// Unchecked f(X); `gram` is C^T C.
MapImage apply_map(const Matrix& a, const Matrix& gram, double alpha, const Matrix& x) {
  Matrix numerator = a.transpose() * x * a + alpha * gram;
  const double lambda = numerator.trace();
  if (!(lambda > kDenominatorFloor)) {
    throw DegenerateMapError("normalizer tr(A^T X A + alpha C^T C) = " + std::to_string(lambda) +
                             " vanished");
  }
  numerator /= lambda;
  return {SymmetricMatrix::symmetrized(numerator), lambda};
}

LyapunovSolution make_solution(const LtiSystem& sys, SymmetricMatrix q, SolveMethod method) {
  LyapunovSolution sol;
  sol.residual = lyapunov_residual(sys, q);
  sol.min_eigenvalue = min_eigenvalue(q);
  sol.definiteness = classify_definiteness(q);
  sol.method = method;
  sol.q = std::move(q);
  return sol;
}

void require_accepted(const LtiSystem& sys, const LyapunovSolution& sol) {
  if (!(sol.residual <= accept_tolerance(sys))) {
    throw NumericalFailure(std::string(to_string(sol.method)) + " solution residual " +
                           std::to_string(sol.residual) + " exceeds acceptance tolerance " +
                           std::to_string(accept_tolerance(sys)));
  }
}

}  // namespace

std::string_view to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::kFixedPoint:
      return "fixed-point";
    case SolveMethod::kDirect:
      return "direct";
    case SolveMethod::kSeries:
      return "series";
  }
  return "unknown";
}

double accept_tolerance(const LtiSystem& sys) {
  return 1e-8 * std::max(1.0, sys.output_gram().matrix().norm());
}

double lyapunov_residual(const LtiSystem& sys, const SymmetricMatrix& q) {
  require_square_operand(sys, q, "Q");
  const Matrix& a = sys.a();
  return (a.transpose() * q.matrix() * a - q.matrix() + sys.c().transpose() * sys.c()).norm();
}

MapImage normalized_map(const LtiSystem& sys, double alpha, const SymmetricMatrix& x) {
  require_alpha(alpha);
  require_square_operand(sys, x, "X");
  require_on_slice(x);
  return apply_map(sys.a(), sys.output_gram().matrix(), alpha, x.matrix());
}

FixedPointState fixed_point_iterate(const LtiSystem& sys, double alpha, const SymmetricMatrix& x0,
                                    const FixedPointOptions& opts) {
  require_alpha(alpha);
  require_square_operand(sys, x0, "X0");
  require_on_slice(x0);
  const Matrix gram = sys.output_gram().matrix();

  Matrix x = x0.matrix();
  for (int it = 0;; ++it) {
    MapImage next = apply_map(sys.a(), gram, alpha, x);
    const double residual = (next.x.matrix() - x).norm();
    const bool converged = residual <= opts.tol;
    if (converged || it >= opts.max_iterations) {
      return {SymmetricMatrix::symmetrized(x), alpha, next.lambda, it, residual, converged, false};
    }
    x = next.x.matrix();
  }
}

FixedPointState fixed_point_iterate(const LtiSystem& sys, double alpha,
                                    const FixedPointOptions& opts) {
  const Eigen::Index n = sys.states();
  return fixed_point_iterate(
      sys, alpha, SymmetricMatrix::symmetrized(Matrix::Identity(n, n) / static_cast<double>(n)),
      opts);
}

FixedPointState solve_slice_resolvent(const LtiSystem& sys, double alpha) {
  require_alpha(alpha);
  const Eigen::Index n = sys.states();
  const Matrix gram = sys.output_gram().matrix();
  const double constant_trace = alpha * gram.trace();
  if (!(constant_trace > kDenominatorFloor)) {
    throw DegenerateMapError("resolvent fixed point needs C != 0");
  }
  const Matrix at = sys.a().transpose();
  const Matrix lifted = kron(at, at);  // vec(A^T X A) = (A^T kron A^T) vec(X)
  const Vector rhs = alpha * vec(gram);
  const Matrix identity = Matrix::Identity(n * n, n * n);

  auto x_of = [&](double lambda) { return unvec(linear_solve(lambda * identity - lifted, rhs), n); };
  // tr X(lambda) decreases strictly for lambda > rho(A)^2.
  auto excess_trace = [&](double lambda) {
    try {
      return x_of(lambda).trace() - 1.0;
    } catch (const SingularSystemError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  const double rho = spectral_radius(sys.a());
  const double floor = rho * rho;
  double lo = std::max(constant_trace, floor * (1.0 + 1e-12) + std::numeric_limits<double>::min());
  const double norm_a = Eigen::JacobiSVD<Matrix>(sys.a()).singularValues()(0);
  double hi = std::max(lo, norm_a * norm_a + constant_trace) * (1.0 + 1e-12);

  double f_lo = excess_trace(lo);
  // Just above rho^2 the resolvent can be numerically singular; step away.
  for (double gap = 1e-12; std::isinf(f_lo) && gap < 1.0; gap *= 4.0) {
    lo = std::max(constant_trace, floor * (1.0 + gap) + gap * std::numeric_limits<double>::min());
    f_lo = excess_trace(lo);
  }
  if (f_lo == 0.0) hi = lo;
  if (!(f_lo >= 0.0)) {
    throw NumericalFailure("resolvent: fixed point lies on the spectral boundary rho(A)^2");
  }
  double f_hi = excess_trace(hi);
  for (int i = 0; f_hi > 0.0 && i < 200; ++i) {
    hi *= 2.0;
    f_hi = excess_trace(hi);
  }
  if (f_hi > 0.0) throw NumericalFailure("resolvent: failed to bracket the normalizer");

  double root = lo;
  if (f_lo > 0.0 && f_hi < 0.0) {
    std::uintmax_t max_iter = 400;
    auto [left, right] = boost::math::tools::toms748_solve(
        excess_trace, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
    root = 0.5 * (left + right);
  } else if (f_hi == 0.0) {
    root = hi;
  }

  Matrix x = x_of(root);
  x /= x.trace();
  SymmetricMatrix slice_point = SymmetricMatrix::symmetrized(x);
  const MapImage image = apply_map(sys.a(), gram, alpha, slice_point.matrix());
  const double residual = (image.x.matrix() - slice_point.matrix()).norm();
  return {std::move(slice_point), alpha, image.lambda, 0, residual, residual <= kMapTolerance, true};
}

FixedPointState slice_fixed_point(const LtiSystem& sys, double alpha, const SymmetricMatrix& x0,
                                  const FixedPointOptions& opts) {
  FixedPointState picard = fixed_point_iterate(sys, alpha, x0, opts);
  if (picard.converged) return picard;
  FixedPointState fallback;
  try {
    fallback = solve_slice_resolvent(sys, alpha);
  } catch (const NumericalFailure&) {
    return picard;
  }
  fallback.iterations = picard.iterations;
  fallback.converged = fallback.map_residual <= opts.tol;
  return fallback.map_residual < picard.map_residual ? fallback : picard;
}

double lambda_of_alpha(const LtiSystem& sys, double alpha) {
  const Eigen::Index n = sys.states();
  const FixedPointState state = slice_fixed_point(
      sys, alpha, SymmetricMatrix::symmetrized(Matrix::Identity(n, n) / static_cast<double>(n)));
  if (!state.converged) {
    throw NumericalFailure("fixed point for alpha = " + std::to_string(alpha) +
                           " did not converge (map residual " +
                           std::to_string(state.map_residual) + ")");
  }
  return state.lambda;
}

LyapunovSolution solve_via_alpha_bisection(const LtiSystem& sys, double tol) {
  const StabilityVerdict stability = is_asymptotically_stable(sys);
  if (!stability.stable) {
    throw PreconditionError("alpha bisection requires an asymptotically stable system (rho(A) = " +
                            std::to_string(stability.spectral_radius) + ")");
  }
  const ObservabilityVerdict observability = is_observable(sys);
  if (!observability.observable) {
    throw PreconditionError("alpha bisection requires an observable system (rank " +
                            std::to_string(observability.rank) + " < " +
                            std::to_string(observability.states) + ")");
  }

  const Eigen::Index n = sys.states();
  SymmetricMatrix warm =
      SymmetricMatrix::symmetrized(Matrix::Identity(n, n) / static_cast<double>(n));
  auto eval = [&](double alpha) {
    FixedPointState state = slice_fixed_point(sys, alpha, warm);
    if (!state.converged) {
      throw NumericalFailure("fixed point for alpha = " + std::to_string(alpha) +
                             " did not converge (map residual " +
                             std::to_string(state.map_residual) + ")");
    }
    warm = state.x;
    return state;
  };
  const double accept = accept_tolerance(sys);
  auto residual_ok = [&](const FixedPointState& s) {
    const SymmetricMatrix q = SymmetricMatrix::symmetrized(s.x.matrix() / s.alpha);
    return lyapunov_residual(sys, q) <= accept;
  };

  AlphaSearchOptions opts;
  opts.tol = tol;
  const auto found = search_unit_normalizer(eval, residual_ok, opts);

  LyapunovSolution sol =
      make_solution(sys, SymmetricMatrix::symmetrized(found.state.x.matrix() / found.alpha),
                    SolveMethod::kFixedPoint);
  sol.alpha_search =
      AlphaSearchInfo{found.alpha, found.state.lambda, found.bracket_steps, found.bisection_steps};
  require_accepted(sys, sol);
  return sol;
}

LyapunovSolution solve_direct(const LtiSystem& sys) {
  const Eigen::Index n = sys.states();
  const Matrix at = sys.a().transpose();
  const Matrix system = Matrix::Identity(n * n, n * n) - kron(at, at);
  const Vector solution = linear_solve(system, vec(sys.output_gram().matrix()));
  LyapunovSolution sol =
      make_solution(sys, SymmetricMatrix::symmetrized(unvec(solution, n)), SolveMethod::kDirect);
  require_accepted(sys, sol);
  return sol;
}

LyapunovSolution solve_series(const LtiSystem& sys, double tol, int max_terms) {
  const StabilityVerdict stability = is_asymptotically_stable(sys);
  if (!stability.stable) {
    throw PreconditionError("series solution requires an asymptotically stable system (rho(A) = " +
                            std::to_string(stability.spectral_radius) + ")");
  }
  const double rho = stability.spectral_radius;
  const double threshold =
      tol * (1.0 - rho * rho) * std::max(1.0, sys.output_gram().matrix().norm());

  const Eigen::Index n = sys.states();
  Matrix q = Matrix::Zero(n, n);
  Matrix ca = sys.c();  // C A^k
  for (int k = 0; k < max_terms; ++k) {
    const Matrix term = ca.transpose() * ca;
    q += term;
    if (term.norm() < threshold) {
      LyapunovSolution sol =
          make_solution(sys, SymmetricMatrix::symmetrized(q), SolveMethod::kSeries);
      require_accepted(sys, sol);
      return sol;
    }
    ca = ca * sys.a();
  }
  throw NumericalFailure("series did not reach its tail bound within " + std::to_string(max_terms) +
                         " terms");
}

double unrolled_chain_check(const LtiSystem& sys, const FixedPointState& fp, int n) {
  if (!fp.converged) throw PreconditionError("unrolled chain check needs a converged fixed point");
  if (n < 0) throw PreconditionError("unroll depth must be non-negative");
  require_square_operand(sys, fp.x, "X");

  const Matrix& a = sys.a();
  Matrix sum = Matrix::Zero(sys.states(), sys.states());
  Matrix ca = sys.c();
  double lambda_power = fp.lambda;  // lambda^{k+1}
  for (int k = 0; k <= n; ++k) {
    sum += (fp.alpha / lambda_power) * (ca.transpose() * ca);
    ca = ca * a;
    lambda_power *= fp.lambda;
  }
  Matrix power = Matrix::Identity(sys.states(), sys.states());
  for (int k = 0; k <= n; ++k) power = power * a;
  // lambda_power is lambda^{n+2} here.
  sum += (fp.lambda / lambda_power) * (power.transpose() * fp.x.matrix() * power);
  return (fp.x.matrix() - sum).norm();
}

}  // namespace lyapfix
