#include "lyapfix/positive.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "lyapfix/errors.hpp"

namespace lyapfix {

namespace {

constexpr double kPositivityTol = 1e-9;

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw PreconditionError("alpha must be a positive finite number, got " + std::to_string(alpha));
  }
}

void require_size(const PositiveSystem& ps, const SimplexPoint& x) {
  if (x.size() != ps.states()) {
    throw DimensionError("simplex point has length " + std::to_string(x.size()) + ", expected " +
                         std::to_string(ps.states()));
  }
}

SimplexImage apply_simplex_map(const PositiveSystem& ps, double alpha, const RowVector& x) {
  RowVector numerator = x * ps.a() + alpha * ps.c();
  const double lambda = numerator.sum();
  if (!(lambda > kDenominatorFloor)) {
    throw DegenerateMapError("simplex normalizer vanished");
  }
  numerator /= lambda;
  return {SimplexPoint(std::move(numerator)), lambda};
}

}  // namespace

PositiveSystem::PositiveSystem(Matrix a, RowVector c) : a_(std::move(a)), c_(std::move(c)) {
  if (a_.rows() == 0 || a_.rows() != a_.cols()) {
    throw DimensionError("A must be a non-empty square matrix");
  }
  if (c_.size() != a_.rows()) {
    throw DimensionError("c must have length " + std::to_string(a_.rows()) + ", got " +
                         std::to_string(c_.size()));
  }
  require_finite(a_, "A");
  require_finite(c_, "c");
  if ((a_.array() < 0.0).any()) throw InputError("positive system: A has a negative entry");
  if ((c_.array() < 0.0).any()) throw InputError("positive system: c has a negative entry");
  if (!(c_.array() > 0.0).any()) throw InputError("positive system: c must be nonzero");
}

LtiSystem PositiveSystem::as_lti() const { return {a_, Matrix(c_)}; }

SimplexPoint::SimplexPoint(RowVector x) : x_(std::move(x)) {
  if (x_.size() == 0) throw DimensionError("simplex point must be non-empty");
  if (!x_.allFinite()) throw PreconditionError("simplex point has non-finite entries");
  if (std::abs(x_.sum() - 1.0) > kSimplexSumTol) {
    throw PreconditionError("simplex point entries sum to " + std::to_string(x_.sum()));
  }
  if (x_.minCoeff() < -kSimplexEntryTol) {
    throw PreconditionError("simplex point has a negative entry");
  }
}

SimplexPoint SimplexPoint::barycenter(Eigen::Index n) {
  return SimplexPoint(RowVector::Constant(n, 1.0 / static_cast<double>(n)));
}

SimplexImage simplex_map(const PositiveSystem& ps, double alpha, const SimplexPoint& x) {
  require_alpha(alpha);
  require_size(ps, x);
  return apply_simplex_map(ps, alpha, x.values());
}

SimplexFixedPoint simplex_fixed_point(const PositiveSystem& ps, double alpha,
                                      const SimplexPoint& x0, const FixedPointOptions& opts) {
  require_alpha(alpha);
  require_size(ps, x0);
  RowVector x = x0.values();
  for (int it = 0;; ++it) {
    SimplexImage next = apply_simplex_map(ps, alpha, x);
    const double residual = (next.x.values() - x).norm();
    const bool converged = residual <= opts.tol;
    if (converged || it >= opts.max_iterations) {
      return {SimplexPoint(std::move(x)), alpha, next.lambda, it, residual, converged};
    }
    x = next.x.values();
  }
}

SimplexFixedPoint simplex_fixed_point(const PositiveSystem& ps, double alpha,
                                      const FixedPointOptions& opts) {
  return simplex_fixed_point(ps, alpha, SimplexPoint::barycenter(ps.states()), opts);
}

SimplexFixedPoint simplex_unit_fixed_point(const PositiveSystem& ps, double tol) {
  const double rho = spectral_radius(ps.a());
  if (!(rho < 1.0)) {
    throw PreconditionError("simplex unit fixed point requires rho(A) < 1, got " +
                            std::to_string(rho));
  }
  SimplexPoint warm = SimplexPoint::barycenter(ps.states());
  auto eval = [&](double alpha) {
    SimplexFixedPoint fp = simplex_fixed_point(ps, alpha, warm);
    if (!fp.converged) {
      throw NumericalFailure("simplex fixed point for alpha = " + std::to_string(alpha) +
                             " did not converge");
    }
    warm = fp.x;
    return fp;
  };
  AlphaSearchOptions opts;
  opts.tol = tol;
  auto found = search_unit_normalizer(eval, [](const SimplexFixedPoint&) { return true; }, opts);
  return std::move(found.state);
}

PositiveCertificate solve_positive_q(const PositiveSystem& ps) {
  const double rho = spectral_radius(ps.a());
  if (!(rho < 1.0)) {
    throw PreconditionError("positivity certificate requires rho(A) < 1, got " +
                            std::to_string(rho));
  }
  const Eigen::Index n = ps.states();
  const Matrix lhs = (Matrix::Identity(n, n) - ps.a()).transpose();
  const Vector solution = linear_solve(lhs, ps.c().transpose());
  PositiveCertificate cert;
  cert.q = solution.transpose();
  cert.residual = (cert.q - ps.c() - cert.q * ps.a()).norm();
  const double threshold = kPositivityTol * std::max(1.0, cert.q.cwiseAbs().maxCoeff());
  cert.positive = (cert.q.array() > threshold).all();
  return cert;
}

bool is_positive_observable(const PositiveSystem& ps) { return is_observable(ps.as_lti()).observable; }

}  // namespace lyapfix
