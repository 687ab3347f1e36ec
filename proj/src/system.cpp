#include "lyapfix/system.hpp"

#include <string>
#include <utility>

#include "lyapfix/errors.hpp"

namespace lyapfix {

namespace {

void require_state_matrix(const Matrix& a) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw DimensionError("A must be a non-empty square matrix, got " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()));
  }
  require_finite(a, "A");
}

}  // namespace

LtiSystem::LtiSystem(Matrix a, Matrix c) : a_(std::move(a)), c_(std::move(c)) {
  require_state_matrix(a_);
  if (c_.rows() == 0 || c_.cols() != a_.rows()) {
    throw DimensionError("C must have " + std::to_string(a_.rows()) + " columns, got " +
                         std::to_string(c_.rows()) + "x" + std::to_string(c_.cols()));
  }
  require_finite(c_, "C");
}

SymmetricMatrix LtiSystem::output_gram() const {
  return SymmetricMatrix::symmetrized(c_.transpose() * c_);
}

ControlSystem::ControlSystem(Matrix a, Matrix b) : a_(std::move(a)), b_(std::move(b)) {
  require_state_matrix(a_);
  if (b_.cols() == 0 || b_.rows() != a_.rows()) {
    throw DimensionError("B must have " + std::to_string(a_.rows()) + " rows, got " +
                         std::to_string(b_.rows()) + "x" + std::to_string(b_.cols()));
  }
  require_finite(b_, "B");
}

StabilityVerdict is_asymptotically_stable(const LtiSystem& sys) {
  const double radius = spectral_radius(sys.a());
  return {radius < 1.0, radius};
}

Matrix observability_matrix(const LtiSystem& sys) {
  const Eigen::Index n = sys.states();
  const Eigen::Index p = sys.outputs();
  Matrix obs(n * p, n);
  obs.topRows(p) = sys.c();
  for (Eigen::Index k = 1; k < n; ++k) {
    obs.middleRows(k * p, p) = obs.middleRows((k - 1) * p, p) * sys.a();
  }
  return obs;
}

ObservabilityVerdict is_observable(const LtiSystem& sys) {
  const int rank = numeric_rank(observability_matrix(sys));
  return {rank == sys.states(), rank, sys.states()};
}

Matrix controllability_matrix(const ControlSystem& cs) {
  const Eigen::Index n = cs.states();
  const Eigen::Index m = cs.b().cols();
  Matrix ctrb(n, n * m);
  ctrb.leftCols(m) = cs.b();
  for (Eigen::Index k = 1; k < n; ++k) {
    ctrb.middleCols(k * m, m) = cs.a() * ctrb.middleCols((k - 1) * m, m);
  }
  return ctrb;
}

LtiSystem dualize(const ControlSystem& cs) { return {cs.a().transpose(), cs.b().transpose()}; }

Trajectory simulate(const LtiSystem& sys, const Vector& x0, int steps) {
  if (x0.size() != sys.states()) {
    throw DimensionError("initial state has length " + std::to_string(x0.size()) + ", expected " +
                         std::to_string(sys.states()));
  }
  if (steps < 0) throw DimensionError("step count must be non-negative");
  Trajectory traj;
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);
  traj.outputs.reserve(static_cast<std::size_t>(steps) + 1);
  Vector x = x0;
  for (int k = 0; k <= steps; ++k) {
    traj.outputs.push_back(sys.c() * x);
    traj.states.push_back(x);
    if (k < steps) x = sys.a() * x;
  }
  return traj;
}

}  // namespace lyapfix
