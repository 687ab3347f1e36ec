#pragma once

#include <vector>

#include "lyapfix/linalg.hpp"

namespace lyapfix {

/// Autonomous discrete-time system x_{k+1} = A x_k, y_k = C x_k.
class LtiSystem {
 public:
  /// Throws DimensionError unless A is n x n (n >= 1) and C has n columns;
  /// InputError on non-finite entries.
  LtiSystem(Matrix a, Matrix c);

  [[nodiscard]] const Matrix& a() const { return a_; }
  [[nodiscard]] const Matrix& c() const { return c_; }
  [[nodiscard]] Eigen::Index states() const { return a_.rows(); }
  [[nodiscard]] Eigen::Index outputs() const { return c_.rows(); }

  /// C^T C, the constant term of the Lyapunov equation.
  [[nodiscard]] SymmetricMatrix output_gram() const;

 private:
  Matrix a_;
  Matrix c_;
};

/// Input-driven system x_{k+1} = A x_k + B u_k.
class ControlSystem {
 public:
  /// Throws DimensionError unless A is n x n (n >= 1) and B has n rows.
  ControlSystem(Matrix a, Matrix b);

  [[nodiscard]] const Matrix& a() const { return a_; }
  [[nodiscard]] const Matrix& b() const { return b_; }
  [[nodiscard]] Eigen::Index states() const { return a_.rows(); }

 private:
  Matrix a_;
  Matrix b_;
};

struct Trajectory {
  std::vector<Vector> states;   // x_0 ... x_N
  std::vector<Vector> outputs;  // y_0 ... y_N
};

struct StabilityVerdict {
  bool stable = false;
  double spectral_radius = 0.0;
};

struct ObservabilityVerdict {
  bool observable = false;
  int rank = 0;
  Eigen::Index states = 0;
};

/// Strict test rho(A) < 1; the radius is always reported.
[[nodiscard]] StabilityVerdict is_asymptotically_stable(const LtiSystem& sys);

/// Stacked [C; CA; ...; CA^{n-1}], of size (n p) x n.
[[nodiscard]] Matrix observability_matrix(const LtiSystem& sys);

/// Full column rank of the observability matrix.
[[nodiscard]] ObservabilityVerdict is_observable(const LtiSystem& sys);

/// [B, AB, ..., A^{n-1}B].
[[nodiscard]] Matrix controllability_matrix(const ControlSystem& cs);

/// Maps (A, B) to the observability problem (A^T, B^T). The Lyapunov solution of
/// the dual system solves A P A^T - P + B B^T = 0.
[[nodiscard]] LtiSystem dualize(const ControlSystem& cs);

/// Runs the recursion for `steps` steps from x0; the result holds steps + 1 samples.
[[nodiscard]] Trajectory simulate(const LtiSystem& sys, const Vector& x0, int steps);

}  // namespace lyapfix
