#pragma once

// Internally positive single-output systems x_{k+1} = A x_k, y_k = c x_k with
// A >= 0 and c >= 0 entrywise. The orthant analogue of the Lyapunov equation is
// the row-vector identity q = c + q A; a stable observable positive system has
// an entrywise positive solution q = c (I - A)^{-1}. All vectors here are rows.

#include "lyapfix/alpha_search.hpp"
#include "lyapfix/linalg.hpp"
#include "lyapfix/lyapunov.hpp"
#include "lyapfix/system.hpp"

namespace lyapfix {

class PositiveSystem {
 public:
  /// Throws DimensionError on shape mismatch and InputError when an entry of A
  /// or c is negative or c is identically zero.
  PositiveSystem(Matrix a, RowVector c);

  [[nodiscard]] const Matrix& a() const { return a_; }
  [[nodiscard]] const RowVector& c() const { return c_; }
  [[nodiscard]] Eigen::Index states() const { return a_.rows(); }

  /// The same dynamics viewed as an LtiSystem with a 1 x n output map.
  [[nodiscard]] LtiSystem as_lti() const;

 private:
  Matrix a_;
  RowVector c_;
};

/// Entry sum tolerance for simplex membership; entries may dip to -1e-14.
inline constexpr double kSimplexSumTol = 1e-12;
inline constexpr double kSimplexEntryTol = 1e-14;

class SimplexPoint {
 public:
  /// Throws PreconditionError unless the entries sum to 1 and are nonnegative
  /// (both within tolerance).
  explicit SimplexPoint(RowVector x);

  static SimplexPoint barycenter(Eigen::Index n);

  [[nodiscard]] const RowVector& values() const { return x_; }
  [[nodiscard]] Eigen::Index size() const { return x_.size(); }

 private:
  RowVector x_;
};

struct SimplexImage {
  SimplexPoint x;
  double lambda = 0.0;
};

struct SimplexFixedPoint {
  SimplexPoint x;
  double alpha = 0.0;
  double lambda = 0.0;  // sum_k (x A)_k + alpha c_k
  int iterations = 0;
  double map_residual = 0.0;  // ||f(x) - x||_2
  bool converged = false;
};

struct PositiveCertificate {
  RowVector q;
  double residual = 0.0;  // ||q - c - q A||_2
  bool positive = false;  // every entry above 1e-9 * max(1, ||q||_inf)
};

/// x -> (x A + alpha c) / lambda with lambda = sum_k (x A)_k + alpha c_k.
[[nodiscard]] SimplexImage simplex_map(const PositiveSystem& ps, double alpha,
                                       const SimplexPoint& x);

[[nodiscard]] SimplexFixedPoint simplex_fixed_point(const PositiveSystem& ps, double alpha,
                                                    const SimplexPoint& x0,
                                                    const FixedPointOptions& opts = {});

/// Starts from the barycenter.
[[nodiscard]] SimplexFixedPoint simplex_fixed_point(const PositiveSystem& ps, double alpha,
                                                    const FixedPointOptions& opts = {});

/// Simplex fixed point whose normalizer equals one, found with the same alpha
/// search used for the matrix map. At that point x = q / sum(q) and
/// alpha = 1 / sum(q). Requires rho(A) < 1.
[[nodiscard]] SimplexFixedPoint simplex_unit_fixed_point(const PositiveSystem& ps,
                                                         double tol = 1e-10);

/// Solves q (I - A) = c. Requires rho(A) < 1 (PreconditionError otherwise).
[[nodiscard]] PositiveCertificate solve_positive_q(const PositiveSystem& ps);

/// Rank test on the observability matrix of (A, c).
[[nodiscard]] bool is_positive_observable(const PositiveSystem& ps);

}  // namespace lyapfix
