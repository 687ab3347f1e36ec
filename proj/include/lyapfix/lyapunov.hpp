#pragma once

// Solvers for the discrete Lyapunov equation A^T Q A - Q + C^T C = 0.
//
// The primary route works on the slice of unit-trace positive semidefinite
// matrices. For alpha > 0 the map
//
//   f(X) = (A^T X A + alpha C^T C) / lambda,   lambda = tr(A^T X A + alpha C^T C)
//
// sends the slice into itself. A fixed point X_alpha with lambda_alpha = 1
// yields the Lyapunov solution Q = X_alpha / alpha. `solve_direct` (Kronecker
// vectorization) and `solve_series` (Gramian partial sums) are independent
// oracles for the same Q.

#include <optional>
#include <string_view>

#include "lyapfix/alpha_search.hpp"
#include "lyapfix/linalg.hpp"
#include "lyapfix/system.hpp"

namespace lyapfix {

inline constexpr double kMapTolerance = 1e-12;
inline constexpr int kMaxPicardIterations = 10'000;
inline constexpr double kDenominatorFloor = 1e-300;
/// Slice membership tolerance for trace and smallest eigenvalue.
inline constexpr double kSliceTolerance = 1e-10;

struct FixedPointOptions {
  double tol = kMapTolerance;  // on ||f(X) - X||_F
  int max_iterations = kMaxPicardIterations;
};

/// A point of the unit-trace slice together with its map data.
struct FixedPointState {
  SymmetricMatrix x;
  double alpha = 0.0;
  double lambda = 0.0;  // tr(A^T X A + alpha C^T C)
  int iterations = 0;
  double map_residual = 0.0;  // ||f(X) - X||_F for the returned X
  bool converged = false;
  bool from_resolvent = false;  // produced by the resolvent fallback, not Picard
};

struct MapImage {
  SymmetricMatrix x;
  double lambda = 0.0;
};

enum class SolveMethod { kFixedPoint, kDirect, kSeries };

std::string_view to_string(SolveMethod m);

struct AlphaSearchInfo {
  double alpha = 0.0;
  double lambda = 0.0;
  int bracket_steps = 0;
  int bisection_steps = 0;
};

struct LyapunovSolution {
  SymmetricMatrix q;
  double residual = 0.0;  // ||A^T Q A - Q + C^T C||_F
  SolveMethod method = SolveMethod::kDirect;
  Definiteness definiteness = Definiteness::kIndefinite;
  double min_eigenvalue = 0.0;
  std::optional<AlphaSearchInfo> alpha_search;  // fixed-point route only
};

/// Residual acceptance threshold 1e-8 * max(1, ||C^T C||_F).
[[nodiscard]] double accept_tolerance(const LtiSystem& sys);

/// Frobenius norm of A^T Q A - Q + C^T C.
[[nodiscard]] double lyapunov_residual(const LtiSystem& sys, const SymmetricMatrix& q);

/// One application of f. Requires alpha > 0 and X on the slice (PreconditionError
/// otherwise); throws DegenerateMapError when the normalizer is <= 1e-300.
[[nodiscard]] MapImage normalized_map(const LtiSystem& sys, double alpha, const SymmetricMatrix& x);

/// Picard iteration X <- f(X) from `x0` until ||f(X) - X||_F <= tol. Running out
/// of iterations is reported through `converged == false`.
[[nodiscard]] FixedPointState fixed_point_iterate(const LtiSystem& sys, double alpha,
                                                  const SymmetricMatrix& x0,
                                                  const FixedPointOptions& opts = {});

/// Same, starting from the slice centre I/n.
[[nodiscard]] FixedPointState fixed_point_iterate(const LtiSystem& sys, double alpha,
                                                  const FixedPointOptions& opts = {});

/// Fixed point of f computed without iterating: finds lambda > rho(A)^2 with
/// tr X(lambda) = 1, X(lambda) = alpha (lambda I - A^T (.) A)^{-1} C^T C, by a
/// bracketed scalar root find over the vectorized resolvent.
[[nodiscard]] FixedPointState solve_slice_resolvent(const LtiSystem& sys, double alpha);

/// Picard iteration with the resolvent as fallback when Picard stalls.
[[nodiscard]] FixedPointState slice_fixed_point(const LtiSystem& sys, double alpha,
                                                const SymmetricMatrix& x0,
                                                const FixedPointOptions& opts = {});

/// lambda_alpha of the (unique) fixed point. Throws NumericalFailure if neither
/// Picard nor the fallback converges.
[[nodiscard]] double lambda_of_alpha(const LtiSystem& sys, double alpha);

/// Searches alpha* with |lambda_{alpha*} - 1| <= tol and returns Q = X / alpha*.
/// Requires a stable, observable system (PreconditionError otherwise).
[[nodiscard]] LyapunovSolution solve_via_alpha_bisection(const LtiSystem& sys, double tol = 1e-10);

/// Solves (I - A^T kron A^T) vec(Q) = vec(C^T C). Throws SingularSystemError
/// when some product of eigenvalues of A equals one.
[[nodiscard]] LyapunovSolution solve_direct(const LtiSystem& sys);

/// Partial sums of sum_k (C A^k)^T (C A^k), stopped when a term's Frobenius norm
/// drops below tol * (1 - rho(A)^2) * max(1, ||C^T C||_F). Requires stability.
[[nodiscard]] LyapunovSolution solve_series(const LtiSystem& sys, double tol = 1e-14,
                                            int max_terms = 1'000'000);

/// ||X - R_n||_F, where R_n is the expansion of f^{(n+1)}(X) at a fixed point:
///   R_n = lambda^{-(n+1)} (A^{n+1})^T X A^{n+1}
///         + sum_{k=0..n} alpha lambda^{-(k+1)} (C A^k)^T (C A^k).
/// Requires a converged state.
[[nodiscard]] double unrolled_chain_check(const LtiSystem& sys, const FixedPointState& fp, int n);

}  // namespace lyapfix
