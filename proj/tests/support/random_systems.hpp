#pragma once

// Seeded generators for random systems in each (stable x observable) stratum.

#include <Eigen/Core>
#include <Eigen/SVD>

#include <random>

#include "lyapfix/linalg.hpp"
#include "lyapfix/positive.hpp"
#include "lyapfix/system.hpp"

namespace lyapfix::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double lo = -1.0,
                            double hi = 1.0) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = uniform(rng, lo, hi);
  return m;
}

inline SymmetricMatrix random_symmetric(Rng& rng, Eigen::Index n) {
  return SymmetricMatrix::symmetrized(random_matrix(rng, n, n));
}

/// Random point of the unit-trace PSD slice: normalized G G^T.
inline SymmetricMatrix random_slice_point(Rng& rng, Eigen::Index n) {
  const Matrix g = random_matrix(rng, n, n);
  Matrix x = g * g.transpose();
  x /= x.trace();
  return SymmetricMatrix::symmetrized(x);
}

inline Matrix with_spectral_radius(const Matrix& a, double rho) {
  return a * (rho / spectral_radius(a));
}

/// sigma_min / sigma_max of the observability matrix; 0 when rank deficient.
inline double observability_margin(const LtiSystem& sys) {
  const Vector sv = Eigen::JacobiSVD<Matrix>(observability_matrix(sys)).singularValues();
  return sv(sv.size() - 1) / sv(0);
}

/// n in [n_min, n_max], rho(A) in [rho_lo, rho_hi], p in {1, 2}; observable by
/// rejection. A positive `min_margin` additionally rejects systems whose
/// observability matrix is closer than that (relative) to rank deficiency.
inline LtiSystem stable_observable(Rng& rng, int n_min = 2, int n_max = 6, double rho_lo = 0.3,
                                   double rho_hi = 0.95, double min_margin = 0.0) {
  for (;;) {
    const int n = uniform_int(rng, n_min, n_max);
    const int p = uniform_int(rng, 1, 2);
    LtiSystem sys(with_spectral_radius(random_matrix(rng, n, n), uniform(rng, rho_lo, rho_hi)),
                  random_matrix(rng, p, n));
    if (!is_observable(sys).observable) continue;
    if (min_margin > 0.0 && observability_margin(sys) < min_margin) continue;
    return sys;
  }
}

/// Stable system with an exact unobservable state: state h satisfies A e_h = mu e_h
/// and C e_h = 0, so the observability matrix has e_h in its kernel with no
/// rounding. h is drawn at random (an exact permutation of coordinates).
inline LtiSystem stable_unobservable(Rng& rng, int n_min = 2, int n_max = 6, double rho_lo = 0.3,
                                     double rho_hi = 0.95) {
  const int n = uniform_int(rng, n_min, n_max);
  const int p = uniform_int(rng, 1, 2);
  const int h = uniform_int(rng, 0, n - 1);
  Matrix a = random_matrix(rng, n, n);
  a.col(h).setZero();
  a(h, h) = uniform(rng, -0.9, 0.9);
  a = with_spectral_radius(a, uniform(rng, rho_lo, rho_hi));
  Matrix c = random_matrix(rng, p, n);
  c.col(h).setZero();
  return {a, c};
}

inline LtiSystem unstable_observable(Rng& rng, int n_min = 2, int n_max = 6) {
  for (;;) {
    const int n = uniform_int(rng, n_min, n_max);
    const int p = uniform_int(rng, 1, 2);
    LtiSystem sys(with_spectral_radius(random_matrix(rng, n, n), uniform(rng, 1.05, 2.0)),
                  random_matrix(rng, p, n));
    if (is_observable(sys).observable) return sys;
  }
}

inline LtiSystem unstable_unobservable(Rng& rng, int n_min = 2, int n_max = 6) {
  const LtiSystem base = stable_unobservable(rng, n_min, n_max);
  return {with_spectral_radius(base.a(), uniform(rng, 1.05, 2.0)), base.c()};
}

/// Nonnegative A with rho(A) in [0.3, 0.95] and a nonnegative, possibly sparse c;
/// observable by rejection.
inline PositiveSystem positive_stable_observable(Rng& rng, int n_max = 5) {
  for (;;) {
    const int n = uniform_int(rng, 1, n_max);
    Matrix a = random_matrix(rng, n, n, 0.0, 1.0);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (uniform(rng, 0.0, 1.0) < 0.3) a.data()[i] = 0.0;
    }
    if (spectral_radius(a) <= 0.0) continue;
    a = with_spectral_radius(a, uniform(rng, 0.3, 0.95));
    RowVector c = RowVector::Zero(n);
    c(uniform_int(rng, 0, n - 1)) = uniform(rng, 0.5, 1.5);
    if (uniform(rng, 0.0, 1.0) < 0.5) c += random_matrix(rng, 1, n, 0.0, 1.0);
    PositiveSystem ps(a, c);
    if (is_positive_observable(ps)) return ps;
  }
}

/// States in a hidden block U feed only U and carry zero output weight, so
/// c A^k e_j = 0 for every j in U.
inline PositiveSystem positive_unobservable(Rng& rng, int n_max = 5) {
  for (;;) {
    const int n = uniform_int(rng, 2, n_max);
    const int hidden = uniform_int(rng, 1, n - 1);  // last `hidden` states
    const int visible = n - hidden;
    Matrix a = random_matrix(rng, n, n, 0.0, 1.0);
    a.block(0, visible, visible, hidden).setZero();
    if (spectral_radius(a) <= 0.0) continue;
    a = with_spectral_radius(a, uniform(rng, 0.3, 0.95));
    RowVector c = RowVector::Zero(n);
    c.head(visible) = random_matrix(rng, 1, visible, 0.1, 1.0);
    return {a, c};
  }
}

}  // namespace lyapfix::testing
