#include "lyapfix/lyapunov.hpp"

#include <gtest/gtest.h>

#include <Eigen/SVD>

#include <cmath>
#include <vector>

#include "lyapfix/errors.hpp"
#include "support/matrices.hpp"
#include "support/random_systems.hpp"

namespace lyapfix {
namespace {

using testing::mat;
using testing::random_slice_point;
using testing::Rng;

const Matrix kNilpotent = mat({{0, 1}, {0, 0}});

LtiSystem scalar_system(double a, double c) { return {mat({{a}}), mat({{c}})}; }

SymmetricMatrix slice_centre(Eigen::Index n) {
  return SymmetricMatrix::symmetrized(Matrix::Identity(n, n) / static_cast<double>(n));
}

double relative_difference(const SymmetricMatrix& x, const SymmetricMatrix& y) {
  return (x.matrix() - y.matrix()).norm() / std::max(x.matrix().norm(), y.matrix().norm());
}

// Fixed point of the nilpotent example with alpha = 1, solved by hand:
// lambda X = A^T X A + C^T C on the slice forces X = diag(1/lambda, x22) with
// lambda x22 = x11 and x11 + x22 = 1, so lambda^2 - lambda - 1 = 0.
const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

TEST(LyapunovResidual, Examples) {
  const LtiSystem zero_dynamics(Matrix::Zero(3, 3), Matrix::Identity(3, 3));
  EXPECT_EQ(lyapunov_residual(zero_dynamics, SymmetricMatrix::identity(3)), 0.0);
  EXPECT_NEAR(lyapunov_residual(scalar_system(0.5, 1.0), SymmetricMatrix(mat({{4.0 / 3.0}}))), 0.0,
              1e-12);
  EXPECT_NEAR(lyapunov_residual(scalar_system(0.5, 1.0), SymmetricMatrix(mat({{1.0}}))), 0.25,
              1e-15);
  EXPECT_THROW((void)lyapunov_residual(scalar_system(0.5, 1.0), SymmetricMatrix::identity(2)),
               DimensionError);
}

TEST(NormalizedMap, Examples) {
  MapImage image = normalized_map(scalar_system(0.7, 2.0), 0.3, SymmetricMatrix::identity(1));
  EXPECT_NEAR(image.x(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(image.lambda, 0.49 + 0.3 * 4.0, 1e-15);

  const LtiSystem constant(Matrix::Zero(2, 2), Matrix::Identity(2, 2));
  image = normalized_map(constant, 1.0, SymmetricMatrix(mat({{0.9, 0.1}, {0.1, 0.1}})));
  EXPECT_LE((image.x.matrix() - Matrix::Identity(2, 2) / 2.0).norm(), 1e-15);
  EXPECT_DOUBLE_EQ(image.lambda, 2.0);

  image = normalized_map(LtiSystem(kNilpotent, mat({{1, 0}})), 1.0, slice_centre(2));
  EXPECT_DOUBLE_EQ(image.lambda, 1.5);
  EXPECT_LE((image.x.matrix() - mat({{2.0 / 3.0, 0}, {0, 1.0 / 3.0}})).norm(), 1e-15);
}

TEST(NormalizedMap, Preconditions) {
  const LtiSystem sys(kNilpotent, mat({{1, 0}}));
  EXPECT_THROW((void)normalized_map(sys, 0.0, slice_centre(2)), PreconditionError);
  EXPECT_THROW((void)normalized_map(sys, -1.0, slice_centre(2)), PreconditionError);
  EXPECT_THROW((void)normalized_map(sys, 1.0, SymmetricMatrix::identity(2)), PreconditionError);
  EXPECT_THROW((void)normalized_map(sys, 1.0, SymmetricMatrix(mat({{1.5, 0}, {0, -0.5}}))),
               PreconditionError);
  EXPECT_THROW((void)normalized_map(sys, 1.0, slice_centre(3)), DimensionError);
}

TEST(NormalizedMap, DegenerateWhenOutputAndDynamicsVanish) {
  const LtiSystem sys(kNilpotent, mat({{0, 0}}));
  // A^T X A = 0 for X = e2 e2^T, and C = 0.
  EXPECT_THROW((void)normalized_map(sys, 1.0, SymmetricMatrix(mat({{0, 0}, {0, 1}}))),
               DegenerateMapError);
}

TEST(FixedPointIterate, Examples) {
  FixedPointState fp = fixed_point_iterate(scalar_system(0.8, 0.5), 1.0);
  EXPECT_TRUE(fp.converged);
  EXPECT_LE(fp.iterations, 1);
  EXPECT_NEAR(fp.x(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(fp.lambda, 0.64 + 0.25, 1e-15);

  const LtiSystem constant(Matrix::Zero(2, 2), Matrix::Identity(2, 2));
  fp = fixed_point_iterate(constant, 1.0, SymmetricMatrix(mat({{0.2, 0.3}, {0.3, 0.8}})));
  EXPECT_TRUE(fp.converged);
  EXPECT_LE(fp.iterations, 1);
  EXPECT_LE((fp.x.matrix() - Matrix::Identity(2, 2) / 2.0).norm(), 1e-15);
}

TEST(FixedPointIterate, NilpotentGoldenRatio) {
  const LtiSystem sys(kNilpotent, mat({{1, 0}}));
  const FixedPointState fp = fixed_point_iterate(sys, 1.0);
  ASSERT_TRUE(fp.converged);
  EXPECT_NEAR(fp.lambda, kGolden, 1e-11);
  EXPECT_NEAR(fp.x(0, 0), 1.0 / kGolden, 1e-11);
  EXPECT_NEAR(fp.x(1, 1), 1.0 / (kGolden * kGolden), 1e-11);
  EXPECT_NEAR(fp.x(0, 1), 0.0, 1e-15);
}

TEST(FixedPointIterate, ReportsNonConvergence) {
  FixedPointOptions opts;
  opts.max_iterations = 2;
  opts.tol = 1e-15;
  Rng rng(300);
  const FixedPointState fp = fixed_point_iterate(testing::stable_observable(rng, 4, 4, 0.9, 0.95),
                                                 1.0, opts);
  EXPECT_FALSE(fp.converged);
  EXPECT_EQ(fp.iterations, 2);
  EXPECT_GT(fp.map_residual, 1e-15);
}

TEST(SliceResolvent, MatchesGoldenRatio) {
  const FixedPointState fp = solve_slice_resolvent(LtiSystem(kNilpotent, mat({{1, 0}})), 1.0);
  EXPECT_TRUE(fp.from_resolvent);
  EXPECT_TRUE(fp.converged);
  EXPECT_NEAR(fp.lambda, kGolden, 1e-12);
  EXPECT_NEAR(fp.x(0, 0), 1.0 / kGolden, 1e-12);
}

TEST(SliceResolvent, DegenerateWithoutOutput) {
  EXPECT_THROW((void)solve_slice_resolvent(LtiSystem(kNilpotent, mat({{0, 0}})), 1.0),
               DegenerateMapError);
}

TEST(SliceFixedPoint, FallsBackToResolvent) {
  FixedPointOptions opts;
  opts.max_iterations = 3;
  Rng rng(301);
  const LtiSystem sys = testing::stable_observable(rng, 4, 4, 0.9, 0.95);
  const FixedPointState fp = slice_fixed_point(sys, 1.0, slice_centre(4), opts);
  EXPECT_TRUE(fp.converged);
  EXPECT_TRUE(fp.from_resolvent);
  const FixedPointState picard = fixed_point_iterate(sys, 1.0);
  ASSERT_TRUE(picard.converged);
  EXPECT_LE((fp.x.matrix() - picard.x.matrix()).norm(), 1e-9);
}

TEST(LambdaOfAlpha, Examples) {
  EXPECT_NEAR(lambda_of_alpha(scalar_system(0.5, 1.0), 0.75), 1.0, 1e-15);
  EXPECT_NEAR(lambda_of_alpha(scalar_system(0.5, 1.0), 2.0), 2.25, 1e-15);
  Rng rng(302);
  for (int trial = 0; trial < 20; ++trial) {
    const LtiSystem sys = testing::stable_observable(rng);
    const double t = trace(sys.output_gram());
    EXPECT_GE(lambda_of_alpha(sys, 2.0 / t), 2.0 - 1e-12);
  }
}

TEST(AlphaBisection, Examples) {
  LyapunovSolution sol = solve_via_alpha_bisection(scalar_system(0.5, 1.0));
  ASSERT_TRUE(sol.alpha_search.has_value());
  EXPECT_NEAR(sol.alpha_search->alpha, 0.75, 1e-9);
  EXPECT_NEAR(sol.q(0, 0), 4.0 / 3.0, 1e-9);
  EXPECT_EQ(sol.method, SolveMethod::kFixedPoint);
  EXPECT_EQ(sol.definiteness, Definiteness::kPositiveDefinite);

  sol = solve_via_alpha_bisection(LtiSystem(Matrix::Zero(2, 2), Matrix::Identity(2, 2)));
  EXPECT_NEAR(sol.alpha_search->alpha, 0.5, 1e-9);
  EXPECT_LE((sol.q.matrix() - Matrix::Identity(2, 2)).norm(), 1e-9);

  sol = solve_via_alpha_bisection(LtiSystem(kNilpotent, mat({{1, 0}})));
  EXPECT_NEAR(sol.alpha_search->alpha, 0.5, 1e-9);
  EXPECT_LE((sol.q.matrix() - Matrix::Identity(2, 2)).norm(), 1e-9);
  EXPECT_LE(sol.residual, 1e-8);
}

TEST(AlphaBisection, Preconditions) {
  EXPECT_THROW((void)solve_via_alpha_bisection(scalar_system(1.5, 1.0)), PreconditionError);
  EXPECT_THROW((void)solve_via_alpha_bisection(LtiSystem(mat({{0.5, 0}, {0, 0.2}}), mat({{1, 0}}))),
               PreconditionError);
}

TEST(SolveDirect, Examples) {
  LyapunovSolution sol = solve_direct(LtiSystem(Matrix::Zero(2, 2), Matrix::Identity(2, 2)));
  EXPECT_LE((sol.q.matrix() - Matrix::Identity(2, 2)).norm(), 1e-15);
  EXPECT_EQ(sol.method, SolveMethod::kDirect);

  sol = solve_direct(scalar_system(0.5, 1.0));
  EXPECT_NEAR(sol.q(0, 0), 4.0 / 3.0, 1e-14);

  EXPECT_THROW((void)solve_direct(LtiSystem(Matrix::Identity(2, 2), mat({{1, 0}}))),
               SingularSystemError);
}

TEST(SolveDirect, UnstableScalarIsNegative) {
  // q = c^2 / (1 - a^2) < 0 for |a| > 1.
  const LyapunovSolution sol = solve_direct(scalar_system(2.0, 1.0));
  EXPECT_NEAR(sol.q(0, 0), -1.0 / 3.0, 1e-14);
  EXPECT_EQ(sol.definiteness, Definiteness::kIndefinite);
}

TEST(SolveSeries, Examples) {
  LyapunovSolution sol = solve_series(LtiSystem(kNilpotent, mat({{1, 0}})));
  EXPECT_EQ(sol.q.matrix(), Matrix::Identity(2, 2));
  EXPECT_EQ(sol.residual, 0.0);
  EXPECT_EQ(sol.method, SolveMethod::kSeries);

  sol = solve_series(scalar_system(0.5, 1.0));
  EXPECT_NEAR(sol.q(0, 0), 4.0 / 3.0, 1e-13);

  sol = solve_series(LtiSystem(Matrix::Zero(3, 3), Matrix::Identity(3, 3)));
  EXPECT_EQ(sol.q.matrix(), Matrix::Identity(3, 3));

  EXPECT_THROW((void)solve_series(scalar_system(1.0, 1.0)), PreconditionError);
  EXPECT_THROW((void)solve_series(scalar_system(0.999, 1.0), 1e-14, 10), NumericalFailure);
}

TEST(UnrolledChain, Examples) {
  const LtiSystem scalar = scalar_system(0.5, 1.0);
  const FixedPointState unit{SymmetricMatrix::identity(1), 0.75, 1.0, 0, 0.0, true, false};
  EXPECT_NEAR(unrolled_chain_check(scalar, unit, 3), 0.0, 1e-12);

  const LtiSystem constant(Matrix::Zero(2, 2), Matrix::Identity(2, 2));
  const FixedPointState centre{slice_centre(2), 1.0, 2.0, 0, 0.0, true, false};
  for (int n : {0, 1, 5, 10}) EXPECT_NEAR(unrolled_chain_check(constant, centre, n), 0.0, 1e-12);

  FixedPointState unconverged = centre;
  unconverged.converged = false;
  EXPECT_THROW((void)unrolled_chain_check(constant, unconverged, 1), PreconditionError);
}

TEST(UnrolledChain, DepthZeroIsTheMapResidual) {
  Rng rng(303);
  for (int trial = 0; trial < 20; ++trial) {
    const LtiSystem sys = testing::stable_observable(rng);
    const FixedPointState fp = fixed_point_iterate(sys, 1.0);
    ASSERT_TRUE(fp.converged);
    EXPECT_NEAR(unrolled_chain_check(sys, fp, 0), fp.map_residual, 1e-14);
  }
}

// Property suites over random systems.

TEST(LyapunovProperties, MapPreservesSlice) {
  Rng rng(310);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = testing::uniform_int(rng, 1, 6);
    const int p = testing::uniform_int(rng, 1, 3);
    const LtiSystem sys(testing::random_matrix(rng, n, n, -2.0, 2.0),
                        testing::random_matrix(rng, p, n));
    const double alpha = std::pow(10.0, testing::uniform(rng, -3.0, 3.0));
    const MapImage image = normalized_map(sys, alpha, random_slice_point(rng, n));
    EXPECT_NEAR(trace(image.x), 1.0, 1e-10);
    EXPECT_GE(min_eigenvalue(image.x), -1e-10);
    EXPECT_GT(image.lambda, 0.0);
  }
}

TEST(LyapunovProperties, OracleAgreement) {
  Rng rng(311);
  for (int trial = 0; trial < 60; ++trial) {
    const LtiSystem sys = testing::stable_observable(rng);
    const LyapunovSolution fixed = solve_via_alpha_bisection(sys);
    const LyapunovSolution direct = solve_direct(sys);
    const LyapunovSolution series = solve_series(sys);
    EXPECT_LE(relative_difference(fixed.q, direct.q), 1e-6);
    EXPECT_LE(relative_difference(fixed.q, series.q), 1e-6);
    EXPECT_LE(relative_difference(direct.q, series.q), 1e-6);
  }
}

TEST(LyapunovProperties, ResolventMatchesPicard) {
  Rng rng(312);
  for (int trial = 0; trial < 40; ++trial) {
    const LtiSystem sys = testing::stable_observable(rng);
    const double alpha = std::pow(10.0, testing::uniform(rng, -1.0, 1.0));
    const FixedPointState picard = fixed_point_iterate(sys, alpha);
    const FixedPointState resolvent = solve_slice_resolvent(sys, alpha);
    ASSERT_TRUE(picard.converged);
    EXPECT_LE((picard.x.matrix() - resolvent.x.matrix()).norm(), 1e-9);
    EXPECT_NEAR(picard.lambda, resolvent.lambda, 1e-9 * picard.lambda);
  }
}

// Unrolling lambda X = A^T X A + alpha C^T C gives X >= W with
// W = sum_{k<n} alpha lambda^{-(k+1)} (C A^k)^T (C A^k), positive definite
// exactly when the system is observable.
SymmetricMatrix discounted_gramian(const LtiSystem& sys, const FixedPointState& fp) {
  const Eigen::Index n = sys.states();
  Matrix w = Matrix::Zero(n, n);
  Matrix ca = sys.c();
  double lambda_power = fp.lambda;
  for (Eigen::Index k = 0; k < n; ++k) {
    w += (fp.alpha / lambda_power) * (ca.transpose() * ca);
    ca = ca * sys.a();
    lambda_power *= fp.lambda;
  }
  return SymmetricMatrix::symmetrized(w);
}

TEST(LyapunovProperties, FixedPointIsPositiveDefinite) {
  Rng rng(313);
  for (int trial = 0; trial < 50; ++trial) {
    const LtiSystem sys = testing::stable_observable(rng);
    for (double alpha : {0.1, 1.0, 10.0}) {
      const FixedPointState fp = slice_fixed_point(sys, alpha, slice_centre(sys.states()));
      ASSERT_TRUE(fp.converged);
      const double smallest = min_eigenvalue(fp.x);
      EXPECT_GE(smallest, min_eigenvalue(discounted_gramian(sys, fp)) - 1e-12);
      // For large alpha the discount 1/lambda shrinks the high-order terms and
      // the smallest eigenvalue can sit below any fixed absolute threshold.
      if (alpha < 1.0) EXPECT_GT(smallest, 1e-9) << "trial " << trial;
    }
  }
}

TEST(LyapunovProperties, TraceIdentity) {
  Rng rng(314);
  for (int trial = 0; trial < 50; ++trial) {
    const LtiSystem sys = testing::stable_observable(rng);
    const LyapunovSolution sol = solve_via_alpha_bisection(sys);
    EXPECT_NEAR(sol.alpha_search->alpha * trace(sol.q), 1.0, 1e-8);
    EXPECT_LE(std::abs(sol.alpha_search->lambda - 1.0), 1e-10);
  }
}

TEST(LyapunovProperties, UniqueFixedPoint) {
  Rng rng(315);
  for (int trial = 0; trial < 20; ++trial) {
    const LtiSystem sys = testing::stable_observable(rng);
    std::vector<SymmetricMatrix> limits;
    for (int start = 0; start < 20; ++start) {
      const FixedPointState fp =
          slice_fixed_point(sys, 1.0, random_slice_point(rng, sys.states()));
      ASSERT_TRUE(fp.converged);
      limits.push_back(fp.x);
    }
    for (std::size_t i = 1; i < limits.size(); ++i) {
      EXPECT_LE((limits[i].matrix() - limits[0].matrix()).norm(), 1e-6);
    }
  }
}

// With E = f(X) - X and lambda the normalizer at X, unrolling the identity
// lambda (X + E) = A^T X A + alpha C^T C gives X - R_n = -sum_{k<=n} L^k(E) / lambda^k
// where L(Y) = A^T Y A.
Matrix chain_defect(const LtiSystem& sys, const FixedPointState& fp, int n) {
  const Matrix e = normalized_map(sys, fp.alpha, fp.x).x.matrix() - fp.x.matrix();
  Matrix term = e;
  Matrix sum = e;
  for (int k = 1; k <= n; ++k) {
    term = sys.a().transpose() * term * sys.a() / fp.lambda;
    sum += term;
  }
  return sum;
}

// sum_{k<=n} ||A^k||_2^2 / lambda^k bounds ||X - R_n||_F / ||E||_F.
double chain_amplification(const LtiSystem& sys, double lambda, int n) {
  Matrix power = Matrix::Identity(sys.states(), sys.states());
  double factor = 0.0;
  double lambda_power = 1.0;
  for (int k = 0; k <= n; ++k) {
    const double norm = Eigen::JacobiSVD<Matrix>(power).singularValues()(0);
    factor += norm * norm / lambda_power;
    power = power * sys.a();
    lambda_power *= lambda;
  }
  return factor;
}

TEST(LyapunovProperties, UnrolledChainIdentity) {
  Rng rng(316);
  for (int trial = 0; trial < 200; ++trial) {
    const LtiSystem sys = testing::stable_observable(rng);
    const FixedPointState fp = slice_fixed_point(sys, 1.0, slice_centre(sys.states()));
    ASSERT_TRUE(fp.converged);
    for (int n = 0; n <= 10; ++n) {
      const double defect = unrolled_chain_check(sys, fp, n);
      EXPECT_NEAR(defect, chain_defect(sys, fp, n).norm(), 1e-14);
      EXPECT_LE(defect, chain_amplification(sys, fp.lambda, n) * fp.map_residual + 1e-14);
      if (chain_amplification(sys, fp.lambda, n) <= 10.0) {
        EXPECT_LE(defect, 10.0 * fp.map_residual + 1e-15) << "trial " << trial << " depth " << n;
      }
    }
  }
}

}  // namespace
}  // namespace lyapfix
