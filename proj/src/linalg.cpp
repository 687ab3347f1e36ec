#include "lyapfix/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

#include "lyapfix/errors.hpp"

namespace lyapfix {

namespace {

void require_square(const Matrix& m, std::string_view what) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + " must be square, got " + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()));
  }
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(Matrix m) : m_(std::move(m)) {
  require_square(m_, "symmetric matrix");
  require_finite(m_, "symmetric matrix");
  const double scale = m_.size() == 0 ? 1.0 : std::max(1.0, m_.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < m_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m_.cols(); ++j) {
      if (std::abs(m_(i, j) - m_(j, i)) > kSymmetryTol * scale) {
        throw DimensionError("matrix is not symmetric at (" + std::to_string(i) + "," +
                             std::to_string(j) + ")");
      }
    }
  }
}

SymmetricMatrix SymmetricMatrix::symmetrized(const Matrix& m) {
  require_square(m, "matrix");
  return {0.5 * (m + m.transpose()), Unchecked{}};
}

SymmetricMatrix SymmetricMatrix::identity(Eigen::Index n) {
  return {Matrix::Identity(n, n), Unchecked{}};
}

SymmetricMatrix SymmetricMatrix::zero(Eigen::Index n) { return {Matrix::Zero(n, n), Unchecked{}}; }

std::string_view to_string(Definiteness d) {
  switch (d) {
    case Definiteness::kPositiveDefinite:
      return "PD";
    case Definiteness::kPositiveSemidefiniteSingular:
      return "PSD-singular";
    case Definiteness::kIndefinite:
      return "indefinite";
  }
  return "unknown";
}

void require_finite(const Matrix& m, std::string_view what) {
  if (!m.allFinite()) {
    throw InputError(std::string(what) + " contains non-finite entries");
  }
}

double trace(const SymmetricMatrix& s) { return s.matrix().trace(); }

double spectral_radius(const Matrix& m) {
  require_square(m, "spectral_radius operand");
  if (m.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("eigenvalue iteration did not converge");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double min_eigenvalue(const SymmetricMatrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double max_eigenvalue(const SymmetricMatrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

int numeric_rank(const Matrix& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  if (sigma_max == 0.0) return 0;
  const double tol = static_cast<double>(std::max(m.rows(), m.cols())) * kRankTolFactor * sigma_max;
  return static_cast<int>((sigma.array() > tol).count());
}

Definiteness classify_definiteness(const SymmetricMatrix& s) {
  const double tol = kDefinitenessTol * std::max(1.0, trace(s));
  const double lo = min_eigenvalue(s);
  if (lo > tol) return Definiteness::kPositiveDefinite;
  if (lo >= -tol) return Definiteness::kPositiveSemidefiniteSingular;
  return Definiteness::kIndefinite;
}

bool is_positive_definite(const SymmetricMatrix& s) {
  return classify_definiteness(s) == Definiteness::kPositiveDefinite;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector linear_solve(const Matrix& m, const Vector& b) {
  require_square(m, "linear system");
  if (b.size() != m.rows()) {
    throw DimensionError("right-hand side has length " + std::to_string(b.size()) +
                         ", expected " + std::to_string(m.rows()));
  }
  if (m.rows() == 0) return Vector();
  Eigen::PartialPivLU<Matrix> lu(m);
  const double rcond = lu.rcond();
  if (!(rcond >= static_cast<double>(m.rows()) * 1e-14)) {
    throw SingularSystemError("linear system is singular to working precision (rcond " +
                              std::to_string(rcond) + ")");
  }
  return lu.solve(b);
}

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unvec(const Vector& v, Eigen::Index n) {
  if (v.size() != n * n) {
    throw DimensionError("cannot reshape vector of length " + std::to_string(v.size()) + " to " +
                         std::to_string(n) + "x" + std::to_string(n));
  }
  return Eigen::Map<const Matrix>(v.data(), n, n);
}

}  // namespace lyapfix
