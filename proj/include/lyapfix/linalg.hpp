#pragma once

// Dense real linear algebra used throughout the library. Matrices are plain
// Eigen dynamic matrices; symmetric operands carry their own strong type so
// that definiteness queries only ever see symmetric input.

#include <Eigen/Core>

#include <cstddef>
#include <string_view>
#include <utility>

namespace lyapfix {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Relative symmetry tolerance: |M(i,j) - M(j,i)| <= kSymmetryTol * max(1, max|M|).
inline constexpr double kSymmetryTol = 1e-12;

/// S counts as positive definite iff min_eigenvalue(S) > kDefinitenessTol * max(1, trace(S)).
inline constexpr double kDefinitenessTol = 1e-9;

/// Relative rank tolerance factor; multiplied by max(rows, cols) * sigma_max.
inline constexpr double kRankTolFactor = 1e-14;

/// A real symmetric n x n matrix. Construction checks symmetry; use
/// `symmetrized` to project an arbitrary square matrix onto the symmetric part.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;

  /// Throws DimensionError if `m` is not square or not symmetric within
  /// kSymmetryTol, InputError if any entry is non-finite.
  explicit SymmetricMatrix(Matrix m);

  /// Returns (m + m^T) / 2. Throws DimensionError if `m` is not square.
  static SymmetricMatrix symmetrized(const Matrix& m);

  static SymmetricMatrix identity(Eigen::Index n);
  static SymmetricMatrix zero(Eigen::Index n);

  [[nodiscard]] Eigen::Index size() const { return m_.rows(); }
  [[nodiscard]] const Matrix& matrix() const { return m_; }
  [[nodiscard]] double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

 private:
  struct Unchecked {};
  SymmetricMatrix(Matrix m, Unchecked) : m_(std::move(m)) {}

  Matrix m_;
};

enum class Definiteness { kPositiveDefinite, kPositiveSemidefiniteSingular, kIndefinite };

std::string_view to_string(Definiteness d);

/// Throws InputError naming `what` when any entry of `m` is NaN or infinite.
void require_finite(const Matrix& m, std::string_view what);

[[nodiscard]] double trace(const SymmetricMatrix& s);

/// max |lambda| over the (complex) eigenvalues of a square matrix.
[[nodiscard]] double spectral_radius(const Matrix& m);

[[nodiscard]] double min_eigenvalue(const SymmetricMatrix& s);
[[nodiscard]] double max_eigenvalue(const SymmetricMatrix& s);

/// Number of singular values above max(rows, cols) * 1e-14 * sigma_max.
[[nodiscard]] int numeric_rank(const Matrix& m);

/// Classifies `s` with the kDefinitenessTol threshold: PD above it, PSD-singular
/// within [-tol, tol], indefinite below.
[[nodiscard]] Definiteness classify_definiteness(const SymmetricMatrix& s);
[[nodiscard]] bool is_positive_definite(const SymmetricMatrix& s);

/// Standard Kronecker product.
[[nodiscard]] Matrix kron(const Matrix& a, const Matrix& b);

/// Solves m x = b by LU with partial pivoting. Throws SingularSystemError when
/// the reciprocal condition estimate drops below dim * 1e-14.
[[nodiscard]] Vector linear_solve(const Matrix& m, const Vector& b);

/// Column-major vec() and its inverse for square matrices.
[[nodiscard]] Vector vec(const Matrix& m);
[[nodiscard]] Matrix unvec(const Vector& v, Eigen::Index n);

}  // namespace lyapfix
