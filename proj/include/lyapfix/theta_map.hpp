#pragma once

// Scalar dynamics of the normalized map restricted to the line
// g(theta) = theta X + (1 - theta) Y through two fixed points X, Y with
// normalizers lambda and gamma:
//
//   theta -> theta lambda / (theta lambda + (1 - theta) gamma).
//
// For lambda != gamma the map has exactly the fixed points 0 and 1 and a pole at
// theta = -gamma / (lambda - gamma). With lambda > gamma, 0 repels and 1 attracts.

#include <optional>
#include <string_view>
#include <vector>

namespace lyapfix {

class ThetaMapParams {
 public:
  /// Throws PreconditionError unless both values are positive and finite.
  ThetaMapParams(double lambda, double gamma);

  [[nodiscard]] double lambda() const { return lambda_; }
  [[nodiscard]] double gamma() const { return gamma_; }

 private:
  double lambda_;
  double gamma_;
};

/// Denominators at or below this magnitude are treated as the pole.
inline constexpr double kPoleFloor = 1e-300;
/// Cobweb iteration stops once |theta| exceeds this.
inline constexpr double kDivergenceBound = 1e6;

/// Throws PoleError when |theta lambda + (1 - theta) gamma| <= kPoleFloor, or when
/// the two terms cancel to within a few ulps of their magnitude.
[[nodiscard]] double theta_map(const ThetaMapParams& p, double theta);

/// -gamma / (lambda - gamma), or nothing when lambda == gamma (the map is the identity).
[[nodiscard]] std::optional<double> theta_pole(const ThetaMapParams& p);

enum class CobwebStop { kCompleted, kDiverged, kPole };

std::string_view to_string(CobwebStop s);

struct CobwebResult {
  std::vector<double> iterates;  // theta_0, theta_1, ...
  CobwebStop stop = CobwebStop::kCompleted;
};

/// Up to `steps` applications of theta_map starting at theta0. Stops early,
/// flagging the reason, when an iterate exceeds kDivergenceBound in magnitude
/// (that iterate is kept) or when the next step would hit the pole.
[[nodiscard]] CobwebResult cobweb_iterates(const ThetaMapParams& p, double theta0, int steps);

}  // namespace lyapfix
