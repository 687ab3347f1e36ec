#include "lyapfix/theta_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lyapfix/errors.hpp"

namespace lyapfix {

ThetaMapParams::ThetaMapParams(double lambda, double gamma) : lambda_(lambda), gamma_(gamma) {
  if (!(lambda > 0.0) || !(gamma > 0.0) || !std::isfinite(lambda) || !std::isfinite(gamma)) {
    throw PreconditionError("theta map needs lambda > 0 and gamma > 0, got lambda = " +
                            std::to_string(lambda) + ", gamma = " + std::to_string(gamma));
  }
}

double theta_map(const ThetaMapParams& p, double theta) {
  const double numerator = theta * p.lambda();
  const double rest = (1.0 - theta) * p.gamma();
  const double denominator = numerator + rest;
  // A denominator at rounding level of its two terms is the pole itself.
  const double floor = std::max(
      kPoleFloor, 4.0 * std::numeric_limits<double>::epsilon() * (std::abs(numerator) + std::abs(rest)));
  if (std::abs(denominator) <= floor) {
    throw PoleError("theta map evaluated at its pole theta = " + std::to_string(theta));
  }
  return numerator / denominator;
}

std::optional<double> theta_pole(const ThetaMapParams& p) {
  if (p.lambda() == p.gamma()) return std::nullopt;
  return -p.gamma() / (p.lambda() - p.gamma());
}

std::string_view to_string(CobwebStop s) {
  switch (s) {
    case CobwebStop::kCompleted:
      return "completed";
    case CobwebStop::kDiverged:
      return "diverged";
    case CobwebStop::kPole:
      return "pole";
  }
  return "unknown";
}

CobwebResult cobweb_iterates(const ThetaMapParams& p, double theta0, int steps) {
  CobwebResult out;
  out.iterates.push_back(theta0);
  if (std::abs(theta0) > kDivergenceBound) {
    out.stop = CobwebStop::kDiverged;
    return out;
  }
  double theta = theta0;
  for (int k = 0; k < steps; ++k) {
    try {
      theta = theta_map(p, theta);
    } catch (const PoleError&) {
      out.stop = CobwebStop::kPole;
      return out;
    }
    out.iterates.push_back(theta);
    if (!(std::abs(theta) <= kDivergenceBound)) {
      out.stop = CobwebStop::kDiverged;
      return out;
    }
  }
  return out;
}

}  // namespace lyapfix
