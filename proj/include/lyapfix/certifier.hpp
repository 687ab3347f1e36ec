#pragma once

// Input documents, the stability/observability/Lyapunov triad, and report
// rendering shared by the command-line tool and the Python module.
//
// Input is a JSON object with key "A" and exactly one of
//   "C"  output map          -> A^T Q A - Q + C^T C = 0
//   "B"  input map           -> dualized to (A^T, B^T): A P A^T - P + B B^T = 0
//   "c"  nonnegative row     -> positive-system mode, c used as a 1 x n output map
// Matrices are row-major nested arrays; "c" may be flat or a single nested row.

#include <optional>
#include <string>
#include <string_view>

#include "lyapfix/linalg.hpp"
#include "lyapfix/lyapunov.hpp"
#include "lyapfix/positive.hpp"
#include "lyapfix/system.hpp"
#include "lyapfix/theta_map.hpp"

namespace lyapfix {

enum class InputMode { kOutput, kInput, kPositive };

std::string_view to_string(InputMode m);

struct InputDocument {
  InputMode mode = InputMode::kOutput;
  Matrix a;
  Matrix second;  // C, B, or c as a 1 x n matrix, according to `mode`
};

/// Throws InputError with a message naming the offending key.
[[nodiscard]] InputDocument parse_input(std::string_view text);

/// The observability-form system the triad runs on (dualized in B mode).
[[nodiscard]] LtiSystem observation_system(const InputDocument& doc);

/// Throws InputError unless the document is in positive-system mode.
[[nodiscard]] PositiveSystem positive_system(const InputDocument& doc);

struct MethodOutcome {
  std::optional<LyapunovSolution> solution;
  std::string error;  // set iff !solution
};

struct TriadReport {
  InputMode mode = InputMode::kOutput;
  StabilityVerdict stability;
  ObservabilityVerdict observability;
  bool lyapunov = false;  // direct solve succeeded and is positive definite
  MethodOutcome direct;
  std::optional<MethodOutcome> fixed_point;  // run only when (i) and (ii) hold
  std::optional<double> max_relative_difference;
  /// False iff exactly two of (i), (ii), (iii) hold, which the theorem rules out.
  bool consistent = true;
};

/// Never throws on solver failures; they are recorded in the report.
[[nodiscard]] TriadReport run_triad(const InputDocument& doc);

/// Exactly-two-of-three detector.
[[nodiscard]] bool triad_consistent(bool stable, bool observable, bool lyapunov);

enum class ReportFormat { kJson, kText };

enum class ExitCode : int { kSuccess = 0, kInputError = 1, kNumericalFailure = 2, kInconsistent = 3 };

/// JSON keys: "stability", "observability", "lyapunov", "consistency".
/// Floating-point values are printed with 17 significant digits.
[[nodiscard]] std::string render_report(const TriadReport& report, ReportFormat format);

[[nodiscard]] std::string render_solution(const LyapunovSolution& sol, ReportFormat format);
[[nodiscard]] std::string render_stability(const StabilityVerdict& v, ReportFormat format);
[[nodiscard]] std::string render_observability(const ObservabilityVerdict& v, ReportFormat format);

struct PositiveReport {
  StabilityVerdict stability;
  bool observable = false;
  PositiveCertificate certificate;
  std::optional<SimplexFixedPoint> unit_fixed_point;
  std::optional<double> simplex_agreement;  // ||x - q / sum(q)||_2
};

/// Requires rho(A) < 1 (PreconditionError otherwise).
[[nodiscard]] PositiveReport run_positive(const PositiveSystem& ps);
[[nodiscard]] std::string render_positive(const PositiveReport& report, ReportFormat format);

/// CSV with header `k,theta`.
[[nodiscard]] std::string render_cobweb_csv(const CobwebResult& result);

/// %.17g formatting used by every renderer.
[[nodiscard]] std::string format_real(double value);

}  // namespace lyapfix
