#include "lyapfix/certifier.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lyapfix/errors.hpp"

namespace lyapfix {

namespace {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Parsing

Matrix parse_matrix(const nlohmann::json& value, const std::string& key) {
  if (!value.is_array()) throw InputError("matrix " + key + " must be an array of rows");
  if (value.empty()) throw InputError("matrix " + key + " is empty");
  const std::size_t rows = value.size();
  std::size_t cols = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (!value[i].is_array()) throw InputError("matrix " + key + " must be an array of rows");
    if (i == 0) {
      cols = value[i].size();
    } else if (value[i].size() != cols) {
      throw InputError("ragged matrix " + key);
    }
  }
  if (cols == 0) throw InputError("matrix " + key + " is empty");
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const auto& entry = value[i][j];
      if (!entry.is_number() || !std::isfinite(entry.get<double>())) {
        throw InputError("matrix " + key + ": entries must be finite numbers");
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = entry.get<double>();
    }
  }
  return m;
}

Matrix parse_row(const nlohmann::json& value, const std::string& key) {
  if (value.is_array() && !value.empty() && value[0].is_array()) {
    Matrix m = parse_matrix(value, key);
    if (m.rows() != 1) throw InputError("vector " + key + " must be a single row");
    return m;
  }
  if (!value.is_array() || value.empty()) throw InputError("vector " + key + " must be a non-empty array");
  Matrix m(1, static_cast<Eigen::Index>(value.size()));
  for (std::size_t j = 0; j < value.size(); ++j) {
    if (!value[j].is_number() || !std::isfinite(value[j].get<double>())) {
      throw InputError("vector " + key + ": entries must be finite numbers");
    }
    m(0, static_cast<Eigen::Index>(j)) = value[j].get<double>();
  }
  return m;
}

// ---------------------------------------------------------------------------
// Serialization with fixed 17-digit reals.

void write_json(const ordered_json& j, std::string& out) {
  switch (j.type()) {
    case ordered_json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& item : j.items()) {
        if (!first) out += ',';
        first = false;
        out += ordered_json(item.key()).dump();
        out += ':';
        write_json(item.value(), out);
      }
      out += '}';
      break;
    }
    case ordered_json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& value : j) {
        if (!first) out += ',';
        first = false;
        write_json(value, out);
      }
      out += ']';
      break;
    }
    case ordered_json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_real(v) : "null";
      break;
    }
    default:
      out += j.dump();
  }
}

std::string dump(const ordered_json& j) {
  std::string out;
  write_json(j, out);
  out += '\n';
  return out;
}

ordered_json matrix_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json row_json(const RowVector& v) {
  ordered_json row = ordered_json::array();
  for (Eigen::Index j = 0; j < v.size(); ++j) row.push_back(v(j));
  return row;
}

ordered_json solution_json(const LyapunovSolution& sol) {
  ordered_json j;
  j["method"] = std::string(to_string(sol.method));
  j["Q"] = matrix_json(sol.q.matrix());
  j["residual"] = sol.residual;
  j["definiteness"] = std::string(to_string(sol.definiteness));
  j["min_eigenvalue"] = sol.min_eigenvalue;
  if (sol.alpha_search) {
    j["alpha"] = sol.alpha_search->alpha;
    j["lambda"] = sol.alpha_search->lambda;
    j["bracket_steps"] = sol.alpha_search->bracket_steps;
    j["bisection_steps"] = sol.alpha_search->bisection_steps;
  }
  return j;
}

ordered_json outcome_json(const MethodOutcome& outcome) {
  if (outcome.solution) return solution_json(*outcome.solution);
  ordered_json j;
  j["error"] = outcome.error;
  return j;
}

ordered_json stability_json(const StabilityVerdict& v) {
  ordered_json j;
  j["verdict"] = v.stable;
  j["spectral_radius"] = v.spectral_radius;
  return j;
}

ordered_json observability_json(const ObservabilityVerdict& v) {
  ordered_json j;
  j["verdict"] = v.observable;
  j["rank"] = v.rank;
  j["states"] = v.states;
  return j;
}

std::string_view equation_for(InputMode mode) {
  switch (mode) {
    case InputMode::kInput:
      return "A P A^T - P + B B^T = 0";
    case InputMode::kPositive:
      return "A^T Q A - Q + c^T c = 0";
    case InputMode::kOutput:
      break;
  }
  return "A^T Q A - Q + C^T C = 0";
}

const char* yes_no(bool b) { return b ? "true" : "false"; }

std::string solution_text(const LyapunovSolution& sol) {
  std::string s = std::string(to_string(sol.method)) + ": " + std::string(to_string(sol.definiteness)) +
                  ", min eigenvalue " + format_real(sol.min_eigenvalue) + ", residual " +
                  format_real(sol.residual);
  if (sol.alpha_search) s += ", alpha " + format_real(sol.alpha_search->alpha);
  return s;
}

std::string outcome_text(const MethodOutcome& outcome) {
  return outcome.solution ? solution_text(*outcome.solution) : "error: " + outcome.error;
}

MethodOutcome capture(auto&& solve) {
  MethodOutcome outcome;
  try {
    outcome.solution = solve();
  } catch (const Error& e) {
    outcome.error = e.what();
  }
  return outcome;
}

}  // namespace

std::string format_real(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string_view to_string(InputMode m) {
  switch (m) {
    case InputMode::kOutput:
      return "C";
    case InputMode::kInput:
      return "B";
    case InputMode::kPositive:
      return "c";
  }
  return "?";
}

InputDocument parse_input(std::string_view text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw InputError("input must be a JSON object");

  static const std::set<std::string> kKnown = {"A", "B", "C", "c"};
  for (const auto& item : root.items()) {
    if (!kKnown.contains(item.key())) throw InputError("unexpected key \"" + item.key() + "\"");
  }
  if (!root.contains("A")) throw InputError("missing required key A");
  InputDocument doc;
  doc.a = parse_matrix(root["A"], "A");
  const Eigen::Index n = doc.a.rows();
  if (doc.a.cols() != n) throw InputError("matrix A must be square");

  const int present = static_cast<int>(root.contains("C")) + static_cast<int>(root.contains("B")) +
                      static_cast<int>(root.contains("c"));
  if (present != 1) throw InputError("exactly one of C, B, c required");

  if (root.contains("C")) {
    doc.mode = InputMode::kOutput;
    doc.second = parse_matrix(root["C"], "C");
    if (doc.second.cols() != n) {
      throw InputError("matrix C must have " + std::to_string(n) + " columns");
    }
  } else if (root.contains("B")) {
    doc.mode = InputMode::kInput;
    doc.second = parse_matrix(root["B"], "B");
    if (doc.second.rows() != n) throw InputError("matrix B must have " + std::to_string(n) + " rows");
  } else {
    doc.mode = InputMode::kPositive;
    doc.second = parse_row(root["c"], "c");
    if (doc.second.cols() != n) {
      throw InputError("vector c must have length " + std::to_string(n));
    }
  }
  return doc;
}

LtiSystem observation_system(const InputDocument& doc) {
  if (doc.mode == InputMode::kInput) return dualize(ControlSystem(doc.a, doc.second));
  return {doc.a, doc.second};
}

PositiveSystem positive_system(const InputDocument& doc) {
  if (doc.mode != InputMode::kPositive) {
    throw InputError("positive-system mode requires key c");
  }
  return {doc.a, RowVector(doc.second.row(0))};
}

bool triad_consistent(bool stable, bool observable, bool lyapunov) {
  return static_cast<int>(stable) + static_cast<int>(observable) + static_cast<int>(lyapunov) != 2;
}

TriadReport run_triad(const InputDocument& doc) {
  const LtiSystem sys = observation_system(doc);
  TriadReport report;
  report.mode = doc.mode;
  report.stability = is_asymptotically_stable(sys);
  report.observability = is_observable(sys);
  report.direct = capture([&] { return solve_direct(sys); });
  report.lyapunov = report.direct.solution.has_value() &&
                    report.direct.solution->definiteness == Definiteness::kPositiveDefinite;

  if (report.stability.stable && report.observability.observable) {
    report.fixed_point = capture([&] { return solve_via_alpha_bisection(sys); });
    if (report.fixed_point->solution && report.direct.solution) {
      const Matrix& direct = report.direct.solution->q.matrix();
      report.max_relative_difference =
          (report.fixed_point->solution->q.matrix() - direct).norm() / std::max(1e-300, direct.norm());
    }
  }
  report.consistent = triad_consistent(report.stability.stable, report.observability.observable,
                                       report.lyapunov);
  return report;
}

std::string render_report(const TriadReport& report, ReportFormat format) {
  if (format == ReportFormat::kText) {
    std::ostringstream out;
    out << "(i) asymptotically stable: " << yes_no(report.stability.stable) << " (spectral radius "
        << format_real(report.stability.spectral_radius) << ")\n";
    out << "(ii) observable: " << yes_no(report.observability.observable) << " (rank "
        << report.observability.rank << " of " << report.observability.states << ")\n";
    out << "(iii) positive definite Lyapunov solution: " << yes_no(report.lyapunov) << " ("
        << outcome_text(report.direct) << ")\n";
    if (report.fixed_point) {
      out << "    fixed-point cross-check: " << outcome_text(*report.fixed_point);
      if (report.max_relative_difference) {
        out << ", relative difference " << format_real(*report.max_relative_difference);
      }
      out << '\n';
    }
    out << "consistency: " << yes_no(report.consistent) << '\n';
    return out.str();
  }

  ordered_json j;
  j["stability"] = stability_json(report.stability);
  j["observability"] = observability_json(report.observability);
  ordered_json lyap;
  lyap["verdict"] = report.lyapunov;
  lyap["equation"] = std::string(equation_for(report.mode));
  lyap["direct"] = outcome_json(report.direct);
  if (report.fixed_point) lyap["fixed_point"] = outcome_json(*report.fixed_point);
  if (report.max_relative_difference) lyap["relative_difference"] = *report.max_relative_difference;
  j["lyapunov"] = std::move(lyap);
  ordered_json consistency;
  consistency["verdict"] = report.consistent;
  j["consistency"] = std::move(consistency);
  return dump(j);
}

std::string render_solution(const LyapunovSolution& sol, ReportFormat format) {
  if (format == ReportFormat::kText) {
    std::ostringstream out;
    out << solution_text(sol) << '\n';
    for (Eigen::Index i = 0; i < sol.q.size(); ++i) {
      for (Eigen::Index j = 0; j < sol.q.size(); ++j) {
        out << (j ? " " : "") << format_real(sol.q(i, j));
      }
      out << '\n';
    }
    return out.str();
  }
  return dump(solution_json(sol));
}

std::string render_stability(const StabilityVerdict& v, ReportFormat format) {
  if (format == ReportFormat::kText) {
    return std::string("(i) asymptotically stable: ") + yes_no(v.stable) + " (spectral radius " +
           format_real(v.spectral_radius) + ")\n";
  }
  return dump(stability_json(v));
}

std::string render_observability(const ObservabilityVerdict& v, ReportFormat format) {
  if (format == ReportFormat::kText) {
    return std::string("(ii) observable: ") + yes_no(v.observable) + " (rank " +
           std::to_string(v.rank) + " of " + std::to_string(v.states) + ")\n";
  }
  return dump(observability_json(v));
}

PositiveReport run_positive(const PositiveSystem& ps) {
  PositiveReport report;
  report.stability = is_asymptotically_stable(ps.as_lti());
  report.observable = is_positive_observable(ps);
  report.certificate = solve_positive_q(ps);
  try {
    report.unit_fixed_point = simplex_unit_fixed_point(ps);
    const RowVector& q = report.certificate.q;
    report.simplex_agreement = (report.unit_fixed_point->x.values() - q / q.sum()).norm();
  } catch (const NumericalFailure&) {
    report.unit_fixed_point.reset();
  }
  return report;
}

std::string render_positive(const PositiveReport& report, ReportFormat format) {
  if (format == ReportFormat::kText) {
    std::ostringstream out;
    out << "(i) asymptotically stable: " << yes_no(report.stability.stable) << " (spectral radius "
        << format_real(report.stability.spectral_radius) << ")\n";
    out << "(ii) observable: " << yes_no(report.observable) << '\n';
    out << "(iii'') q = c (I - A)^{-1} entrywise positive: " << yes_no(report.certificate.positive)
        << " (residual " << format_real(report.certificate.residual) << ")\n";
    out << "q:";
    for (Eigen::Index j = 0; j < report.certificate.q.size(); ++j) {
      out << ' ' << format_real(report.certificate.q(j));
    }
    out << '\n';
    return out.str();
  }
  ordered_json j;
  j["stability"] = stability_json(report.stability);
  j["observable"] = report.observable;
  j["q"] = row_json(report.certificate.q);
  j["residual"] = report.certificate.residual;
  j["positive"] = report.certificate.positive;
  if (report.unit_fixed_point) {
    ordered_json fp;
    fp["x"] = row_json(report.unit_fixed_point->x.values());
    fp["alpha"] = report.unit_fixed_point->alpha;
    fp["lambda"] = report.unit_fixed_point->lambda;
    fp["map_residual"] = report.unit_fixed_point->map_residual;
    if (report.simplex_agreement) fp["distance_to_normalized_q"] = *report.simplex_agreement;
    j["simplex_fixed_point"] = std::move(fp);
  }
  return dump(j);
}

std::string render_cobweb_csv(const CobwebResult& result) {
  std::string out = "k,theta\n";
  for (std::size_t k = 0; k < result.iterates.size(); ++k) {
    out += std::to_string(k);
    out += ',';
    out += format_real(result.iterates[k]);
    out += '\n';
  }
  return out;
}

}  // namespace lyapfix
