// lyapfix: command-line certifier for discrete Lyapunov equations.
//
// Exit codes: 0 success, 1 input error, 2 numerical failure,
// 3 internal inconsistency (a triad report with exactly two conditions true).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "lyapfix/certifier.hpp"
#include "lyapfix/errors.hpp"
#include "lyapfix/lyapunov.hpp"
#include "lyapfix/theta_map.hpp"

namespace {

using lyapfix::ExitCode;
using lyapfix::ReportFormat;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw lyapfix::InputError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

lyapfix::InputDocument load(const std::string& path) { return lyapfix::parse_input(read_file(path)); }

int code(ExitCode c) { return static_cast<int>(c); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Lyapunov equation solver and stability/observability certifier"};
  app.require_subcommand(1);

  std::string file;
  ReportFormat format = ReportFormat::kJson;
  const std::map<std::string, ReportFormat> formats{{"json", ReportFormat::kJson},
                                                    {"text", ReportFormat::kText}};
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", file, "JSON input document")->required();
    sub->add_option("--format", format, "Output format")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  };

  auto* triad = app.add_subcommand("triad", "Check stability, observability and Lyapunov solvability");
  add_common(triad);

  auto* solve = app.add_subcommand("solve", "Solve the Lyapunov equation");
  add_common(solve);
  std::string method = "fixed-point";
  solve->add_option("--method", method, "Solver")
      ->check(CLI::IsMember({"fixed-point", "direct", "series"}));

  auto* stability = app.add_subcommand("check-stability", "Spectral radius test");
  add_common(stability);
  auto* observability = app.add_subcommand("check-observability", "Observability rank test");
  add_common(observability);
  auto* positive = app.add_subcommand("positive-solve", "Positivity certificate q = c + q A");
  add_common(positive);

  auto* theta = app.add_subcommand("theta-map", "Iterate the scalar theta map, CSV on stdout");
  double lambda = 0.0;
  double gamma = 0.0;
  double theta0 = 0.0;
  int steps = 0;
  theta->add_option("--lambda", lambda, "Normalizer of the first fixed point")->required();
  theta->add_option("--gamma", gamma, "Normalizer of the second fixed point")->required();
  theta->add_option("--theta0", theta0, "Initial theta")->required();
  theta->add_option("--steps", steps, "Number of iterations")->required()->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : code(ExitCode::kInputError);
  }

  try {
    if (*triad) {
      const lyapfix::TriadReport report = lyapfix::run_triad(load(file));
      std::cout << lyapfix::render_report(report, format);
      if (!report.consistent) {
        std::cerr << "error: conditions (i)-(iii) violate the two-implies-three property\n";
        return code(ExitCode::kInconsistent);
      }
    } else if (*solve) {
      const lyapfix::LtiSystem sys = lyapfix::observation_system(load(file));
      lyapfix::LyapunovSolution sol = method == "direct"   ? lyapfix::solve_direct(sys)
                                      : method == "series" ? lyapfix::solve_series(sys)
                                                           : lyapfix::solve_via_alpha_bisection(sys);
      std::cout << lyapfix::render_solution(sol, format);
    } else if (*stability) {
      const lyapfix::LtiSystem sys = lyapfix::observation_system(load(file));
      std::cout << lyapfix::render_stability(lyapfix::is_asymptotically_stable(sys), format);
    } else if (*observability) {
      const lyapfix::LtiSystem sys = lyapfix::observation_system(load(file));
      std::cout << lyapfix::render_observability(lyapfix::is_observable(sys), format);
    } else if (*positive) {
      const lyapfix::PositiveSystem ps = lyapfix::positive_system(load(file));
      std::cout << lyapfix::render_positive(lyapfix::run_positive(ps), format);
    } else if (*theta) {
      if (!(lambda > 0.0) || !(gamma > 0.0)) {
        throw lyapfix::InputError("--lambda and --gamma must be positive");
      }
      const lyapfix::ThetaMapParams params(lambda, gamma);
      const lyapfix::CobwebResult result = lyapfix::cobweb_iterates(params, theta0, steps);
      std::cout << lyapfix::render_cobweb_csv(result);
      if (result.stop != lyapfix::CobwebStop::kCompleted) {
        std::cerr << "note: iteration stopped early (" << lyapfix::to_string(result.stop) << ")\n";
      }
    }
  } catch (const lyapfix::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return code(ExitCode::kInputError);
  } catch (const lyapfix::DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return code(ExitCode::kInputError);
  } catch (const lyapfix::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return code(ExitCode::kNumericalFailure);
  }
  return code(ExitCode::kSuccess);
}
