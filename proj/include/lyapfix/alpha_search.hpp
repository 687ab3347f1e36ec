#pragma once

// Search over the scaling parameter alpha > 0 of a normalized fixed-point map
// for the value at which the normalizer lambda_alpha equals one.
//
// The caller supplies `eval(alpha)`, returning a state with a `lambda` member,
// and an extra acceptance predicate on that state. Bracketing starts at
// alpha = 1, doubles until lambda > 1 (guaranteed when lambda_alpha grows at
// least linearly in alpha), halves until lambda < 1, then bisects. Continuity
// of alpha -> lambda_alpha makes the bracket contain a root.

#include <cmath>
#include <string>
#include <utility>

#include "lyapfix/errors.hpp"

namespace lyapfix {

struct AlphaSearchOptions {
  double tol = 1e-10;  // on |lambda - 1|
  int max_bracket_steps = 200;
  int max_bisection_steps = 200;
};

template <typename State>
struct AlphaSearchResult {
  double alpha;
  State state;
  int bracket_steps;
  int bisection_steps;
};

template <typename Eval, typename Accept>
auto search_unit_normalizer(Eval&& eval, Accept&& accept, const AlphaSearchOptions& opts = {})
    -> AlphaSearchResult<decltype(eval(1.0))> {
  using State = decltype(eval(1.0));
  auto done = [&](const State& s) { return std::abs(s.lambda - 1.0) <= opts.tol && accept(s); };

  double alpha = 1.0;
  State state = eval(alpha);
  int bracket_steps = 0;
  if (done(state)) return {alpha, std::move(state), 0, 0};

  double lo = alpha;
  double hi = alpha;
  if (state.lambda <= 1.0) {
    while (state.lambda <= 1.0) {
      if (++bracket_steps > opts.max_bracket_steps) {
        throw NumericalFailure("alpha bracketing: lambda stayed below 1 after " +
                               std::to_string(opts.max_bracket_steps) + " doublings");
      }
      lo = hi;
      hi *= 2.0;
      state = eval(hi);
      if (done(state)) return {hi, std::move(state), bracket_steps, 0};
    }
  } else {
    while (state.lambda >= 1.0) {
      if (++bracket_steps > opts.max_bracket_steps) {
        throw NumericalFailure("alpha bracketing: lambda stayed above 1 after " +
                               std::to_string(opts.max_bracket_steps) + " halvings");
      }
      hi = lo;
      lo *= 0.5;
      state = eval(lo);
      if (done(state)) return {lo, std::move(state), bracket_steps, 0};
    }
  }

  for (int step = 1; step <= opts.max_bisection_steps; ++step) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    state = eval(mid);
    if (done(state)) return {mid, std::move(state), bracket_steps, step};
    if (state.lambda < 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw NumericalFailure("alpha bisection did not reach |lambda - 1| <= " + std::to_string(opts.tol) +
                         " (last lambda " + std::to_string(state.lambda) + ")");
}

}  // namespace lyapfix
