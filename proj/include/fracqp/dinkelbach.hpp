#ifndef FRACQP_DINKELBACH_HPP
#define FRACQP_DINKELBACH_HPP

#include <optional>
#include <string>
#include <vector>

#include "fracqp/instance.hpp"

namespace fracqp {

/// One evaluation of the parametric function
///   f(delta) = min_x (x^T A x + alpha) - delta (x^T B x + beta).
struct ParametricPoint {
  double delta = 0.0;
  double f_value = 0.0;
  SignVector argmin;
  double supergradient = 0.0;  // -(argmin^T B argmin + beta), always < 0
  Engine engine = Engine::Auto;
};

enum class TraceBranch { Init, Newton, Lookahead };
const char* branch_name(TraceBranch b);
std::optional<TraceBranch> branch_from_name(const std::string& name);

struct TraceRow {
  int iter = 0;
  double delta = 0.0;
  double f = 0.0;
  double g = 0.0;
  TraceBranch branch = TraceBranch::Init;
  Engine engine = Engine::Auto;
  std::optional<double> divergence;  // Bregman column, filled by annotation
  std::optional<double> sup_g;
};

struct SolveTrace {
  std::vector<TraceRow> rows;
  bool lookahead = false;
};

struct SolveResult {
  double delta_star = 0.0;
  SignVector x_star;
  long iterations = 0;        // iterates recorded (trace rows)
  long subproblem_calls = 0;  // parametric evaluations, rejected guesses included
  long lookahead_accepts = 0;
  Engine engine_used = Engine::Auto;
  double gamma_shift = 0.0;  // filled by callers that normalized the instance
};

struct SolveOutput {
  SolveResult result;
  SolveTrace trace;
};

struct SolveOptions {
  Engine engine = Engine::Auto;
  double tol = 1e-12;  // relative; scaled to tol*(1+|alpha|+delta1*(1+|beta|))
  QpOptions qp;
  // Reuse one sign-cell enumeration for every iterate when the instance is
  // uniformly exact-dispatchable over delta >= 0 (same minima, same engine
  // semantics; the piecewise-linear profile of f is built once).
  bool parametric_cache = true;
  std::optional<SignVector> x0;
  long max_iterations = 0;  // 0: automatic cap
};

// Solves the delta-subproblem exactly and packages f, argmin and a
// supergradient. delta < 0 downgrades dispatch to the brute engine.
ParametricPoint eval_parametric(const ValidatedInstance& vi, double delta,
                                Engine engine = Engine::Auto,
                                const QpOptions& opts = {});

// delta^1 = ratio(x0) (all-ones default); guarantees f(delta^1) <= 0 and
// supergradient < 0 for a normalized instance.
ParametricPoint initial_point(const ValidatedInstance& vi,
                              const SignVector* x0 = nullptr,
                              Engine engine = Engine::Auto,
                              const QpOptions& opts = {});

// delta - f/g; requires g < 0.
double newton_step(const ParametricPoint& p);

SolveOutput solve_classical(const ValidatedInstance& vi,
                            const SolveOptions& opts = {});
SolveOutput solve_lookahead(const ValidatedInstance& vi,
                            const SolveOptions& opts = {});

}  // namespace fracqp

#endif
