#ifndef FRACQP_ANALYSIS_HPP
#define FRACQP_ANALYSIS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fracqp/dinkelbach.hpp"

namespace fracqp {

// Bregman divergence D_f(delta_ref, delta) for concave f, evaluated from
// one point: f(delta) + sup_g * (delta_ref - delta) - f(delta_ref).
// Returns exactly 0 when delta == delta_ref.
double bregman(double delta_ref, double delta, double f_at_delta, double sup_g,
               double f_at_ref);

struct AnnotateOutcome {
  SolveTrace trace;
  bool annotated = false;
  std::string note;
};

// Fills the divergence column using exact sup-supergradients from
// brute-force argmin sets (sup g = -min over minimizers of x^T B x + beta).
// Requires n <= opts.brute_limit; otherwise returns the trace unchanged
// with a warning note.
AnnotateOutcome annotate_divergence(const SolveTrace& trace,
                                    const ValidatedInstance& vi,
                                    double delta_star,
                                    const QpOptions& opts = {});

struct LemmaViolation {
  int iter = 0;
  std::string what;
};

struct LemmaReport {
  bool lemma1 = true;            // monotone iterates + ratio inequality
  bool lemma3 = true;            // divergence nonnegative and nonincreasing
  std::optional<bool> lemma4;    // halving; look-ahead traces only
  std::vector<LemmaViolation> violations;

  bool all_ok() const { return lemma1 && lemma3 && lemma4.value_or(true); }
};

LemmaReport check_lemmas(const SolveTrace& trace, double tol = 1e-9);

struct ScalingRow {
  int n = 0;
  int runs = 0;
  double mean_iterations = 0.0;
  long max_iterations = 0;
  double ratio = 0.0;  // max_iterations / (n^2 log2 n)
};

std::vector<ScalingRow> iteration_scaling(
    const std::vector<std::pair<int, long>>& results);

std::string scaling_table_text(const std::vector<ScalingRow>& rows);

}  // namespace fracqp

#endif
