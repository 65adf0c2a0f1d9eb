#ifndef FRACQP_QP_HPP
#define FRACQP_QP_HPP

#include <optional>
#include <string>
#include <vector>

#include "fracqp/forms.hpp"

namespace fracqp {

enum class Engine { Auto, Brute, Rank1, Zonotope, FixEnum };

const char* engine_name(Engine e);
std::optional<Engine> engine_from_name(const std::string& name);

struct QpOptions {
  int brute_limit = 24;        // max n for exhaustive enumeration
  int cell_rank_budget = 6;    // max generator dimension for cell enumeration
  double pos_support_kappa = 1.0;  // positive-support bound kappa*log2(n)+c
  double pos_support_const = 4.0;
  int max_branch_bits = 10;    // cap on degenerate sign branching per candidate
};

// floor(kappa*log2(n) + c), clamped to [0, n].
int positive_support_bound(int n, const QpOptions& opts);

/// Linear objective addend 2 * coefficients^T x.
struct LinearTerm {
  std::vector<double> coefficients;
};

struct QpSolution {
  double min_value = 0.0;
  SignVector argmin;
  // Complete set of minimizers; populated by the brute engine only.
  std::vector<SignVector> argmin_set;
  Engine engine_used = Engine::Brute;
};

// Exhaustive oracle over all 2^n sign vectors (Gray-code incremental
// updates, deterministic first-best ordering starting from all-ones).
QpSolution solve_qp_brute(const GramForm& q, const LinearTerm* lin = nullptr,
                          const QpOptions& opts = {});

// Exact minimum of weight * (w^T x)^2. For weight > 0 the support of w
// must satisfy the positive-support bound. No constant term.
QpSolution solve_qp_rank1(double weight, const std::vector<double>& w,
                          const QpOptions& opts = {});

// Exact minimum of a concave form (all weights <= 0) plus optional linear
// term, via sign-cell enumeration of the (lifted) generator arrangement.
QpSolution solve_qp_zonotope(const GramForm& q, const LinearTerm* lin = nullptr,
                             const QpOptions& opts = {});

// Exact minimum when every positive-weight term is supported inside
// `support`: enumerates the 2^|support| assignments and solves a concave
// subproblem with induced linear term for each.
QpSolution solve_qp_fix_enum(const GramForm& q, const std::vector<int>& support,
                             const QpOptions& opts = {});

// Engine dispatch. Auto order: rank1 (single term), zonotope (all weights
// <= 0), fix_enum (positive supports within the log bound), brute
// (n <= brute_limit); otherwise throws EngineError naming the failed
// conditions.
QpSolution solve_qp(const GramForm& q, Engine engine = Engine::Auto,
                    const QpOptions& opts = {});

// Sign vectors covering every full-dimensional cell of the central
// arrangement {c : generators[i]^T c = 0}, antipodal pairs included.
// generators[i] is the i-th hypercube coordinate's vector in R^r.
std::vector<SignVector> enumerate_sign_cells(
    const std::vector<std::vector<double>>& generators,
    const QpOptions& opts = {});

}  // namespace fracqp

#endif
