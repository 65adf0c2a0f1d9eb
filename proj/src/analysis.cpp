#include "fracqp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace fracqp {

double bregman(double delta_ref, double delta, double f_at_delta, double sup_g,
               double f_at_ref) {
  if (delta == delta_ref) return 0.0;
  return f_at_delta + sup_g * (delta_ref - delta) - f_at_ref;
}

AnnotateOutcome annotate_divergence(const SolveTrace& trace,
                                    const ValidatedInstance& vi,
                                    double delta_star, const QpOptions& opts) {
  AnnotateOutcome out;
  out.trace = trace;
  const ProblemInstance& inst = vi.inst;
  if (inst.n > opts.brute_limit) {
    out.annotated = false;
    out.note = "divergence column omitted: n=" + std::to_string(inst.n) +
               " exceeds the brute-force limit " +
               std::to_string(opts.brute_limit) +
               " needed for exact sup-supergradients";
    return out;
  }

  auto solve_at = [&](double delta) {
    return solve_qp_brute(
        merge_parametric(inst.A, inst.alpha, inst.B, inst.beta, delta), nullptr,
        opts);
  };
  const double f_ref = solve_at(delta_star).min_value;

  for (TraceRow& row : out.trace.rows) {
    QpSolution sol = solve_at(row.delta);
    double denom_min = std::numeric_limits<double>::infinity();
    for (const SignVector& x : sol.argmin_set)
      denom_min = std::min(denom_min, inst.denominator(x));
    const double sup_g = -denom_min;
    row.sup_g = sup_g;
    row.divergence =
        bregman(delta_star, row.delta, sol.min_value, sup_g, f_ref);
  }
  out.annotated = true;
  return out;
}

LemmaReport check_lemmas(const SolveTrace& trace, double tol) {
  LemmaReport rep;
  const auto& rows = trace.rows;
  auto flag = [&](bool& ok, int iter, const std::string& what) {
    ok = false;
    rep.violations.push_back({iter, what});
  };

  for (std::size_t i = 1; i < rows.size(); ++i) {
    const TraceRow& a = rows[i - 1];
    const TraceRow& b = rows[i];
    std::ostringstream what;
    if (!(b.delta < a.delta))
      flag(rep.lemma1, b.iter, "delta not strictly decreasing");
    if (!(b.f > a.f)) flag(rep.lemma1, b.iter, "f not strictly increasing");
    const double gscale = std::max(1.0, std::abs(a.g));
    if (b.g < a.g - tol * gscale)
      flag(rep.lemma1, b.iter, "supergradient decreased");
    if (a.f < 0.0) {
      const double lhs = b.f / a.f + b.g / a.g;
      if (!(lhs <= 1.0 + tol)) {
        what << "ratio inequality violated: f_i/f_{i-1} + g_i/g_{i-1} = "
             << lhs;
        flag(rep.lemma1, b.iter, what.str());
      }
    }
  }

  const bool have_div =
      !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const TraceRow& r) {
        return r.divergence.has_value();
      });
  if (have_div) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double d = *rows[i].divergence;
      if (d < -tol)
        flag(rep.lemma3, rows[i].iter, "negative Bregman divergence");
      if (i >= 1 && d > *rows[i - 1].divergence + tol)
        flag(rep.lemma3, rows[i].iter, "divergence increased");
    }
    if (trace.lookahead) {
      rep.lemma4 = true;
      for (std::size_t i = 2; i < rows.size(); ++i) {
        const double d = *rows[i].divergence;
        const double d2 = *rows[i - 2].divergence;
        if (!(d < 0.5 * d2 + tol)) {
          std::ostringstream what;
          what << "halving violated: D_i=" << d << " vs D_{i-2}/2=" << 0.5 * d2;
          bool ok = true;
          flag(ok, rows[i].iter, what.str());
          rep.lemma4 = false;
        }
      }
    }
  }
  return rep;
}

std::vector<ScalingRow> iteration_scaling(
    const std::vector<std::pair<int, long>>& results) {
  std::map<int, std::pair<long, std::pair<double, int>>> by_n;  // n -> (max, (sum, cnt))
  for (const auto& [n, iters] : results) {
    auto& e = by_n[n];
    e.first = std::max(e.first, iters);
    e.second.first += static_cast<double>(iters);
    e.second.second += 1;
  }
  std::vector<ScalingRow> rows;
  for (const auto& [n, e] : by_n) {
    ScalingRow r;
    r.n = n;
    r.runs = e.second.second;
    r.mean_iterations = e.second.first / e.second.second;
    r.max_iterations = e.first;
    const double nn = std::max(n, 2);
    r.ratio = static_cast<double>(e.first) / (nn * nn * std::log2(nn));
    rows.push_back(r);
  }
  return rows;
}

std::string scaling_table_text(const std::vector<ScalingRow>& rows) {
  std::ostringstream os;
  os << "n      runs   mean_iters   max_iters   iters/(n^2 log2 n)\n";
  for (const auto& r : rows) {
    os << r.n << "\t" << r.runs << "\t" << r.mean_iterations << "\t"
       << r.max_iterations << "\t" << r.ratio << "\n";
  }
  return os.str();
}

}  // namespace fracqp
