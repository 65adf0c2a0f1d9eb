#include "fracqp/qp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "cell_walk.hpp"
#include "fracqp/errors.hpp"

namespace fracqp {

const char* engine_name(Engine e) {
  switch (e) {
    case Engine::Auto: return "auto";
    case Engine::Brute: return "brute";
    case Engine::Rank1: return "rank1";
    case Engine::Zonotope: return "zonotope";
    case Engine::FixEnum: return "fix_enum";
  }
  return "?";
}

std::optional<Engine> engine_from_name(const std::string& name) {
  if (name == "auto") return Engine::Auto;
  if (name == "brute") return Engine::Brute;
  if (name == "rank1") return Engine::Rank1;
  if (name == "zonotope") return Engine::Zonotope;
  if (name == "fix_enum" || name == "fix-enum") return Engine::FixEnum;
  return std::nullopt;
}

int positive_support_bound(int n, const QpOptions& opts) {
  const double b = opts.pos_support_kappa * std::log2(std::max(n, 2)) +
                   opts.pos_support_const;
  return std::clamp(static_cast<int>(std::floor(b)), 0, n);
}

namespace {

double exact_value(const GramForm& q, const LinearTerm* lin,
                   const SignVector& x) {
  double v = q.value(x);
  if (lin) v += 2.0 * dot_sign(lin->coefficients, x);
  return v;
}

int term_support_size(const GramTerm& t) {
  int s = 0;
  for (double v : t.vector) s += v != 0.0;
  return s;
}

}  // namespace

QpSolution solve_qp_brute(const GramForm& q, const LinearTerm* lin,
                          const QpOptions& opts) {
  const int n = q.dim;
  if (n > opts.brute_limit)
    throw EngineError("brute: n=" + std::to_string(n) + " exceeds limit " +
                      std::to_string(opts.brute_limit));
  if (n > 62) throw EngineError("brute: n too large for enumeration");
  const int r = static_cast<int>(q.terms.size());
  double scale = q.value_scale();
  if (lin)
    for (double c : lin->coefficients) scale += 2.0 * std::abs(c);

  // Coordinate-major copies of the term vectors for the Gray-code loop.
  std::vector<double> cols(static_cast<std::size_t>(n) * r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < n; ++i)
      cols[static_cast<std::size_t>(i) * r + j] = q.terms[j].vector[i];

  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<double> s(r);
  auto run = [&](auto&& consume) {
    for (int j = 0; j < r; ++j) {
      double a = 0.0;
      for (int i = 0; i < n; ++i) a += cols[static_cast<std::size_t>(i) * r + j];
      s[j] = a;
    }
    double t = 0.0;
    if (lin)
      for (int i = 0; i < n; ++i) t += lin->coefficients[i];
    std::uint64_t gray = 0;  // bit set => x_i = -1
    for (std::uint64_t step = 0;; ++step) {
      double v = q.constant + 2.0 * t;
      for (int j = 0; j < r; ++j) v += q.terms[j].weight * s[j] * s[j];
      consume(v, gray);
      if (step + 1 == total) break;
      const int bit = std::countr_zero(step + 1);
      const double flip = (gray >> bit) & 1u ? 2.0 : -2.0;  // new sign * 2
      gray ^= std::uint64_t{1} << bit;
      const double* wrow = cols.data() + static_cast<std::size_t>(bit) * r;
      for (int j = 0; j < r; ++j) s[j] += flip * wrow[j];
      if (lin) t += flip * lin->coefficients[bit];
    }
  };

  // Pass 1: minimum of the streamed values.
  double vmin = std::numeric_limits<double>::infinity();
  run([&](double v, std::uint64_t) { vmin = std::min(vmin, v); });

  // Pass 2: candidates within the collection window (identical stream).
  const double collect_tol = 1e-9 * (1.0 + scale);
  std::vector<std::uint64_t> masks;
  run([&](double v, std::uint64_t gray) {
    if (v <= vmin + collect_tol) masks.push_back(gray);
  });

  auto materialize = [&](std::uint64_t gray) {
    SignVector x(n);
    for (int i = 0; i < n; ++i) x[i] = (gray >> i) & 1u ? -1 : +1;
    return x;
  };

  // Refine with fresh evaluations; keep the exact tie set.
  double exact_min = std::numeric_limits<double>::infinity();
  std::vector<double> vals(masks.size());
  std::vector<SignVector> xs(masks.size());
  for (std::size_t i = 0; i < masks.size(); ++i) {
    xs[i] = materialize(masks[i]);
    vals[i] = exact_value(q, lin, xs[i]);
    exact_min = std::min(exact_min, vals[i]);
  }
  const double tie_tol = 1e-12 * (1.0 + scale);
  QpSolution sol;
  sol.engine_used = Engine::Brute;
  sol.min_value = exact_min;
  for (std::size_t i = 0; i < masks.size(); ++i) {
    if (vals[i] <= exact_min + tie_tol) {
      if (sol.argmin.empty()) sol.argmin = xs[i];
      sol.argmin_set.push_back(std::move(xs[i]));
    }
  }
  return sol;
}

QpSolution solve_qp_rank1(double weight, const std::vector<double>& w,
                          const QpOptions& opts) {
  const int n = static_cast<int>(w.size());
  QpSolution sol;
  sol.engine_used = Engine::Rank1;
  if (weight <= 0.0) {
    // Maximize |w^T x|: componentwise sign, sign(0) = +1.
    sol.argmin.assign(n, +1);
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      if (w[i] < 0.0) sol.argmin[i] = -1;
      s += std::abs(w[i]);
    }
    sol.min_value = weight * s * s;
    return sol;
  }
  std::vector<int> supp;
  for (int i = 0; i < n; ++i)
    if (w[i] != 0.0) supp.push_back(i);
  const int bound = positive_support_bound(n, opts);
  if (static_cast<int>(supp.size()) > bound)
    throw EngineError("rank1: positive weight with support " +
                      std::to_string(supp.size()) + " > bound " +
                      std::to_string(bound));
  const std::uint64_t total = std::uint64_t{1} << supp.size();
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t best_mask = 0;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    double s = 0.0;
    for (std::size_t b = 0; b < supp.size(); ++b)
      s += (mask >> b) & 1u ? -w[supp[b]] : w[supp[b]];
    const double v = weight * s * s;
    if (v < best) {
      best = v;
      best_mask = mask;
    }
  }
  sol.min_value = best;
  sol.argmin.assign(n, +1);
  for (std::size_t b = 0; b < supp.size(); ++b)
    if ((best_mask >> b) & 1u) sol.argmin[supp[b]] = -1;
  return sol;
}

namespace {

struct MinVisitor {
  const std::vector<double>& weights;  // one per generator column
  int lift_col;                        // -1 if no linear lift
  double best = std::numeric_limits<double>::infinity();
  SignVector best_x;

  void operator()(const detail::CellWalker& w, const double* y,
                  std::uint64_t) {
    double v = 0.0;
    const int r = static_cast<int>(weights.size());
    for (int j = 0; j < r; ++j) v += weights[j] * y[j] * y[j];
    if (lift_col >= 0) v += 2.0 * y[lift_col];
    if (v < best) {
      best = v;
      w.materialize(best_x);
    }
  }
};

detail::CellGens pack_generators(const GramForm& q, const LinearTerm* lin) {
  detail::CellGens g;
  g.n = q.dim;
  g.r = static_cast<int>(q.terms.size()) + (lin ? 1 : 0);
  g.rows.assign(static_cast<std::size_t>(g.n) * g.r, 0.0);
  for (std::size_t j = 0; j < q.terms.size(); ++j)
    for (int i = 0; i < g.n; ++i)
      g.rows[static_cast<std::size_t>(i) * g.r + j] = q.terms[j].vector[i];
  if (lin)
    for (int i = 0; i < g.n; ++i)
      g.rows[static_cast<std::size_t>(i) * g.r + g.r - 1] =
          lin->coefficients[i];
  return g;
}

}  // namespace

QpSolution solve_qp_zonotope(const GramForm& q, const LinearTerm* lin,
                             const QpOptions& opts) {
  for (const auto& t : q.terms)
    if (t.weight > 0.0)
      throw EngineError("zonotope: strictly positive weight present");
  if (lin && static_cast<int>(lin->coefficients.size()) != q.dim)
    throw EngineError("zonotope: linear term dimension mismatch");
  bool lift = false;
  if (lin)
    for (double c : lin->coefficients) lift = lift || c != 0.0;
  const int r = static_cast<int>(q.terms.size()) + (lift ? 1 : 0);
  if (r > opts.cell_rank_budget)
    throw EngineError("zonotope: " + std::to_string(r) +
                      " generators exceed rank budget " +
                      std::to_string(opts.cell_rank_budget));

  detail::CellGens gens = pack_generators(q, lift ? lin : nullptr);
  std::vector<double> weights;
  for (const auto& t : q.terms) weights.push_back(t.weight);
  if (lift) weights.push_back(0.0);
  MinVisitor vis{weights, lift ? r - 1 : -1};
  // The linear lift breaks sign symmetry, so both cones of each antipodal
  // pair must be evaluated.
  detail::CellWalker walker(gens, opts.max_branch_bits, lift);
  walker.run(vis);

  QpSolution sol;
  sol.engine_used = Engine::Zonotope;
  sol.argmin = std::move(vis.best_x);
  sol.min_value = exact_value(q, lin, sol.argmin);
  return sol;
}

QpSolution solve_qp_fix_enum(const GramForm& q, const std::vector<int>& support,
                             const QpOptions& opts) {
  const int n = q.dim;
  std::vector<int> s(support);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  for (int i : s)
    if (i < 0 || i >= n) throw EngineError("fix_enum: support index out of range");
  const int bound = positive_support_bound(n, opts);
  if (static_cast<int>(s.size()) > bound)
    throw EngineError("fix_enum: |support|=" + std::to_string(s.size()) +
                      " > bound " + std::to_string(bound));
  std::vector<bool> in_s(n, false);
  for (int i : s) in_s[i] = true;
  for (const auto& t : q.terms) {
    if (t.weight <= 0.0) continue;
    for (int i = 0; i < n; ++i)
      if (t.vector[i] != 0.0 && !in_s[i])
        throw EngineError(
            "fix_enum: positive-weight term supported outside the fixed set");
  }

  std::vector<int> rest;
  for (int i = 0; i < n; ++i)
    if (!in_s[i]) rest.push_back(i);
  const int nr = static_cast<int>(rest.size());

  QpSolution best;
  best.engine_used = Engine::FixEnum;
  best.min_value = std::numeric_limits<double>::infinity();

  const std::uint64_t total = std::uint64_t{1} << s.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    SignVector xs(s.size());
    for (std::size_t b = 0; b < s.size(); ++b)
      xs[b] = (mask >> b) & 1u ? -1 : +1;

    GramForm reduced;
    reduced.dim = nr;
    reduced.constant = q.constant;
    LinearTerm lin;
    lin.coefficients.assign(nr, 0.0);
    bool any_lin = false;
    for (const auto& t : q.terms) {
      double c = 0.0;
      for (std::size_t b = 0; b < s.size(); ++b)
        c += t.vector[s[b]] * (xs[b] > 0 ? 1.0 : -1.0);
      reduced.constant += t.weight * c * c;
      if (t.weight > 0.0) continue;  // fully fixed: constant only
      GramTerm rt;
      rt.weight = t.weight;
      rt.vector.resize(nr);
      for (int i = 0; i < nr; ++i) rt.vector[i] = t.vector[rest[i]];
      reduced.terms.push_back(std::move(rt));
      const double lc = t.weight * c;
      if (lc != 0.0) {
        any_lin = true;
        for (int i = 0; i < nr; ++i)
          lin.coefficients[i] += lc * t.vector[rest[i]];
      }
    }
    QpSolution sub = solve_qp_zonotope(reduced, any_lin ? &lin : nullptr, opts);
    if (sub.min_value < best.min_value) {
      best.min_value = sub.min_value;
      best.argmin.assign(n, +1);
      for (std::size_t b = 0; b < s.size(); ++b) best.argmin[s[b]] = xs[b];
      for (int i = 0; i < nr; ++i) best.argmin[rest[i]] = sub.argmin[i];
    }
  }
  best.min_value = exact_value(q, nullptr, best.argmin);
  return best;
}

QpSolution solve_qp(const GramForm& q, Engine engine, const QpOptions& opts) {
  if (engine == Engine::Brute) return solve_qp_brute(q, nullptr, opts);
  if (engine == Engine::Rank1) {
    if (q.terms.size() != 1)
      throw EngineError("rank1: form has " + std::to_string(q.terms.size()) +
                        " terms");
    QpSolution sol = solve_qp_rank1(q.terms[0].weight, q.terms[0].vector, opts);
    sol.min_value += q.constant;
    return sol;
  }
  if (engine == Engine::Zonotope) return solve_qp_zonotope(q, nullptr, opts);

  std::vector<int> pos_support;
  {
    std::set<int> su;
    for (const auto& t : q.terms)
      if (t.weight > 0.0)
        for (int i = 0; i < q.dim; ++i)
          if (t.vector[i] != 0.0) su.insert(i);
    pos_support.assign(su.begin(), su.end());
  }
  if (engine == Engine::FixEnum) return solve_qp_fix_enum(q, pos_support, opts);

  // Auto dispatch.
  std::string reasons;
  if (q.terms.size() == 1) {
    const auto& t = q.terms[0];
    if (t.weight <= 0.0 ||
        term_support_size(t) <= positive_support_bound(q.dim, opts)) {
      QpSolution sol = solve_qp_rank1(t.weight, t.vector, opts);
      sol.min_value += q.constant;
      return sol;
    }
    reasons += " rank1: positive support over bound;";
  } else {
    reasons += " rank1: not a single term;";
  }

  const bool all_nonpos =
      std::all_of(q.terms.begin(), q.terms.end(),
                  [](const GramTerm& t) { return t.weight <= 0.0; });
  const int nterms = static_cast<int>(q.terms.size());
  if (all_nonpos && nterms <= opts.cell_rank_budget)
    return solve_qp_zonotope(q, nullptr, opts);
  if (!all_nonpos)
    reasons += " zonotope: positive weight present;";
  else
    reasons += " zonotope: rank budget exceeded;";

  if (!all_nonpos) {
    if (static_cast<int>(pos_support.size()) <=
        positive_support_bound(q.dim, opts)) {
      int nonpos = 0;
      for (const auto& t : q.terms) nonpos += t.weight <= 0.0;
      if (nonpos + 1 <= opts.cell_rank_budget)
        return solve_qp_fix_enum(q, pos_support, opts);
      reasons += " fix_enum: rank budget exceeded;";
    } else {
      reasons += " fix_enum: positive supports over log bound;";
    }
  }

  if (q.dim <= opts.brute_limit) return solve_qp_brute(q, nullptr, opts);
  reasons += " brute: n=" + std::to_string(q.dim) + " over limit " +
             std::to_string(opts.brute_limit) + ";";

  throw EngineError("no exact engine applicable:" + reasons);
}

std::vector<SignVector> enumerate_sign_cells(
    const std::vector<std::vector<double>>& generators, const QpOptions& opts) {
  const int n = static_cast<int>(generators.size());
  if (n == 0) return {};
  const int r = static_cast<int>(generators[0].size());
  if (r < 1) throw EngineError("enumerate_sign_cells: r must be >= 1");
  if (r > opts.cell_rank_budget)
    throw EngineError("enumerate_sign_cells: r=" + std::to_string(r) +
                      " exceeds rank budget " +
                      std::to_string(opts.cell_rank_budget));
  detail::CellGens g;
  g.n = n;
  g.r = r;
  g.rows.assign(static_cast<std::size_t>(n) * r, 0.0);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(generators[i].size()) != r)
      throw EngineError("enumerate_sign_cells: ragged generator list");
    std::copy(generators[i].begin(), generators[i].end(), g.rows.data() + static_cast<std::size_t>(i) * r);
  }

  std::set<SignVector> cells;
  SignVector buf, neg;
  auto vis = [&](const detail::CellWalker& w, const double*, std::uint64_t) {
    w.materialize(buf);
    neg.resize(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) neg[i] = -buf[i];
    cells.insert(buf);
    cells.insert(neg);
  };
  detail::CellWalker walker(g, opts.max_branch_bits);
  walker.run(vis);

  // Coordinates with an all-zero generator take both signs.
  std::vector<int> zeros;
  for (int i = 0; i < n; ++i) {
    bool nz = false;
    for (int j = 0; j < r; ++j) nz = nz || g.rows[static_cast<std::size_t>(i) * r + j] != 0.0;
    if (!nz) zeros.push_back(i);
  }
  if (!zeros.empty()) {
    if (static_cast<int>(zeros.size()) > opts.max_branch_bits)
      zeros.resize(opts.max_branch_bits);
    std::set<SignVector> expanded;
    for (const auto& base : cells) {
      const std::uint64_t total = std::uint64_t{1} << zeros.size();
      for (std::uint64_t mask = 0; mask < total; ++mask) {
        SignVector x = base;
        for (std::size_t b = 0; b < zeros.size(); ++b)
          x[zeros[b]] = (mask >> b) & 1u ? -1 : +1;
        expanded.insert(std::move(x));
      }
    }
    cells.swap(expanded);
  }
  return {cells.begin(), cells.end()};
}

}  // namespace fracqp
