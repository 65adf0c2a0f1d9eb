#include "fracqp/dinkelbach.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <memory>
#include <stdexcept>

#include "cell_walk.hpp"
#include "envelope.hpp"
#include "fracqp/errors.hpp"

namespace fracqp {

const char* branch_name(TraceBranch b) {
  switch (b) {
    case TraceBranch::Init: return "init";
    case TraceBranch::Newton: return "newton";
    case TraceBranch::Lookahead: return "lookahead";
  }
  return "?";
}

std::optional<TraceBranch> branch_from_name(const std::string& name) {
  if (name == "init") return TraceBranch::Init;
  if (name == "newton") return TraceBranch::Newton;
  if (name == "lookahead") return TraceBranch::Lookahead;
  return std::nullopt;
}

ParametricPoint eval_parametric(const ValidatedInstance& vi, double delta,
                                Engine engine, const QpOptions& opts) {
  const ProblemInstance& inst = vi.inst;
  // Negative delta voids the merged-diagonal sign guarantees, so auto
  // dispatch only trusts the oracle engine there.
  const Engine eng =
      delta < 0.0 && engine == Engine::Auto ? Engine::Brute : engine;
  GramForm merged =
      merge_parametric(inst.A, inst.alpha, inst.B, inst.beta, delta);
  QpSolution sol = solve_qp(merged, eng, opts);
  ParametricPoint p;
  p.delta = delta;
  p.f_value = sol.min_value;
  p.argmin = std::move(sol.argmin);
  p.supergradient = -inst.denominator(p.argmin);
  p.engine = sol.engine_used;
  return p;
}

ParametricPoint initial_point(const ValidatedInstance& vi, const SignVector* x0,
                              Engine engine, const QpOptions& opts) {
  const ProblemInstance& inst = vi.inst;
  SignVector start = x0 ? *x0 : SignVector(inst.n, +1);
  if (static_cast<int>(start.size()) != inst.n)
    throw ValidationError("initial_point: x0 has wrong dimension");
  const double delta1 = std::max(0.0, inst.ratio(start));
  return eval_parametric(vi, delta1, engine, opts);
}

double newton_step(const ParametricPoint& p) {
  if (!(p.supergradient < 0.0))
    throw std::invalid_argument("newton_step: supergradient must be negative");
  return p.delta - p.f_value / p.supergradient;
}

namespace {

class Evaluator {
public:
  virtual ~Evaluator() = default;
  virtual ParametricPoint eval(double delta) = 0;
};

class PlainEvaluator final : public Evaluator {
public:
  PlainEvaluator(const ValidatedInstance& vi, Engine engine,
                 const QpOptions& opts)
      : vi_(vi), engine_(engine), opts_(opts) {}
  ParametricPoint eval(double delta) override {
    return eval_parametric(vi_, delta, engine_, opts_);
  }

private:
  const ValidatedInstance& vi_;
  Engine engine_;
  QpOptions opts_;
};

struct InstanceStructure {
  bool zonotope_uniform = false;  // merged weights <= 0 for every delta >= 0
  bool fix_enum_uniform = false;
  std::vector<int> fixed_set;  // supports of A-positive and B-negative pairs
};

InstanceStructure analyze(const ProblemInstance& inst, const QpOptions& opts) {
  InstanceStructure s;
  const bool a_nsd =
      std::all_of(inst.A.pairs.begin(), inst.A.pairs.end(),
                  [](const EigenPair& p) { return p.eigenvalue <= 0.0; });
  const bool b_psd =
      std::all_of(inst.B.pairs.begin(), inst.B.pairs.end(),
                  [](const EigenPair& p) { return p.eigenvalue >= 0.0; });
  const int r_total =
      static_cast<int>(inst.A.pairs.size() + inst.B.pairs.size());
  s.zonotope_uniform = a_nsd && b_psd && r_total <= opts.cell_rank_budget;
  if (s.zonotope_uniform) return s;

  std::vector<bool> in(inst.n, false);
  int reduced_rank = 0;
  for (const auto& p : inst.A.pairs) {
    if (p.eigenvalue > 0.0) {
      for (int i = 0; i < inst.n; ++i)
        if (p.vector[i] != 0.0) in[i] = true;
    } else {
      ++reduced_rank;
    }
  }
  for (const auto& p : inst.B.pairs) {
    if (p.eigenvalue < 0.0) {
      for (int i = 0; i < inst.n; ++i)
        if (p.vector[i] != 0.0) in[i] = true;
    } else {
      ++reduced_rank;
    }
  }
  for (int i = 0; i < inst.n; ++i)
    if (in[i]) s.fixed_set.push_back(i);
  s.fix_enum_uniform = !s.fixed_set.empty() &&
                       static_cast<int>(s.fixed_set.size()) <=
                           positive_support_bound(inst.n, opts) &&
                       reduced_rank <= opts.cell_rank_budget;
  return s;
}

// Piecewise-linear profile of f(delta) over [0, inf): the lower envelope of
// lines p - delta*q (p = x^T A x, q = x^T B x) across all candidate sign
// vectors, built from one sign-cell enumeration and queried per iterate.
class ProfileEvaluator final : public Evaluator {
public:
  ProfileEvaluator(const ValidatedInstance& vi, Engine label)
      : inst_(vi.inst), label_(label) {}

  // Two-step insert so callers only materialize sign vectors for kept
  // candidates: a true return must be followed by commit().
  bool offer(double q, double p) {
    const bool kept =
        env_.offer(q, p, ordinal_, static_cast<std::int64_t>(store_.size()));
    ++ordinal_;
    return kept;
  }
  void commit(const SignVector& x) { store_.push_back(x); }

  // Exact recomputation of the kept lines; drops incremental float drift.
  void finalize() {
    detail::LowerEnvelope exact;
    for (const auto& l : env_.lines()) {
      const SignVector& x = store_[static_cast<std::size_t>(l.payload)];
      exact.offer(inst_.B.quad(x), inst_.A.quad(x), l.ordinal, l.payload);
    }
    pieces_.clear();
    for (const auto& l : exact.lines())
      pieces_.push_back({l.q, l.p, store_[static_cast<std::size_t>(l.payload)]});
    env_ = exact;  // index-aligned with pieces_
    store_.clear();
  }

  std::size_t piece_count() const { return pieces_.size(); }

  ParametricPoint eval(double delta) override {
    const Piece& pc = pieces_[env_.active_piece(delta)];
    ParametricPoint p;
    p.delta = delta;
    p.f_value = (pc.p + inst_.alpha) - delta * (pc.q + inst_.beta);
    p.argmin = pc.x;
    p.supergradient = -(pc.q + inst_.beta);
    p.engine = label_;
    return p;
  }

private:
  struct Piece {
    double q, p;
    SignVector x;
  };

  const ProblemInstance& inst_;
  Engine label_;
  detail::LowerEnvelope env_;
  std::deque<SignVector> store_;
  std::uint64_t ordinal_ = 0;
  std::vector<Piece> pieces_;
};

std::unique_ptr<ProfileEvaluator> build_zonotope_profile(
    const ValidatedInstance& vi, const QpOptions& opts) {
  const ProblemInstance& inst = vi.inst;
  const int ra = static_cast<int>(inst.A.pairs.size());
  const int rb = static_cast<int>(inst.B.pairs.size());
  const int r = ra + rb;
  auto prof = std::make_unique<ProfileEvaluator>(vi, Engine::Zonotope);
  if (r == 0) {
    if (prof->offer(0.0, 0.0)) prof->commit(SignVector(inst.n, +1));
    prof->finalize();
    return prof;
  }

  detail::CellGens gens;
  gens.n = inst.n;
  gens.r = r;
  gens.rows.assign(static_cast<std::size_t>(inst.n) * r, 0.0);
  std::vector<double> wa(r, 0.0), wb(r, 0.0);
  for (int j = 0; j < ra; ++j) {
    wa[j] = inst.A.pairs[j].eigenvalue;
    for (int i = 0; i < inst.n; ++i)
      gens.rows[static_cast<std::size_t>(i) * r + j] = inst.A.pairs[j].vector[i];
  }
  for (int j = 0; j < rb; ++j) {
    wb[ra + j] = inst.B.pairs[j].eigenvalue;
    for (int i = 0; i < inst.n; ++i)
      gens.rows[static_cast<std::size_t>(i) * r + ra + j] =
          inst.B.pairs[j].vector[i];
  }

  SignVector buf;
  auto vis = [&](const detail::CellWalker& w, const double* y, std::uint64_t) {
    double p = 0.0, q = 0.0;
    for (int j = 0; j < ra; ++j) p += wa[j] * y[j] * y[j];
    for (int j = ra; j < r; ++j) q += wb[j] * y[j] * y[j];
    if (prof->offer(q, p)) {
      w.materialize(buf);
      prof->commit(buf);
    }
  };
  detail::CellWalker walker(gens, opts.max_branch_bits);
  walker.run(vis);
  prof->finalize();
  return prof;
}

std::unique_ptr<ProfileEvaluator> build_fix_enum_profile(
    const ValidatedInstance& vi, const std::vector<int>& fixed,
    const QpOptions& opts) {
  const ProblemInstance& inst = vi.inst;
  const int n = inst.n;
  std::vector<bool> in(n, false);
  for (int i : fixed) in[i] = true;
  std::vector<int> rest;
  for (int i = 0; i < n; ++i)
    if (!in[i]) rest.push_back(i);
  const int nr = static_cast<int>(rest.size());

  // Free pairs keep a generator column; fixed-side pairs (A-positive,
  // B-negative; supports inside `fixed`) only contribute per-assignment
  // constants.
  struct PairRef {
    double weight;
    const std::vector<double>* vec;
    bool is_a;
    int col;  // -1 when fully fixed
  };
  std::vector<PairRef> pairs;
  int cols = 0;
  for (const auto& p : inst.A.pairs)
    pairs.push_back({p.eigenvalue, &p.vector, true,
                     p.eigenvalue > 0.0 ? -1 : cols++});
  for (const auto& p : inst.B.pairs)
    pairs.push_back({p.eigenvalue, &p.vector, false,
                     p.eigenvalue < 0.0 ? -1 : cols++});

  detail::CellGens gens;
  gens.n = nr;
  gens.r = cols;
  gens.rows.assign(static_cast<std::size_t>(std::max(nr, 1)) * std::max(cols, 1),
                   0.0);
  for (const auto& pr : pairs) {
    if (pr.col < 0) continue;
    for (int i = 0; i < nr; ++i)
      gens.rows[static_cast<std::size_t>(i) * cols + pr.col] =
          (*pr.vec)[rest[i]];
  }

  // Per-assignment fixed-part inner products c_j = w_{j,S}^T x_S.
  const std::uint64_t nmask = std::uint64_t{1} << fixed.size();
  std::vector<std::vector<double>> cshift(pairs.size());
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    cshift[j].resize(nmask);
    for (std::uint64_t mask = 0; mask < nmask; ++mask) {
      double c = 0.0;
      for (std::size_t b = 0; b < fixed.size(); ++b) {
        const double w = (*pairs[j].vec)[fixed[b]];
        c += (mask >> b) & 1u ? -w : w;
      }
      cshift[j][mask] = c;
    }
  }

  auto prof = std::make_unique<ProfileEvaluator>(vi, Engine::FixEnum);
  SignVector buf, full(n);
  auto emit_mask = [&](const detail::CellWalker* w, const double* y,
                       std::uint64_t mask) {
    double p = 0.0, q = 0.0;
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      const double z = (pairs[j].col >= 0 && y) ? y[pairs[j].col] : 0.0;
      const double t = cshift[j][mask] + z;
      if (pairs[j].is_a)
        p += pairs[j].weight * t * t;
      else
        q += pairs[j].weight * t * t;
    }
    if (prof->offer(q, p)) {
      if (w)
        w->materialize(buf);
      else
        buf.assign(nr, +1);
      for (int i = 0; i < nr; ++i) full[rest[i]] = buf[i];
      for (std::size_t b = 0; b < fixed.size(); ++b)
        full[fixed[b]] = (mask >> b) & 1u ? -1 : +1;
      prof->commit(full);
    }
  };

  if (cols == 0 || nr == 0) {
    for (std::uint64_t mask = 0; mask < nmask; ++mask)
      emit_mask(nullptr, nullptr, mask);
  } else {
    auto vis = [&](const detail::CellWalker& w, const double* y,
                   std::uint64_t) {
      for (std::uint64_t mask = 0; mask < nmask; ++mask) emit_mask(&w, y, mask);
    };
    detail::CellWalker walker(gens, opts.max_branch_bits);
    walker.run(vis);
  }
  prof->finalize();
  return prof;
}

std::unique_ptr<Evaluator> make_evaluator(const ValidatedInstance& vi,
                                          const SolveOptions& opts,
                                          Engine* label) {
  const InstanceStructure s = analyze(vi.inst, opts.qp);
  const Engine eng = opts.engine;
  *label = eng;
  if (opts.parametric_cache) {
    if ((eng == Engine::Auto || eng == Engine::Zonotope) && s.zonotope_uniform) {
      *label = Engine::Zonotope;
      return build_zonotope_profile(vi, opts.qp);
    }
    if ((eng == Engine::Auto || eng == Engine::FixEnum) && s.fix_enum_uniform) {
      *label = Engine::FixEnum;
      return build_fix_enum_profile(vi, s.fixed_set, opts.qp);
    }
  }
  return std::make_unique<PlainEvaluator>(vi, eng, opts.qp);
}

long iteration_cap(int n, long requested) {
  if (requested > 0) return requested;
  const double nn = static_cast<double>(std::max(n, 2));
  return static_cast<long>(10.0 * nn * nn * std::log2(nn)) + 64;
}

SolveOutput drive(const ValidatedInstance& vi, const SolveOptions& opts,
                  bool lookahead) {
  const ProblemInstance& inst = vi.inst;
  Engine label = opts.engine;
  std::unique_ptr<Evaluator> ev = make_evaluator(vi, opts, &label);

  SignVector x0 = opts.x0.value_or(SignVector(inst.n, +1));
  if (static_cast<int>(x0.size()) != inst.n)
    throw ValidationError("solve: x0 has wrong dimension");
  const double delta1 = std::max(0.0, inst.ratio(x0));
  const double tol_abs = opts.tol * (1.0 + std::abs(inst.alpha) +
                                     delta1 * (1.0 + std::abs(inst.beta)));

  SolveOutput out;
  out.trace.lookahead = lookahead;
  long calls = 0, accepts = 0;
  const long cap = iteration_cap(inst.n, opts.max_iterations);

  ParametricPoint p = ev->eval(delta1);
  ++calls;
  out.trace.rows.push_back({1, p.delta, p.f_value, p.supergradient,
                            TraceBranch::Init, p.engine, {}, {}});

  while (p.f_value < -tol_abs) {
    if (static_cast<long>(out.trace.rows.size()) > cap)
      throw std::runtime_error("solver exceeded the iteration cap");
    const double dn = newton_step(p);
    if (!(dn < p.delta))
      throw std::runtime_error("newton step stalled (no progress in double "
                               "precision)");
    ParametricPoint pn = ev->eval(dn);
    ++calls;
    bool accepted = false;
    if (lookahead) {
      const double dg = std::max(2.0 * dn - p.delta, 0.0);
      ParametricPoint pg = ev->eval(dg);
      ++calls;
      if (pg.f_value < -tol_abs && pg.supergradient < 0.0) {
        p = std::move(pg);
        ++accepts;
        accepted = true;
      }
    }
    if (!accepted) p = std::move(pn);
    out.trace.rows.push_back({static_cast<int>(out.trace.rows.size()) + 1,
                              p.delta, p.f_value, p.supergradient,
                              accepted ? TraceBranch::Lookahead
                                       : TraceBranch::Newton,
                              p.engine, {}, {}});
  }

  out.result.delta_star = p.delta;
  out.result.x_star = p.argmin;
  out.result.iterations = static_cast<long>(out.trace.rows.size());
  out.result.subproblem_calls = calls;
  out.result.lookahead_accepts = accepts;
  out.result.engine_used = p.engine;
  return out;
}

}  // namespace

SolveOutput solve_classical(const ValidatedInstance& vi,
                            const SolveOptions& opts) {
  return drive(vi, opts, false);
}

SolveOutput solve_lookahead(const ValidatedInstance& vi,
                            const SolveOptions& opts) {
  return drive(vi, opts, true);
}

}  // namespace fracqp
