#include <doctest.h>

#include <cmath>

#include "fracqp/dinkelbach.hpp"
#include "fracqp/errors.hpp"
#include "fracqp/generator.hpp"
#include "oracles.hpp"

using namespace fracqp;

namespace {

// n=2, A = {(-1, e1)}, alpha=2, B = {(+1, e2)}, beta=1: constant ratio 1/2,
// f(delta) = 1 - 2*delta.
ValidatedInstance trivial_instance() {
  ProblemInstance inst;
  inst.n = 2;
  inst.alpha = 2.0;
  inst.beta = 1.0;
  inst.A = EigenForm{2, {{-1.0, {1.0, 0.0}}}};
  inst.B = EigenForm{2, {{+1.0, {0.0, 1.0}}}};
  return validate_instance(inst);
}

// n=2, A = {(1.5, (1,-1)/sqrt2)}, alpha=0,
// B = {(0.5, (1,1)/sqrt2), (2, (1,-1)/sqrt2)}, beta=0:
// vertex data (num, den) = (0, 1) and (3, 4), so f(delta) = min(-d, 3-4d).
ValidatedInstance two_piece_instance() {
  const double s = 1.0 / std::sqrt(2.0);
  ProblemInstance inst;
  inst.n = 2;
  inst.alpha = 0.0;
  inst.beta = 0.0;
  inst.A = EigenForm{2, {{1.5, {s, -s}}}};
  inst.B = EigenForm{2, {{0.5, {s, s}}, {2.0, {s, -s}}}};
  return validate_instance(inst);
}

}  // namespace

TEST_CASE("eval_parametric on the worked examples") {
  ValidatedInstance triv = trivial_instance();
  ParametricPoint p = eval_parametric(triv, 0.5);
  CHECK(p.f_value == doctest::Approx(0.0));
  CHECK(p.supergradient == doctest::Approx(-2.0));

  ParametricPoint p0 = eval_parametric(triv, 0.0);
  CHECK(p0.f_value == doctest::Approx(1.0));
  CHECK(p0.supergradient == doctest::Approx(-2.0));

  ValidatedInstance two = two_piece_instance();
  ParametricPoint q = eval_parametric(two, 0.75);
  CHECK(q.f_value == doctest::Approx(-0.75));
  CHECK(q.supergradient == doctest::Approx(-1.0));
  CHECK(q.argmin[0] == q.argmin[1]);  // the (num,den)=(0,1) vertex family

  // Piecewise shape: f(2) = min(-2, -5) = -5, slope -4 piece.
  ParametricPoint q2 = eval_parametric(two, 2.0);
  CHECK(q2.f_value == doctest::Approx(-5.0));
  CHECK(q2.supergradient == doctest::Approx(-4.0));
}

TEST_CASE("eval_parametric agrees with plain enumeration at random deltas") {
  oracle::TestRng rng(71);
  for (int rep = 0; rep < 25; ++rep) {
    FamilySpec spec;
    spec.family = rep % 2 ? Family::NsdPsd : Family::AdversarialPieces;
    spec.n = 4 + rng.index(7);
    spec.r_a = 1 + rng.index(2);
    spec.r_b = 1 + rng.index(2);
    spec.seed = 1000 + rep;
    NormalizedInstance ni = generate(spec);
    for (double delta : {0.0, 0.3, 1.7}) {
      ParametricPoint p = eval_parametric(ni.vi, delta);
      CHECK(p.f_value ==
            doctest::Approx(oracle::brute_f(ni.vi.inst, delta)).epsilon(1e-9));
      // Supergradient property at sampled deltas.
      for (double d2 : {delta + 0.5, delta - 0.5, delta + 2.0}) {
        const double fd2 = oracle::brute_f(ni.vi.inst, d2);
        CHECK(fd2 <= p.f_value + p.supergradient * (d2 - delta) + 1e-9);
      }
    }
  }
}

TEST_CASE("eval_parametric downgrades to brute for negative delta") {
  ValidatedInstance two = two_piece_instance();
  ParametricPoint p = eval_parametric(two, -0.5);
  CHECK(p.engine == Engine::Brute);
  CHECK(p.f_value == doctest::Approx(0.5));  // min(0.5, 5) on the two lines
}

TEST_CASE("initial_point guarantees a nonpositive start") {
  ValidatedInstance two = two_piece_instance();
  SignVector x0{+1, -1};
  ParametricPoint p = initial_point(two, &x0);
  CHECK(p.delta == doctest::Approx(0.75));
  CHECK(p.f_value == doctest::Approx(-0.75));
  CHECK(p.supergradient < 0.0);

  ValidatedInstance triv = trivial_instance();
  ParametricPoint t = initial_point(triv);
  CHECK(t.delta == doctest::Approx(0.5));
  CHECK(t.f_value == doctest::Approx(0.0));
}

TEST_CASE("newton_step formula and contract") {
  ParametricPoint p;
  p.delta = 2.0;
  p.f_value = -3.0;
  p.supergradient = -2.0;
  CHECK(newton_step(p) == doctest::Approx(0.5));

  p.delta = 1.0;
  p.f_value = 0.0;
  p.supergradient = -1.0;
  CHECK(newton_step(p) == doctest::Approx(1.0));

  p.delta = 0.75;
  p.f_value = -0.75;
  p.supergradient = -1.0;
  CHECK(newton_step(p) == doctest::Approx(0.0));

  p.supergradient = 0.5;
  CHECK_THROWS_AS(newton_step(p), std::invalid_argument);
}

TEST_CASE("classical driver: hand-traced runs") {
  // Trivial instance: one evaluation, already at the root.
  SolveOutput triv = solve_classical(trivial_instance());
  CHECK(triv.result.delta_star == doctest::Approx(0.5));
  CHECK(triv.result.iterations == 1);
  CHECK(triv.result.subproblem_calls == 1);
  CHECK(triv.trace.rows.size() == 1);
  CHECK(triv.trace.rows[0].branch == TraceBranch::Init);

  // Two-piece instance from x0 = (1,-1): trace 0.75 -> 0.
  SolveOptions opts;
  opts.x0 = SignVector{+1, -1};
  SolveOutput two = solve_classical(two_piece_instance(), opts);
  CHECK(two.result.delta_star == doctest::Approx(0.0));
  CHECK(two.result.iterations == 2);
  CHECK(two.result.subproblem_calls == 2);
  REQUIRE(two.trace.rows.size() == 2);
  CHECK(two.trace.rows[0].delta == doctest::Approx(0.75));
  CHECK(two.trace.rows[1].delta == doctest::Approx(0.0));
  CHECK(two.trace.rows[1].branch == TraceBranch::Newton);
}

TEST_CASE("classical driver: affine f converges in one newton step") {
  // An empty B form leaves a constant denominator, so f is one line.
  ProblemInstance inst;
  inst.n = 3;
  inst.alpha = 6.0;
  inst.beta = 1.0;
  inst.A = EigenForm{3, {{-1.0, {1, 0, 0}}}};
  inst.B.dim = 3;
  SolveOutput out = solve_classical(validate_instance(inst));
  CHECK(out.result.delta_star == doctest::Approx(5.0));
  CHECK(out.result.iterations <= 2);  // init + one exact newton step
}

TEST_CASE("lookahead driver: hand-traced two-piece run") {
  SolveOptions opts;
  opts.x0 = SignVector{+1, -1};
  SolveOutput out = solve_lookahead(two_piece_instance(), opts);
  CHECK(out.result.delta_star == doctest::Approx(0.0));
  CHECK(out.result.iterations == 2);
  CHECK(out.result.subproblem_calls == 3);  // init + newton + rejected guess
  CHECK(out.result.lookahead_accepts == 0);
  REQUIRE(out.trace.rows.size() == 2);
  CHECK(out.trace.rows[1].branch == TraceBranch::Newton);
  CHECK(out.trace.lookahead);

  SolveOutput triv = solve_lookahead(trivial_instance());
  CHECK(triv.result.subproblem_calls == 1);  // loop body never runs
  CHECK(triv.result.lookahead_accepts == 0);
}

TEST_CASE("lookahead accepts fire and preserve exactness on multi-piece "
          "instances") {
  long total_accepts = 0;
  for (int seed = 0; seed < 30; ++seed) {
    FamilySpec spec;
    spec.family = Family::AdversarialPieces;
    spec.n = 10;
    spec.r_a = 1;
    spec.r_b = 1;
    spec.seed = 100 + seed;
    NormalizedInstance ni = generate(spec);
    SolveOutput out = solve_lookahead(ni.vi);
    auto ref = oracle::brute_ratio(ni.vi.inst);
    CHECK(out.result.delta_star ==
          doctest::Approx(ref.min_ratio).epsilon(1e-9));
    total_accepts += out.result.lookahead_accepts;
    // Both evaluations per iteration are counted.
    CHECK(out.result.subproblem_calls == 1 + 2 * (out.result.iterations - 1));
  }
  CHECK(total_accepts > 0);  // the guess branch is actually exercised
}

TEST_CASE("oracle equivalence across families, n <= 12, both drivers") {
  int count = 0;
  for (int seed = 0; seed < 15; ++seed) {
    for (Family fam : {Family::NsdPsd, Family::SparsePositive,
                       Family::DiagSign, Family::AdversarialPieces}) {
      FamilySpec spec;
      spec.family = fam;
      spec.n = 4 + (seed % 9);
      spec.r_a = fam == Family::DiagSign ? 2 : 1 + (seed % 2);
      spec.r_b = 1 + (seed + 1) % 2;
      spec.support = std::max(1, std::min(3, spec.n / 2));
      spec.seed = 5000 + seed;
      NormalizedInstance ni = generate(spec);
      auto ref = oracle::brute_ratio(ni.vi.inst);
      for (bool look : {false, true}) {
        SolveOutput out = look ? solve_lookahead(ni.vi) : solve_classical(ni.vi);
        CAPTURE(family_name(fam));
        CAPTURE(seed);
        CAPTURE(look);
        CHECK(out.result.delta_star ==
              doctest::Approx(ref.min_ratio).epsilon(1e-9));
        CHECK(ni.vi.inst.ratio(out.result.x_star) ==
              doctest::Approx(ref.min_ratio).epsilon(1e-9));
      }
      ++count;
    }
  }
  CHECK(count == 60);
}

TEST_CASE("profile and per-delta paths return identical results") {
  for (int seed = 0; seed < 10; ++seed) {
    FamilySpec spec;
    spec.family = seed % 2 ? Family::NsdPsd : Family::SparsePositive;
    spec.n = 6 + seed;
    spec.r_a = 2;
    spec.r_b = 1;
    spec.support = 3;
    spec.seed = 777 + seed;
    NormalizedInstance ni = generate(spec);
    SolveOptions cached;
    SolveOptions plain;
    plain.parametric_cache = false;
    SolveOutput a = solve_lookahead(ni.vi, cached);
    SolveOutput b = solve_lookahead(ni.vi, plain);
    CHECK(a.result.delta_star ==
          doctest::Approx(b.result.delta_star).epsilon(1e-12));
    CHECK(a.result.iterations == b.result.iterations);
    CHECK(a.result.subproblem_calls == b.result.subproblem_calls);
  }
}

TEST_CASE("forced engines: mismatched structure raises EngineError") {
  // diag_sign instances are not zonotope-eligible (A has a positive
  // eigenvalue with dense support).
  FamilySpec spec;
  spec.family = Family::DiagSign;
  spec.n = 8;
  spec.r_a = 2;
  spec.r_b = 1;
  spec.seed = 3;
  NormalizedInstance ni = generate(spec);
  SolveOptions opts;
  opts.engine = Engine::Zonotope;
  CHECK_THROWS_AS(solve_classical(ni.vi, opts), EngineError);
  opts.engine = Engine::Brute;
  CHECK_NOTHROW(solve_classical(ni.vi, opts));
}

TEST_CASE("iterate feasibility and determinism of traces") {
  for (int seed = 0; seed < 10; ++seed) {
    FamilySpec spec;
    spec.family = Family::AdversarialPieces;
    spec.n = 9;
    spec.r_a = 1;
    spec.r_b = 1;
    spec.seed = 42 + seed;
    NormalizedInstance ni = generate(spec);
    SolveOutput a = solve_lookahead(ni.vi);
    SolveOutput b = solve_lookahead(ni.vi);
    REQUIRE(a.trace.rows.size() == b.trace.rows.size());
    for (std::size_t i = 0; i < a.trace.rows.size(); ++i) {
      CHECK(a.trace.rows[i].delta == b.trace.rows[i].delta);
      CHECK(a.trace.rows[i].f == b.trace.rows[i].f);
      CHECK(a.trace.rows[i].g == b.trace.rows[i].g);
      CHECK(a.trace.rows[i].delta >= 0.0);
      CHECK(a.trace.rows[i].delta >= a.result.delta_star - 1e-12);
    }
  }
}
