#include <doctest.h>

#include <cmath>
#include <set>

#include "fracqp/errors.hpp"
#include "fracqp/qp.hpp"
#include "oracles.hpp"

using namespace fracqp;

namespace {

GramForm gram(int n, std::initializer_list<GramTerm> terms, double c = 0.0) {
  GramForm g;
  g.dim = n;
  g.constant = c;
  g.terms = terms;
  return g;
}

}  // namespace

TEST_CASE("brute: hand-checked examples") {
  // -(x1+x2)^2 on {-1,1}^2: min -4 at both diagonal vertices.
  QpSolution s = solve_qp_brute(gram(2, {{-1.0, {1, 1}}}));
  CHECK(s.min_value == doctest::Approx(-4.0));
  CHECK(s.argmin_set.size() == 2);
  CHECK(s.argmin == SignVector{+1, +1});  // first-best from all-ones

  // Zero form: every vertex optimal.
  QpSolution z = solve_qp_brute(gram(3, {}));
  CHECK(z.min_value == 0.0);
  CHECK(z.argmin_set.size() == 8);

  // (x1 - 2 x2)^2: min 1 on the 4 vertices with x1 = x2.
  QpSolution p = solve_qp_brute(gram(3, {{+1.0, {1, -2, 0}}}));
  CHECK(p.min_value == doctest::Approx(1.0));
  CHECK(p.argmin_set.size() == 4);
  for (const auto& x : p.argmin_set) CHECK(x[0] == x[1]);
}

TEST_CASE("brute: linear term and constant are included") {
  LinearTerm lin{{1.0, 0.0}};
  QpSolution s = solve_qp_brute(gram(2, {{-1.0, {1, 1}}}, 0.5), &lin);
  // -(x1+x2)^2 + 2 x1 + 0.5: min at (-1,-1) = -4 - 2 + 0.5.
  CHECK(s.min_value == doctest::Approx(-5.5));
  CHECK(s.argmin == SignVector{-1, -1});
}

TEST_CASE("brute: limit enforcement") {
  QpOptions opts;
  opts.brute_limit = 4;
  CHECK_THROWS_AS(
      solve_qp_brute(gram(5, {{-1.0, {1, 1, 1, 1, 1}}}), nullptr, opts),
      EngineError);
}

TEST_CASE("rank1: hand-checked examples") {
  QpSolution a = solve_qp_rank1(-3.0, {1, -2, 0});
  CHECK(a.min_value == doctest::Approx(-27.0));
  CHECK(a.argmin == SignVector{+1, -1, +1});  // sign(0) = +1

  QpSolution b = solve_qp_rank1(+2.0, {1, 1, 0, 0});
  CHECK(b.min_value == doctest::Approx(0.0));
  CHECK(b.argmin[0] == -b.argmin[1]);

  QpSolution c = solve_qp_rank1(-1.0, {1, 0, 0, 0, 0});
  CHECK(c.min_value == doctest::Approx(-1.0));
  CHECK(c.argmin == SignVector{+1, +1, +1, +1, +1});
}

TEST_CASE("rank1: positive weight over the support bound is refused") {
  std::vector<double> w(64, 1.0);  // support 64 >> log2(64)+4 = 10
  CHECK_THROWS_AS(solve_qp_rank1(+1.0, w), EngineError);
  CHECK_NOTHROW(solve_qp_rank1(-1.0, w));
}

TEST_CASE("rank1 equals brute on random vectors") {
  oracle::TestRng rng(31);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 2 + rng.index(9);
    const bool positive = rep % 2 == 0;
    std::vector<double> w(n);
    for (double& v : w) v = rng.u01() < 0.25 ? 0.0 : rng.normal();
    double lam = rng.uniform(0.1, 3.0) * (positive ? 1.0 : -1.0);
    GramForm g = gram(n, {});
    g.terms.push_back({lam, w});
    int supp = 0;
    for (double v : w) supp += v != 0.0;
    if (positive && supp > positive_support_bound(n, {})) continue;
    QpSolution fast = solve_qp_rank1(lam, w);
    auto ref = oracle::brute_qp(g, nullptr);
    CHECK(fast.min_value == doctest::Approx(ref.min_value).epsilon(1e-10));
    CHECK(g.value(fast.argmin) ==
          doctest::Approx(ref.min_value).epsilon(1e-10));
  }
}

TEST_CASE("zonotope: hand-checked examples") {
  QpSolution a = solve_qp_zonotope(gram(3, {{-1.0, {1, 2, -1}}}));
  CHECK(a.min_value == doctest::Approx(-16.0));
  CHECK(a.argmin[0] == a.argmin[1]);
  CHECK(a.argmin[2] == -a.argmin[0]);

  QpSolution b =
      solve_qp_zonotope(gram(3, {{-1.0, {1, 0, 0}}, {-1.0, {0, 1, 1}}}));
  CHECK(b.min_value == doctest::Approx(-5.0));
  CHECK(b.argmin[1] == b.argmin[2]);

  LinearTerm lin{{1.0, 0.0}};
  QpSolution c = solve_qp_zonotope(gram(2, {{-1.0, {1, 1}}}), &lin);
  CHECK(c.min_value == doctest::Approx(-6.0));
  CHECK(c.argmin == SignVector{-1, -1});
}

TEST_CASE("zonotope: positive weight is refused") {
  CHECK_THROWS_AS(solve_qp_zonotope(gram(2, {{+0.5, {1, 1}}})), EngineError);
}

TEST_CASE("zonotope equals brute on random concave forms (with and without "
          "linear terms)") {
  oracle::TestRng rng(37);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 2 + rng.index(13);
    const int r = 1 + rng.index(4);
    GramForm g =
        oracle::random_gram(rng, n, r, -3.0, -0.05, rep % 3 == 0 ? 0.3 : 0.0);
    const bool with_lin = rep % 2 == 1;
    std::vector<double> lv;
    LinearTerm lin;
    if (with_lin) {
      lv = rng.gaussian(n);
      lin.coefficients = lv;
    }
    QpSolution fast = solve_qp_zonotope(g, with_lin ? &lin : nullptr);
    auto ref = oracle::brute_qp(g, with_lin ? &lv : nullptr);
    CAPTURE(n);
    CAPTURE(r);
    CAPTURE(rep);
    CHECK(fast.min_value == doctest::Approx(ref.min_value).epsilon(1e-9));
  }
}

TEST_CASE("zonotope candidate soundness: the brute argmin value is attained "
          "among the enumerated cells") {
  oracle::TestRng rng(41);
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 3 + rng.index(7);
    const int r = 1 + rng.index(3);
    GramForm g = oracle::random_gram(rng, n, r, -2.0, -0.1);
    g.constant = 0.0;
    std::vector<std::vector<double>> gens(n, std::vector<double>(r));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < r; ++j) gens[i][j] = g.terms[j].vector[i];
    auto cells = enumerate_sign_cells(gens);
    auto ref = oracle::brute_qp(g, nullptr);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& x : cells) best = std::min(best, g.value(x));
    CHECK(best == doctest::Approx(ref.min_value).epsilon(1e-9));
  }
}

TEST_CASE("fix_enum: hand-checked examples") {
  GramForm g = gram(4, {{+1.0, {1, 1, 0, 0}}, {-1.0, {0, 0, 1, 1}}});
  QpSolution s = solve_qp_fix_enum(g, {0, 1});
  CHECK(s.min_value == doctest::Approx(-4.0));
  CHECK(s.argmin[0] == -s.argmin[1]);
  CHECK(s.argmin[2] == s.argmin[3]);

  // Empty support: pure zonotope.
  GramForm g2 = gram(3, {{-2.0, {1, 0, 1}}});
  QpSolution s2 = solve_qp_fix_enum(g2, {});
  CHECK(s2.min_value == doctest::Approx(solve_qp_zonotope(g2).min_value));

  // Single positive coordinate: (x1)^2 = 1 always.
  GramForm g3 = gram(3, {{+2.0, {1, 0, 0}}});
  QpSolution s3 = solve_qp_fix_enum(g3, {0});
  CHECK(s3.min_value == doctest::Approx(2.0));
}

TEST_CASE("fix_enum: positive support outside the fixed set is refused") {
  GramForm g = gram(3, {{+1.0, {1, 1, 0}}});
  CHECK_THROWS_AS(solve_qp_fix_enum(g, {0}), EngineError);
}

TEST_CASE("fix_enum equals brute on random mixed-sign forms") {
  oracle::TestRng rng(43);
  int done = 0;
  for (int rep = 0; done < 200 && rep < 1000; ++rep) {
    const int n = 4 + rng.index(11);
    const int bound = positive_support_bound(n, {});
    const int s = 1 + rng.index(std::min(bound, n / 2));
    GramForm g = gram(n, {});
    const int pos_terms = 1 + rng.index(2);
    for (int j = 0; j < pos_terms; ++j) {
      GramTerm t;
      t.weight = rng.uniform(0.1, 2.0);
      t.vector.assign(n, 0.0);
      for (int i = 0; i < s; ++i)
        t.vector[i] = rng.u01() < 0.3 ? 0.0 : rng.normal();
      g.terms.push_back(std::move(t));
    }
    const int neg_terms = 1 + rng.index(3);
    for (int j = 0; j < neg_terms; ++j) {
      GramTerm t;
      t.weight = -rng.uniform(0.1, 2.0);
      t.vector = rng.gaussian(n);
      g.terms.push_back(std::move(t));
    }
    std::vector<int> supp;
    for (int i = 0; i < s; ++i) supp.push_back(i);
    QpSolution fast = solve_qp_fix_enum(g, supp);
    auto ref = oracle::brute_qp(g, nullptr);
    CAPTURE(n);
    CAPTURE(rep);
    CHECK(fast.min_value == doctest::Approx(ref.min_value).epsilon(1e-9));
    CHECK(g.value(fast.argmin) == doctest::Approx(ref.min_value).epsilon(1e-9));
    ++done;
  }
  CHECK(done == 200);
}

TEST_CASE("dispatch: auto order and diagnostics") {
  QpOptions opts;
  // Single NSD term, huge n: rank1 without enumeration.
  {
    GramForm g = gram(100000, {});
    GramTerm t;
    t.weight = -1.0;
    t.vector.assign(100000, 0.0);
    t.vector[7] = 1.0;
    g.terms.push_back(std::move(t));
    QpSolution s = solve_qp(g, Engine::Auto, opts);
    CHECK(s.engine_used == Engine::Rank1);
    CHECK(s.min_value == doctest::Approx(-1.0));
  }
  // All-nonpositive: zonotope.
  {
    std::vector<double> v2(40, 0.1);
    v2[0] = -1.0;
    QpSolution s = solve_qp(
        gram(40, {{-1.0, std::vector<double>(40, 0.5)}, {-0.5, v2}}),
        Engine::Auto, opts);
    CHECK(s.engine_used == Engine::Zonotope);
  }
  // Sparse positive support: fix_enum.
  {
    GramForm g = gram(64, {});
    GramTerm pos;
    pos.weight = 1.0;
    pos.vector.assign(64, 0.0);
    pos.vector[3] = 1.0;
    pos.vector[9] = -0.5;
    g.terms.push_back(std::move(pos));
    GramTerm neg;
    neg.weight = -1.0;
    neg.vector.assign(64, 0.25);
    g.terms.push_back(std::move(neg));
    QpSolution s = solve_qp(g, Engine::Auto, opts);
    CHECK(s.engine_used == Engine::FixEnum);
  }
  // Small dense indefinite: brute.
  {
    GramForm g = gram(8, {{+1.0, std::vector<double>(8, 0.5)},
                          {-1.0, std::vector<double>(8, 0.25)}});
    g.terms[1].vector[0] = -2.0;
    QpSolution s = solve_qp(g, Engine::Auto, opts);
    CHECK(s.engine_used == Engine::Brute);
  }
  // Dense positive support, n over the brute limit: explicit failure.
  {
    GramForm g = gram(30, {{+1.0, std::vector<double>(30, 0.5)}});
    CHECK_THROWS_WITH_AS(solve_qp(g, Engine::Auto, opts),
                         doctest::Contains("no exact engine applicable"),
                         EngineError);
  }
}

TEST_CASE("dispatch: forced engines check their own preconditions") {
  GramForm g = gram(3, {{+1.0, {1, 1, 0}}, {-1.0, {0, 1, 1}}});
  CHECK_THROWS_AS(solve_qp(g, Engine::Zonotope), EngineError);
  CHECK_THROWS_AS(solve_qp(g, Engine::Rank1), EngineError);
  CHECK_NOTHROW(solve_qp(g, Engine::FixEnum));
  CHECK_NOTHROW(solve_qp(g, Engine::Brute));
}

TEST_CASE("flip-sign symmetry: minima are invariant under data sign flips") {
  oracle::TestRng rng(53);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 3 + rng.index(8);
    GramForm g = oracle::random_gram(rng, n, 2, -2.0, -0.1);
    GramForm flipped = g;
    for (auto& t : flipped.terms)
      for (double& v : t.vector) v = -v;
    QpSolution s1 = solve_qp_zonotope(g);
    QpSolution s2 = solve_qp_zonotope(flipped);
    CHECK(s1.min_value == doctest::Approx(s2.min_value).epsilon(1e-12));
  }
}

TEST_CASE("engines are deterministic across repeated calls") {
  oracle::TestRng rng(61);
  GramForm g = oracle::random_gram(rng, 10, 3, -2.0, -0.1);
  LinearTerm lin{rng.gaussian(10)};
  QpSolution a = solve_qp_zonotope(g, &lin);
  QpSolution b = solve_qp_zonotope(g, &lin);
  CHECK(a.min_value == b.min_value);
  CHECK(a.argmin == b.argmin);
  QpSolution c = solve_qp_brute(g, &lin);
  QpSolution d = solve_qp_brute(g, &lin);
  CHECK(c.min_value == d.min_value);
  CHECK(c.argmin == d.argmin);
  CHECK(c.argmin_set == d.argmin_set);
}
