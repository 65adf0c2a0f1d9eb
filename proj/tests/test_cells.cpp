#include <doctest.h>

#include <cmath>
#include <set>

#include "cell_walk.hpp"
#include "fracqp/errors.hpp"
#include "fracqp/qp.hpp"
#include "oracles.hpp"

using namespace fracqp;

namespace {

// Reference: achievable sign patterns sign(g_i . c) over a dense grid of
// directions, deduplicated. Sound for small generator sets: every cell of a
// central arrangement contains a grid direction once the grid is fine
// enough relative to the test data.
std::set<SignVector> grid_patterns(const std::vector<std::vector<double>>& gens,
                                   int steps) {
  const int r = static_cast<int>(gens[0].size());
  std::set<SignVector> out;
  std::vector<double> c(r);
  std::vector<int> ticks(r, -steps);
  for (;;) {
    bool zero = true;
    for (int j = 0; j < r; ++j) {
      c[j] = static_cast<double>(ticks[j]) + 0.343 * ((j * 2654435761u) % 7);
      zero = zero && ticks[j] == 0;
    }
    if (!zero) {
      SignVector s(gens.size());
      bool degenerate = false;
      for (std::size_t i = 0; i < gens.size(); ++i) {
        const double ip = fracqp::dot(gens[i], c);
        if (std::abs(ip) < 1e-9) degenerate = true;
        s[i] = ip > 0 ? +1 : -1;
      }
      if (!degenerate) out.insert(s);
    }
    int j = 0;
    while (j < r && ticks[j] == steps) ticks[j++] = -steps;
    if (j == r) break;
    ++ticks[j];
  }
  return out;
}

}  // namespace

TEST_CASE("three concurrent lines in the plane give six cells") {
  std::vector<std::vector<double>> gens{{1, 0}, {0, 1}, {1, 1}};
  auto cells = enumerate_sign_cells(gens);
  CHECK(cells.size() == 6);
  // (+,+,+) and (-,-,-) are cells; (+,-,+) is not (x>0, y<0 forces x+y sign
  // to follow the larger magnitude, both appear) ...
  std::set<SignVector> set(cells.begin(), cells.end());
  CHECK(set.count(SignVector{+1, +1, +1}) == 1);
  CHECK(set.count(SignVector{-1, -1, -1}) == 1);
  // Impossible pattern: x > 0, y > 0 but x + y < 0.
  CHECK(set.count(SignVector{+1, +1, -1}) == 0);
}

TEST_CASE("generic central line arrangements have exactly 2n cells") {
  oracle::TestRng rng(5);
  for (int n : {2, 3, 5, 9, 17}) {
    std::vector<std::vector<double>> gens;
    for (int i = 0; i < n; ++i) gens.push_back({rng.normal(), rng.normal()});
    auto cells = enumerate_sign_cells(gens);
    CHECK(cells.size() == static_cast<std::size_t>(2 * n));
  }
}

TEST_CASE("rank-deficient input reduces to the line case") {
  // Both generators on one line in R^2: two cells after dedup.
  std::vector<std::vector<double>> gens{{1, 0}};
  auto cells = enumerate_sign_cells(gens);
  REQUIRE(cells.size() == 2);
  CHECK(cells[0] == SignVector{-1});
  CHECK(cells[1] == SignVector{+1});

  std::vector<std::vector<double>> parallel{{1, 2}, {2, 4}, {-0.5, -1}};
  auto cells2 = enumerate_sign_cells(parallel);
  CHECK(cells2.size() == 2);
  std::set<SignVector> set(cells2.begin(), cells2.end());
  CHECK(set.count(SignVector{+1, +1, -1}) == 1);
  CHECK(set.count(SignVector{-1, -1, +1}) == 1);
}

TEST_CASE("zero generators branch both signs") {
  std::vector<std::vector<double>> gens{{1, 0}, {0, 0}, {0, 1}};
  auto cells = enumerate_sign_cells(gens);
  std::set<SignVector> set(cells.begin(), cells.end());
  CHECK(cells.size() == 8);  // 4 quadrant cells x 2 signs of the zero row
  CHECK(set.count(SignVector{+1, +1, +1}) == 1);
  CHECK(set.count(SignVector{+1, -1, +1}) == 1);
}

TEST_CASE("r=1 yields the two global patterns") {
  std::vector<std::vector<double>> gens{{2.0}, {-0.5}, {1.0}};
  auto cells = enumerate_sign_cells(gens);
  REQUIRE(cells.size() == 2);
  std::set<SignVector> set(cells.begin(), cells.end());
  CHECK(set.count(SignVector{+1, -1, +1}) == 1);
  CHECK(set.count(SignVector{-1, +1, -1}) == 1);
}

TEST_CASE("sign-cell enumeration covers every grid-visible cell, r in 2..4") {
  oracle::TestRng rng(23);
  for (int r = 2; r <= 4; ++r) {
    for (int rep = 0; rep < 6; ++rep) {
      const int n = 4 + rng.index(5);
      std::vector<std::vector<double>> gens;
      for (int i = 0; i < n; ++i) gens.push_back(rng.gaussian(r));
      auto cells = enumerate_sign_cells(gens);
      std::set<SignVector> set(cells.begin(), cells.end());
      for (const auto& pat : grid_patterns(gens, r <= 3 ? 6 : 4)) {
        CAPTURE(r);
        CAPTURE(rep);
        CHECK(set.count(pat) == 1);
      }
      // Antipodal closure.
      for (const auto& pat : set) {
        SignVector neg(pat.size());
        for (std::size_t i = 0; i < pat.size(); ++i) neg[i] = -pat[i];
        CHECK(set.count(neg) == 1);
      }
    }
  }
}

TEST_CASE("degenerate arrangements are covered (duplicates, axes, ties)") {
  // Duplicated generators and coordinate axes in R^3 with several
  // concurrences; the grid reference still sees every true cell.
  std::vector<std::vector<double>> gens{
      {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {1, 0, 0},
      {1, -1, 0}, {0, 1, 1}, {1, 1, 1}};
  auto cells = enumerate_sign_cells(gens);
  std::set<SignVector> set(cells.begin(), cells.end());
  for (const auto& pat : grid_patterns(gens, 6)) CHECK(set.count(pat) == 1);
  // Degenerate branching may add non-cell patterns; every pattern is still a
  // hypercube vertex, so downstream minimization stays sound. True cells
  // (the grid-visible ones) all keep duplicates in agreement.
  for (const auto& pat : grid_patterns(gens, 6)) CHECK(pat[0] == pat[4]);
}

TEST_CASE("rank budget is enforced") {
  std::vector<std::vector<double>> gens{{1, 0, 0, 0, 0, 0, 0},
                                        {0, 1, 0, 0, 0, 0, 0}};
  CHECK_THROWS_AS(enumerate_sign_cells(gens), EngineError);
}
