#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "rhz/hecke.hpp"
#include "rhz/numkernel.hpp"
#include "rhz/verify.hpp"

namespace {

// Collects the zeta(2) multiples of the modulus-l reports selected by `keep`.
std::set<std::int64_t> multiples_where(const rhz::RunResult& run,
                                       std::int64_t l,
                                       bool (*keep)(const rhz::CheckReport&)) {
  std::set<std::int64_t> ks;
  for (const rhz::CheckReport& r : run.reports) {
    if (r.l_or_n == l && keep(r)) ks.insert(r.zeta2_multiple);
  }
  return ks;
}

}  // namespace

TEST_CASE("nearest_zeta2_multiple rounds to the closest lattice point") {
  const double z2 = rhz::zeta2();

  auto [k0, e0] = rhz::nearest_zeta2_multiple(0.0);
  CHECK(k0 == 0);
  CHECK(e0 == 0.0);

  auto [k3, e3] = rhz::nearest_zeta2_multiple(3.0 * z2 + 1e-9);
  CHECK(k3 == 3);
  CHECK(std::fabs(e3 - 1e-9) <= 1e-15);

  auto [km, em] = rhz::nearest_zeta2_multiple(-2.0 * z2 - 1e-9);
  CHECK(km == -2);
  CHECK(std::fabs(em - 1e-9) <= 1e-15);

  // Half-way point rounds to one of the two neighbours; excess is z2/2.
  auto [kh, eh] = rhz::nearest_zeta2_multiple(0.5 * z2);
  CHECK((kh == 0 || kh == 1));
  CHECK(std::fabs(eh - 0.5 * z2) <= 1e-15);
}

TEST_CASE("five-term relation vanishes mod zeta(2) on same-side pairs") {
  for (const auto& [x, y] : {std::pair{3.0, 2.0}, std::pair{0.2, 0.4},
                             std::pair{1.5, 9.0}, std::pair{0.06, 0.94}}) {
    const rhz::CheckReport rep = rhz::check_five_term(x, y);
    CAPTURE(x);
    CAPTURE(y);
    CHECK(rep.identity == "five_term");
    CHECK(rep.pass);
    CHECK(rep.excess <= 1e-12);  // well under the default 1e-6
  }
}

TEST_CASE("five-term relation rejects degenerate inputs") {
  CHECK_THROWS_AS(rhz::check_five_term(2.0, 2.0), std::domain_error);  // y/x = 1
  CHECK_THROWS_AS(rhz::check_five_term(2.0, 0.5), std::domain_error);  // mixed side
  CHECK_THROWS_AS(rhz::check_five_term(1.0 + 5e-7, 2.0), std::domain_error);
  CHECK_THROWS_AS(rhz::check_five_term(-1.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(rhz::check_five_term(0.0, 2.0), std::domain_error);
}

TEST_CASE("reflection check demands the multiple 2 exactly") {
  for (const double x : {2.0, 0.1, 7.5, 0.999}) {
    const rhz::CheckReport rep = rhz::check_reflection(x);
    CAPTURE(x);
    CHECK(rep.pass);
    CHECK(rep.zeta2_multiple == 2);
    CHECK(rep.excess <= 1e-12);
  }
  CHECK_THROWS_AS(rhz::check_reflection(1.0), std::domain_error);
  CHECK_THROWS_AS(rhz::check_reflection(0.0), std::domain_error);
}

TEST_CASE("determinant-n identity is exact at n = 1") {
  // S_1 = {identity}, sigma(1) = 1, no b > 0 matrices, empty divisor term:
  // both sides are identically zero before any cancellation.
  const rhz::CheckReport rep = rhz::check_rz(1, 1.7);
  CHECK(rep.pass);
  CHECK(rep.lhs == 0.0);
  CHECK(rep.rhs == 0.0);
  CHECK(rep.zeta2_multiple == 0);
}

TEST_CASE("determinant-n identity holds to 1e-8 for small n") {
  for (const auto& [n, x] : {std::pair<std::int64_t, double>{2, 1.7},
                             {3, 0.6},
                             {4, 2.3},
                             {6, 0.35},
                             {10, 5.0}}) {
    const rhz::CheckReport rep = rhz::check_rz(n, x);
    CAPTURE(n);
    CAPTURE(x);
    CHECK(rep.identity == "rz");
    CHECK(rep.l_or_n == n);
    CHECK(rep.pass);
    CHECK(rep.excess <= 1e-8);
    CHECK(rep.zeta2_multiple == 0);  // exact identity, no reduction
  }
}

TEST_CASE("determinant-n identity rejects bad parameters") {
  CHECK_THROWS_AS(rhz::check_rz(0, 1.7), std::out_of_range);
  CHECK_THROWS_AS(rhz::check_rz(-3, 1.7), std::out_of_range);
  CHECK_THROWS_AS(rhz::check_rz(2, -1.0), std::domain_error);
  CHECK_THROWS_AS(rhz::check_rz(2, 0.0), std::domain_error);
}

TEST_CASE("main congruence holds at sample prime/point combinations") {
  for (const auto& [l, x, y] : {std::tuple<std::int64_t, double, double>{2, 2.0, 3.0},
                                {3, 0.5, 2.5},
                                {5, 0.3, 0.7},
                                {7, 5.0, 1.5}}) {
    const rhz::CheckReport rep = rhz::check_theorem1(l, x, y);
    CAPTURE(l);
    CAPTURE(x);
    CAPTURE(y);
    CHECK(rep.identity == "theorem1");
    CHECK(rep.pass);
    CHECK(rep.excess <= 1e-9);  // far below the default 1e-6
  }
}

TEST_CASE("main congruence rejects bad parameters") {
  CHECK_THROWS_AS(rhz::check_theorem1(4, 2.0, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(rhz::check_theorem1(1, 2.0, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(rhz::check_theorem1(2, 2.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(rhz::check_theorem1(2, -2.0, 3.0), std::domain_error);
}

TEST_CASE("per-matrix telescope step cancels mod zeta(2)") {
  struct Case {
    rhz::IntMat2 m;
    std::int64_t l;
    double x, y;
  };
  for (const Case& tc : {Case{{2, 1, 0, 1}, 2, 2.0, 3.0},
                         Case{{2, 1, 1, 2}, 3, 0.7, 1.9},
                         Case{{3, 2, 0, 1}, 3, 5.0, 0.2},
                         Case{{5, 3, 1, 2}, 7, 0.4, 6.0}}) {
    const rhz::CheckReport rep = rhz::check_telescope(tc.m, tc.l, tc.x, tc.y);
    CAPTURE(tc.l);
    CHECK(rep.pass);
    CHECK(rep.has_matrix);
    CHECK(rep.matrix == tc.m);
    CHECK(rep.excess <= 1e-12);
  }
}

TEST_CASE("telescope step validates S_l^+ membership") {
  // b = 0 diagonal, wrong determinant, c >= d: none are in S_l^+.
  CHECK_THROWS_AS(rhz::check_telescope({2, 0, 0, 1}, 2, 2.0, 3.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(rhz::check_telescope({2, 1, 0, 1}, 3, 2.0, 3.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(rhz::check_telescope({3, 1, 2, 1}, 1, 2.0, 3.0),
                  std::invalid_argument);
}

TEST_CASE("chain-restricted sums collapse to their boundary terms") {
  struct Case {
    std::int64_t l, n;
    double x, y;
  };
  for (const Case& tc : {Case{3, 2, 2.0, 3.0}, Case{2, 1, 1.2, 0.4},
                         Case{5, 3, 0.3, 4.0}, Case{13, 7, 0.8, 2.2}}) {
    const rhz::CheckReport rep = rhz::check_chain_sum(tc.l, tc.n, tc.x, tc.y);
    CAPTURE(tc.l);
    CAPTURE(tc.n);
    CHECK(rep.pass);
    CHECK(rep.l_or_n == tc.l);
    CHECK(rep.chain_index == tc.n);
    CHECK(rep.excess <= 1e-12);
  }
  CHECK_THROWS_AS(rhz::check_chain_sum(5, 0, 2.0, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(rhz::check_chain_sum(5, 5, 2.0, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(rhz::check_chain_sum(6, 1, 2.0, 3.0), std::invalid_argument);
}

TEST_CASE("complement sum is exact, not merely a congruence") {
  for (const auto& [l, x, y] : {std::tuple<std::int64_t, double, double>{2, 2.0, 3.0},
                                {5, 0.5, 1.5},
                                {11, 3.0, 0.25}}) {
    const rhz::CheckReport rep = rhz::check_complement_sum(l, x, y);
    CAPTURE(l);
    CHECK(rep.pass);
    CHECK(rep.zeta2_multiple == 0);
    CHECK(rep.excess <= 1e-13);
  }
  CHECK_THROWS_AS(rhz::check_complement_sum(9, 2.0, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(rhz::check_complement_sum(2, 2.0, 2.0), std::domain_error);
}

TEST_CASE("proof decomposition is internally consistent") {
  // The congruence residual must equal the sum of its proof pieces up to
  // floating-point noise (the identity is exact in real arithmetic).
  for (const std::int64_t l : {2, 3, 5}) {
    for (const auto& [x, y] : {std::pair{2.0, 3.0}, std::pair{0.45, 0.8}}) {
      CAPTURE(l);
      CAPTURE(x);
      CHECK(std::fabs(rhz::decomposition_gap(l, x, y)) <=
            10.0 * rhz::kDefaultModTolerance);
    }
  }
}

TEST_CASE("grid runner sweeps the congruence with no skips on disjoint grids") {
  rhz::GridSpec grid;
  grid.x_values = {0.3, 0.7, 1.5, 2.0};
  grid.y_values = {0.4, 0.9, 2.5, 6.0};
  const rhz::RunResult run = rhz::run_grid("theorem1", {2, 3, 5}, grid);
  CHECK(run.reports.size() == 48);  // 3 primes x 4 x 4 points
  CHECK(run.skips.empty());
  CHECK(run.all_pass());
  CHECK(run.max_excess() <= 1e-9);

  // For each prime the multiple k is a region constant: one value across all
  // pairs with x > y, one across all pairs with x < y (they may coincide).
  for (const std::int64_t l : {2, 3, 5}) {
    const auto above = multiples_where(
        run, l, [](const rhz::CheckReport& r) { return r.x > r.y; });
    const auto below = multiples_where(
        run, l, [](const rhz::CheckReport& r) { return r.x < r.y; });
    CAPTURE(l);
    CHECK(above.size() == 1);
    CHECK(below.size() == 1);
  }
}

TEST_CASE("grid runner covers determinants 1..10 for the exact identity") {
  rhz::GridSpec grid;
  grid.x_values = {0.3, 0.7, 1.5, 2.0, 5.0};
  const rhz::RunResult run =
      rhz::run_grid("rz", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, grid);
  CHECK(run.reports.size() == 50);
  CHECK(run.skips.empty());
  CHECK(run.all_pass());
  CHECK(run.max_excess() <= 1e-8);
}

TEST_CASE("grid runner skips constraint violations with reasons") {
  rhz::GridSpec grid;
  grid.x_values = {0.3, 2.0};
  grid.y_values = {0.5, 3.0};
  const rhz::RunResult ft = rhz::run_grid("five_term", {}, grid);
  CHECK(ft.reports.size() == 2);  // (0.3,0.5) and (2,3)
  CHECK(ft.skips.size() == 2);    // the two mixed-side pairs
  CHECK(ft.all_pass());
  for (const rhz::SkipRecord& s : ft.skips) {
    CHECK(s.reason.find("opposite sides") != std::string::npos);
  }

  rhz::GridSpec square;
  square.x_values = {2.0, 3.0};
  square.y_values = {2.0, 3.0};
  const rhz::RunResult t1 = rhz::run_grid("theorem1", {2}, square);
  CHECK(t1.reports.size() == 2);
  CHECK(t1.skips.size() == 2);  // the diagonal
  for (const rhz::SkipRecord& s : t1.skips) {
    CHECK(s.reason.find("excluded") != std::string::npos);
  }

  // Unit-band hits inside a check surface as skips, not failures.
  rhz::GridSpec refl;
  refl.x_values = {0.5, 1.0, 2.0};
  const rhz::RunResult rr = rhz::run_grid("reflection", {}, refl);
  CHECK(rr.reports.size() == 2);
  CHECK(rr.skips.size() == 1);
  CHECK(rr.skips[0].x == 1.0);
  CHECK(rr.all_pass());
}

TEST_CASE("grid runner covers telescope, chain and complement families") {
  rhz::GridSpec grid;
  grid.x_values = {2.0};
  grid.y_values = {3.0};

  const rhz::RunResult tel = rhz::run_grid("telescope", {3}, grid);
  CHECK(tel.reports.size() == rhz::s_plus(rhz::enumerate_S(3)).size());
  CHECK(tel.all_pass());
  for (const rhz::CheckReport& r : tel.reports) CHECK(r.has_matrix);

  const rhz::RunResult ch = rhz::run_grid("chain_sum", {5}, grid);
  CHECK(ch.reports.size() == 4);  // chains C_1..C_4
  CHECK(ch.all_pass());
  std::set<std::int64_t> indices;
  for (const rhz::CheckReport& r : ch.reports) indices.insert(r.chain_index);
  CHECK(indices == std::set<std::int64_t>{1, 2, 3, 4});

  const rhz::RunResult co = rhz::run_grid("complement_sum", {2, 3}, grid);
  CHECK(co.reports.size() == 2);
  CHECK(co.all_pass());
  CHECK(co.max_excess() <= 1e-13);
}

TEST_CASE("grid runner validates its own inputs") {
  rhz::GridSpec grid;
  grid.x_values = {2.0};
  grid.y_values = {3.0};
  CHECK_THROWS_AS(rhz::run_grid("no_such_identity", {2}, grid),
                  std::invalid_argument);
  CHECK_THROWS_AS(rhz::run_grid("rz", {}, grid), std::invalid_argument);
  CHECK_THROWS_AS(rhz::run_grid("theorem1", {3}, grid, -1.0),
                  std::invalid_argument);

  rhz::GridSpec empty;
  CHECK_THROWS_AS(rhz::run_grid("reflection", {}, empty),
                  std::invalid_argument);

  rhz::GridSpec negative;
  negative.x_values = {-1.0};
  CHECK_THROWS_AS(rhz::run_grid("reflection", {}, negative),
                  std::invalid_argument);

  // A tolerance override is honoured: 1e-20 is below double noise, so the
  // otherwise-passing reflection check must fail.
  rhz::GridSpec one;
  one.x_values = {2.0};
  const rhz::RunResult strict = rhz::run_grid("reflection", {}, one, 1e-20);
  CHECK(strict.reports.size() == 1);
  CHECK_FALSE(strict.all_pass());
  CHECK(strict.reports[0].tolerance == 1e-20);
}

TEST_CASE("five-term sampler is deterministic and respects its constraints") {
  const auto pairs = rhz::sample_five_term_pairs(1000, 0);
  CHECK(pairs.size() == 1000);
  CHECK(pairs == rhz::sample_five_term_pairs(1000, 0));
  CHECK(pairs != rhz::sample_five_term_pairs(1000, 1));

  for (const auto& [x, y] : pairs) {
    CHECK((x - 1.0) * (y - 1.0) > 0.0);        // same side of 1
    CHECK(std::fabs(x - y) >= 0.01);           // separation
    const double lo = x < 1.0 ? 0.05 : 1.05;
    const double hi = x < 1.0 ? 0.95 : 10.0;
    CHECK(x >= lo);
    CHECK(x <= hi);
    CHECK(y >= lo);
    CHECK(y <= hi);
  }

  // Spot-run a slice through the actual check; the full thousand is the
  // acceptance suite's job.
  for (std::size_t i = 0; i < 200; ++i) {
    const auto& [x, y] = pairs[i];
    const rhz::CheckReport rep = rhz::check_five_term(x, y, 1e-7);
    CAPTURE(x);
    CAPTURE(y);
    CHECK(rep.pass);
  }
}
