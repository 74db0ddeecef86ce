#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rhz/hecke.hpp"
#include "rhz/numkernel.hpp"

// Numerical verification of the functional equations tying RHZ to the
// determinant-l matrix sets: the main congruence
//
//   RHZ|_{theta_l}(x,y) = (l+1) RHZ(x,y) + ((l-1)/2) log(l) log(x/y)  mod zeta(2),
//
// the exact Radchenko-Zagier equation for MHZ, the Rogers 5-term relation and
// reflection, and the per-matrix / per-chain / complement identities that make
// up the proof of the main congruence. Congruences are checked by reducing the
// residual modulo zeta(2) = pi^2/6 and reporting the integer multiple k and the
// leftover excess; exact identities force k = 0.

namespace rhz {

inline constexpr double kDefaultExactTolerance = 1e-8;   // |residual| for equalities
inline constexpr double kDefaultModTolerance = 1e-6;     // excess after mod zeta(2)
inline constexpr double kDefaultComplementTolerance = 1e-10;
inline constexpr double kDefaultReflectionTolerance = 1e-12;

// Exclusion band around Rogers-argument 1: any check whose L-argument falls
// within this distance of 1 throws std::domain_error instead of evaluating,
// and run_grid records the point as skipped.
inline constexpr double kUnitBand = 1e-6;

struct CheckReport {
  std::string identity;          // "five_term", "reflection", "rz", "theorem1",
                                 // "telescope", "chain_sum", "complement_sum"
  std::int64_t l_or_n = 0;       // determinant parameter; 0 when not applicable
  std::int64_t chain_index = 0;  // chain_sum only
  IntMat2 matrix{0, 0, 0, 0};    // telescope only (has_matrix marks presence)
  bool has_matrix = false;
  double x = 0.0;
  double y = 0.0;                // 0 for single-variable checks

  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;             // lhs - rhs
  std::int64_t zeta2_multiple = 0;   // k minimizing |residual - k zeta2|; 0 for exact checks
  double excess = 0.0;               // |residual - k zeta2| (= |residual| for exact checks)
  double err_bound = 0.0;            // accumulated truncation budget from hz/mhz/rhz
  double tolerance = 0.0;
  bool pass = false;
};

struct GridSpec {
  std::vector<double> x_values;
  std::vector<double> y_values;
  // Grid-level constraints: drop x = y pairs, and (five_term only) pairs on
  // opposite sides of 1. Dropped points are recorded as skips, never lost.
  bool exclude_equal = true;
  bool enforce_same_side = true;
};

struct SkipRecord {
  std::string identity;
  std::int64_t l_or_n = 0;
  std::int64_t chain_index = 0;
  double x = 0.0;
  double y = 0.0;
  std::string reason;
};

struct RunResult {
  std::vector<CheckReport> reports;
  std::vector<SkipRecord> skips;

  bool all_pass() const;
  double max_excess() const;  // 0 when there are no reports
};

// k = round(v / zeta(2)) and the leftover |v - k zeta(2)|.
std::pair<std::int64_t, double> nearest_zeta2_multiple(double v);

// 5-term relation: L(x) - L(y) + L(y/x) - L((y-1)/(x-1)) + L((1-1/y)/(1-1/x))
// vanishes mod zeta(2). Requires x, y > 0 on the same side of 1, x != y, and
// every argument clear of the unit band.
CheckReport check_five_term(double x, double y,
                            double tolerance = kDefaultModTolerance);

// L(x) + L(1/x) = pi^2/3 exactly: passes only if k = 2 and the excess is tiny.
CheckReport check_reflection(double x,
                             double tolerance = kDefaultReflectionTolerance);

// Radchenko-Zagier equation at determinant n (exact, k forced to 0):
//   MHZ|_{theta_n}(x) - sigma(n) MHZ(x)
//     = sum_{M in S_n^+} (L((x+c/a)/(x+d/b)) - L((1+c/a)/(1+d/b)))
//       + (1/2) sum_{r|n} r log(r^2/n) log(x).
CheckReport check_rz(std::int64_t n, double x,
                     double tolerance = kDefaultExactTolerance,
                     const EvalOptions& opts = {});

// Main congruence at prime l (mod zeta(2)).
CheckReport check_theorem1(std::int64_t l, double x, double y,
                           double tolerance = kDefaultModTolerance,
                           const EvalOptions& opts = {});

// Per-matrix cancellation step for M in S_l^+ (mod zeta(2)):
//   L((x+c/a)/(x+d/b)) - L((y+c/a)/(y+d/b)) + L((ay+c)(bx+d)/((by+d)(ax+c)))
//     = L((bx+d)/(by+d)) - L((ax+c)/(ay+c)).
CheckReport check_telescope(const IntMat2& m, std::int64_t l, double x,
                            double y, double tolerance = kDefaultModTolerance);

// Chain-restricted sum (mod zeta(2)), 1 <= n <= l-1:
//   sum_{M in C_n, b > 0} (L((bx+d)/(by+d)) - L((ax+c)/(ay+c)))
//     = L((x+x_n)/(y+x_n)) - L(x/y).
CheckReport check_chain_sum(std::int64_t l, std::int64_t n, double x, double y,
                            double tolerance = kDefaultModTolerance);

// Complement sum (exact, k forced to 0). First verifies structurally that
//   S_l \ S_l^+ = {[[l,0],[0,1]], [[1,0],[0,l]], [[1,0],[1,l]], ..., [[1,0],[l-1,l]]}
// (anything else throws std::logic_error), then checks
//   sum_{M in S_l \ S_l^+} L((ay+c)(bx+d)/((by+d)(ax+c)))
//     = sum_{n=1}^{l-1} L((y+n)/(x+n)) + 2 L(y/x).
CheckReport check_complement_sum(std::int64_t l, double x, double y,
                                 double tolerance = kDefaultComplementTolerance);

// Consistency of the proof decomposition: the theorem1 residual minus
// (sum of telescope residuals over S_l^+ + sum of chain residuals
//  + complement residual + rz residual at x - rz residual at y).
// Zero in exact arithmetic; tests allow 10x the mod tolerance.
double decomposition_gap(std::int64_t l, double x, double y,
                         const EvalOptions& opts = {});

// Deterministic sweep of one identity over a grid. `moduli` supplies the
// determinant parameters (ignored by five_term and reflection); points a
// check rejects (domain preconditions, unit band, grid constraints) become
// SkipRecords. tolerance = 0 selects each identity's default. Reports appear
// in canonical parameter order. Unknown identity names throw
// std::invalid_argument.
RunResult run_grid(const std::string& identity,
                   const std::vector<std::int64_t>& moduli,
                   const GridSpec& grid, double tolerance = 0.0);

// Seeded same-side-of-1 sample pairs for the 5-term relation, constructed to
// clear the unit band: x, y drawn uniformly from [0.05, 0.95] or [1.05, 10]
// (side chosen per pair) with |x - y| >= 0.01 enforced by redraw.
std::vector<std::pair<double, double>> sample_five_term_pairs(
    std::size_t count, std::uint64_t seed);

}  // namespace rhz
