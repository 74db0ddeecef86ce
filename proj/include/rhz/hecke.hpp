#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

// Exact combinatorics of the determinant-n matrix sets
//
//   S_n = { [[a,b],[c,d]] : 0 <= b < a, 0 <= c < d, ad - bc = n },
//
// their formal sums theta_n, the boundary map into Z[P^1(Q)], the C_n
// condition (per SL2(Z)-orbit), and the chain decomposition of S_l for
// prime l. Everything here is integer arithmetic; the only floating-point
// surface is slash_points, which applies the Moebius substitution
// x -> (ax+c)/(bx+d) to sample points.

namespace rhz {

// Integer 2x2 matrix [[a,b],[c,d]]. All matrices handled by this module have
// positive determinant; entries stay well inside 64-bit range (enumeration is
// guarded at n <= 10^6).
struct IntMat2 {
  std::int64_t a = 0, b = 0, c = 0, d = 0;

  std::int64_t det() const { return a * d - b * c; }
  auto operator<=>(const IntMat2&) const = default;
};

// Point of P^1(Q) as a reduced fraction p/q with q > 0, or (1,0) = infinity.
struct ProjPoint {
  std::int64_t p = 1;
  std::int64_t q = 0;

  // Reduces num/den to canonical form; den may be negative or zero
  // ((anything nonzero)/0 is infinity). Throws std::invalid_argument on 0/0.
  static ProjPoint reduce(std::int64_t num, std::int64_t den);
  static ProjPoint infinity() { return ProjPoint{1, 0}; }
  static ProjPoint zero() { return ProjPoint{0, 1}; }

  bool is_infinity() const { return q == 0; }
  auto operator<=>(const ProjPoint&) const = default;
};

// Formal integer combination of matrices (houses theta_n). All matrices in
// one sum must share a determinant; zero coefficients are dropped.
class FormalMatSum {
 public:
  void add(const IntMat2& m, std::int64_t coeff);
  const std::map<IntMat2, std::int64_t>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

 private:
  std::map<IntMat2, std::int64_t> terms_;
};

// Formal integer combination of P^1(Q) points; addition is coefficient-wise
// with exact cancellation.
class P1Divisor {
 public:
  void add(const ProjPoint& pt, std::int64_t coeff);
  const std::map<ProjPoint, std::int64_t>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  bool operator==(const P1Divisor&) const = default;

  // (infinity) - (0), the divisor every orbit of theta_n must produce.
  static P1Divisor inf_minus_zero();

 private:
  std::map<ProjPoint, std::int64_t> terms_;
};

// Maximal linked run M_0, ..., M_k in S_l: consecutive matrices satisfy
// M_i(0) = M_{i+1}(infinity), the first is [[l,n],[0,1]] and the last is
// [[1,0],[x_n,l]].
struct Chain {
  std::vector<IntMat2> matrices;
  std::int64_t x_n = 0;
};

enum class CnMode { kPerOrbit, kTotal };

// One SL2(Z)-orbit of the support of a formal sum, with its boundary divisor.
struct OrbitDivisor {
  IntMat2 canonical;
  P1Divisor divisor;
  bool ok = false;  // divisor == (infinity) - (0)
};

struct CnReport {
  CnMode mode = CnMode::kPerOrbit;
  bool pass = false;
  std::vector<OrbitDivisor> orbits;  // sorted by canonical representative
  P1Divisor total;                   // boundary of the whole sum
};

struct ChainDecomposition {
  IntMat2 diag_upper;          // [[l,0],[0,1]]
  IntMat2 diag_lower;          // [[1,0],[0,l]]
  std::vector<Chain> chains;   // C_1, ..., C_{l-1} in that order
};

// All matrices with 0 <= b < a, 0 <= c < d, ad - bc = n, sorted
// lexicographically by (a,b,c,d). Enumerates (a,d) pairs under the bound
// a + d <= n + 1 (forced by bc = ad - n <= (a-1)(d-1)) and splits ad - n
// into divisor pairs (b,c). Throws std::out_of_range unless 1 <= n <= 10^6.
std::vector<IntMat2> enumerate_S(std::int64_t n);

// The sub-list with b > 0, order preserved.
std::vector<IntMat2> s_plus(const std::vector<IntMat2>& mats);

// theta_n: the formal sum of S_n with unit coefficients.
FormalMatSum theta(std::int64_t n);

// (M(infinity), M(0)) = (a/c, b/d) as exact points of P^1(Q).
std::pair<ProjPoint, ProjPoint> boundary(const IntMat2& m);

// sum_M u_M ((M infinity) - (M 0)).
P1Divisor boundary_sum(const FormalMatSum& t);

// Unique upper-triangular representative [[a,b],[0,d]] with a,d > 0 and
// 0 <= b < a of the right SL2(Z)-orbit M*SL2(Z). Column reduction by the
// extended gcd of the bottom row, then b mod a. Requires det(M) > 0.
IntMat2 orbit_canonical(const IntMat2& m);

// C_n condition: partition the support of t by orbit_canonical and test each
// orbit's boundary divisor against (infinity) - (0) (per-orbit mode), or the
// total against k((infinity) - (0)) with k = number of orbits (total mode).
// Throws std::invalid_argument if any matrix has determinant != n.
CnReport check_cn(const FormalMatSum& t, std::int64_t n,
                  CnMode mode = CnMode::kPerOrbit);

// Splits S_l (l prime, l <= 10^4) into the two diagonal matrices and the
// chains C_1, ..., C_{l-1}, where C_n starts at [[l,n],[0,1]] and follows the
// unique link M(0) = M'(infinity) down to [[1,0],[x_n,l]]. Verifies that the
// pieces are disjoint and exhaust S_l; a violation (impossible for prime l)
// throws std::logic_error. Non-prime or out-of-range l throws
// std::invalid_argument.
ChainDecomposition chain_decompose(std::int64_t l);

// Applies x -> (ax+c)/(bx+d) to each sample point. Requires positive inputs
// and a matrix from an S_n (non-negative entries, a,d >= 1), so outputs are
// strictly positive; a vanishing denominator throws std::domain_error.
std::vector<double> slash_points(const IntMat2& m,
                                 const std::vector<double>& xs);

// sum of divisors; sigma(l) = l + 1 for prime l. Requires n >= 1.
std::int64_t sigma(std::int64_t n);

bool is_prime(std::int64_t n);

}  // namespace rhz
