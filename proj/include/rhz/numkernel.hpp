#pragma once

#include <cstdint>

// Numerical kernel: digamma, dilogarithm, Rogers dilogarithm, and the
// Herglotz-Zagier function
//
//   HZ(x) = sum_{n>=1} (1/n) * (psi(n*x) - log(n*x)),   x > 0,
//
// together with its modified and refined forms
//
//   MHZ(x)   = HZ(x) - HZ(1) + (pi^2/12)(x - 2 + 1/x) - log^2(x)/4,
//   RHZ(x,y) = MHZ(x) - MHZ(y) + L(y/x).
//
// All functions are restricted to positive real arguments and evaluate in
// binary64. HZ is summed to a fixed cutoff N and closed with an asymptotic
// tail: since psi(z) - log(z) ~ -1/(2z) - sum_j B_{2j}/(2j z^{2j}), the
// remainder past N collapses to zeta tails sum_{n>N} n^{-2} and
// sum_{n>N} n^{-(2j+1)}, which are cheap to evaluate to ~1e-14.

namespace rhz {

// Truncation controls for hz/mhz/rhz. target_abs_error is the accuracy the
// caller wants; err_bound on the result reports what the truncation actually
// achieved (first-omitted-term estimate, not a certified bound).
struct EvalOptions {
  double target_abs_error = 1e-11;
  int series_cutoff = 10000;  // partial-sum length N for HZ
  int tail_order = 3;         // Bernoulli correction orders J in the HZ tail

  // Throws std::invalid_argument unless target_abs_error > 0,
  // series_cutoff >= 16 and 1 <= tail_order <= 8.
  void validate() const;
};

struct RealValue {
  double value = 0.0;
  double err_bound = 0.0;  // estimated absolute truncation error, >= 0
};

// psi(z) for z > 0. Upward recurrence psi(z+1) = psi(z) + 1/z until the
// argument reaches 16, then the Bernoulli asymptotic series.
// Absolute error ~1e-13 on [1e-3, 1e8]. Throws std::domain_error for z <= 0.
double digamma(double z);

// Li_2(x) = sum_{n>=1} x^n/n^2 for 0 <= x <= 1. Arguments above 1/2 are
// reduced by the Euler reflection so the series only runs on [0, 1/2].
double dilog(double x);

// Rogers dilogarithm: L(x) = Li_2(x) + log(x)log(1-x)/2 on (0,1), and
// L(x) = pi^2/3 - L(1/x) for x > 1. x = 1 is a domain error; callers that
// want the limit value use zeta2().
double rogers(double x);

// pi^2/6, correctly rounded.
double zeta2();

RealValue hz(double x, const EvalOptions& opts = {});
RealValue mhz(double x, const EvalOptions& opts = {});  // caches HZ(1) per options
RealValue rhz(double x, double y, const EvalOptions& opts = {});

namespace detail {
// sum_{k>n} k^{-s} for s >= 2, n >= 16, by Euler-Maclaurin off the integral.
// Accurate to ~1e-15 absolute in that range.
double zeta_tail(int s, std::int64_t n);
}  // namespace detail

}  // namespace rhz
