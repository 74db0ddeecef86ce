#include "rhz/numkernel.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>

namespace rhz {

namespace {

constexpr double kZeta2 = 1.6449340668482264365472286655905;  // pi^2/6

// B_{2j}/(2j), j = 1..9, used in the digamma asymptotic and the HZ tail.
constexpr double kBernOver2j[] = {
    1.0 / 12.0,   -1.0 / 120.0,       1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0,
    -691.0 / 32760.0, 1.0 / 12.0, -3617.0 / 8160.0, 43867.0 / 14364.0};

// B_{2k}/(2k)!, k = 1..5, for the Euler-Maclaurin zeta tails.
constexpr double kBernOverFact[] = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0,
                                    -1.0 / 1209600.0, 1.0 / 47900160.0};

constexpr double kDigammaShift = 16.0;

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error(std::string(name) + " must be positive and finite");
  }
}

// psi(z) - log(z) for z >= kDigammaShift:
//   -1/(2z) - sum_{j=1}^{8} B_{2j}/(2j z^{2j}).
// First omitted term at z = 16 is ~6e-22. Keeping the log out of this form
// matters for hz(): the summand (psi(nx) - log(nx))/n is ~1/n^2 while log(nx)
// grows, so forming the difference directly avoids cancellation.
double digamma_log_remainder(double z) {
  const double w = 1.0 / (z * z);
  double series = 0.0;
  for (int j = 7; j >= 0; --j) series = (kBernOver2j[j] + series) * w;
  return -0.5 / z - series;
}

double digamma_asymptotic(double z) {
  return std::log(z) + digamma_log_remainder(z);
}

}  // namespace

void EvalOptions::validate() const {
  if (!(target_abs_error > 0.0) || !std::isfinite(target_abs_error)) {
    throw std::invalid_argument("target_abs_error must be positive");
  }
  if (series_cutoff < 16) {
    throw std::invalid_argument("series_cutoff must be at least 16");
  }
  if (tail_order < 1 || tail_order > 8) {
    throw std::invalid_argument("tail_order must lie in [1, 8]");
  }
}

double zeta2() { return kZeta2; }

double digamma(double z) {
  require_positive(z, "digamma argument");
  // psi(z) = psi(z + m) - sum_{k=0}^{m-1} 1/(z + k); long double keeps the
  // shift sum from eating the error budget at small z.
  long double shift = 0.0L;
  while (z < kDigammaShift) {
    shift += 1.0L / z;
    z += 1.0;
  }
  return static_cast<double>(digamma_asymptotic(z) - shift);
}

double dilog(double x) {
  if (!(x >= 0.0) || !(x <= 1.0)) {
    throw std::domain_error("dilog argument must lie in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return kZeta2;
  if (x > 0.5) {
    // Euler reflection; 1-x is exact here (x in (1/2, 1)).
    return kZeta2 - std::log1p(x - 1.0) * std::log(1.0 - x) - dilog(1.0 - x);
  }
  double sum = 0.0;
  double power = 1.0;
  for (int n = 1; n <= 64; ++n) {
    power *= x;
    const double term = power / (static_cast<double>(n) * n);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

double rogers(double x) {
  require_positive(x, "rogers argument");
  if (x == 1.0) {
    throw std::domain_error("rogers is not defined at x = 1; use zeta2() for the limit");
  }
  if (x > 1.0) return 2.0 * kZeta2 - rogers(1.0 / x);
  return dilog(x) + 0.5 * std::log(x) * std::log1p(-x);
}

namespace detail {

double zeta_tail(int s, std::int64_t n) {
  // sum_{k>n} k^{-s} = a^{1-s}/(s-1) + a^{-s}/2
  //                    + sum_k B_{2k}/(2k)! * s(s+1)...(s+2k-2) * a^{-s-2k+1}
  // with a = n+1. Five correction terms keep the truncation below 1e-15
  // for s >= 2, n >= 16.
  const double a = static_cast<double>(n) + 1.0;
  const double inv = 1.0 / a;
  const double a_pow_ms = std::pow(inv, s);
  double result = a * a_pow_ms / (s - 1) + 0.5 * a_pow_ms;
  double deriv_scale = a_pow_ms * inv;  // a^{-s-1}
  double rising = s;                    // s(s+1)...(s+2k-2)
  for (int k = 1; k <= 5; ++k) {
    result += kBernOverFact[k - 1] * rising * deriv_scale;
    rising *= (s + 2 * k - 1) * (s + 2 * k);
    deriv_scale *= inv * inv;
  }
  return result;
}

}  // namespace detail

RealValue hz(double x, const EvalOptions& opts) {
  opts.validate();
  require_positive(x, "hz argument");

  const int cutoff = opts.series_cutoff;
  long double partial = 0.0L;
  for (int n = 1; n <= cutoff; ++n) {
    const double z = n * x;
    const double term = (z >= kDigammaShift ? digamma_log_remainder(z)
                                            : digamma(z) - std::log(z));
    partial += static_cast<long double>(term) / n;
  }

  // Tail past the cutoff, order by order in the psi asymptotic:
  //   sum_{n>N} (1/n)(psi(nx) - log(nx))
  //     = -(1/2x) T(2,N) - sum_{j=1}^{J} B_{2j}/(2j x^{2j}) T(2j+1, N),
  // T(s,N) = sum_{n>N} n^{-s}.
  double tail = -0.5 / x * detail::zeta_tail(2, cutoff);
  double x_pow = 1.0;
  const double inv_x2 = 1.0 / (x * x);
  for (int j = 1; j <= opts.tail_order; ++j) {
    x_pow *= inv_x2;
    tail -= kBernOver2j[j - 1] * x_pow * detail::zeta_tail(2 * j + 1, cutoff);
  }
  const double first_omitted = std::fabs(kBernOver2j[opts.tail_order]) * x_pow *
                               inv_x2 * detail::zeta_tail(2 * opts.tail_order + 3, cutoff);

  RealValue out;
  out.value = static_cast<double>(partial) + tail;
  out.err_bound = first_omitted + 1e-14;
  return out;
}

namespace {

// HZ(1) per options set; write-once entries, safe for concurrent readers.
RealValue hz_at_one(const EvalOptions& opts) {
  using Key = std::tuple<double, int, int>;
  static std::mutex mutex;
  static std::map<Key, RealValue> cache;
  const Key key{opts.target_abs_error, opts.series_cutoff, opts.tail_order};
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, hz(1.0, opts)).first;
  return it->second;
}

}  // namespace

RealValue mhz(double x, const EvalOptions& opts) {
  opts.validate();
  require_positive(x, "mhz argument");
  const RealValue at_x = hz(x, opts);
  const RealValue at_one = hz_at_one(opts);
  const double log_x = std::log(x);
  RealValue out;
  out.value = at_x.value - at_one.value + 0.5 * kZeta2 * (x - 2.0 + 1.0 / x) -
              0.25 * log_x * log_x;
  out.err_bound = at_x.err_bound + at_one.err_bound + 1e-15;
  return out;
}

RealValue rhz(double x, double y, const EvalOptions& opts) {
  opts.validate();
  require_positive(x, "rhz argument x");
  require_positive(y, "rhz argument y");
  if (x == y) throw std::domain_error("x must differ from y");
  const RealValue at_x = mhz(x, opts);
  const RealValue at_y = mhz(y, opts);
  RealValue out;
  out.value = at_x.value - at_y.value + rogers(y / x);
  out.err_bound = at_x.err_bound + at_y.err_bound + 1e-15;
  return out;
}

}  // namespace rhz
