#include "rhz/hecke.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace rhz {

namespace {

constexpr std::int64_t kMaxEnumerationDet = 1000000;
constexpr std::int64_t kMaxChainPrime = 10000;

// g = s*x + t*y with g = gcd(x,y) > 0; requires (x,y) != (0,0).
struct ExtGcd {
  std::int64_t g, s, t;
};

ExtGcd ext_gcd(std::int64_t x, std::int64_t y) {
  std::int64_t old_r = x, r = y;
  std::int64_t old_s = 1, s = 0;
  std::int64_t old_t = 0, t = 1;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  return {old_r, old_s, old_t};
}

}  // namespace

ProjPoint ProjPoint::reduce(std::int64_t num, std::int64_t den) {
  if (den == 0) {
    if (num == 0) throw std::invalid_argument("0/0 is not a point of P^1");
    return infinity();
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);  // gcd(0, den) = den
  return ProjPoint{num / g, den / g};
}

void FormalMatSum::add(const IntMat2& m, std::int64_t coeff) {
  if (coeff == 0) return;
  if (m.det() <= 0) {
    throw std::invalid_argument("formal sums only hold matrices with det > 0");
  }
  if (!terms_.empty() && terms_.begin()->first.det() != m.det()) {
    throw std::invalid_argument("all matrices in a formal sum must share one determinant");
  }
  const auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, coeff);
  } else if ((it->second += coeff) == 0) {
    terms_.erase(it);
  }
}

void P1Divisor::add(const ProjPoint& pt, std::int64_t coeff) {
  if (coeff == 0) return;
  const auto it = terms_.find(pt);
  if (it == terms_.end()) {
    terms_.emplace(pt, coeff);
  } else if ((it->second += coeff) == 0) {
    terms_.erase(it);
  }
}

P1Divisor P1Divisor::inf_minus_zero() {
  P1Divisor d;
  d.add(ProjPoint::infinity(), 1);
  d.add(ProjPoint::zero(), -1);
  return d;
}

std::vector<IntMat2> enumerate_S(std::int64_t n) {
  if (n < 1 || n > kMaxEnumerationDet) {
    throw std::out_of_range("enumerate_S requires 1 <= n <= 10^6");
  }
  std::vector<IntMat2> out;
  for (std::int64_t a = 1; a <= n; ++a) {
    // bc = ad - n >= 0 forces d >= n/a; bc <= (a-1)(d-1) forces a + d <= n+1.
    const std::int64_t d_lo = std::max<std::int64_t>(1, (n + a - 1) / a);
    const std::int64_t d_hi = n + 1 - a;
    for (std::int64_t d = d_lo; d <= d_hi; ++d) {
      const std::int64_t m = a * d - n;
      if (m == 0) {
        // bc = 0: either column of zeros may carry the free entry.
        for (std::int64_t c = 0; c < d; ++c) out.push_back({a, 0, c, d});
        for (std::int64_t b = 1; b < a; ++b) out.push_back({a, b, 0, d});
        continue;
      }
      for (std::int64_t e = 1; e * e <= m; ++e) {
        if (m % e != 0) continue;
        const std::int64_t f = m / e;
        if (e < a && f < d) out.push_back({a, e, f, d});
        if (f != e && f < a && e < d) out.push_back({a, f, e, d});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<IntMat2> s_plus(const std::vector<IntMat2>& mats) {
  std::vector<IntMat2> out;
  out.reserve(mats.size());
  for (const IntMat2& m : mats) {
    if (m.b > 0) out.push_back(m);
  }
  return out;
}

FormalMatSum theta(std::int64_t n) {
  FormalMatSum t;
  for (const IntMat2& m : enumerate_S(n)) t.add(m, 1);
  return t;
}

std::pair<ProjPoint, ProjPoint> boundary(const IntMat2& m) {
  return {ProjPoint::reduce(m.a, m.c), ProjPoint::reduce(m.b, m.d)};
}

P1Divisor boundary_sum(const FormalMatSum& t) {
  P1Divisor out;
  for (const auto& [m, coeff] : t.terms()) {
    const auto [at_inf, at_zero] = boundary(m);
    out.add(at_inf, coeff);
    out.add(at_zero, -coeff);
  }
  return out;
}

IntMat2 orbit_canonical(const IntMat2& m) {
  const std::int64_t det = m.det();
  if (det <= 0) {
    throw std::invalid_argument("orbit_canonical requires det > 0");
  }
  // U = [[d/g, s],[-c/g, t]] has det 1 and clears the bottom-left entry:
  // M*U = [[det/g, a*s + b*t],[0, g]] with g = gcd(c,d).
  const ExtGcd e = ext_gcd(m.c, m.d);
  const std::int64_t new_a = det / e.g;
  std::int64_t new_b = (m.a * e.s + m.b * e.t) % new_a;
  if (new_b < 0) new_b += new_a;
  return {new_a, new_b, 0, e.g};
}

CnReport check_cn(const FormalMatSum& t, std::int64_t n, CnMode mode) {
  if (n < 1) throw std::out_of_range("check_cn requires n >= 1");
  for (const auto& [m, coeff] : t.terms()) {
    if (m.det() != n) {
      throw std::invalid_argument("check_cn: matrix with determinant != n in the sum");
    }
  }

  std::map<IntMat2, FormalMatSum> parts;
  for (const auto& [m, coeff] : t.terms()) {
    parts[orbit_canonical(m)].add(m, coeff);
  }

  CnReport rep;
  rep.mode = mode;
  rep.total = boundary_sum(t);
  const P1Divisor target = P1Divisor::inf_minus_zero();
  bool per_orbit_ok = true;
  for (const auto& [canon, part] : parts) {
    OrbitDivisor od;
    od.canonical = canon;
    od.divisor = boundary_sum(part);
    od.ok = (od.divisor == target);
    per_orbit_ok = per_orbit_ok && od.ok;
    rep.orbits.push_back(std::move(od));
  }

  if (mode == CnMode::kPerOrbit) {
    rep.pass = per_orbit_ok;
  } else {
    P1Divisor want;
    const std::int64_t k = static_cast<std::int64_t>(parts.size());
    want.add(ProjPoint::infinity(), k);
    want.add(ProjPoint::zero(), -k);
    rep.pass = (rep.total == want);
  }
  return rep;
}

ChainDecomposition chain_decompose(std::int64_t l) {
  if (l < 2 || l > kMaxChainPrime || !is_prime(l)) {
    throw std::invalid_argument("chain_decompose requires a prime l with 2 <= l <= 10^4");
  }
  const std::vector<IntMat2> all = enumerate_S(l);
  std::set<IntMat2> remaining(all.begin(), all.end());

  ChainDecomposition out;
  out.diag_upper = {l, 0, 0, 1};
  out.diag_lower = {1, 0, 0, l};
  if (remaining.erase(out.diag_upper) != 1 || remaining.erase(out.diag_lower) != 1) {
    throw std::logic_error("chain_decompose: diagonal matrices missing from S_l");
  }

  for (std::int64_t n = 1; n <= l - 1; ++n) {
    Chain chain;
    IntMat2 cur{l, n, 0, 1};
    if (remaining.erase(cur) != 1) {
      throw std::logic_error("chain_decompose: start [[l,n],[0,1]] missing or already consumed");
    }
    chain.matrices.push_back(cur);
    std::size_t steps = 0;
    while (cur.b != 0) {
      if (++steps > all.size()) {
        throw std::logic_error("chain_decompose: link walk does not terminate");
      }
      const ProjPoint target = boundary(cur).second;  // cur(0)
      const IntMat2* next = nullptr;
      int hits = 0;
      for (const IntMat2& cand : remaining) {
        if (boundary(cand).first == target) {
          ++hits;
          next = &cand;
        }
      }
      if (hits != 1) {
        throw std::logic_error("chain_decompose: link M(0) = M'(infinity) is not unique");
      }
      cur = *next;
      remaining.erase(cur);
      chain.matrices.push_back(cur);
    }
    if (cur.a != 1 || cur.d != l || cur.c < 1 || cur.c > l - 1) {
      throw std::logic_error("chain_decompose: chain does not end at [[1,0],[x_n,l]]");
    }
    chain.x_n = cur.c;
    out.chains.push_back(std::move(chain));
  }

  if (!remaining.empty()) {
    throw std::logic_error("chain_decompose: chains and diagonals do not exhaust S_l");
  }
  return out;
}

std::vector<double> slash_points(const IntMat2& m, const std::vector<double>& xs) {
  if (m.a < 1 || m.d < 1 || m.b < 0 || m.c < 0) {
    throw std::domain_error("slash_points expects a >= 1, d >= 1 and non-negative b, c"
                            " (an S_n matrix)");
  }
  std::vector<double> out;
  out.reserve(xs.size());
  for (const double x : xs) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw std::domain_error("slash_points requires positive finite sample points");
    }
    const double den = static_cast<double>(m.b) * x + static_cast<double>(m.d);
    if (den == 0.0) throw std::domain_error("slash_points: vanishing denominator");
    out.push_back((static_cast<double>(m.a) * x + static_cast<double>(m.c)) / den);
  }
  return out;
}

std::int64_t sigma(std::int64_t n) {
  if (n < 1) throw std::out_of_range("sigma requires n >= 1");
  std::int64_t sum = 0;
  for (std::int64_t e = 1; e * e <= n; ++e) {
    if (n % e != 0) continue;
    sum += e;
    if (e != n / e) sum += n / e;
  }
  return sum;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) return false;
  }
  return true;
}

}  // namespace rhz
