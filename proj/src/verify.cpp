#include "rhz/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace rhz {

namespace {

// All L-arguments go through here: enforces positivity and the unit exclusion
// band so singular grid points surface as domain errors (which run_grid turns
// into skip records) rather than garbage values.
double checked_rogers(double arg, const char* what) {
  if (!(arg > 0.0) || !std::isfinite(arg)) {
    throw std::domain_error(std::string(what) + " must be positive");
  }
  if (std::fabs(arg - 1.0) <= kUnitBand) {
    throw std::domain_error(std::string(what) + " lies within 1e-6 of 1");
  }
  return rogers(arg);
}

void require_positive_arg(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::domain_error(std::string(name) + " must be positive and finite");
  }
}

// Checks that the ratio fed to rhz's Rogers term stays clear of 1, then keeps
// the value for the caller.
void require_off_band_ratio(double num, double den, const char* what) {
  const double ratio = num / den;
  if (std::fabs(ratio - 1.0) <= kUnitBand) {
    throw std::domain_error(std::string(what) + " lies within 1e-6 of 1");
  }
}

void finish_mod(CheckReport& rep) {
  rep.residual = rep.lhs - rep.rhs;
  const auto [k, excess] = nearest_zeta2_multiple(rep.residual);
  rep.zeta2_multiple = k;
  rep.excess = excess;
  rep.pass = excess <= rep.tolerance;
}

void finish_exact(CheckReport& rep) {
  rep.residual = rep.lhs - rep.rhs;
  rep.zeta2_multiple = 0;
  rep.excess = std::fabs(rep.residual);
  rep.pass = rep.excess <= rep.tolerance;
}

void require_s_plus_member(const IntMat2& m, std::int64_t l) {
  if (m.det() != l || m.b <= 0 || m.b >= m.a || m.c < 0 || m.c >= m.d) {
    throw std::invalid_argument(
        "check_telescope requires a matrix from S_l^+ "
        "(0 < b < a, 0 <= c < d, det = l)");
  }
}

void require_prime(std::int64_t l, const char* who) {
  if (!is_prime(l)) {
    throw std::invalid_argument(std::string(who) + " requires a prime modulus");
  }
}

double resolve_tolerance(double requested, double fallback) {
  if (requested < 0.0) throw std::invalid_argument("tolerance must be >= 0");
  return requested > 0.0 ? requested : fallback;
}

}  // namespace

bool RunResult::all_pass() const {
  return std::all_of(reports.begin(), reports.end(),
                     [](const CheckReport& r) { return r.pass; });
}

double RunResult::max_excess() const {
  double m = 0.0;
  for (const CheckReport& r : reports) m = std::max(m, r.excess);
  return m;
}

std::pair<std::int64_t, double> nearest_zeta2_multiple(double v) {
  if (!std::isfinite(v)) throw std::domain_error("value must be finite");
  const std::int64_t k = std::llround(v / zeta2());
  return {k, std::fabs(v - static_cast<double>(k) * zeta2())};
}

CheckReport check_five_term(double x, double y, double tolerance) {
  require_positive_arg(x, "x");
  require_positive_arg(y, "y");
  if ((x - 1.0) * (y - 1.0) <= 0.0 && std::fabs(x - 1.0) > kUnitBand &&
      std::fabs(y - 1.0) > kUnitBand) {
    throw std::domain_error("x and y must lie on the same side of 1");
  }

  CheckReport rep;
  rep.identity = "five_term";
  rep.x = x;
  rep.y = y;
  rep.tolerance = tolerance;
  rep.lhs = checked_rogers(x, "x") - checked_rogers(y, "y") +
            checked_rogers(y / x, "y/x") -
            checked_rogers((y - 1.0) / (x - 1.0), "(y-1)/(x-1)") +
            checked_rogers(x * (y - 1.0) / (y * (x - 1.0)), "(1-1/y)/(1-1/x)");
  rep.rhs = 0.0;
  finish_mod(rep);
  return rep;
}

CheckReport check_reflection(double x, double tolerance) {
  require_positive_arg(x, "x");
  CheckReport rep;
  rep.identity = "reflection";
  rep.x = x;
  rep.tolerance = tolerance;
  rep.lhs = checked_rogers(x, "x") + checked_rogers(1.0 / x, "1/x");
  rep.rhs = 0.0;
  finish_mod(rep);
  // The reflection is an exact equality L(x) + L(1/x) = pi^2/3: the multiple
  // must come out as exactly 2, not merely some k with small excess.
  rep.pass = rep.pass && rep.zeta2_multiple == 2;
  return rep;
}

CheckReport check_rz(std::int64_t n, double x, double tolerance,
                     const EvalOptions& opts) {
  if (n < 1) throw std::out_of_range("check_rz requires n >= 1");
  require_positive_arg(x, "x");

  CheckReport rep;
  rep.identity = "rz";
  rep.l_or_n = n;
  rep.x = x;
  rep.tolerance = tolerance;

  const std::vector<IntMat2> s = enumerate_S(n);
  double lhs = 0.0;
  double err = 0.0;
  for (const IntMat2& m : s) {
    const double mapped = slash_points(m, {x})[0];
    const RealValue v = mhz(mapped, opts);
    lhs += v.value;
    err += v.err_bound;
  }
  const RealValue at_x = mhz(x, opts);
  const std::int64_t sig = sigma(n);
  lhs -= static_cast<double>(sig) * at_x.value;
  err += static_cast<double>(sig) * at_x.err_bound;

  double rhs = 0.0;
  for (const IntMat2& m : s_plus(s)) {
    const double a = static_cast<double>(m.a), b = static_cast<double>(m.b);
    const double c = static_cast<double>(m.c), d = static_cast<double>(m.d);
    // (x + c/a)/(x + d/b) = b(ax+c) / (a(bx+d)); the x = 1 instance has exact
    // integer numerator and denominator.
    const double at_arg = (b * (a * x + c)) / (a * (b * x + d));
    const double at_one = static_cast<double>(m.b * (m.a + m.c)) /
                          static_cast<double>(m.a * (m.b + m.d));
    rhs += checked_rogers(at_arg, "(x+c/a)/(x+d/b)") -
           checked_rogers(at_one, "(1+c/a)/(1+d/b)");
  }
  double divisor_term = 0.0;
  for (std::int64_t r = 1; r * r <= n; ++r) {
    if (n % r != 0) continue;
    divisor_term += static_cast<double>(r) *
                    std::log(static_cast<double>(r) * r / n);
    const std::int64_t q = n / r;
    if (q != r) {
      divisor_term += static_cast<double>(q) *
                      std::log(static_cast<double>(q) * q / n);
    }
  }
  rhs += 0.5 * divisor_term * std::log(x);

  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.err_bound = err;
  finish_exact(rep);
  return rep;
}

CheckReport check_theorem1(std::int64_t l, double x, double y, double tolerance,
                           const EvalOptions& opts) {
  require_prime(l, "check_theorem1");
  require_positive_arg(x, "x");
  require_positive_arg(y, "y");
  require_off_band_ratio(y, x, "y/x");

  CheckReport rep;
  rep.identity = "theorem1";
  rep.l_or_n = l;
  rep.x = x;
  rep.y = y;
  rep.tolerance = tolerance;

  double lhs = 0.0;
  double err = 0.0;
  for (const IntMat2& m : enumerate_S(l)) {
    const std::vector<double> mapped = slash_points(m, {x, y});
    require_off_band_ratio(mapped[1], mapped[0], "slashed y/x");
    const RealValue v = rhz(mapped[0], mapped[1], opts);
    lhs += v.value;
    err += v.err_bound;
  }
  const RealValue base = rhz(x, y, opts);
  const double rhs = (l + 1) * base.value +
                     0.5 * (l - 1) * std::log(static_cast<double>(l)) *
                         std::log(x / y);
  err += (l + 1) * base.err_bound;

  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.err_bound = err;
  finish_mod(rep);
  return rep;
}

CheckReport check_telescope(const IntMat2& m, std::int64_t l, double x,
                            double y, double tolerance) {
  require_s_plus_member(m, l);
  require_positive_arg(x, "x");
  require_positive_arg(y, "y");

  CheckReport rep;
  rep.identity = "telescope";
  rep.l_or_n = l;
  rep.matrix = m;
  rep.has_matrix = true;
  rep.x = x;
  rep.y = y;
  rep.tolerance = tolerance;

  const double a = static_cast<double>(m.a), b = static_cast<double>(m.b);
  const double c = static_cast<double>(m.c), d = static_cast<double>(m.d);
  const double ax_c = a * x + c, bx_d = b * x + d;
  const double ay_c = a * y + c, by_d = b * y + d;

  rep.lhs = checked_rogers((b * ax_c) / (a * bx_d), "(x+c/a)/(x+d/b)") -
            checked_rogers((b * ay_c) / (a * by_d), "(y+c/a)/(y+d/b)") +
            checked_rogers((ay_c * bx_d) / (by_d * ax_c),
                           "(ay+c)(bx+d)/((by+d)(ax+c))");
  rep.rhs = checked_rogers(bx_d / by_d, "(bx+d)/(by+d)") -
            checked_rogers(ax_c / ay_c, "(ax+c)/(ay+c)");
  finish_mod(rep);
  return rep;
}

CheckReport check_chain_sum(std::int64_t l, std::int64_t n, double x, double y,
                            double tolerance) {
  const ChainDecomposition dec = chain_decompose(l);  // validates l
  if (n < 1 || n > l - 1) {
    throw std::invalid_argument("check_chain_sum requires 1 <= n <= l-1");
  }
  require_positive_arg(x, "x");
  require_positive_arg(y, "y");

  CheckReport rep;
  rep.identity = "chain_sum";
  rep.l_or_n = l;
  rep.chain_index = n;
  rep.x = x;
  rep.y = y;
  rep.tolerance = tolerance;

  const Chain& chain = dec.chains[static_cast<std::size_t>(n - 1)];
  double lhs = 0.0;
  for (const IntMat2& m : chain.matrices) {
    if (m.b == 0) continue;  // terminal element is outside S_l^+
    const double a = static_cast<double>(m.a), b = static_cast<double>(m.b);
    const double c = static_cast<double>(m.c), d = static_cast<double>(m.d);
    lhs += checked_rogers((b * x + d) / (b * y + d), "(bx+d)/(by+d)") -
           checked_rogers((a * x + c) / (a * y + c), "(ax+c)/(ay+c)");
  }
  const double xn = static_cast<double>(chain.x_n);
  rep.lhs = lhs;
  rep.rhs = checked_rogers((x + xn) / (y + xn), "(x+x_n)/(y+x_n)") -
            checked_rogers(x / y, "x/y");
  finish_mod(rep);
  return rep;
}

CheckReport check_complement_sum(std::int64_t l, double x, double y,
                                 double tolerance) {
  require_prime(l, "check_complement_sum");
  require_positive_arg(x, "x");
  require_positive_arg(y, "y");

  // Structural form of the complement: the two diagonals plus the lower
  // column [[1,0],[n,l]], n = 1..l-1. Anything else breaks the chain
  // decomposition and is a logic error, not a numeric failure.
  std::vector<IntMat2> complement;
  for (const IntMat2& m : enumerate_S(l)) {
    if (m.b == 0) complement.push_back(m);
  }
  std::vector<IntMat2> expected;
  for (std::int64_t n = 0; n <= l - 1; ++n) expected.push_back({1, 0, n, l});
  expected.push_back({l, 0, 0, 1});
  std::sort(expected.begin(), expected.end());
  if (complement != expected) {
    throw std::logic_error(
        "check_complement_sum: S_l \\ S_l^+ does not have the expected form");
  }

  CheckReport rep;
  rep.identity = "complement_sum";
  rep.l_or_n = l;
  rep.x = x;
  rep.y = y;
  rep.tolerance = tolerance;

  double lhs = 0.0;
  for (const IntMat2& m : complement) {
    const double a = static_cast<double>(m.a), b = static_cast<double>(m.b);
    const double c = static_cast<double>(m.c), d = static_cast<double>(m.d);
    lhs += checked_rogers(((a * y + c) * (b * x + d)) /
                              ((b * y + d) * (a * x + c)),
                          "(ay+c)(bx+d)/((by+d)(ax+c))");
  }
  double rhs = 2.0 * checked_rogers(y / x, "y/x");
  for (std::int64_t n = 1; n <= l - 1; ++n) {
    const double nn = static_cast<double>(n);
    rhs += checked_rogers((y + nn) / (x + nn), "(y+n)/(x+n)");
  }

  rep.lhs = lhs;
  rep.rhs = rhs;
  finish_exact(rep);
  return rep;
}

double decomposition_gap(std::int64_t l, double x, double y,
                         const EvalOptions& opts) {
  const double thm = check_theorem1(l, x, y, kDefaultModTolerance, opts).residual;
  double parts = 0.0;
  for (const IntMat2& m : s_plus(enumerate_S(l))) {
    parts += check_telescope(m, l, x, y).residual;
  }
  for (std::int64_t n = 1; n <= l - 1; ++n) {
    parts += check_chain_sum(l, n, x, y).residual;
  }
  parts += check_complement_sum(l, x, y).residual;
  parts += check_rz(l, x, kDefaultExactTolerance, opts).residual;
  parts -= check_rz(l, y, kDefaultExactTolerance, opts).residual;
  return thm - parts;
}

RunResult run_grid(const std::string& identity,
                   const std::vector<std::int64_t>& moduli,
                   const GridSpec& grid, double tolerance) {
  if (grid.x_values.empty()) {
    throw std::invalid_argument("run_grid requires a non-empty x grid");
  }
  for (const double v : grid.x_values) {
    if (!(v > 0.0)) throw std::invalid_argument("grid values must be positive");
  }
  for (const double v : grid.y_values) {
    if (!(v > 0.0)) throw std::invalid_argument("grid values must be positive");
  }

  RunResult out;
  const auto record_skip = [&](std::int64_t l_or_n, std::int64_t chain_index,
                               double x, double y, const std::string& reason) {
    out.skips.push_back({identity, l_or_n, chain_index, x, y, reason});
  };
  // Runs one check, converting domain errors (band hits, equal points, ...)
  // into skip records; anything else propagates.
  const auto attempt = [&](std::int64_t l_or_n, std::int64_t chain_index,
                           double x, double y, const auto& fn) {
    try {
      out.reports.push_back(fn());
    } catch (const std::domain_error& e) {
      record_skip(l_or_n, chain_index, x, y, e.what());
    }
  };
  const auto for_each_pair = [&](std::int64_t l_or_n, std::int64_t chain_index,
                                 bool same_side, const auto& fn) {
    if (grid.y_values.empty()) {
      throw std::invalid_argument("run_grid requires a non-empty y grid for pair identities");
    }
    for (const double x : grid.x_values) {
      for (const double y : grid.y_values) {
        if (grid.exclude_equal && x == y) {
          record_skip(l_or_n, chain_index, x, y, "x = y excluded by grid constraint");
          continue;
        }
        if (same_side && grid.enforce_same_side && (x - 1.0) * (y - 1.0) <= 0.0) {
          record_skip(l_or_n, chain_index, x, y, "x and y on opposite sides of 1");
          continue;
        }
        attempt(l_or_n, chain_index, x, y, [&] { return fn(x, y); });
      }
    }
  };
  const auto require_moduli = [&] {
    if (moduli.empty()) {
      throw std::invalid_argument("run_grid requires moduli for identity '" + identity + "'");
    }
  };

  if (identity == "five_term") {
    const double tol = resolve_tolerance(tolerance, kDefaultModTolerance);
    for_each_pair(0, 0, /*same_side=*/true,
                  [&](double x, double y) { return check_five_term(x, y, tol); });
  } else if (identity == "reflection") {
    const double tol = resolve_tolerance(tolerance, kDefaultReflectionTolerance);
    for (const double x : grid.x_values) {
      attempt(0, 0, x, 0.0, [&] { return check_reflection(x, tol); });
    }
  } else if (identity == "rz") {
    const double tol = resolve_tolerance(tolerance, kDefaultExactTolerance);
    require_moduli();
    for (const std::int64_t n : moduli) {
      for (const double x : grid.x_values) {
        attempt(n, 0, x, 0.0, [&] { return check_rz(n, x, tol); });
      }
    }
  } else if (identity == "theorem1") {
    const double tol = resolve_tolerance(tolerance, kDefaultModTolerance);
    require_moduli();
    for (const std::int64_t l : moduli) {
      for_each_pair(l, 0, /*same_side=*/false, [&](double x, double y) {
        return check_theorem1(l, x, y, tol);
      });
    }
  } else if (identity == "telescope") {
    const double tol = resolve_tolerance(tolerance, kDefaultModTolerance);
    require_moduli();
    for (const std::int64_t l : moduli) {
      for (const IntMat2& m : s_plus(enumerate_S(l))) {
        for_each_pair(l, 0, /*same_side=*/false, [&](double x, double y) {
          return check_telescope(m, l, x, y, tol);
        });
      }
    }
  } else if (identity == "chain_sum") {
    const double tol = resolve_tolerance(tolerance, kDefaultModTolerance);
    require_moduli();
    for (const std::int64_t l : moduli) {
      for (std::int64_t n = 1; n <= l - 1; ++n) {
        for_each_pair(l, n, /*same_side=*/false, [&](double x, double y) {
          return check_chain_sum(l, n, x, y, tol);
        });
      }
    }
  } else if (identity == "complement_sum") {
    const double tol = resolve_tolerance(tolerance, kDefaultComplementTolerance);
    require_moduli();
    for (const std::int64_t l : moduli) {
      for_each_pair(l, 0, /*same_side=*/false, [&](double x, double y) {
        return check_complement_sum(l, x, y, tol);
      });
    }
  } else {
    throw std::invalid_argument("run_grid: unknown identity '" + identity + "'");
  }
  return out;
}

std::vector<std::pair<double, double>> sample_five_term_pairs(
    std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // Top 53 bits -> [0,1): identical across platforms, unlike
  // std::uniform_real_distribution, whose output is implementation-defined.
  const auto uniform01 = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  std::vector<std::pair<double, double>> out;
  out.reserve(count);
  while (out.size() < count) {
    const bool below_one = (rng() & 1u) != 0;
    const double lo = below_one ? 0.05 : 1.05;
    const double hi = below_one ? 0.95 : 10.0;
    const double x = lo + (hi - lo) * uniform01();
    double y = lo + (hi - lo) * uniform01();
    while (std::fabs(x - y) < 0.01) y = lo + (hi - lo) * uniform01();
    out.emplace_back(x, y);
  }
  return out;
}

}  // namespace rhz
