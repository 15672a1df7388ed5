#include "trevisan/params.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "trevisan/error.hpp"

namespace trevisan {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
// Second eigenvalue ratio of the degree-8 expander.
const double kLambda = 5.0 * kSqrt2 / 8.0;

void check_common(uint64_t n, double alpha, double eps) {
  if (n < 2) {
    throw DomainError("input length n must be at least 2");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
  if (!(eps > 0.0 && eps < 1.0)) {
    throw DomainError("eps must lie in (0, 1), got " + std::to_string(eps));
  }
}

uint64_t checked_ceil(double x, const char* what) {
  if (!std::isfinite(x) || x < 0.0 || x >= 0x1p63) {
    throw InfeasibleError(std::string(what) + " is not representable (" + std::to_string(x) + ")");
  }
  return static_cast<uint64_t>(std::ceil(x));
}

ExtractorParams finish(ExtractorParams p) { return with_output_len(p, p.m); }

}  // namespace

double overlap_value(Overlap r) { return r == Overlap::One ? 1.0 : 2.0 * std::numbers::e; }

std::string_view overlap_name(Overlap r) { return r == Overlap::One ? "1" : "2e"; }

std::string_view bitext_name(BitextKind kind) {
  switch (kind) {
    case BitextKind::Xor:
      return "xor";
    case BitextKind::Rsh:
      return "rsh";
    case BitextKind::Lu:
      return "lu";
  }
  return "?";
}

unsigned ceil_log2(uint64_t x) {
  if (x <= 1) {
    return 0;
  }
  return static_cast<unsigned>(64 - std::countl_zero(x - 1));
}

uint64_t ceil_sqrt(uint64_t x) {
  auto r = static_cast<uint64_t>(std::sqrt(static_cast<double>(x)));
  while (r > 0 && static_cast<unsigned __int128>(r) * r >= x) {
    --r;
  }
  while (static_cast<unsigned __int128>(r) * r < x) {
    ++r;
  }
  return r;
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("binary entropy argument outside [0, 1]");
  }
  if (p == 0.0 || p == 1.0) {
    return 0.0;
  }
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double binary_entropy_inv(double y) {
  if (!(y >= 0.0 && y <= 1.0)) {
    throw DomainError("inverse binary entropy argument outside [0, 1]");
  }
  if (y == 0.0) {
    return 0.0;
  }
  if (y == 1.0) {
    return 0.5;
  }
  // h is strictly increasing on [0, 1/2]; bisect until the bracket stops
  // shrinking.
  double lo = 0.0;
  double hi = 0.5;
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      break;
    }
    if (binary_entropy(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double solve_w(double nu) {
  if (!(nu > 0.0 && nu <= 0.5)) {
    throw DomainError("nu must lie in (0, 1/2]");
  }
  auto f = [nu](double w) {
    const double u = 1.0 - nu + w;
    return w * std::log2(w) - u * std::log2(u);
  };
  // f(0+) = -(1 - nu) log(1 - nu) > 0, f(nu) = nu log nu < 0.
  const double f0 = -(1.0 - nu) * std::log2(1.0 - nu);
  const double fnu = f(nu);
  if (!(f0 > 0.0) || !(fnu < 0.0)) {
    throw NoRootError("w-equation has no sign change on (0, nu) for nu = " + std::to_string(nu));
  }
  double lo = 0.0;
  double hi = nu;
  for (int iter = 0; iter < 4000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      break;
    }
    if (f(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double w = hi;
  if (lo > 0.0 && std::abs(f(lo)) < std::abs(f(hi))) {
    w = lo;
  }
  if (!(w > 0.0 && w < nu) || !(std::abs(f(w)) < 1e-12)) {
    throw NoRootError("bisection for the w-equation did not converge for nu = " + std::to_string(nu));
  }
  return w;
}

ExtractorParams xor_params(uint64_t n, uint64_t m, double alpha, double mu, double eps, Overlap r) {
  check_common(n, alpha, eps);
  ExtractorParams p;
  p.bitext = BitextKind::Xor;
  p.n = n;
  p.m = m;
  p.alpha = alpha;
  p.mu = mu;
  p.eps = eps;
  p.r = r;
  p.gamma = mu * alpha;
  if (!(p.gamma > 0.0 && p.gamma < 1.0)) {
    throw InfeasibleError("gamma = mu * alpha must lie in (0, 1), got " + std::to_string(p.gamma));
  }
  const double hinv = binary_entropy_inv(p.gamma);
  if (!(hinv > 0.0)) {
    throw InfeasibleError("inverse binary entropy of gamma vanishes");
  }
  p.ell = checked_ceil(2.0 * std::numbers::ln2 / hinv * std::log2((2.0 + kSqrt2) / eps), "XOR sample count");
  const uint64_t width = ceil_log2(n);
  if (p.ell > UINT64_MAX / width) {
    throw OverflowError("XOR seed length overflows");
  }
  p.t_req = p.ell * width;
  p.overhead = p.gamma * static_cast<double>(n) + 6.0 * std::log2((1.0 + kSqrt2) / eps) +
               std::log2(4.0 / 3.0);
  return finish(p);
}

ExtractorParams rsh_params(uint64_t n, uint64_t m, double alpha, double eps, Overlap r) {
  check_common(n, alpha, eps);
  ExtractorParams p;
  p.bitext = BitextKind::Rsh;
  p.n = n;
  p.m = m;
  p.alpha = alpha;
  p.eps = eps;
  p.r = r;
  p.ell = checked_ceil(std::log2(static_cast<double>(n)) + 2.0 * std::log2(2.0 / eps), "RSH block length");
  p.t_req = 2 * p.ell;
  p.blocks = (n + p.ell - 1) / p.ell;
  p.overhead = 4.0 * std::log2(1.0 / eps) + 6.0;
  return finish(p);
}

ExtractorParams lu_params(uint64_t n, uint64_t m, double alpha, double nu, double eps, Overlap r) {
  check_common(n, alpha, eps);
  if (!(nu > 0.0 && nu <= 0.5)) {
    throw DomainError("nu must lie in (0, 1/2]");
  }
  ExtractorParams p;
  p.bitext = BitextKind::Lu;
  p.n = n;
  p.m = m;
  p.alpha = alpha;
  p.nu = nu;
  p.eps = eps;
  p.r = r;
  const double delta_log2 = 2.0 * (std::log2(eps) - std::log2(2.0 + kSqrt2));
  p.w = solve_w(nu);
  p.walk_steps = checked_ceil(std::log2(p.w) / (2.0 * std::log2(kLambda)), "walk sub-step count");
  const double shrink = std::log2(1.0 - nu + p.w);
  if (!(shrink < 0.0)) {
    throw InfeasibleError("log(1 - nu + w) is not negative; walk length unbounded");
  }
  const double ell = 4.0 * delta_log2 / shrink;
  if (!std::isfinite(ell) || ell > 0x1p40) {
    throw InfeasibleError("Lu walk length " + std::to_string(ell) + " is too large");
  }
  p.ell = static_cast<uint64_t>(std::ceil(ell));
  const uint64_t side = ceil_sqrt(n);
  const uint64_t width = ceil_log2(side * side);
  const unsigned __int128 t = static_cast<unsigned __int128>(width) +
                              static_cast<unsigned __int128>(3) * p.walk_steps * (p.ell - 1) + p.ell;
  if (t > UINT64_MAX) {
    throw OverflowError("Lu seed length overflows");
  }
  p.t_req = static_cast<uint64_t>(t);
  p.overhead = binary_entropy(nu) * static_cast<double>(n) + 6.0 * std::log2((2.0 + kSqrt2) / eps) - 2.0;
  return finish(p);
}

double required_entropy(const ExtractorParams& params, uint64_t m) {
  return params.overhead + overlap_value(params.r) * static_cast<double>(m);
}

ExtractorParams with_output_len(ExtractorParams params, uint64_t m) {
  params.m = m;
  params.k = required_entropy(params, m);
  params.feasible = m >= 1 && params.k <= params.source_entropy();
  return params;
}

uint64_t max_output_len(const ExtractorParams& params) {
  const double budget = params.source_entropy();
  if (params.overhead >= budget) {
    return 0;
  }
  const double guess = std::floor((budget - params.overhead) / overlap_value(params.r));
  auto m = static_cast<uint64_t>(guess);
  while (m > 0 && required_entropy(params, m) > budget) {
    --m;
  }
  while (required_entropy(params, m + 1) <= budget) {
    ++m;
  }
  return m;
}

}  // namespace trevisan
