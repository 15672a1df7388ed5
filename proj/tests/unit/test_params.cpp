#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <random>

#include "doctest.h"
#include "trevisan/error.hpp"
#include "trevisan/params.hpp"

using namespace trevisan;
using Real = boost::multiprecision::cpp_dec_float_50;

namespace {

// 50-digit reference formulas, written out independently of the library.
Real log2r(const Real& x) { return log(x) / log(Real(2)); }

Real h_ref(const Real& p) { return -p * log2r(p) - (1 - p) * log2r(1 - p); }

Real h_inv_ref(const Real& y) {
  Real lo = 0, hi = Real(1) / 2;
  for (int i = 0; i < 200; ++i) {
    const Real mid = (lo + hi) / 2;
    (h_ref(mid) < y ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

Real w_ref(const Real& nu) {
  Real lo = Real("1e-40"), hi = nu;
  for (int i = 0; i < 300; ++i) {
    const Real mid = (lo + hi) / 2;
    const Real u = 1 - nu + mid;
    const Real f = mid * log2r(mid) - u * log2r(u);
    (f > 0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

uint64_t ceil_ref(const Real& x) { return static_cast<uint64_t>(ceil(x)); }

uint64_t ceil_log2_ref(uint64_t n) {
  uint64_t bits = 0;
  while ((uint64_t{1} << bits) < n) {
    ++bits;
  }
  return bits;
}

const Real kSqrt2 = sqrt(Real(2));

}  // namespace

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.11) == doctest::Approx(h_ref(Real("0.11")).convert_to<double>()).epsilon(1e-14));
  CHECK(binary_entropy(0.11) == doctest::Approx(0.49992).epsilon(1e-5));
  CHECK_THROWS_AS(binary_entropy(-0.1), DomainError);
  CHECK_THROWS_AS(binary_entropy(1.5), DomainError);
  CHECK_THROWS_AS(binary_entropy(std::nan("")), DomainError);
}

TEST_CASE("inverse binary entropy") {
  CHECK(binary_entropy_inv(1.0) == 0.5);
  CHECK(binary_entropy_inv(0.0) == 0.0);
  const double p = binary_entropy_inv(0.5);
  CHECK(std::abs(binary_entropy(p) - 0.5) < 1e-12);
  CHECK(p == doctest::Approx(h_inv_ref(Real("0.5")).convert_to<double>()).epsilon(1e-12));
  CHECK(p == doctest::Approx(0.110027).epsilon(1e-6));
  CHECK_THROWS_AS(binary_entropy_inv(1.01), DomainError);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(1e-6, 0.5);
  for (int i = 0; i < 2000; ++i) {
    const double q = dist(rng);
    CHECK(std::abs(binary_entropy_inv(binary_entropy(q)) - q) < 1e-9);
  }
}

TEST_CASE("solve_w") {
  auto residual = [](double nu, double w) {
    const double u = 1.0 - nu + w;
    return std::abs(w * std::log2(w) - u * std::log2(u));
  };
  for (double nu : {0.5, 0.4, 0.25}) {
    const double w = solve_w(nu);
    CHECK(w > 0.0);
    CHECK(w < nu);
    CHECK(residual(nu, w) < 1e-12);
    CHECK(w == doctest::Approx(w_ref(Real(nu)).convert_to<double>()).epsilon(1e-9));
  }
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> dist(0.01, 0.5);
  for (int i = 0; i < 1000; ++i) {
    const double nu = dist(rng);
    const double w = solve_w(nu);
    REQUIRE(residual(nu, w) < 1e-12);
    REQUIRE(w > 0.0);
    REQUIRE(w < nu);
  }
  CHECK_THROWS_AS(solve_w(0.0), DomainError);
  CHECK_THROWS_AS(solve_w(0.6), DomainError);
}

TEST_CASE("xor_params against a 50-digit recomputation") {
  const uint64_t n = 1 << 16;
  const auto p = xor_params(n, 1 << 10, 0.9, 0.05, 1e-3, Overlap::TwoE);
  const Real gamma = Real("0.05") * Real("0.9");
  const Real ell = 2 * log(Real(2)) / h_inv_ref(gamma) * log2r((2 + kSqrt2) / Real("1e-3"));
  CHECK(p.gamma == doctest::Approx(0.045));
  CHECK(p.ell == ceil_ref(ell));
  CHECK(p.t_req == p.ell * 16);
  const Real k = gamma * n + 2 * exp(Real(1)) * 1024 + 6 * log2r((1 + kSqrt2) / Real("1e-3")) + log2r(Real(4) / 3);
  CHECK(p.k == doctest::Approx(k.convert_to<double>()).epsilon(1e-12));
  CHECK(p.feasible == (p.k <= 0.9 * n));
}

TEST_CASE("xor_params rejects degenerate gamma") {
  CHECK_THROWS_AS(xor_params(1024, 1, 1.0, 1.0, 1e-3, Overlap::TwoE), InfeasibleError);
  CHECK_THROWS_AS(xor_params(1024, 1, 0.5, 0.0, 1e-3, Overlap::TwoE), InfeasibleError);
  CHECK_THROWS_AS(xor_params(1024, 1, 0.5, 0.5, 0.0, Overlap::TwoE), DomainError);
  CHECK_THROWS_AS(xor_params(1024, 1, 0.0, 0.5, 1e-3, Overlap::TwoE), DomainError);
}

TEST_CASE("xor at the large-input example: m = 10^6 feasible, seed still larger than output") {
  const auto p = xor_params(uint64_t{1} << 30, 1000000, 0.8, 0.05, 1e-7, Overlap::TwoE);
  CHECK(p.feasible);
  CHECK(p.ell == 8067);
  CHECK(p.t_req == 8067u * 30u);
}

TEST_CASE("rsh_params") {
  auto p = rsh_params(1 << 16, 1, 0.5, std::ldexp(1.0, -16), Overlap::One);
  CHECK(p.ell == 50);
  CHECK(p.t_req == 100);

  p = rsh_params(2, 1, 0.5, 0.5, Overlap::TwoE);
  CHECK(p.ell == 5);
  CHECK(p.t_req == 10);

  const uint64_t n = 1000000;
  p = rsh_params(n, 5000, 0.3, 1e-7, Overlap::TwoE);
  const uint64_t l = ceil_ref(log2r(Real(n)) + 2 * log2r(2 / Real("1e-7")));
  CHECK(p.ell == l);
  CHECK(p.blocks == (n + l - 1) / l);
  const Real k = 2 * exp(Real(1)) * 5000 + 4 * log2r(1 / Real("1e-7")) + 6;
  CHECK(p.k == doctest::Approx(k.convert_to<double>()).epsilon(1e-12));
}

TEST_CASE("lu_params against a 50-digit recomputation") {
  auto check = [](uint64_t n, double nu, const char* eps_text) {
    const double eps = std::stod(eps_text);
    const auto p = lu_params(n, 10, 0.9, nu, eps, Overlap::TwoE);
    const Real e(eps_text);
    const Real nu_r(nu);
    const Real w = w_ref(nu_r);
    const Real lambda = 5 * kSqrt2 / 8;
    const uint64_t c = ceil_ref(log2r(w) / (2 * log2r(lambda)));
    const Real delta = pow(e / (2 + kSqrt2), 2);
    const uint64_t ell = ceil_ref(4 * log2r(delta) / log2r(1 - nu_r + w));
    uint64_t side = 0;
    while (side * side < n) {
      ++side;
    }
    CHECK(p.walk_steps == c);
    CHECK(p.ell == ell);
    CHECK(p.t_req == ceil_log2_ref(side * side) + 3 * c * (ell - 1) + ell);
    const Real k = h_ref(nu_r) * n + 2 * exp(Real(1)) * 10 + 6 * log2r((2 + kSqrt2) / e) - 2;
    CHECK(p.k == doctest::Approx(k.convert_to<double>()).epsilon(1e-12));
    return p;
  };
  check(1 << 20, 0.5, "1e-3");
  check(1 << 20, 0.3, "1e-4");
  check(1000, 0.45, "1e-2");
}

TEST_CASE("Lu walk length grows as nu shrinks") {
  uint64_t prev = 0;
  for (double nu : {0.5, 0.4, 0.3, 0.2, 0.1, 0.05}) {
    const auto p = lu_params(1 << 20, 1, 0.9, nu, 1e-3, Overlap::TwoE);
    const uint64_t steps = p.walk_steps * (p.ell - 1);
    CHECK(steps > prev);
    prev = steps;
  }
}

TEST_CASE("Lu with nu near zero fails loudly or reports a finite size") {
  for (double nu : {1e-3, 1e-6, 1e-9, 1e-12}) {
    try {
      const auto p = lu_params(1 << 20, 1, 0.9, nu, 1e-3, Overlap::TwoE);
      CHECK(p.t_req >= p.ell);
      CHECK(p.ell >= 1);
    } catch (const InfeasibleError&) {
    } catch (const NoRootError&) {
    } catch (const OverflowError&) {
    }
  }
}

TEST_CASE("feasibility flag") {
  auto p = rsh_params(1000, 0, 0.5, 0.01, Overlap::One);
  CHECK_FALSE(p.feasible);  // m = 0
  p = with_output_len(p, 1);
  CHECK(p.feasible);
  p = with_output_len(p, 1000);
  CHECK_FALSE(p.feasible);
  CHECK(p.k > p.source_entropy());
}

TEST_CASE("max_output_len") {
  SUBCASE("RSH with r = 1 is the algebraic inversion") {
    const auto p = rsh_params(100000, 0, 0.37, 1e-5, Overlap::One);
    const double expect = std::floor(0.37 * 100000 - 4 * std::log2(1e5) - 6);
    CHECK(max_output_len(p) == static_cast<uint64_t>(expect));
  }
  SUBCASE("XOR with too little entropy gives 0") {
    const auto p = xor_params(10000, 0, 0.5, 0.99, 1e-3, Overlap::TwoE);
    CHECK(max_output_len(p) == 0);
  }
  SUBCASE("RSH at n = 2^16, alpha = 0.5, eps = 2^-16") {
    const auto p = rsh_params(1 << 16, 0, 0.5, std::ldexp(1.0, -16), Overlap::One);
    CHECK(max_output_len(p) == 32698);
  }
  SUBCASE("exact boundary on random parameters") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    for (int i = 0; i < 300; ++i) {
      const uint64_t n = 1000 + rng() % 5000000;
      const double alpha = unit(rng);
      const double eps = std::pow(10.0, -1.0 - 9.0 * unit(rng));
      const Overlap r = (i % 2) ? Overlap::One : Overlap::TwoE;
      ExtractorParams p;
      switch (i % 3) {
        case 0:
          p = xor_params(n, 0, alpha, 0.5 * unit(rng), eps, r);
          break;
        case 1:
          p = rsh_params(n, 0, alpha, eps, r);
          break;
        default:
          p = lu_params(n, 0, alpha, 0.5 * unit(rng), eps, r);
          break;
      }
      const uint64_t m = max_output_len(p);
      if (m > 0) {
        CHECK(required_entropy(p, m) <= alpha * static_cast<double>(n));
      }
      CHECK(required_entropy(p, m + 1) > alpha * static_cast<double>(n));
    }
  }
}

TEST_CASE("required entropy is monotone in m and r") {
  const auto base = xor_params(1 << 20, 0, 0.8, 0.1, 1e-6, Overlap::One);
  auto two_e = base;
  two_e.r = Overlap::TwoE;
  double prev = -1;
  for (uint64_t m = 0; m < 5000; m += 37) {
    const double k = required_entropy(base, m);
    CHECK(k >= prev);
    CHECK(required_entropy(two_e, m) >= k);
    prev = k;
  }
}

TEST_CASE("integer helpers") {
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(2) == 1);
  CHECK(ceil_log2(3) == 2);
  CHECK(ceil_log2(uint64_t{1} << 40) == 40);
  CHECK(ceil_log2((uint64_t{1} << 40) + 1) == 41);
  CHECK(ceil_sqrt(0) == 0);
  CHECK(ceil_sqrt(9) == 3);
  CHECK(ceil_sqrt(10) == 4);
  CHECK(ceil_sqrt(UINT64_MAX) == uint64_t{1} << 32);
}
