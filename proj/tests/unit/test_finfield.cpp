#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>
#include <bit>
#include <random>
#include <vector>

#include "doctest.h"
#include "trevisan/error.hpp"
#include "trevisan/finfield.hpp"

using namespace trevisan;
using boost::multiprecision::cpp_int;

namespace {

uint64_t next_prime_trial(uint64_t t) {
  for (uint64_t c = t;; ++c) {
    bool prime = c >= 2;
    for (uint64_t q = 2; q * q <= c && prime; ++q) {
      prime = c % q != 0;
    }
    if (prime) {
      return c;
    }
  }
}

// Polynomials over GF(2) as bitmasks (bit j = coefficient of x^j), up to
// degree 63 for the divisor and 64 for the dividend (passed as low + implicit
// top bit).
unsigned degree_of(uint64_t p) { return 63 - static_cast<unsigned>(std::countl_zero(p)); }

uint64_t poly_mod_small(uint64_t a, uint64_t b) {
  const unsigned db = degree_of(b);
  while (a != 0 && degree_of(a) >= db) {
    a ^= b << (degree_of(a) - db);
  }
  return a;
}

// Irreducible iff no polynomial of degree 1 .. l/2 divides it.
bool irreducible_by_trial(unsigned l, uint64_t low) {
  const uint64_t f = (uint64_t{1} << l) | low;
  for (uint64_t g = 2; degree_of(g) <= l / 2; ++g) {
    if (poly_mod_small(f, g) == 0) {
      return false;
    }
  }
  return true;
}

uint64_t naive_gf2_mul(uint64_t a, uint64_t b, unsigned l, uint64_t low) {
  // Schoolbook into 128 bits, then long division.
  unsigned __int128 prod = 0;
  for (unsigned i = 0; i < 64; ++i) {
    if ((b >> i) & 1u) {
      prod ^= static_cast<unsigned __int128>(a) << i;
    }
  }
  const unsigned __int128 f = (static_cast<unsigned __int128>(1) << l) | low;
  for (int bit = 127; bit >= static_cast<int>(l); --bit) {
    if ((prod >> bit) & 1u) {
      prod ^= f << (bit - static_cast<int>(l));
    }
  }
  return static_cast<uint64_t>(prod);
}

uint64_t naive_pow(uint64_t a, unsigned __int128 e, unsigned l, uint64_t low) {
  uint64_t result = 1;
  while (e != 0) {
    if (e & 1u) {
      result = naive_gf2_mul(result, a, l, low);
    }
    a = naive_gf2_mul(a, a, l, low);
    e >>= 1;
  }
  return result;
}

}  // namespace

TEST_CASE("next_prime") {
  CHECK(next_prime(2) == 2);
  CHECK(next_prime(1700) == 1709);
  CHECK(next_prime(100) == 101);
  for (uint64_t t = 2; t < 5000; ++t) {
    REQUIRE(next_prime(t) == next_prime_trial(t));
  }
  CHECK(next_prime(kMaxPrime) == kMaxPrime);
  CHECK_THROWS_AS(next_prime(kMaxPrime + 1), OverflowError);
  CHECK_THROWS_AS(next_prime(1), DomainError);
}

TEST_CASE("is_prime agrees with an independent Miller-Rabin on 61-bit values") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 5000; ++i) {
    const uint64_t x = rng() >> 3;
    REQUIRE(is_prime(x) == boost::multiprecision::miller_rabin_test(cpp_int(x), 40));
  }
  CHECK(is_prime(kMaxPrime));
  CHECK_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
}

TEST_CASE("PrimeField validation") {
  CHECK_THROWS_AS(PrimeField{15}, DomainError);
  CHECK_THROWS_AS(PrimeField{uint64_t{1} << 61}, DomainError);
  CHECK_NOTHROW(PrimeField{kMaxPrime});
}

TEST_CASE("gfp_mulmod") {
  const PrimeField f(kMaxPrime);
  const uint64_t a = (uint64_t{1} << 60) + 1;
  const uint64_t b = (uint64_t{1} << 60) + 2;
  CHECK(gfp_mulmod(a, b, f) == static_cast<uint64_t>(cpp_int(a) * b % kMaxPrime));
  CHECK(gfp_mulmod(a, 1, f) == a);
  CHECK(gfp_mulmod(kMaxPrime - 1, kMaxPrime - 1, f) == 1);

  const PrimeField small(101);
  CHECK(gfp_mulmod(100, 100, small) == 1);
}

TEST_CASE("gfp_mulmod matches wide arithmetic near 2^61") {
  // Primes just below 2^61, found with the independent test.
  std::vector<uint64_t> primes;
  for (uint64_t c = kMaxPrime; primes.size() < 8; c -= 2) {
    if (boost::multiprecision::miller_rabin_test(cpp_int(c), 40)) {
      primes.push_back(c);
    }
  }
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100000; ++i) {
    const uint64_t p = primes[i % primes.size()];
    const PrimeField f(p);
    const uint64_t a = rng() % p;
    const uint64_t b = i % 3 == 0 ? p - 1 - (rng() % 16) : rng() % p;
    REQUIRE(gfp_mulmod(a, b, f) == static_cast<uint64_t>(cpp_int(a) * b % p));
  }
}

TEST_CASE("gfp_poly_eval") {
  const PrimeField f5(5);
  const std::vector<uint64_t> constant{3};
  CHECK(gfp_poly_eval(constant, 4, f5) == 3);
  const std::vector<uint64_t> one_plus_x{1, 1};
  CHECK(gfp_poly_eval(one_plus_x, 3, f5) == 4);

  std::mt19937_64 rng(8);
  const uint64_t p = 2305843009213693921ULL;  // prime below 2^61
  REQUIRE(boost::multiprecision::miller_rabin_test(cpp_int(p), 40));
  const PrimeField f(p);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<uint64_t> coeffs(7);
    for (auto& c : coeffs) {
      c = rng() % p;
    }
    const uint64_t x = rng() % p;
    cpp_int sum = 0;
    cpp_int power = 1;
    for (uint64_t c : coeffs) {
      sum += c * power;
      power = power * x % p;
    }
    REQUIRE(gfp_poly_eval(coeffs, x, f) == static_cast<uint64_t>(sum % p));
  }
}

TEST_CASE("find_irreducible small degrees") {
  CHECK(find_irreducible(2).poly() == 0b111);
  CHECK(find_irreducible(3).poly() == 0b1011);
  CHECK(find_irreducible(1).poly() == 0b11);
}

TEST_CASE("degree 8 has no irreducible trinomial, so a pentanomial is chosen") {
  for (unsigned a = 1; a < 8; ++a) {
    CHECK_FALSE(irreducible_by_trial(8, (uint64_t{1} << a) | 1u));
  }
  const BinaryField f = find_irreducible(8);
  CHECK(std::popcount(f.poly()) == 5);
  CHECK(irreducible_by_trial(8, f.low_terms()));
}

TEST_CASE("find_irreducible is minimal and irreducible by exhaustive trial division") {
  for (unsigned l = 2; l <= 22; ++l) {
    const BinaryField f = find_irreducible(l);
    CAPTURE(l);
    REQUIRE(irreducible_by_trial(l, f.low_terms()));
    const int weight = std::popcount(f.low_terms()) + 1;
    REQUIRE((weight == 3 || weight == 5));
    // No smaller candidate of the same or lower weight class is irreducible.
    for (uint64_t low = 1; low < f.low_terms(); low += 2) {
      const int w = std::popcount(low) + 1;
      if (w == 3 || (w == 5 && weight == 5)) {
        REQUIRE_FALSE(irreducible_by_trial(l, low));
      }
    }
    if (weight == 5) {
      for (unsigned a = 1; a < l; ++a) {
        REQUIRE_FALSE(irreducible_by_trial(l, (uint64_t{1} << a) | 1u));
      }
    }
  }
}

TEST_CASE("find_irreducible is deterministic and low weight up to degree 64") {
  for (unsigned l = 1; l <= 64; ++l) {
    const BinaryField a = find_irreducible(l);
    const BinaryField b = find_irreducible(l);
    CHECK(a.low_terms() == b.low_terms());
    CHECK(is_irreducible_gf2(l, a.low_terms()));
    const int weight = std::popcount(a.low_terms()) + 1;
    CHECK((weight == 3 || weight == 5 || l == 1));
  }
}

TEST_CASE("Rabin test agrees with trial division") {
  for (unsigned l = 1; l <= 12; ++l) {
    for (uint64_t low = 1; low < (uint64_t{1} << l); low += 2) {
      REQUIRE(is_irreducible_gf2(l, low) == irreducible_by_trial(l, low));
    }
  }
  CHECK_THROWS_AS((BinaryField{4, 0b0101}), DomainError);  // x^4 + x^2 + 1 = (x^2 + x + 1)^2
}

TEST_CASE("gf2_mul") {
  const BinaryField f8(3, 0b011);
  CHECK(gf2_mul(0b110, 0b011, f8) == 0b001);
  for (uint64_t a = 0; a < 8; ++a) {
    CHECK(gf2_mul(a, 1, f8) == a);
  }
}

TEST_CASE("clmul matches schoolbook") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 2000; ++i) {
    const uint64_t a = rng();
    const uint64_t b = rng();
    unsigned __int128 ref = 0;
    for (unsigned j = 0; j < 64; ++j) {
      if ((b >> j) & 1u) {
        ref ^= static_cast<unsigned __int128>(a) << j;
      }
    }
    REQUIRE(clmul(a, b) == ref);
  }
}

TEST_CASE("GF(2^l) field axioms and multiplicative order") {
  std::mt19937_64 rng(10);
  for (unsigned l : {3u, 8u, 16u, 50u, 64u}) {
    CAPTURE(l);
    const BinaryField f = find_irreducible(l);
    const uint64_t mask = l == 64 ? ~uint64_t{0} : (uint64_t{1} << l) - 1;
    for (int i = 0; i < 10000; ++i) {
      const uint64_t a = rng() & mask;
      const uint64_t b = rng() & mask;
      const uint64_t c = rng() & mask;
      REQUIRE(f.mul(a, b) == naive_gf2_mul(a, b, l, f.low_terms()));
      REQUIRE(f.mul(a, b) == f.mul(b, a));
      REQUIRE(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
      REQUIRE(f.mul(a, b ^ c) == (f.mul(a, b) ^ f.mul(a, c)));
      REQUIRE(f.mul(a, b) <= mask);
    }
    const unsigned __int128 order = (static_cast<unsigned __int128>(1) << l) - 1;
    for (int i = 0; i < 50; ++i) {
      uint64_t a = rng() & mask;
      if (a == 0) {
        a = 1;
      }
      REQUIRE(naive_pow(a, order, l, f.low_terms()) == 1);
      if (l < 64) {
        REQUIRE(f.pow(a, static_cast<uint64_t>(order)) == 1);
      }
    }
  }
}
