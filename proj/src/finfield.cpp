#include "trevisan/finfield.hpp"

#include <array>
#include <bit>
#include <string>
#include <vector>

#include "trevisan/error.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#include <immintrin.h>
#define TREVISAN_HAVE_PCLMUL_DISPATCH 1
#endif

namespace trevisan {

namespace {

using u128 = unsigned __int128;

uint64_t mulmod64(uint64_t a, uint64_t b, uint64_t m) { return static_cast<uint64_t>(static_cast<u128>(a) * b % m); }

uint64_t powmod64(uint64_t base, uint64_t e, uint64_t m) {
  uint64_t result = 1 % m;
  base %= m;
  while (e != 0) {
    if (e & 1u) {
      result = mulmod64(result, base, m);
    }
    base = mulmod64(base, base, m);
    e >>= 1;
  }
  return result;
}

// Reduces a polynomial of degree < 128 modulo x^degree + low.
uint64_t reduce(u128 value, unsigned degree, uint64_t low) {
  if (degree == 64) {
    while (true) {
      const auto hi = static_cast<uint64_t>(value >> 64);
      if (hi == 0) {
        return static_cast<uint64_t>(value);
      }
      value = static_cast<u128>(static_cast<uint64_t>(value)) ^ clmul(hi, low);
    }
  }
  const u128 mask = (static_cast<u128>(1) << degree) - 1;
  while (true) {
    const auto hi = value >> degree;
    if (hi == 0) {
      return static_cast<uint64_t>(value);
    }
    // hi has degree < 128 - degree; fold x^degree -> low. hi may exceed 64
    // bits only when degree < 64 and value is wide, so fold in two halves.
    const auto hi_lo = static_cast<uint64_t>(hi);
    const auto hi_hi = static_cast<uint64_t>(hi >> 64);
    u128 folded = clmul(hi_lo, low);
    if (hi_hi != 0) {
      folded ^= clmul(hi_hi, low) << 64;
    }
    value = (value & mask) ^ folded;
  }
}

uint64_t mulmod_poly(uint64_t a, uint64_t b, unsigned degree, uint64_t low) {
  return reduce(clmul(a, b), degree, low);
}

unsigned u128_degree(u128 v) {
  const auto hi = static_cast<uint64_t>(v >> 64);
  if (hi != 0) {
    return 127 - static_cast<unsigned>(std::countl_zero(hi));
  }
  return 63 - static_cast<unsigned>(std::countl_zero(static_cast<uint64_t>(v)));
}

u128 gcd_gf2(u128 a, u128 b) {
  while (b != 0) {
    const unsigned db = u128_degree(b);
    while (a != 0 && u128_degree(a) >= db) {
      a ^= b << (u128_degree(a) - db);
    }
    std::swap(a, b);
  }
  return a;
}

}  // namespace

#ifdef TREVISAN_HAVE_PCLMUL_DISPATCH
namespace {

__attribute__((target("pclmul,sse2"))) u128 clmul_hw(uint64_t a, uint64_t b) {
  const __m128i r = _mm_clmulepi64_si128(_mm_cvtsi64_si128(static_cast<long long>(a)),
                                         _mm_cvtsi64_si128(static_cast<long long>(b)), 0x00);
  const auto lo = static_cast<uint64_t>(_mm_cvtsi128_si64(r));
  const auto hi = static_cast<uint64_t>(_mm_cvtsi128_si64(_mm_unpackhi_epi64(r, r)));
  return (static_cast<u128>(hi) << 64) | lo;
}

const bool kHasPclmul = __builtin_cpu_supports("pclmul");

}  // namespace
#endif

unsigned __int128 clmul(uint64_t a, uint64_t b) {
#ifdef TREVISAN_HAVE_PCLMUL_DISPATCH
  if (kHasPclmul) {
    return clmul_hw(a, b);
  }
#endif
  // Iterate over the sparser operand.
  if (std::popcount(a) < std::popcount(b)) {
    std::swap(a, b);
  }
  u128 result = 0;
  while (b != 0) {
    result ^= static_cast<u128>(a) << std::countr_zero(b);
    b &= b - 1;
  }
  return result;
}

bool is_prime(uint64_t x) {
  if (x < 2) {
    return false;
  }
  for (uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (x % p == 0) {
      return x == p;
    }
  }
  uint64_t d = x - 1;
  unsigned s = 0;
  while ((d & 1u) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are deterministic for all 64-bit inputs.
  for (uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    uint64_t y = powmod64(a, d, x);
    if (y == 1 || y == x - 1) {
      continue;
    }
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      y = mulmod64(y, y, x);
      if (y == x - 1) {
        composite = false;
        break;
      }
    }
    if (composite) {
      return false;
    }
  }
  return true;
}

uint64_t next_prime(uint64_t t) {
  if (t < 2) {
    throw DomainError("next_prime requires t >= 2");
  }
  for (uint64_t c = t; c <= kMaxPrime; ++c) {
    if (is_prime(c)) {
      return c;
    }
  }
  throw OverflowError("no prime >= " + std::to_string(t) + " below 2^61");
}

PrimeField::PrimeField(uint64_t p) : p_(p), small_(p < (uint64_t{1} << 32)) {
  if (p > kMaxPrime) {
    throw DomainError("prime field modulus must be below 2^61");
  }
  if (!is_prime(p)) {
    throw DomainError(std::to_string(p) + " is not prime");
  }
}

uint64_t gfp_mulmod(uint64_t a, uint64_t b, const PrimeField& field) { return field.mul(a, b); }

uint64_t gfp_poly_eval(std::span<const uint64_t> coeffs, uint64_t x, const PrimeField& field) {
  if (coeffs.empty()) {
    throw DomainError("polynomial needs at least one coefficient");
  }
  uint64_t acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = field.add(field.mul(acc, x), *it);
  }
  return acc;
}

bool is_irreducible_gf2(unsigned degree, uint64_t low) {
  if (degree == 0 || degree > 64) {
    return false;
  }
  if (degree < 64 && (low >> degree) != 0) {
    return false;
  }
  if ((low & 1u) == 0) {
    return degree == 1 && low == 0;  // x itself; every other multiple of x is reducible
  }
  // x^(2^k) mod f by repeated squaring.
  const uint64_t x = degree == 1 ? (low & 1u) : 2;  // x mod f
  auto frobenius = [&](unsigned k) {
    uint64_t v = x;
    for (unsigned i = 0; i < k; ++i) {
      v = mulmod_poly(v, v, degree, low);
    }
    return v;
  };
  if (frobenius(degree) != x) {
    return false;
  }
  const u128 f = (static_cast<u128>(1) << degree) | low;
  unsigned rest = degree;
  for (unsigned q = 2; q <= rest; ++q) {
    if (rest % q != 0) {
      continue;
    }
    while (rest % q == 0) {
      rest /= q;
    }
    const u128 g = static_cast<u128>(frobenius(degree / q) ^ x);
    if (u128_degree(gcd_gf2(f, g)) != 0 || g == 0) {
      return false;
    }
  }
  return true;
}

BinaryField::BinaryField(unsigned degree, uint64_t low_terms)
    : degree_(degree), low_(low_terms), mask_(degree >= 64 ? ~uint64_t{0} : (uint64_t{1} << degree) - 1) {
  if (degree < 1 || degree > 64) {
    throw DomainError("binary field degree must lie in [1, 64]");
  }
  if (!is_irreducible_gf2(degree, low_terms)) {
    throw DomainError("modulus of degree " + std::to_string(degree) + " is not irreducible");
  }
}

uint64_t BinaryField::poly() const {
  if (degree_ >= 64) {
    throw OverflowError("degree-64 modulus does not fit a 64-bit mask");
  }
  return (uint64_t{1} << degree_) | low_;
}

uint64_t BinaryField::mul(uint64_t a, uint64_t b) const { return mulmod_poly(a, b, degree_, low_); }

uint64_t BinaryField::pow(uint64_t a, uint64_t e) const {
  uint64_t result = 1;
  while (e != 0) {
    if (e & 1u) {
      result = mul(result, a);
    }
    a = mul(a, a);
    e >>= 1;
  }
  return result;
}

uint64_t gf2_mul(uint64_t a, uint64_t b, const BinaryField& field) { return field.mul(a, b); }

BinaryField find_irreducible(unsigned l) {
  if (l < 1 || l > 64) {
    throw DomainError("binary field degree must lie in [1, 64]");
  }
  if (l == 1) {
    return BinaryField(1, 1);
  }
  for (unsigned a = 1; a < l; ++a) {
    const uint64_t low = (uint64_t{1} << a) | 1u;
    if (is_irreducible_gf2(l, low)) {
      return BinaryField(l, low);
    }
  }
  // Increasing (a, b, c) with a > b > c > 0 enumerates pentanomials in
  // increasing bitmask order.
  for (unsigned a = 3; a < l; ++a) {
    for (unsigned b = 2; b < a; ++b) {
      for (unsigned c = 1; c < b; ++c) {
        const uint64_t low = (uint64_t{1} << a) | (uint64_t{1} << b) | (uint64_t{1} << c) | 1u;
        if (is_irreducible_gf2(l, low)) {
          return BinaryField(l, low);
        }
      }
    }
  }
  throw NoRootError("no irreducible trinomial or pentanomial of degree " + std::to_string(l));
}

}  // namespace trevisan
