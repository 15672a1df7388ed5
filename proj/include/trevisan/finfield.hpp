#pragma once

#include <cstdint>
#include <span>

namespace trevisan {

inline constexpr uint64_t kMaxPrime = (uint64_t{1} << 61) - 1;

bool is_prime(uint64_t x);

/// Smallest prime >= t. Throws OverflowError past 2^61 - 1.
uint64_t next_prime(uint64_t t);

/// GF(p) for a prime p < 2^61. Immutable; safe to share across threads.
class PrimeField {
 public:
  explicit PrimeField(uint64_t p);

  uint64_t modulus() const { return p_; }
  uint64_t add(uint64_t a, uint64_t b) const {
    const uint64_t s = a + b;  // < 2^62, no wrap
    return s >= p_ ? s - p_ : s;
  }
  uint64_t mul(uint64_t a, uint64_t b) const {
    if (small_) {
      return (a * b) % p_;
    }
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % p_);
  }

 private:
  uint64_t p_;
  bool small_;  // p < 2^32: products fit in 64 bits
};

uint64_t gfp_mulmod(uint64_t a, uint64_t b, const PrimeField& field);

/// Horner evaluation; coeffs[i] is the coefficient of x^i.
uint64_t gfp_poly_eval(std::span<const uint64_t> coeffs, uint64_t x, const PrimeField& field);

/// GF(2^l), 1 <= l <= 64. Elements are bitmasks < 2^l, bit j holding the
/// coefficient of x^j. The modulus is stored without its leading x^l term.
class BinaryField {
 public:
  /// Validates that x^degree + low_terms is irreducible.
  BinaryField(unsigned degree, uint64_t low_terms);

  unsigned degree() const { return degree_; }
  uint64_t low_terms() const { return low_; }
  /// Full modulus as a bitmask; only meaningful for degree < 64.
  uint64_t poly() const;
  uint64_t mask() const { return mask_; }

  uint64_t mul(uint64_t a, uint64_t b) const;
  uint64_t pow(uint64_t a, uint64_t e) const;

 private:
  unsigned degree_;
  uint64_t low_;
  uint64_t mask_;
};

uint64_t gf2_mul(uint64_t a, uint64_t b, const BinaryField& field);

/// Deterministic modulus choice: the trinomial x^l + x^a + 1 with smallest
/// a, else the pentanomial x^l + x^a + x^b + x^c + 1 with the smallest
/// bitmask value. For l = 1 this is x + 1.
BinaryField find_irreducible(unsigned l);

/// Rabin's test for x^degree + low_terms over GF(2).
bool is_irreducible_gf2(unsigned degree, uint64_t low_terms);

/// Carryless product of two 64-bit polynomials.
unsigned __int128 clmul(uint64_t a, uint64_t b);

}  // namespace trevisan
