#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "trevisan/bitbuffer.hpp"
#include "trevisan/finfield.hpp"
#include "trevisan/params.hpp"

namespace trevisan {

/// An extractor bound to one input string. Immutable and shareable across
/// worker threads.
class BoundExtractor {
 public:
  virtual ~BoundExtractor() = default;
  virtual bool extract(const BitBuffer& subseed) const = 0;
};

/// One-bit extractor C : {0,1}^n x {0,1}^t -> {0,1}. Only the first
/// num_random_bits() bits of a subseed are consumed.
class BitExtractor {
 public:
  virtual ~BitExtractor() = default;

  virtual BitextKind kind() const = 0;
  virtual uint64_t input_bits() const = 0;
  virtual uint64_t num_random_bits() const = 0;

  /// Required source entropy when composed with a design of overlap r.
  /// Only available for extractors configured from ExtractorParams.
  double compute_k(uint64_t m, Overlap r) const;
  const std::optional<ExtractorParams>& params() const { return params_; }

  /// Per-run preparation (the RSH coefficient list, for instance).
  virtual std::unique_ptr<BoundExtractor> bind(const BitBuffer& input) const = 0;

  bool extract(const BitBuffer& input, const BitBuffer& subseed) const { return bind(input)->extract(subseed); }

  void check_seed(const BitBuffer& subseed) const;
  void check_input(const BitBuffer& input) const;

 protected:

  std::optional<ExtractorParams> params_;
};

/// XOR of ell input positions; each position is an idx_width-bit seed slice
/// reduced mod n.
class XorExtractor final : public BitExtractor {
 public:
  XorExtractor(uint64_t n, uint64_t ell);
  explicit XorExtractor(const ExtractorParams& params);

  BitextKind kind() const override { return BitextKind::Xor; }
  uint64_t input_bits() const override { return n_; }
  uint64_t num_random_bits() const override { return ell_ * width_; }
  uint64_t ell() const { return ell_; }
  unsigned index_width() const { return width_; }

  std::unique_ptr<BoundExtractor> bind(const BitBuffer& input) const override;

  /// Works on anything with get(uint64_t) -> bool; lets tests count reads.
  template <typename Source>
  bool extract_from(const Source& input, const BitBuffer& subseed) const {
    bool r = false;
    for (uint64_t i = 0; i < ell_; ++i) {
      r ^= input.get(subseed.read_bits(i * width_, width_) % n_);
    }
    return r;
  }

 private:
  uint64_t n_;
  uint64_t ell_;
  unsigned width_;
};

/// Reed-Solomon then Hadamard: evaluate the input's block polynomial at
/// alpha in GF(2^l), output the parity of (result AND beta).
class RshExtractor final : public BitExtractor {
 public:
  RshExtractor(uint64_t n, unsigned l);
  explicit RshExtractor(const ExtractorParams& params);

  BitextKind kind() const override { return BitextKind::Rsh; }
  uint64_t input_bits() const override { return n_; }
  uint64_t num_random_bits() const override { return 2 * uint64_t{field_.degree()}; }
  unsigned block_len() const { return field_.degree(); }
  uint64_t block_count() const { return (n_ + field_.degree() - 1) / field_.degree(); }
  const BinaryField& field() const { return field_; }

  /// c_1 .. c_s; the final block is zero padded.
  std::vector<uint64_t> coefficients(const BitBuffer& input) const;
  bool extract_with(std::span<const uint64_t> coeffs, const BitBuffer& subseed) const;

  std::unique_ptr<BoundExtractor> bind(const BitBuffer& input) const override;

 private:
  uint64_t n_;
  BinaryField field_;
};

/// Position on the side x side torus of the degree-8 expander.
struct Vertex {
  uint64_t x = 0;
  uint64_t y = 0;
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// Neighbour rule e (0..7) in the order (x+2y, y), (x-2y, y), (x+(y+1), y),
/// (x-(y+1), y), (x, y+2x), (x, y-2x), (x, y+(2x+1)), (x, y-(2x+1)).
Vertex lu_next_vertex(Vertex v, unsigned e, uint64_t side);

/// Expander-walk sampler followed by an inner-product hash. Seed layout:
/// start vertex (idx_width bits), 3 * c * (ell - 1) bits of edge labels,
/// ell bits of hash string.
class LuExtractor final : public BitExtractor {
 public:
  LuExtractor(uint64_t n, uint64_t c, uint64_t ell);
  explicit LuExtractor(const ExtractorParams& params);

  BitextKind kind() const override { return BitextKind::Lu; }
  uint64_t input_bits() const override { return n_; }
  uint64_t num_random_bits() const override;
  uint64_t side() const { return side_; }
  uint64_t vertex_count() const { return side_ * side_; }
  unsigned index_width() const { return width_; }
  uint64_t walk_steps() const { return c_; }
  uint64_t ell() const { return ell_; }

  std::unique_ptr<BoundExtractor> bind(const BitBuffer& input) const override;

  template <typename Source>
  bool extract_from(const Source& input, const BitBuffer& subseed) const {
    const uint64_t start = subseed.read_bits(0, width_) % vertex_count();
    Vertex v{start / side_, start % side_};
    const uint64_t walk = width_;
    const uint64_t hash = walk + 3 * c_ * (ell_ - 1);
    bool r = false;
    for (uint64_t i = 0; i < ell_; ++i) {
      if (i > 0) {
        for (uint64_t s = 0; s < c_; ++s) {
          const auto e = static_cast<unsigned>(subseed.read_bits(walk + 3 * ((i - 1) * c_ + s), 3));
          v = lu_next_vertex(v, e, side_);
        }
      }
      // Vertices past n are zero padding.
      const uint64_t idx = v.x * side_ + v.y;
      const bool bit = idx < n_ && input.get(idx);
      r ^= bit && subseed.get(hash + i);
    }
    return r;
  }

 private:
  uint64_t n_;
  uint64_t c_;
  uint64_t ell_;
  uint64_t side_;
  unsigned width_;
};

std::unique_ptr<BitExtractor> make_extractor(const ExtractorParams& params);

}  // namespace trevisan
