#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace trevisan {

/// Packed bit string.
///
/// Global bit g lives in byte g / 8 at bit position g % 8, least significant
/// bit first. Multi-bit reads assemble values LSB-first, so bits
/// [pos, pos + w) read as an unsigned integer have bit pos as the value's
/// bit 0. Bits of the last byte beyond size() are always zero.
class BitBuffer {
 public:
  BitBuffer() = default;
  explicit BitBuffer(uint64_t len_bits);

  /// Takes the first len_bits bits of bytes; excess bits of the final byte
  /// are cleared.
  static BitBuffer from_bytes(std::span<const uint8_t> bytes, uint64_t len_bits);
  static BitBuffer from_bits(std::span<const int> bits);

  uint64_t size() const { return len_; }
  bool empty() const { return len_ == 0; }

  bool get(uint64_t i) const { return (bytes_[i >> 3] >> (i & 7)) & 1u; }
  bool at(uint64_t i) const;  // bounds-checked get
  void set(uint64_t i, bool value) {
    const uint8_t mask = static_cast<uint8_t>(1u << (i & 7));
    if (value) {
      bytes_[i >> 3] |= mask;
    } else {
      bytes_[i >> 3] &= static_cast<uint8_t>(~mask);
    }
  }

  /// Reads `width` (<= 64) bits starting at `pos`, LSB-first.
  uint64_t read_bits(uint64_t pos, unsigned width) const;
  void write_bits(uint64_t pos, unsigned width, uint64_t value);

  uint64_t popcount() const;
  void clear();

  BitBuffer& operator^=(const BitBuffer& other);
  friend BitBuffer operator^(BitBuffer lhs, const BitBuffer& rhs) {
    lhs ^= rhs;
    return lhs;
  }
  friend bool operator==(const BitBuffer&, const BitBuffer&) = default;

  std::span<const uint8_t> bytes() const { return bytes_; }
  std::span<uint8_t> mutable_bytes() { return bytes_; }

 private:
  uint64_t len_ = 0;
  std::vector<uint8_t> bytes_;
};

inline uint64_t bytes_for_bits(uint64_t bits) { return (bits + 7) / 8; }

}  // namespace trevisan
