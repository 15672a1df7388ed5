#include "trevisan/bitbuffer.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "trevisan/error.hpp"

namespace trevisan {

namespace {

void clear_tail(std::vector<uint8_t>& bytes, uint64_t len) {
  if (len % 8 != 0 && !bytes.empty()) {
    bytes.back() &= static_cast<uint8_t>((1u << (len % 8)) - 1);
  }
}

}  // namespace

BitBuffer::BitBuffer(uint64_t len_bits) : len_(len_bits), bytes_(bytes_for_bits(len_bits), 0) {}

BitBuffer BitBuffer::from_bytes(std::span<const uint8_t> bytes, uint64_t len_bits) {
  if (bytes.size() < bytes_for_bits(len_bits)) {
    throw InsufficientData("need " + std::to_string(bytes_for_bits(len_bits)) +
                           " bytes for " + std::to_string(len_bits) + " bits, got " +
                           std::to_string(bytes.size()));
  }
  BitBuffer buf;
  buf.len_ = len_bits;
  buf.bytes_.assign(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(bytes_for_bits(len_bits)));
  clear_tail(buf.bytes_, len_bits);
  return buf;
}

BitBuffer BitBuffer::from_bits(std::span<const int> bits) {
  BitBuffer buf(bits.size());
  for (size_t i = 0; i < bits.size(); ++i) {
    buf.set(i, bits[i] != 0);
  }
  return buf;
}

bool BitBuffer::at(uint64_t i) const {
  if (i >= len_) {
    throw IndexOutOfRange("bit index " + std::to_string(i) + " >= length " + std::to_string(len_));
  }
  return get(i);
}

uint64_t BitBuffer::read_bits(uint64_t pos, unsigned width) const {
  if (width > 64 || pos > len_ || width > len_ - pos) {
    throw IndexOutOfRange("read of " + std::to_string(width) + " bits at " + std::to_string(pos) +
                          " exceeds length " + std::to_string(len_));
  }
  if (width == 0) {
    return 0;
  }
  uint64_t value = 0;
  unsigned got = 0;
  uint64_t byte = pos >> 3;
  unsigned offset = static_cast<unsigned>(pos & 7);
  while (got < width) {
    value |= static_cast<uint64_t>(bytes_[byte++] >> offset) << got;
    got += 8 - offset;
    offset = 0;
  }
  return width == 64 ? value : value & ((uint64_t{1} << width) - 1);
}

void BitBuffer::write_bits(uint64_t pos, unsigned width, uint64_t value) {
  if (width > 64 || pos > len_ || width > len_ - pos) {
    throw IndexOutOfRange("write of " + std::to_string(width) + " bits at " + std::to_string(pos) +
                          " exceeds length " + std::to_string(len_));
  }
  for (unsigned b = 0; b < width; ++b) {
    set(pos + b, (value >> b) & 1u);
  }
}

uint64_t BitBuffer::popcount() const {
  uint64_t total = 0;
  for (uint8_t b : bytes_) {
    total += static_cast<uint64_t>(std::popcount(b));
  }
  return total;
}

void BitBuffer::clear() { std::fill(bytes_.begin(), bytes_.end(), uint8_t{0}); }

BitBuffer& BitBuffer::operator^=(const BitBuffer& other) {
  if (other.len_ != len_) {
    throw InvalidParameters("xor of bit buffers with different lengths");
  }
  for (size_t i = 0; i < bytes_.size(); ++i) {
    bytes_[i] ^= other.bytes_[i];
  }
  return *this;
}

}  // namespace trevisan
