#pragma once

#include <cstdint>
#include <span>

#include "trevisan/bitbuffer.hpp"
#include "trevisan/bitext.hpp"
#include "trevisan/weakdesign.hpp"

namespace trevisan {

/// Everything one run of the composed extractor needs. Input, seed, design
/// and extractor are borrowed and must outlive the call.
struct ExtractionJob {
  const BitBuffer& input;
  const BitBuffer& seed;
  const WeakDesign& design;
  const BitExtractor& extractor;
  uint64_t m = 0;
  unsigned workers = 1;
};

/// out[j] = seed[indices[j]]; out is resized to indices.size().
void slice_subseed(const BitBuffer& seed, std::span<const uint64_t> indices, BitBuffer& out);
BitBuffer slice_subseed(const BitBuffer& seed, std::span<const uint64_t> indices);

/// Output bit i = C(input, seed restricted to S_i), i = 0 .. m-1. Output
/// bits are sharded contiguously across workers on byte boundaries, so the
/// result does not depend on the worker count.
BitBuffer extract_all(const ExtractionJob& job);

}  // namespace trevisan
