#pragma once

#include <cstdint>

#include "trevisan/bitbuffer.hpp"
#include "trevisan/extract.hpp"
#include "trevisan/weakdesign.hpp"

namespace trevisan {

/// Exact weak-design check: sum_{j<i} 2^{|S_j ∩ S_i|} against r * m.
struct OverlapReport {
  uint64_t worst_row = 0;
  uint64_t worst_sum = 0;
  uint64_t m = 0;
  Overlap r = Overlap::TwoE;
  bool pass = true;
  // First row whose sum exceeds the bound, or a row that is not a set of t
  // distinct elements below d; only meaningful when pass is false.
  uint64_t first_failure = 0;
};

/// 2e is compared through the rational upper bound 543657 / 100000.
inline constexpr uint64_t kTwoENumerator = 543657;
inline constexpr uint64_t kTwoEDenominator = 100000;

bool within_overlap_bound(uint64_t sum, uint64_t m, Overlap r);

/// Requires t <= 40 and m <= 4096.
OverlapReport overlap_check(const WeakDesign& design);

/// Row sizes and range only (no size limit).
/// Returns the first bad row, or m when every row is t distinct values < d.
uint64_t first_malformed_row(const WeakDesign& design);

/// z = (2 * ones - len) / sqrt(len); len >= 100.
double monobit(const BitBuffer& bits);

/// Scalar re-implementation of the composed extractor for desk-sized jobs
/// (n <= 2^16, m <= 2^12). Shares no field arithmetic or parity code with
/// the production path.
BitBuffer naive_extract(const ExtractionJob& job);

}  // namespace trevisan
