#include "trevisan/verify.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "trevisan/error.hpp"

namespace trevisan {

namespace {

// Double-and-add, never forms a product wider than 64 bits.
uint64_t naive_mulmod(uint64_t a, uint64_t b, uint64_t p) {
  uint64_t result = 0;
  a %= p;
  while (b != 0) {
    if (b & 1u) {
      result = result >= p - a ? result - (p - a) : result + a;
    }
    a = a >= p - a ? a - (p - a) : a + a;
    b >>= 1;
  }
  return result;
}

// Shift-and-add with reduction after every shift; poly includes x^degree.
uint64_t naive_gf2_mul(uint64_t a, uint64_t b, unsigned degree, uint64_t low_terms) {
  uint64_t result = 0;
  for (unsigned bit = 0; bit < degree; ++bit) {
    if ((b >> bit) & 1u) {
      result ^= a;
    }
    const bool carry = degree == 64 ? (a >> 63) != 0 : ((a >> (degree - 1)) & 1u) != 0;
    a <<= 1;
    if (carry) {
      a ^= low_terms;
    }
    if (degree < 64) {
      a &= (uint64_t{1} << degree) - 1;
    }
  }
  return result;
}

bool naive_parity(uint64_t v, unsigned width) {
  bool p = false;
  for (unsigned b = 0; b < width; ++b) {
    p ^= ((v >> b) & 1u) != 0;
  }
  return p;
}

struct NaiveDesign {
  DesignKind kind;
  uint64_t t;
  uint64_t m;
  std::vector<uint64_t> blocks;  // row counts per block; one entry for basic designs
  uint64_t basic_rows;
  unsigned gf2_degree = 0;
  uint64_t gf2_low = 0;

  // Basic row k as a list, power-sum evaluation.
  std::vector<uint64_t> basic_row(uint64_t k) const {
    unsigned c = 0;
    unsigned __int128 reach = t;
    while (reach < basic_rows) {
      reach *= t;
      ++c;
    }
    std::vector<uint64_t> coeffs;
    uint64_t rest = k;
    for (unsigned j = 0; j <= c; ++j) {
      coeffs.push_back(rest % t);
      rest /= t;
    }
    const bool prime = kind == DesignKind::GFp || kind == DesignKind::BlockGFp;
    std::vector<uint64_t> row;
    for (uint64_t x = 0; x < t; ++x) {
      uint64_t value = 0;
      uint64_t power = 1;
      for (uint64_t a : coeffs) {
        if (prime) {
          value = (value + naive_mulmod(a, power, t)) % t;
          power = naive_mulmod(power, x, t);
        } else {
          value ^= naive_gf2_mul(a, power, gf2_degree, gf2_low);
          power = naive_gf2_mul(power, x, gf2_degree, gf2_low);
        }
      }
      row.push_back(x * t + value);
    }
    return row;
  }

  std::vector<uint64_t> row(uint64_t i) const {
    uint64_t block = 0;
    while (i >= blocks[block]) {
      i -= blocks[block];
      ++block;
    }
    auto r = basic_row(i);
    for (auto& e : r) {
      e += block * t * t;
    }
    return r;
  }
};

NaiveDesign describe(const WeakDesign& design) {
  NaiveDesign nd{design.kind(), design.t(), design.m(), {}, design.m()};
  if (is_block(design.kind())) {
    const auto part = block_partition(design.m(), design.t());
    nd.blocks = part.m_list;
    nd.basic_rows = part.max_rows();
  } else {
    nd.blocks = {design.m()};
  }
  if (design.kind() == DesignKind::GF2x || design.kind() == DesignKind::BlockGF2x) {
    unsigned l = 0;
    while ((uint64_t{1} << l) < design.t()) {
      ++l;
    }
    const BinaryField field = find_irreducible(l);
    nd.gf2_degree = l;
    nd.gf2_low = field.low_terms();
  }
  return nd;
}

bool naive_one_bit(const BitExtractor& ext, const BitBuffer& input, const std::vector<int>& seed) {
  auto seed_value = [&](uint64_t pos, unsigned width) {
    uint64_t v = 0;
    for (unsigned b = 0; b < width; ++b) {
      if (seed.at(pos + b) != 0) {
        v |= uint64_t{1} << b;
      }
    }
    return v;
  };
  auto input_bit = [&](uint64_t i) { return i < ext.input_bits() && input.at(i); };

  if (const auto* x = dynamic_cast<const XorExtractor*>(&ext)) {
    const uint64_t n = x->input_bits();
    unsigned width = 0;
    while ((uint64_t{1} << width) < n) {
      ++width;
    }
    bool r = false;
    for (uint64_t i = 0; i < x->ell(); ++i) {
      r ^= input_bit(seed_value(i * width, width) % n);
    }
    return r;
  }

  if (const auto* h = dynamic_cast<const RshExtractor*>(&ext)) {
    const unsigned l = h->block_len();
    const uint64_t n = h->input_bits();
    const uint64_t s = (n + l - 1) / l;
    const uint64_t alpha = seed_value(0, l);
    const uint64_t beta = seed_value(l, l);
    const unsigned degree = h->field().degree();
    const uint64_t low = h->field().low_terms();
    // sum_{i=1..s} c_i alpha^(s-i), walking from the constant term upward.
    uint64_t value = 0;
    uint64_t power = 1;
    for (uint64_t i = s; i >= 1; --i) {
      uint64_t c = 0;
      for (unsigned b = 0; b < l; ++b) {
        const uint64_t pos = (i - 1) * l + b;
        if (pos < n && input.at(pos)) {
          c |= uint64_t{1} << b;
        }
      }
      value ^= naive_gf2_mul(c, power, degree, low);
      power = naive_gf2_mul(power, alpha, degree, low);
    }
    return naive_parity(value & beta, l);
  }

  if (const auto* lu = dynamic_cast<const LuExtractor*>(&ext)) {
    const uint64_t side = lu->side();
    const unsigned width = lu->index_width();
    const uint64_t c = lu->walk_steps();
    const uint64_t ell = lu->ell();
    const uint64_t start = seed_value(0, width) % (side * side);
    int64_t x = static_cast<int64_t>(start / side);
    int64_t y = static_cast<int64_t>(start % side);
    const auto sd = static_cast<int64_t>(side);
    auto wrap = [sd](int64_t v) { return ((v % sd) + sd) % sd; };
    bool r = false;
    for (uint64_t i = 0; i < ell; ++i) {
      if (i > 0) {
        for (uint64_t step = 0; step < c; ++step) {
          const uint64_t e = seed_value(width + 3 * ((i - 1) * c + step), 3);
          switch (e) {
            case 0: x = wrap(x + 2 * y); break;
            case 1: x = wrap(x - 2 * y); break;
            case 2: x = wrap(x + (y + 1)); break;
            case 3: x = wrap(x - (y + 1)); break;
            case 4: y = wrap(y + 2 * x); break;
            case 5: y = wrap(y - 2 * x); break;
            case 6: y = wrap(y + (2 * x + 1)); break;
            default: y = wrap(y - (2 * x + 1)); break;
          }
        }
      }
      const bool beta = seed.at(width + 3 * c * (ell - 1) + i) != 0;
      if (beta) {
        r ^= input_bit(static_cast<uint64_t>(x) * side + static_cast<uint64_t>(y));
      }
    }
    return r;
  }
  throw InvalidParameters("naive_extract does not know this extractor type");
}

std::vector<uint64_t> sorted_row(const WeakDesign& design, uint64_t i) {
  auto row = design.compute_Si(i);
  std::sort(row.begin(), row.end());
  return row;
}

}  // namespace

bool within_overlap_bound(uint64_t sum, uint64_t m, Overlap r) {
  if (r == Overlap::One) {
    return sum <= m;
  }
  return static_cast<unsigned __int128>(sum) * kTwoEDenominator <= static_cast<unsigned __int128>(kTwoENumerator) * m;
}

uint64_t first_malformed_row(const WeakDesign& design) {
  for (uint64_t i = 0; i < design.m(); ++i) {
    const auto row = sorted_row(design, i);
    if (row.size() != design.t() || std::adjacent_find(row.begin(), row.end()) != row.end() ||
        (!row.empty() && row.back() >= design.d())) {
      return i;
    }
  }
  return design.m();
}

OverlapReport overlap_check(const WeakDesign& design) {
  if (design.t() > 40 || design.m() > 4096) {
    throw BudgetExceeded("exact overlap check supports t <= 40 and m <= 4096 (got t = " +
                         std::to_string(design.t()) + ", m = " + std::to_string(design.m()) + ")");
  }
  OverlapReport report;
  report.m = design.m();
  report.r = design.overlap();
  std::vector<std::vector<uint64_t>> rows;
  rows.reserve(design.m());
  for (uint64_t i = 0; i < design.m(); ++i) {
    rows.push_back(sorted_row(design, i));
  }
  std::vector<uint64_t> common;
  for (uint64_t i = 0; i < rows.size(); ++i) {
    uint64_t sum = 0;
    for (uint64_t j = 0; j < i; ++j) {
      common.clear();
      std::set_intersection(rows[j].begin(), rows[j].end(), rows[i].begin(), rows[i].end(),
                            std::back_inserter(common));
      sum += uint64_t{1} << common.size();
    }
    if (i == 0 || sum > report.worst_sum) {
      report.worst_sum = sum;
      report.worst_row = i;
    }
    if (report.pass && !within_overlap_bound(sum, report.m, report.r)) {
      report.pass = false;
      report.first_failure = i;
    }
  }
  return report;
}

double monobit(const BitBuffer& bits) {
  if (bits.size() < 100) {
    throw DomainError("monobit needs at least 100 bits");
  }
  const double len = static_cast<double>(bits.size());
  const double ones = static_cast<double>(bits.popcount());
  return (2.0 * ones - len) / std::sqrt(len);
}

BitBuffer naive_extract(const ExtractionJob& job) {
  if (job.extractor.input_bits() > (uint64_t{1} << 16) || job.m > (uint64_t{1} << 12)) {
    throw BudgetExceeded("naive_extract handles n <= 2^16 and m <= 2^12 only");
  }
  if (job.m > job.design.m() || job.seed.size() < job.design.d() || job.design.t() < job.extractor.num_random_bits()) {
    throw InvalidParameters("job is inconsistent");
  }
  const NaiveDesign nd = describe(job.design);
  const uint64_t t_req = job.extractor.num_random_bits();
  BitBuffer out(job.m);
  for (uint64_t i = 0; i < job.m; ++i) {
    const auto row = nd.row(i);
    std::vector<int> subseed;
    for (uint64_t j = 0; j < t_req; ++j) {
      subseed.push_back(job.seed.at(row.at(j)) ? 1 : 0);
    }
    out.set(i, naive_one_bit(job.extractor, job.input, subseed));
  }
  return out;
}

}  // namespace trevisan
