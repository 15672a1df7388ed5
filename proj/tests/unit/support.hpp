#pragma once

#include <cstdint>
#include <cstring>
#include <algorithm>
#include <cmath>
#include <random>

#include "trevisan/bitbuffer.hpp"

namespace trevisan::testing {

inline BitBuffer random_bits(uint64_t len, std::mt19937_64& rng) {
  BitBuffer buf(len);
  auto bytes = buf.mutable_bytes();
  for (size_t i = 0; i < bytes.size(); i += 8) {
    const uint64_t v = rng();
    std::memcpy(bytes.data() + i, &v, std::min<size_t>(8, bytes.size() - i));
  }
  if (len % 8 != 0) {
    bytes.back() &= static_cast<uint8_t>((1u << (len % 8)) - 1);
  }
  return buf;
}

}  // namespace trevisan::testing

#include <memory>

#include "trevisan/bitext.hpp"
#include "trevisan/extract.hpp"
#include "trevisan/params.hpp"
#include "trevisan/weakdesign.hpp"

namespace trevisan::testing {

/// A complete random extraction job that owns its pieces.
struct OwnedJob {
  ExtractorParams params;
  std::unique_ptr<WeakDesign> design;
  std::unique_ptr<BitExtractor> extractor;
  BitBuffer input;
  BitBuffer seed;

  ExtractionJob job(unsigned workers = 1) const { return {input, seed, *design, *extractor, params.m, workers}; }
};

inline ExtractorParams family_params(BitextKind kind, uint64_t n, double alpha, double eps, Overlap r) {
  switch (kind) {
    case BitextKind::Xor:
      return xor_params(n, 0, alpha, 0.5, eps, r);
    case BitextKind::Rsh:
      return rsh_params(n, 0, alpha, eps, r);
    case BitextKind::Lu:
      return lu_params(n, 0, alpha, 0.25, eps, r);
  }
  return {};
}

/// Desk-scale job: n <= n_max, m <= m_max, random design variant.
inline OwnedJob random_job(BitextKind kind, std::mt19937_64& rng, uint64_t n_max = 1 << 16, uint64_t m_max = 4096) {
  for (;;) {
    const uint64_t n = 1024 + rng() % (n_max - 1023);
    const double alpha = 0.5 + 0.5 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double eps = std::pow(10.0, -1.0 - 2.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng));
    const DesignKind design = static_cast<DesignKind>(rng() % 4);
    ExtractorParams p = family_params(kind, n, alpha, eps, design_overlap(design));
    const uint64_t max_m = std::min(max_output_len(p), m_max);
    if (max_m < 6) {
      continue;
    }
    p = apply_design(with_output_len(p, 6 + rng() % (max_m - 5)), design);
    OwnedJob job;
    job.params = p;
    job.design = make_design(design, p.t_act, p.m);
    job.extractor = make_extractor(p);
    job.input = random_bits(n, rng);
    job.seed = random_bits(job.design->d(), rng);
    return job;
  }
}

}  // namespace trevisan::testing
