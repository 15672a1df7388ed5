#include "trevisan/bitext.hpp"

#include <bit>
#include <string>

#include "trevisan/error.hpp"

namespace trevisan {

namespace {

template <typename Extractor>
class BoundLocal final : public BoundExtractor {
 public:
  BoundLocal(const Extractor& ext, const BitBuffer& input) : ext_(ext), input_(input) {}
  bool extract(const BitBuffer& subseed) const override {
    ext_.check_seed(subseed);
    return ext_.extract_from(input_, subseed);
  }

 private:
  const Extractor& ext_;
  const BitBuffer& input_;
};

class BoundRsh final : public BoundExtractor {
 public:
  BoundRsh(const RshExtractor& ext, std::vector<uint64_t> coeffs) : ext_(ext), coeffs_(std::move(coeffs)) {}
  bool extract(const BitBuffer& subseed) const override { return ext_.extract_with(coeffs_, subseed); }

 private:
  const RshExtractor& ext_;
  std::vector<uint64_t> coeffs_;
};

uint64_t sub_mod(uint64_t a, uint64_t b, uint64_t side) { return a >= b ? a - b : a + side - b; }

// Reduces a value < 4 * side + 1 without a division.
uint64_t small_mod(uint64_t a, uint64_t side) {
  while (a >= side) {
    a -= side;
  }
  return a;
}

}  // namespace

double BitExtractor::compute_k(uint64_t m, Overlap r) const {
  if (!params_) {
    throw InvalidParameters("extractor was not configured from parameters; entropy requirement unknown");
  }
  ExtractorParams p = *params_;
  p.r = r;
  return required_entropy(p, m);
}

void BitExtractor::check_seed(const BitBuffer& subseed) const {
  if (subseed.size() < num_random_bits()) {
    throw InsufficientData("subseed has " + std::to_string(subseed.size()) + " bits, extractor needs " +
                           std::to_string(num_random_bits()));
  }
}

void BitExtractor::check_input(const BitBuffer& input) const {
  if (input.size() < input_bits()) {
    throw InsufficientData("input has " + std::to_string(input.size()) + " bits, extractor needs " +
                           std::to_string(input_bits()));
  }
}

static const ExtractorParams& expect_kind(const ExtractorParams& params, BitextKind kind) {
  if (params.bitext != kind) {
    throw InvalidParameters("parameters are for the " + std::string(bitext_name(params.bitext)) +
                            " extractor, not " + std::string(bitext_name(kind)));
  }
  return params;
}

XorExtractor::XorExtractor(uint64_t n, uint64_t ell) : n_(n), ell_(ell), width_(ceil_log2(n)) {
  if (n < 2) {
    throw DomainError("XOR extractor needs n >= 2");
  }
  if (ell < 1) {
    throw DomainError("XOR extractor needs ell >= 1");
  }
}

XorExtractor::XorExtractor(const ExtractorParams& params)
    : XorExtractor(expect_kind(params, BitextKind::Xor).n, params.ell) {
  params_ = params;
}

std::unique_ptr<BoundExtractor> XorExtractor::bind(const BitBuffer& input) const {
  check_input(input);
  return std::make_unique<BoundLocal<XorExtractor>>(*this, input);
}

static BinaryField block_field(uint64_t l) {
  if (l < 1 || l > 64) {
    throw DomainError("RSH block length l = " + std::to_string(l) + " outside the supported range [1, 64]");
  }
  return find_irreducible(static_cast<unsigned>(l));
}

RshExtractor::RshExtractor(uint64_t n, unsigned l) : n_(n), field_(block_field(l)) {
  if (n < 1) {
    throw DomainError("RSH extractor needs n >= 1");
  }
}

RshExtractor::RshExtractor(const ExtractorParams& params)
    : n_(expect_kind(params, BitextKind::Rsh).n), field_(block_field(params.ell)) {
  params_ = params;
}

std::vector<uint64_t> RshExtractor::coefficients(const BitBuffer& input) const {
  check_input(input);
  const unsigned l = field_.degree();
  std::vector<uint64_t> coeffs(block_count());
  for (uint64_t i = 0; i < coeffs.size(); ++i) {
    const uint64_t pos = i * l;
    const auto width = static_cast<unsigned>(std::min<uint64_t>(l, n_ - pos));
    coeffs[i] = input.read_bits(pos, width);
  }
  return coeffs;
}

bool RshExtractor::extract_with(std::span<const uint64_t> coeffs, const BitBuffer& subseed) const {
  check_seed(subseed);
  const unsigned l = field_.degree();
  const uint64_t alpha = subseed.read_bits(0, l);
  const uint64_t beta = subseed.read_bits(l, l);
  // Horner: sum_i c_i alpha^(s - i).
  uint64_t acc = 0;
  for (uint64_t c : coeffs) {
    acc = field_.mul(acc, alpha) ^ c;
  }
  return (std::popcount(acc & beta) & 1) != 0;
}

std::unique_ptr<BoundExtractor> RshExtractor::bind(const BitBuffer& input) const {
  return std::make_unique<BoundRsh>(*this, coefficients(input));
}

Vertex lu_next_vertex(Vertex v, unsigned e, uint64_t side) {
  const uint64_t x = v.x;
  const uint64_t y = v.y;
  const uint64_t two_y = small_mod(2 * y, side);
  const uint64_t y_plus = small_mod(y + 1, side);
  const uint64_t two_x = small_mod(2 * x, side);
  const uint64_t two_x_plus = small_mod(2 * x + 1, side);
  switch (e & 7u) {
    case 0:
      return {small_mod(x + two_y, side), y};
    case 1:
      return {sub_mod(x, two_y, side), y};
    case 2:
      return {small_mod(x + y_plus, side), y};
    case 3:
      return {sub_mod(x, y_plus, side), y};
    case 4:
      return {x, small_mod(y + two_x, side)};
    case 5:
      return {x, sub_mod(y, two_x, side)};
    case 6:
      return {x, small_mod(y + two_x_plus, side)};
    default:
      return {x, sub_mod(y, two_x_plus, side)};
  }
}

LuExtractor::LuExtractor(uint64_t n, uint64_t c, uint64_t ell)
    : n_(n), c_(c), ell_(ell), side_(ceil_sqrt(n)), width_(ceil_log2(side_ * side_)) {
  if (n < 4) {
    throw DomainError("Lu extractor needs n >= 4 (torus side >= 2)");
  }
  if (c < 1 || ell < 1) {
    throw DomainError("Lu extractor needs c >= 1 and ell >= 1");
  }
}

LuExtractor::LuExtractor(const ExtractorParams& params)
    : LuExtractor(expect_kind(params, BitextKind::Lu).n, params.walk_steps, params.ell) {
  params_ = params;
}

uint64_t LuExtractor::num_random_bits() const { return width_ + 3 * c_ * (ell_ - 1) + ell_; }

std::unique_ptr<BoundExtractor> LuExtractor::bind(const BitBuffer& input) const {
  check_input(input);
  return std::make_unique<BoundLocal<LuExtractor>>(*this, input);
}

std::unique_ptr<BitExtractor> make_extractor(const ExtractorParams& params) {
  switch (params.bitext) {
    case BitextKind::Xor:
      return std::make_unique<XorExtractor>(params);
    case BitextKind::Rsh:
      return std::make_unique<RshExtractor>(params);
    case BitextKind::Lu:
      return std::make_unique<LuExtractor>(params);
  }
  throw InvalidParameters("unknown extractor kind");
}

}  // namespace trevisan
