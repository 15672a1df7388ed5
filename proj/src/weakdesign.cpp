#include "trevisan/weakdesign.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <optional>
#include <string>

#include "trevisan/error.hpp"

namespace trevisan {

namespace {

constexpr std::array<uint8_t, 4> kMagic = {'T', 'W', 'D', '1'};
constexpr size_t kHeaderSize = 4 + 1 + 3 * 8;

DesignKind basic_kind(DesignKind kind) {
  switch (kind) {
    case DesignKind::BlockGFp:
      return DesignKind::GFp;
    case DesignKind::BlockGF2x:
      return DesignKind::GF2x;
    default:
      return kind;
  }
}

uint64_t checked_square(uint64_t t) {
  if (t >= (uint64_t{1} << 32)) {
    throw OverflowError("design seed length t^2 overflows for t = " + std::to_string(t));
  }
  return t * t;
}

uint64_t checked_mul(uint64_t a, uint64_t b) {
  uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw OverflowError("design seed length overflows");
  }
  return out;
}

std::variant<PrimeField, BinaryField> make_field(DesignKind kind, uint64_t t) {
  if (is_block(kind)) {
    throw InvalidParameters("polynomial design needs a basic design kind");
  }
  if (kind == DesignKind::GFp) {
    return PrimeField(t);
  }
  if (t < 2 || !std::has_single_bit(t)) {
    throw InvalidParameters("GF(2^x) design needs t a power of two, got " + std::to_string(t));
  }
  return find_irreducible(static_cast<unsigned>(std::countr_zero(t)));
}

std::vector<uint64_t> block_starts(const BlockPartition& partition) {
  std::vector<uint64_t> starts;
  starts.reserve(partition.m_list.size());
  uint64_t acc = 0;
  for (uint64_t rows : partition.m_list) {
    starts.push_back(acc);
    acc += rows;
  }
  return starts;
}

std::pair<uint64_t, uint64_t> locate_in(const std::vector<uint64_t>& starts, uint64_t i) {
  const auto it = std::upper_bound(starts.begin(), starts.end(), i);
  const auto j = static_cast<uint64_t>(std::distance(starts.begin(), it) - 1);
  return {j, i - starts[j]};
}

// Rows served from a table; produced by design_load.
class TabulatedDesign final : public WeakDesign {
 public:
  TabulatedDesign(DesignKind kind, uint64_t t, uint64_t m, uint64_t d, std::optional<BlockPartition> partition,
                  std::vector<uint32_t> rows)
      : kind_(kind), t_(t), m_(m), d_(d), partition_(std::move(partition)), rows_(std::move(rows)) {
    if (partition_) {
      starts_ = block_starts(*partition_);
    }
  }

  DesignKind kind() const override { return kind_; }
  uint64_t t() const override { return t_; }
  uint64_t m() const override { return m_; }
  uint64_t d() const override { return d_; }

  void compute_prefix(uint64_t i, std::span<uint64_t> out) const override {
    check_row(i, out.size());
    uint64_t row = i;
    uint64_t offset = 0;
    if (partition_) {
      const auto [j, k] = locate_in(starts_, i);
      row = k;
      offset = j * t_ * t_;
    }
    const uint32_t* src = rows_.data() + row * t_;
    for (size_t x = 0; x < out.size(); ++x) {
      out[x] = src[x] + offset;
    }
  }

 private:
  DesignKind kind_;
  uint64_t t_;
  uint64_t m_;
  uint64_t d_;
  std::optional<BlockPartition> partition_;
  std::vector<uint64_t> starts_;
  std::vector<uint32_t> rows_;
};

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
  for (int b = 0; b < 8; ++b) {
    out.push_back(static_cast<uint8_t>(v >> (8 * b)));
  }
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int b = 0; b < 4; ++b) {
    out.push_back(static_cast<uint8_t>(v >> (8 * b)));
  }
}

uint32_t crc_of(std::span<const uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large buffers in chunks.
  size_t pos = 0;
  while (pos < bytes.size()) {
    const size_t chunk = std::min<size_t>(bytes.size() - pos, 1u << 30);
    crc = crc32(crc, bytes.data() + pos, static_cast<uInt>(chunk));
    pos += chunk;
  }
  return static_cast<uint32_t>(crc);
}

class Reader {
 public:
  explicit Reader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  uint64_t u64() { return read(8); }
  uint32_t u32() { return static_cast<uint32_t>(read(4)); }
  uint8_t u8() { return static_cast<uint8_t>(read(1)); }
  size_t remaining() const { return bytes_.size() - pos_; }

 private:
  uint64_t read(size_t width) {
    if (remaining() < width) {
      throw FormatError("design cache truncated");
    }
    uint64_t v = 0;
    for (size_t b = 0; b < width; ++b) {
      v |= static_cast<uint64_t>(bytes_[pos_ + b]) << (8 * b);
    }
    pos_ += width;
    return v;
  }

  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

}  // namespace

std::string_view design_name(DesignKind kind) {
  switch (kind) {
    case DesignKind::GFp:
      return "gfp";
    case DesignKind::GF2x:
      return "gf2x";
    case DesignKind::BlockGFp:
      return "block-gfp";
    case DesignKind::BlockGF2x:
      return "block-gf2x";
  }
  return "?";
}

bool is_block(DesignKind kind) { return kind == DesignKind::BlockGFp || kind == DesignKind::BlockGF2x; }

Overlap design_overlap(DesignKind kind) { return is_block(kind) ? Overlap::One : Overlap::TwoE; }

uint64_t BlockPartition::total() const {
  uint64_t sum = 0;
  for (uint64_t v : m_list) {
    sum += v;
  }
  return sum;
}

uint64_t BlockPartition::max_rows() const {
  return m_list.empty() ? 0 : *std::max_element(m_list.begin(), m_list.end());
}

BlockPartition block_partition(uint64_t m, uint64_t t) {
  const double r = 2.0 * std::numbers::e;
  if (t <= 6) {
    throw InvalidParameters("block design needs t > 2e rounded up (t >= 7), got t = " + std::to_string(t));
  }
  if (static_cast<double>(m) <= r) {
    throw InvalidParameters("block design needs m > 2e (m >= 6), got m = " + std::to_string(m));
  }
  const double md = static_cast<double>(m);
  const double raw = (std::log2(md - r) - std::log2(static_cast<double>(t) - r)) / (std::log2(r) - std::log2(r - 1.0));
  BlockPartition part;
  part.ell = std::max<uint64_t>(1, raw > 0.0 ? static_cast<uint64_t>(std::ceil(raw)) : 0);
  part.m_list.reserve(part.ell + 1);

  const double n0 = md / r - 1.0;
  double running = 0.0;  // sum of n_j so far
  uint64_t assigned = 0;
  for (uint64_t i = 0; i < part.ell; ++i) {
    running += std::pow(1.0 - 1.0 / r, static_cast<double>(i)) * n0;
    auto target = static_cast<uint64_t>(std::ceil(running));
    target = std::min(target, m);
    const uint64_t mi = target > assigned ? target - assigned : 0;
    part.m_list.push_back(mi);
    assigned += mi;
  }
  part.m_list.push_back(m - assigned);
  if (part.m_list.back() > t) {
    throw std::logic_error("block partition left " + std::to_string(part.m_list.back()) +
                           " rows for the last block, more than t = " + std::to_string(t));
  }
  return part;
}

std::pair<uint64_t, uint64_t> design_d(DesignKind kind, uint64_t t_req, uint64_t m) {
  if (t_req < 2) {
    throw DomainError("requested seed length must be at least 2");
  }
  uint64_t t_act = 0;
  if (basic_kind(kind) == DesignKind::GFp) {
    t_act = next_prime(t_req);
  } else {
    if (t_req > (uint64_t{1} << 63)) {
      throw OverflowError("no power of two >= requested seed length");
    }
    t_act = std::bit_ceil(t_req);
  }
  const uint64_t square = checked_square(t_act);
  if (!is_block(kind)) {
    return {t_act, square};
  }
  const BlockPartition part = block_partition(m, t_act);
  return {t_act, checked_mul(part.ell + 1, square)};
}

ExtractorParams apply_design(ExtractorParams params, DesignKind kind) {
  if (params.r != design_overlap(kind)) {
    throw InvalidParameters("overlap of the parameters does not match design " + std::string(design_name(kind)));
  }
  const auto [t_act, d] = design_d(kind, params.t_req, params.m);
  params.t_act = t_act;
  params.d = d;
  return params;
}

std::vector<uint64_t> WeakDesign::compute_Si(uint64_t i) const {
  std::vector<uint64_t> out(t());
  compute_prefix(i, out);
  return out;
}

void WeakDesign::check_row(uint64_t i, size_t count) const {
  if (i >= m()) {
    throw IndexOutOfRange("design row " + std::to_string(i) + " >= m = " + std::to_string(m()));
  }
  if (count > t()) {
    throw IndexOutOfRange("requested " + std::to_string(count) + " elements of a size-" + std::to_string(t()) +
                          " set");
  }
}

PolynomialDesign::PolynomialDesign(DesignKind kind, uint64_t t, uint64_t m)
    : kind_(kind), t_(t), m_(m), degree_(0), field_(make_field(kind, t)) {
  checked_square(t);
  if (m == 0) {
    throw InvalidParameters("design needs at least one row");
  }
  // Smallest c with t^(c+1) >= m.
  unsigned __int128 span = t;
  while (span < m) {
    span *= t;
    ++degree_;
  }
}

std::vector<uint64_t> PolynomialDesign::coefficients(uint64_t i) const {
  std::vector<uint64_t> coeffs(degree_ + 1);
  for (auto& c : coeffs) {
    c = i % t_;
    i /= t_;
  }
  return coeffs;
}

void PolynomialDesign::compute_prefix(uint64_t i, std::span<uint64_t> out) const {
  check_row(i, out.size());
  std::array<uint64_t, 64> coeffs{};
  uint64_t rest = i;
  for (unsigned j = 0; j <= degree_; ++j) {
    coeffs[j] = rest % t_;
    rest /= t_;
  }
  const uint64_t t = t_;
  const unsigned top = degree_;
  if (const auto* gfp = std::get_if<PrimeField>(&field_)) {
    auto horner = [&](uint64_t x) {
      uint64_t v = coeffs[top];
      for (unsigned j = top; j-- > 0;) {
        v = gfp->add(gfp->mul(v, x % t), coeffs[j]);
      }
      return v;
    };
    // The points are 0, 1, 2, ... so a forward-difference table turns each
    // evaluation into `top` additions.
    std::array<uint64_t, 64> diff{};
    for (unsigned k = 0; k <= top; ++k) {
      diff[k] = horner(k);
    }
    for (unsigned level = 1; level <= top; ++level) {
      for (unsigned k = top; k >= level; --k) {
        diff[k] = gfp->add(diff[k], t - diff[k - 1]);
      }
    }
    for (uint64_t x = 0; x < out.size(); ++x) {
      out[x] = x * t + diff[0];
      for (unsigned k = 0; k < top; ++k) {
        diff[k] = gfp->add(diff[k], diff[k + 1]);
      }
    }
  } else {
    const auto& gf2 = std::get<BinaryField>(field_);
    for (uint64_t x = 0; x < out.size(); ++x) {
      uint64_t v = coeffs[top];
      for (unsigned j = top; j-- > 0;) {
        v = gf2.mul(v, x) ^ coeffs[j];
      }
      out[x] = x * t + v;
    }
  }
}

BlockDesign::BlockDesign(DesignKind kind, uint64_t t, uint64_t m)
    : kind_(kind),
      m_(m),
      partition_(block_partition(m, t)),
      starts_(block_starts(partition_)),
      basic_(basic_kind(kind), t, partition_.max_rows()) {
  if (!is_block(kind)) {
    throw InvalidParameters("block design needs a block design kind");
  }
  checked_mul(partition_.ell + 1, t * t);
}

std::pair<uint64_t, uint64_t> BlockDesign::locate(uint64_t i) const {
  if (i >= m_) {
    throw IndexOutOfRange("design row " + std::to_string(i) + " >= m = " + std::to_string(m_));
  }
  return locate_in(starts_, i);
}

void BlockDesign::compute_prefix(uint64_t i, std::span<uint64_t> out) const {
  check_row(i, out.size());
  const auto [j, k] = locate_in(starts_, i);
  basic_.compute_prefix(k, out);
  const uint64_t offset = j * t() * t();
  for (auto& e : out) {
    e += offset;
  }
}

std::unique_ptr<WeakDesign> make_design(DesignKind kind, uint64_t t_act, uint64_t m) {
  if (is_block(kind)) {
    return std::make_unique<BlockDesign>(kind, t_act, m);
  }
  return std::make_unique<PolynomialDesign>(kind, t_act, m);
}

std::vector<uint8_t> design_serialize(const WeakDesign& design) {
  const uint64_t t = design.t();
  if (t * t - 1 > UINT32_MAX) {
    throw OverflowError("design cache stores 32-bit indices; t = " + std::to_string(t) + " is too large");
  }
  std::vector<uint8_t> out(kMagic.begin(), kMagic.end());
  out.push_back(static_cast<uint8_t>(design.kind()));
  put_u64(out, t);
  put_u64(out, design.m());
  put_u64(out, design.d());

  std::vector<uint64_t> row(t);
  auto put_row = [&](const WeakDesign& source, uint64_t i) {
    source.compute_prefix(i, row);
    for (uint64_t e : row) {
      put_u32(out, static_cast<uint32_t>(e));
    }
  };

  if (!is_block(design.kind())) {
    out.reserve(out.size() + design.m() * t * 4 + 4);
    for (uint64_t i = 0; i < design.m(); ++i) {
      put_row(design, i);
    }
  } else {
    // Only the shared basic rows are stored; block j uses the first m_j.
    const BlockPartition part = block_partition(design.m(), t);
    put_u64(out, part.ell + 1);
    for (uint64_t mj : part.m_list) {
      put_u64(out, mj);
    }
    const PolynomialDesign basic(basic_kind(design.kind()), t, part.max_rows());
    for (uint64_t k = 0; k < basic.m(); ++k) {
      put_row(basic, k);
    }
  }
  put_u32(out, crc_of(out));
  return out;
}

std::unique_ptr<WeakDesign> design_deserialize(std::span<const uint8_t> bytes) {
  if (bytes.size() < kHeaderSize + 4) {
    throw FormatError("design cache truncated");
  }
  if (!std::equal(kMagic.begin(), kMagic.begin() + 3, bytes.begin())) {
    throw FormatError("not a design cache file");
  }
  if (bytes[3] != kMagic[3]) {
    throw FormatError("unsupported design cache version '" + std::string(1, static_cast<char>(bytes[3])) + "'");
  }
  const auto body = bytes.first(bytes.size() - 4);
  Reader crc_reader(bytes.last(4));
  if (crc_reader.u32() != crc_of(body)) {
    throw FormatError("design cache checksum mismatch");
  }

  Reader in(body);
  for (size_t b = 0; b < kMagic.size(); ++b) {
    in.u8();
  }
  const uint8_t tag = in.u8();
  if (tag > 3) {
    throw FormatError("unknown design variant tag " + std::to_string(tag));
  }
  const auto kind = static_cast<DesignKind>(tag);
  const uint64_t t = in.u64();
  const uint64_t m = in.u64();
  const uint64_t d = in.u64();
  if (t < 2 || t * t - 1 > UINT32_MAX || m == 0) {
    throw FormatError("design cache header out of range");
  }

  std::optional<BlockPartition> partition;
  uint64_t rows = m;
  if (is_block(kind)) {
    const uint64_t blocks = in.u64();
    if (blocks == 0 || blocks > in.remaining() / 8) {
      throw FormatError("design cache block count out of range");
    }
    BlockPartition part;
    part.ell = blocks - 1;
    part.m_list.resize(blocks);
    for (auto& mj : part.m_list) {
      mj = in.u64();
    }
    if (part.total() != m) {
      throw FormatError("design cache block sizes do not sum to m");
    }
    if (d != blocks * t * t) {
      throw FormatError("design cache seed length inconsistent with its blocks");
    }
    rows = part.max_rows();
    partition = std::move(part);
  } else if (d != t * t) {
    throw FormatError("design cache seed length inconsistent with t");
  }

  if (in.remaining() != rows * t * 4) {
    throw FormatError("design cache row table has the wrong size");
  }
  std::vector<uint32_t> table(rows * t);
  for (auto& e : table) {
    e = in.u32();
    if (e >= t * t) {
      throw FormatError("design cache index out of range");
    }
  }
  return std::make_unique<TabulatedDesign>(kind, t, m, d, std::move(partition), std::move(table));
}

void design_save(const WeakDesign& design, const std::filesystem::path& path) {
  const auto bytes = design_serialize(design);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

std::unique_ptr<WeakDesign> design_load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw IoError("failed reading " + path.string());
  }
  return design_deserialize(bytes);
}

}  // namespace trevisan
