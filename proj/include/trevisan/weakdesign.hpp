#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "trevisan/finfield.hpp"
#include "trevisan/params.hpp"

namespace trevisan {

/// Numeric values double as the variant tag of the cache file.
enum class DesignKind : uint8_t { GFp = 0, GF2x = 1, BlockGFp = 2, BlockGF2x = 3 };

std::string_view design_name(DesignKind kind);
bool is_block(DesignKind kind);
Overlap design_overlap(DesignKind kind);

/// Diagonal split of m rows into ell + 1 basic designs.
struct BlockPartition {
  uint64_t ell = 0;
  std::vector<uint64_t> m_list;  // m_0 .. m_ell

  uint64_t total() const;
  uint64_t max_rows() const;
};

BlockPartition block_partition(uint64_t m, uint64_t t);

/// Seed sizes a design grants for a requested one-bit seed length:
/// (t_act, d). m only matters for the block variants.
std::pair<uint64_t, uint64_t> design_d(DesignKind kind, uint64_t t_req, uint64_t m);

/// Fills t_act and d of `params` for the given design. The overlap in
/// params must match the design (ONE for block designs).
ExtractorParams apply_design(ExtractorParams params, DesignKind kind);

/// A family of m subsets of [0, d), each of size t.
class WeakDesign {
 public:
  virtual ~WeakDesign() = default;

  virtual DesignKind kind() const = 0;
  virtual uint64_t t() const = 0;
  virtual uint64_t m() const = 0;
  virtual uint64_t d() const = 0;
  Overlap overlap() const { return design_overlap(kind()); }

  /// Writes the first out.size() (<= t) elements of S_i, in ascending order.
  virtual void compute_prefix(uint64_t i, std::span<uint64_t> out) const = 0;

  std::vector<uint64_t> compute_Si(uint64_t i) const;

 protected:
  void check_row(uint64_t i, size_t count) const;
};

/// Polynomial design over GF(t), t prime or a power of two: row i is the
/// graph {(x, p_i(x))} of the polynomial whose coefficients are the base-t
/// digits of i, with (x, y) mapped to x * t + y.
class PolynomialDesign final : public WeakDesign {
 public:
  PolynomialDesign(DesignKind kind, uint64_t t, uint64_t m);

  DesignKind kind() const override { return kind_; }
  uint64_t t() const override { return t_; }
  uint64_t m() const override { return m_; }
  uint64_t d() const override { return t_ * t_; }
  void compute_prefix(uint64_t i, std::span<uint64_t> out) const override;

  /// Highest coefficient index c: smallest c >= 0 with t^(c+1) >= m.
  unsigned degree() const { return degree_; }
  /// Base-t digits alpha_0 .. alpha_c of row i.
  std::vector<uint64_t> coefficients(uint64_t i) const;

 private:
  DesignKind kind_;
  uint64_t t_;
  uint64_t m_;
  unsigned degree_;
  std::variant<PrimeField, BinaryField> field_;
};

/// Basic designs placed on the diagonal; overlap r = 1. Rows are emitted
/// block-major: global row i belongs to the first block whose cumulative row
/// count exceeds i.
class BlockDesign final : public WeakDesign {
 public:
  BlockDesign(DesignKind kind, uint64_t t, uint64_t m);

  DesignKind kind() const override { return kind_; }
  uint64_t t() const override { return basic_.t(); }
  uint64_t m() const override { return m_; }
  uint64_t d() const override { return (partition_.ell + 1) * t() * t(); }
  void compute_prefix(uint64_t i, std::span<uint64_t> out) const override;

  const BlockPartition& partition() const { return partition_; }
  const PolynomialDesign& basic() const { return basic_; }
  /// (block j, basic row k) of global row i.
  std::pair<uint64_t, uint64_t> locate(uint64_t i) const;

 private:
  DesignKind kind_;
  uint64_t m_;
  BlockPartition partition_;
  std::vector<uint64_t> starts_;  // first global row of each block
  PolynomialDesign basic_;
};

std::unique_ptr<WeakDesign> make_design(DesignKind kind, uint64_t t_act, uint64_t m);

/// Design cache file ("TWD1"). Block designs store only the shared basic
/// rows plus the partition.
void design_save(const WeakDesign& design, const std::filesystem::path& path);
std::unique_ptr<WeakDesign> design_load(const std::filesystem::path& path);

/// Serialized form, exposed for size checks and tests.
std::vector<uint8_t> design_serialize(const WeakDesign& design);
std::unique_ptr<WeakDesign> design_deserialize(std::span<const uint8_t> bytes);

}  // namespace trevisan
