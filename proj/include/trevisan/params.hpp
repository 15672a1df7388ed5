#pragma once

#include <cstdint>
#include <string_view>

namespace trevisan {

/// Overlap of a weak design. Kept symbolic; only overlap_value() turns it
/// into a real number.
enum class Overlap { One, TwoE };

double overlap_value(Overlap r);
std::string_view overlap_name(Overlap r);  // "1" or "2e"

enum class BitextKind { Xor, Rsh, Lu };
std::string_view bitext_name(BitextKind kind);

/// User inputs plus every quantity derived from them for one extractor
/// family. `ell` is context dependent: XOR sample count, RSH block length l,
/// Lu number of remembered vertices.
struct ExtractorParams {
  BitextKind bitext = BitextKind::Xor;
  uint64_t n = 0;
  uint64_t m = 0;
  double alpha = 0;
  double mu = 0;  // XOR only
  double nu = 0;  // Lu only
  double eps = 0;
  double gamma = 0;  // XOR only, mu * alpha

  uint64_t ell = 0;
  uint64_t blocks = 0;      // RSH: s = ceil(n / l)
  uint64_t walk_steps = 0;  // Lu: c, sub-steps between remembered vertices
  double w = 0;             // Lu: root of the w-equation

  uint64_t t_req = 0;
  uint64_t t_act = 0;  // filled in once a design is chosen
  uint64_t d = 0;

  /// m-independent part of the entropy requirement; k = overhead + r * m.
  double overhead = 0;
  double k = 0;
  Overlap r = Overlap::TwoE;
  bool feasible = false;

  double source_entropy() const { return alpha * static_cast<double>(n); }
};

// Entropy functions, base 2.
double binary_entropy(double p);
double binary_entropy_inv(double y);

/// Root of w log w = (1 - nu + w) log (1 - nu + w) on (0, nu).
double solve_w(double nu);

ExtractorParams xor_params(uint64_t n, uint64_t m, double alpha, double mu, double eps, Overlap r);
ExtractorParams rsh_params(uint64_t n, uint64_t m, double alpha, double eps, Overlap r);
ExtractorParams lu_params(uint64_t n, uint64_t m, double alpha, double nu, double eps, Overlap r);

/// Required source entropy for an output of m bits under the given params.
double required_entropy(const ExtractorParams& params, uint64_t m);

/// Recomputes m-dependent fields (k, feasible) for a new output length.
ExtractorParams with_output_len(ExtractorParams params, uint64_t m);

/// Largest m with required_entropy(m) <= alpha * n; 0 if none.
uint64_t max_output_len(const ExtractorParams& params);

// Integer helpers shared by several modules.
unsigned ceil_log2(uint64_t x);  // ceil(log2 x), x >= 1
uint64_t ceil_sqrt(uint64_t x);

}  // namespace trevisan
