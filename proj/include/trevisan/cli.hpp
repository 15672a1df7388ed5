#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "trevisan/params.hpp"
#include "trevisan/weakdesign.hpp"

namespace trevisan {

enum class CliMode { Extract, DryRun, GenDesign, VerifyDesign, BreakEven };

/// Stable exit codes for scripting.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInfeasible = 2,
  kExitInsufficient = 3,
  kExitIo = 4,
  kExitVerify = 5,
};

struct CliConfig {
  CliMode mode = CliMode::Extract;
  BitextKind bitext = BitextKind::Xor;
  DesignKind design = DesignKind::GFp;
  uint64_t n = 0;
  std::optional<uint64_t> m;      // defaults to max_output_len
  std::optional<uint64_t> t_req;  // gen-design without extractor parameters
  double alpha = 0;
  double mu = 0;
  double nu = 0;
  double eps = 0;
  std::filesystem::path input_path;
  std::filesystem::path seed_path;
  std::filesystem::path output_path;
  std::filesystem::path save_design_path;
  std::filesystem::path load_design_path;
  unsigned threads = 1;
};

/// Extractor parameters plus the chosen design's t_act and d.
ExtractorParams derive_params(const CliConfig& config);

/// Smallest n in [n_lo, n_hi] at which max_output_len reaches the seed length
/// d, using the bitext/design/alpha/mu/nu/eps of `config`. Assumes
/// m - d changes sign once over the range.
struct BreakEven {
  std::optional<uint64_t> n;
  ExtractorParams at;  // parameters at n (or at n_hi if not reached)
};
BreakEven find_break_even(const CliConfig& config, uint64_t n_lo, uint64_t n_hi);

/// Parses argv (argv[0] is the program name) and runs the selected mode.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trevisan
