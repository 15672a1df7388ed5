#include "trevisan/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "trevisan/bitbuffer.hpp"
#include "trevisan/bitext.hpp"
#include "trevisan/error.hpp"
#include "trevisan/extract.hpp"
#include "trevisan/verify.hpp"

namespace trevisan {

namespace {

std::string fmt_real(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

ExtractorParams bitext_params(const CliConfig& c, uint64_t n, uint64_t m) {
  const Overlap r = design_overlap(c.design);
  switch (c.bitext) {
    case BitextKind::Xor:
      return xor_params(n, m, c.alpha, c.mu, c.eps, r);
    case BitextKind::Rsh:
      return rsh_params(n, m, c.alpha, c.eps, r);
    case BitextKind::Lu:
      return lu_params(n, m, c.alpha, c.nu, c.eps, r);
  }
  throw InvalidParameters("unknown extractor family");
}

ExtractorParams derive_at(const CliConfig& c, uint64_t n, std::optional<uint64_t> m) {
  ExtractorParams p = bitext_params(c, n, 0);
  p = with_output_len(p, m ? *m : max_output_len(p));
  try {
    return apply_design(p, c.design);
  } catch (const InvalidParameters& e) {
    // Block designs cannot be built for very small m.
    throw InfeasibleError(e.what());
  }
}

std::vector<uint8_t> read_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(std::string("cannot open ") + what + " file " + path.string());
  }
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw IoError(std::string("failed reading ") + what + " file " + path.string());
  }
  return bytes;
}

BitBuffer read_bits(const std::filesystem::path& path, uint64_t len, const char* what) {
  const auto bytes = read_file(path, what);
  if (bytes.size() < bytes_for_bits(len)) {
    throw InsufficientData(std::string(what) + " file " + path.string() + " has " + std::to_string(bytes.size()) +
                           " bytes, need " + std::to_string(bytes_for_bits(len)));
  }
  return BitBuffer::from_bytes(bytes, len);
}

// Write-then-rename so a failed run never leaves a partial file behind.
void write_file(const std::filesystem::path& path, std::span<const uint8_t> bytes) {
  auto tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot create " + tmp.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

void require(bool ok, const char* flag, const char* mode) {
  if (!ok) {
    throw InvalidParameters(std::string(flag) + " is required for " + mode);
  }
}

void require_bitext_fields(const CliConfig& c, const char* mode) {
  require(c.n > 0, "-n", mode);
  require(c.alpha > 0, "--alpha", mode);
  require(c.eps > 0, "--eps", mode);
  if (c.bitext == BitextKind::Xor) {
    require(c.mu > 0, "--mu", mode);
  }
  if (c.bitext == BitextKind::Lu) {
    require(c.nu > 0, "--nu", mode);
  }
}

int run_dry(const CliConfig& c, std::ostream& out) {
  require_bitext_fields(c, "dry-run");
  const ExtractorParams p = derive_params(c);
  const auto surplus = static_cast<long double>(p.m) - static_cast<long double>(p.d);
  out << "n=" << p.n << '\n'
      << "m=" << p.m << '\n'
      << "gamma=" << fmt_real(p.gamma) << '\n'
      << "ell=" << p.ell << '\n'
      << "t_req=" << p.t_req << '\n'
      << "t_act=" << p.t_act << '\n'
      << "d=" << p.d << '\n'
      << "k=" << fmt_real(p.k) << '\n'
      << "r=" << overlap_name(p.r) << '\n'
      << "feasible=" << (p.feasible ? "true" : "false") << '\n'
      << "seed_surplus=" << std::fixed << std::setprecision(0) << surplus << std::defaultfloat << '\n';
  return p.feasible ? kExitOk : kExitInfeasible;
}

std::unique_ptr<WeakDesign> build_design(const CliConfig& c, const ExtractorParams& p) {
  return make_design(c.design, p.t_act, p.m);
}

int run_extract(CliConfig c, std::ostream& out) {
  require(!c.input_path.empty(), "--input", "extract");
  require(!c.seed_path.empty(), "--seed", "extract");
  require(!c.output_path.empty(), "--output", "extract");
  require_bitext_fields(c, "extract");

  std::unique_ptr<WeakDesign> design;
  if (!c.load_design_path.empty()) {
    design = design_load(c.load_design_path);
    c.design = design->kind();
    if (!c.m) {
      c.m = design->m();
    }
  }
  const ExtractorParams p = derive_params(c);
  if (!p.feasible) {
    throw InfeasibleError("m = " + std::to_string(p.m) + " needs k = " + fmt_real(p.k) +
                          " but the source offers alpha * n = " + fmt_real(p.source_entropy()));
  }
  if (design) {
    if (design->t() != p.t_act || design->m() != p.m) {
      throw InvalidParameters("cached design has t = " + std::to_string(design->t()) + ", m = " +
                              std::to_string(design->m()) + "; this run needs t = " + std::to_string(p.t_act) +
                              ", m = " + std::to_string(p.m));
    }
  } else {
    design = build_design(c, p);
  }

  const BitBuffer input = read_bits(c.input_path, p.n, "input");
  const BitBuffer seed = read_bits(c.seed_path, design->d(), "seed");
  const auto ext = make_extractor(p);

  const auto start = std::chrono::steady_clock::now();
  const BitBuffer result = extract_all({input, seed, *design, *ext, p.m, c.threads});
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!c.save_design_path.empty() && c.load_design_path.empty()) {
    design_save(*design, c.save_design_path);
  }
  write_file(c.output_path, result.bytes());
  out << "bits_in=" << p.n << '\n'
      << "bits_out=" << p.m << '\n'
      << "d=" << design->d() << '\n'
      << "wall_time_s=" << fmt_real(seconds) << '\n';
  return kExitOk;
}

int run_gen_design(const CliConfig& c, std::ostream& out) {
  require(!c.save_design_path.empty(), "--save-design", "gen-design");
  uint64_t t_act = 0;
  uint64_t m = 0;
  if (c.t_req) {
    require(c.m.has_value(), "-m", "gen-design with --t-req");
    m = *c.m;
    t_act = design_d(c.design, *c.t_req, m).first;
  } else {
    require_bitext_fields(c, "gen-design");
    const ExtractorParams p = derive_params(c);
    t_act = p.t_act;
    m = p.m;
  }
  const auto design = make_design(c.design, t_act, m);
  design_save(*design, c.save_design_path);
  out << "design=" << design_name(design->kind()) << '\n'
      << "t=" << design->t() << '\n'
      << "m=" << design->m() << '\n'
      << "d=" << design->d() << '\n';
  return kExitOk;
}

int run_verify_design(const CliConfig& c, std::ostream& out, std::ostream& err) {
  require(!c.load_design_path.empty(), "--load-design", "verify-design");
  const auto design = design_load(c.load_design_path);
  out << "design=" << design_name(design->kind()) << '\n'
      << "t=" << design->t() << '\n'
      << "m=" << design->m() << '\n'
      << "d=" << design->d() << '\n';
  const uint64_t bad = first_malformed_row(*design);
  if (bad < design->m()) {
    err << "row " << bad << " is not a set of " << design->t() << " distinct indices below d\n";
    out << "pass=false\nfirst_failure=" << bad << '\n';
    return kExitVerify;
  }
  if (design->t() > 40 || design->m() > 4096) {
    out << "overlap=skipped\npass=true\n";
    return kExitOk;
  }
  const OverlapReport report = overlap_check(*design);
  out << "worst_row=" << report.worst_row << '\n'
      << "worst_sum=" << report.worst_sum << '\n'
      << "bound=" << overlap_name(report.r) << "*" << report.m << '\n'
      << "pass=" << (report.pass ? "true" : "false") << '\n';
  if (!report.pass) {
    err << "overlap bound violated first at row " << report.first_failure << '\n';
    out << "first_failure=" << report.first_failure << '\n';
    return kExitVerify;
  }
  return kExitOk;
}

int run_break_even(const CliConfig& c, std::ostream& out) {
  require(c.alpha > 0 && c.eps > 0, "--alpha and --eps", "break-even");
  const BreakEven be = find_break_even(c, 1024, uint64_t{1} << 50);
  if (!be.n) {
    out << "break_even_n=none\n";
    return kExitInfeasible;
  }
  out << "break_even_n=" << *be.n << '\n' << "m=" << be.at.m << '\n' << "d=" << be.at.d << '\n';
  return kExitOk;
}

int dispatch(const CliConfig& c, std::ostream& out, std::ostream& err) {
  switch (c.mode) {
    case CliMode::DryRun:
      return run_dry(c, out);
    case CliMode::Extract:
      return run_extract(c, out);
    case CliMode::GenDesign:
      return run_gen_design(c, out);
    case CliMode::VerifyDesign:
      return run_verify_design(c, out, err);
    case CliMode::BreakEven:
      return run_break_even(c, out);
  }
  return kExitUsage;
}

}  // namespace

ExtractorParams derive_params(const CliConfig& config) { return derive_at(config, config.n, config.m); }

BreakEven find_break_even(const CliConfig& config, uint64_t n_lo, uint64_t n_hi) {
  auto probe = [&](uint64_t n) -> std::optional<ExtractorParams> {
    try {
      return derive_at(config, n, std::nullopt);
    } catch (const InfeasibleError&) {
      return std::nullopt;
    }
  };
  auto reached = [](const std::optional<ExtractorParams>& p) { return p && p->m >= 1 && p->m >= p->d; };

  BreakEven result;
  // Doubling to bracket, then bisection.
  uint64_t lo = n_lo;
  uint64_t hi = n_lo;
  std::optional<ExtractorParams> at_hi = probe(hi);
  while (!reached(at_hi)) {
    if (hi >= n_hi) {
      if (at_hi) {
        result.at = *at_hi;
      }
      return result;
    }
    lo = hi;
    hi = hi > n_hi / 2 ? n_hi : hi * 2;
    at_hi = probe(hi);
  }
  if (hi == n_lo) {
    result.n = hi;
    result.at = *at_hi;
    return result;
  }
  while (hi - lo > 1) {
    const uint64_t mid = lo + (hi - lo) / 2;
    auto at_mid = probe(mid);
    if (reached(at_mid)) {
      hi = mid;
      at_hi = at_mid;
    } else {
      lo = mid;
    }
  }
  result.n = hi;
  result.at = *at_hi;
  return result;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trevisan randomness extractor"};
  app.require_subcommand(0, 1);
  CliConfig c;

  const std::map<std::string, BitextKind> bitexts{
      {"xor", BitextKind::Xor}, {"rsh", BitextKind::Rsh}, {"lu", BitextKind::Lu}};
  const std::map<std::string, DesignKind> designs{{"gfp", DesignKind::GFp},
                                                  {"gf2x", DesignKind::GF2x},
                                                  {"block-gfp", DesignKind::BlockGFp},
                                                  {"block-gf2x", DesignKind::BlockGF2x}};
  app.add_option("--bitext", c.bitext, "One-bit extractor: xor, rsh, lu")
      ->transform(CLI::CheckedTransformer(bitexts, CLI::ignore_case).description(""))
      ->type_name("NAME");
  app.add_option("--design", c.design, "Weak design: gfp, gf2x, block-gfp, block-gf2x")
      ->transform(CLI::CheckedTransformer(designs, CLI::ignore_case).description(""))
      ->type_name("NAME");
  app.add_option("-n", c.n, "Input length in bits");
  app.add_option("-m", c.m, "Output length in bits (default: largest feasible)");
  app.add_option("-t,--t-req", c.t_req, "Set size for gen-design without extractor parameters");
  app.add_option("--alpha", c.alpha, "Min-entropy rate of the source, in (0, 1]");
  app.add_option("--mu", c.mu, "XOR: fraction of the entropy kept back");
  app.add_option("--nu", c.nu, "Lu: sampler parameter, in (0, 1/2]");
  app.add_option("--eps", c.eps, "Error per output bit");
  app.add_option("--input", c.input_path, "Raw input bit file");
  app.add_option("--seed", c.seed_path, "Raw seed bit file");
  app.add_option("--output", c.output_path, "Output bit file");
  app.add_option("--save-design", c.save_design_path, "Write the design cache here");
  app.add_option("--load-design", c.load_design_path, "Read the design from this cache");
  app.add_option("--threads", c.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  bool dry_flag = false;
  app.add_flag("--dry-run", dry_flag, "Print derived parameters and exit");

  auto* extract = app.add_subcommand("extract", "Extract from --input with --seed (default)")->fallthrough();
  auto* dry = app.add_subcommand("dry-run", "Print derived parameters")->fallthrough();
  auto* gen = app.add_subcommand("gen-design", "Compute a design and write its cache file")->fallthrough();
  auto* verify = app.add_subcommand("verify-design", "Check a cached design")->fallthrough();
  auto* sweep = app.add_subcommand("break-even", "Smallest n where output length reaches seed length")->fallthrough();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (dry_flag || dry->parsed()) {
    c.mode = CliMode::DryRun;
  } else if (gen->parsed()) {
    c.mode = CliMode::GenDesign;
  } else if (verify->parsed()) {
    c.mode = CliMode::VerifyDesign;
  } else if (sweep->parsed()) {
    c.mode = CliMode::BreakEven;
  } else {
    (void)extract;
    c.mode = CliMode::Extract;
  }

  try {
    return dispatch(c, out, err);
  } catch (const InsufficientData& e) {
    err << "error: " << e.what() << '\n';
    return kExitInsufficient;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const NoRootError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const OverflowError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return kExitIo;
  }
}

}  // namespace trevisan
