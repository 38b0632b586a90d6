// Command-line front end: Cartan-datum validation, preset listing, ad-hoc
// expression reduction, and the verification suites.
//
// Exit codes: 0 when every theorem-class check passes (findings never count),
// 1 when a theorem-class check fails or a datum fails validation under
// check-cartan, 2 on usage errors (bad flags, malformed files or expressions,
// resource-budget overruns).

#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "iqv/cartan.hpp"
#include "iqv/exprparse.hpp"
#include "iqv/presets.hpp"
#include "iqv/udouble.hpp"
#include "iqv/verify.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;

struct CommonOptions {
  std::string cartan;
  bool no_cache = false;
};

// Engine options honoring the cache environment variable and --no-cache.
iqv::UEngineOptions engine_options(const CommonOptions& common) {
  iqv::UEngineOptions opt;
  if (!common.no_cache) {
    if (const char* dir = std::getenv("IQVERIFY_CACHE_DIR")) opt.cache_dir = dir;
  }
  return opt;
}

// Loads and validates the --cartan argument (preset name or file path).
// Prints violations and throws on failure; `exit_code` selects how the
// caller reports it.
iqv::CartanDatum require_datum(const std::string& spec) {
  iqv::CartanDatum d = iqv::resolve_datum(spec);
  const std::vector<std::string> violations = d.validate();
  if (!violations.empty()) {
    for (const std::string& v : violations) std::cerr << v << "\n";
    throw std::runtime_error("cartan datum '" + spec + "' is invalid");
  }
  return d;
}

int run_check_cartan(const CommonOptions& common) {
  const iqv::CartanDatum d = iqv::resolve_datum(common.cartan);
  const std::vector<std::string> violations = d.validate();
  if (!violations.empty()) {
    for (const std::string& v : violations) std::cout << v << "\n";
    return kExitCheckFailure;
  }
  std::cout << "valid\n";
  return kExitPass;
}

int run_presets() {
  for (const iqv::Preset& p : iqv::preset_catalog())
    std::cout << p.name << ": " << p.summary << "\n";
  return kExitPass;
}

int run_reduce(const CommonOptions& common, const std::string& expr) {
  const iqv::CartanDatum d = require_datum(common.cartan);
  const iqv::NCPoly p = iqv::parse_double_expression(d, expr);
  iqv::UEngine engine(d, engine_options(common));
  std::cout << engine.reduce(p).to_text(d) << "\n";
  return kExitPass;
}

struct VerifyOptions {
  std::string suite = "all";
  long max_m = -1;
  long max_n = 2;
  std::string e = "both";
  std::string method = "exact";
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "text";
};

int run_verify(const CommonOptions& common, const VerifyOptions& vo) {
  iqv::SuiteSpec spec;
  spec.suite = vo.suite;
  spec.datum = require_datum(common.cartan);
  spec.max_m = vo.max_m;
  spec.max_n = vo.max_n;
  spec.e_set = vo.e == "both" ? 0 : vo.e == "+1" ? +1 : -1;
  spec.fast = vo.method == "fast";
  spec.seed = vo.seed;

  const iqv::VerificationReport report =
      iqv::run_suite(spec, engine_options(common));
  const std::string text =
      vo.format == "records" ? report.to_records() : report.to_table();
  if (vo.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(vo.out);
    if (!f) throw std::runtime_error("cannot write to '" + vo.out + "'");
    f << text;
  }
  return report.all_theorems_pass() ? kExitPass : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact verification harness for coideal subalgebras of "
               "quantum-group doubles"};
  app.require_subcommand(1);

  CommonOptions common;
  VerifyOptions vo;
  std::string expr;

  auto add_cartan = [&](CLI::App* cmd) {
    cmd->add_option("--cartan", common.cartan,
                    "preset name or cartan-datum file")
        ->required();
    cmd->add_flag("--no-cache", common.no_cache,
                  "ignore the basis cache directory");
  };

  CLI::App* check = app.add_subcommand(
      "check-cartan", "validate a cartan datum and list violations");
  add_cartan(check);

  CLI::App* verify =
      app.add_subcommand("verify", "run a verification suite");
  add_cartan(verify);
  verify->add_option("--suite", vo.suite, "suite name or 'all'")
      ->default_val("all");
  verify->add_option("--max-m", vo.max_m,
                     "override the largest power/order checked");
  verify->add_option("--max-n", vo.max_n,
                     "largest n for the two-parameter families");
  verify->add_option("--e", vo.e, "sign set")
      ->check(CLI::IsMember({"both", "+1", "-1"}))
      ->default_val("both");
  verify->add_option("--method", vo.method, "exact or fast (modular prepass)")
      ->check(CLI::IsMember({"exact", "fast"}))
      ->default_val("exact");
  verify->add_option("--seed", vo.seed, "seed for randomized checks");
  verify->add_option("--out", vo.out, "write the report to a file");
  verify->add_option("--format", vo.format, "report format")
      ->check(CLI::IsMember({"text", "records"}))
      ->default_val("text");

  CLI::App* reduce = app.add_subcommand(
      "reduce", "reduce an expression to canonical form");
  add_cartan(reduce);
  reduce->add_option("--expr", expr, "expression text")->required();

  app.add_subcommand("presets", "list the built-in cartan data");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (app.got_subcommand("check-cartan")) return run_check_cartan(common);
    if (app.got_subcommand("presets")) return run_presets();
    if (app.got_subcommand("reduce")) return run_reduce(common, expr);
    return run_verify(common, vo);
  } catch (const iqv::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const iqv::BudgetExceededError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
}
