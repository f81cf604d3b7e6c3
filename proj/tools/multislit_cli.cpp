// multislit: batch front end for pattern runs, duality sweeps and the
// acceptance suite.
//
// Exit codes: 0 ok, 1 usage, 2 config/schema error, 3 I/O error,
// 4 numeric error, 5 a requested check failed.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "multislit/acceptance.hpp"
#include "multislit/errors.hpp"
#include "multislit/experiment.hpp"

namespace {

enum ExitCode {
  kOk = 0,
  kUsage = 1,
  kConfig = 2,
  kIo = 3,
  kNumeric = 4,
  kCheckFailed = 5,
};

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::string format = "csv";
  bool check = false;
};

multislit::TableFormat table_format(const std::string& name) {
  return name == "json" ? multislit::TableFormat::kJson
                        : multislit::TableFormat::kCsv;
}

int run_pattern(const Options& opt) {
  multislit::ExperimentConfig config =
      multislit::parse_experiment_config(multislit::load_json(opt.config_path));
  if (opt.seed) config.seed = *opt.seed;
  const multislit::PatternRun run = multislit::run_pattern(config);
  multislit::write_pattern_outputs(run, opt.out_dir, table_format(opt.format));

  std::cout << "d_q " << multislit::format_number(run.duality.d_q) << "\n"
            << "visibility " << multislit::format_number(run.duality.v)
            << (run.visibility ? "" : " (no fringes)") << "\n"
            << "bound " << multislit::format_number(run.bound) << "\n"
            << "duality lhs " << multislit::format_number(run.duality.lhs)
            << "\n";
  if (opt.check && !run.duality.bound_satisfied) {
    std::cerr << "check failed: duality lhs exceeds 1 + tolerance\n";
    return kCheckFailed;
  }
  return kOk;
}

int run_sweep(const Options& opt) {
  multislit::SweepConfig config =
      multislit::parse_sweep_config(multislit::load_json(opt.config_path));
  if (opt.seed) config.options.seed = *opt.seed;
  const multislit::SweepRun run = multislit::run_sweep(config);
  multislit::write_sweep_outputs(run, opt.out_dir, table_format(opt.format));

  std::cout << run.reports.size() << " configs, " << run.violation_count
            << " violations";
  if (run.mode == multislit::GeometryMode::kUnequal) {
    std::cout << ", " << run.strict_failures << " with v_unequal >= v_equal";
  }
  std::cout << "\n";
  return run.all_checks_passed() ? kOk : kCheckFailed;
}

int run_verify() {
  const auto results = multislit::acceptance::run_all(std::cout);
  std::size_t failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << results.size() - failed << "/" << results.size()
            << " criteria passed\n";
  return failed == 0 ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-slit which-path interference simulator"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out-dir", opt.out_dir, "Output directory")
        ->capture_default_str();
    sub->add_option("--seed", opt.seed, "Override the config seed");
    sub->add_option("--format", opt.format, "Table format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  };

  CLI::App* pattern = app.add_subcommand("pattern", "Simulate one screen pattern");
  pattern->add_option("config", opt.config_path, "Experiment config (JSON)")
      ->required();
  add_common(pattern);
  pattern->add_flag("--check", opt.check,
                    "Exit with code 5 when the duality relation is violated");

  CLI::App* sweep = app.add_subcommand("sweep", "Random duality sweep");
  sweep->add_option("config", opt.config_path, "Sweep config (JSON)")->required();
  add_common(sweep);

  CLI::App* verify = app.add_subcommand("verify", "Run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (pattern->parsed()) return run_pattern(opt);
    if (sweep->parsed()) return run_sweep(opt);
    if (verify->parsed()) return run_verify();
  } catch (const multislit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const multislit::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const multislit::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumeric;
  } catch (const multislit::InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kConfig;
  }
  return kUsage;
}
