// ctqw: continuous-time quantum walk experiments on a defected 1D chain.
//
// ctqw <subcommand> --config <file> [--out <dir>] [--format csv|json]
//      [--horizon-scale <f>] [--threads <n>]
//
// Exit codes: 0 success, 2 config error, 3 numerical error.

#include <CLI11.hpp>

#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "ctqw/config.hpp"
#include "ctqw/errors.hpp"
#include "ctqw/io.hpp"
#include "ctqw/version.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  std::string format;
  double horizon_scale = 1.0;
  int threads = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw ctqw::ConfigError("cannot open config file: " + path);
  }
  std::ostringstream text;
  text << file.rdbuf();
  return text.str();
}

int run_subcommand(ctqw::ExperimentKind kind, const CliOptions& options) {
  ctqw::ExperimentConfig config = ctqw::parse_config(read_file(options.config_path), kind);
  if (!options.out_dir.empty()) config.output.directory = options.out_dir;
  if (!options.format.empty()) {
    if (options.format == "csv") {
      config.output.format = ctqw::OutputFormat::csv;
    } else if (options.format == "json") {
      config.output.format = ctqw::OutputFormat::json;
    } else {
      throw ctqw::ConfigError("--format: expected csv or json, got \"" + options.format + "\"");
    }
  }

  const ctqw::ExperimentConfig resolved = config.resolve(options.horizon_scale);
  const int threads = options.threads > 0
                          ? options.threads
                          : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  const auto files = ctqw::execute_experiment(resolved, threads);
  for (const auto& file : files) {
    std::cout << file.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continuous-time quantum walk simulator with alternating transition defects"};
  app.set_version_flag("--version",
                       std::string(ctqw::kEngineName) + " " + std::string(ctqw::kEngineVersion));
  app.require_subcommand(1);

  CliOptions options;
  const std::pair<std::string, ctqw::ExperimentKind> kinds[] = {
      {"run", ctqw::ExperimentKind::run},
      {"sweep-beta", ctqw::ExperimentKind::sweep_beta},
      {"sweep-omega", ctqw::ExperimentKind::sweep_omega},
      {"compare", ctqw::ExperimentKind::compare},
      {"snapshot", ctqw::ExperimentKind::snapshot},
  };
  for (const auto& [name, kind] : kinds) {
    CLI::App* sub = app.add_subcommand(name, "emit outputs for the " + name + " experiment");
    sub->add_option("--config", options.config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", options.out_dir, "output directory (overrides config)");
    sub->add_option("--format", options.format, "csv or json (overrides config)");
    sub->add_option("--horizon-scale", options.horizon_scale,
                    "multiply horizon and sampling interval (desk-scale runs)");
    sub->add_option("--threads", options.threads, "worker threads (default: hardware)");
    const ctqw::ExperimentKind k = kind;
    sub->callback([&options, k] {
      // Exceptions propagate to main; CLI11 treats the callback as void.
      run_subcommand(k, options);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ctqw::ConfigError& e) {
    std::cerr << "ctqw: config error: " << e.what() << "\n";
    return 2;
  } catch (const ctqw::BoundaryContamination& e) {
    std::cerr << "ctqw: numerical error: BoundaryContamination: " << e.what() << "\n";
    return 3;
  } catch (const ctqw::ConvergenceFailure& e) {
    std::cerr << "ctqw: numerical error: ConvergenceFailure: " << e.what() << "\n";
    return 3;
  } catch (const ctqw::NumericalError& e) {
    std::cerr << "ctqw: numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "ctqw: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
