#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "ctqw/experiments.hpp"
#include "ctqw/lattice.hpp"
#include "ctqw/propagator.hpp"

namespace ctqw {

enum class ExperimentKind { run, sweep_beta, sweep_omega, compare, snapshot };
enum class OutputFormat { csv, json };

std::string to_string(ExperimentKind kind);
std::string to_string(OutputFormat format);

struct SweepRange {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
};

struct OutputSpec {
  std::filesystem::path directory = "out";
  OutputFormat format = OutputFormat::csv;
};

/// A fully declarative experiment description. Parsed from JSON with strict
/// key checking; defaults documented in the README. num_sites == 0 means
/// "auto-size from the horizon" and is filled in by resolve().
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::run;
  LatticeSpec lattice{0, 0.0, 1.0, 0};
  int initial_site = 0;
  DefectProtocol protocol;
  PropagatorConfig propagator;
  double horizon = 0.0;       ///< gamma*t target (snapshot: the sample instant)
  double sample_every = 0.0;  ///< gamma*t sampling interval
  SweepRange sweep;
  OutputSpec output;

  /// Scale the horizon (and sampling grid), fill in an auto-sized lattice,
  /// and run the full semantic validation.
  ExperimentConfig resolve(double horizon_scale = 1.0) const;

  SweepSpec sweep_spec() const;  ///< sweeps only
};

/// Parse and validate a JSON config document. Syntax errors carry
/// line/column; semantic errors name the offending key and the violated
/// invariant. Unknown keys are an error. `default_kind` supplies the
/// experiment when the document omits it (the CLI subcommand).
ExperimentConfig parse_config(const std::string& text,
                              std::optional<ExperimentKind> default_kind = std::nullopt);

/// Canonical JSON form; parse(emit(parse(x))) == parse(x).
std::string emit_config(const ExperimentConfig& config);

}  // namespace ctqw
