#include "ctqw/config.hpp"

#include <json.hpp>

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "ctqw/errors.hpp"

namespace ctqw {

namespace {

using ordered_json = nlohmann::ordered_json;

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1;
  int column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

void reject_unknown_keys(const ordered_json& object, const std::string& where,
                         const std::set<std::string>& allowed) {
  for (const auto& [key, value] : object.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError("config error at " + where + ": unknown key \"" + key + "\"");
    }
  }
}

template <typename T>
T get_field(const ordered_json& object, const std::string& where, const std::string& key,
            T fallback) {
  if (!object.contains(key)) return fallback;
  try {
    return object.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config error at " + where + "." + key + ": wrong value type");
  }
}

ExperimentKind parse_kind(const std::string& name) {
  if (name == "run") return ExperimentKind::run;
  if (name == "sweep-beta") return ExperimentKind::sweep_beta;
  if (name == "sweep-omega") return ExperimentKind::sweep_omega;
  if (name == "compare") return ExperimentKind::compare;
  if (name == "snapshot") return ExperimentKind::snapshot;
  throw ConfigError("config error at experiment: unknown experiment \"" + name +
                    "\" (expected run, sweep-beta, sweep-omega, compare, or snapshot)");
}

DefectProtocol parse_protocol(const ordered_json& object) {
  reject_unknown_keys(object, "protocol",
                      {"mode", "beta", "beta1", "beta2", "omega", "period", "phase"});
  const auto mode = get_field<std::string>(object, "protocol", "mode", "none");

  DefectProtocol protocol;
  if (mode == "none") {
    reject_unknown_keys(object, "protocol (mode none)", {"mode"});
    protocol.mode = ProtocolMode::none;
    return protocol;
  }
  if (mode == "static") {
    reject_unknown_keys(object, "protocol (mode static)", {"mode", "beta"});
    if (!object.contains("beta")) {
      throw ConfigError("config error at protocol.beta: static mode requires a defect strength");
    }
    return DefectProtocol::static_defect(get_field<double>(object, "protocol", "beta", 0.0));
  }
  if (mode == "alternating") {
    protocol.mode = ProtocolMode::alternating;
    protocol.beta1 = get_field<double>(object, "protocol", "beta1", 0.0);
    protocol.beta2 = get_field<double>(object, "protocol", "beta2", 0.0);
    if (!object.contains("beta1") || !object.contains("beta2")) {
      throw ConfigError("config error at protocol: alternating mode requires beta1 and beta2");
    }
    const bool has_omega = object.contains("omega");
    const bool has_period = object.contains("period");
    if (has_omega == has_period) {
      throw ConfigError(
          "config error at protocol: alternating mode requires exactly one of omega or period");
    }
    if (has_omega) {
      const double omega = get_field<double>(object, "protocol", "omega", 0.0);
      if (!(omega > 0.0)) throw ConfigError("config error at protocol.omega: must be > 0");
      protocol.period = 2.0 * std::numbers::pi / omega;
    } else {
      protocol.period = get_field<double>(object, "protocol", "period", 0.0);
    }
    protocol.phase_offset = get_field<double>(object, "protocol", "phase", 0.0);
    protocol.validate();  // rejects period <= 0 with the invariant named
    return protocol;
  }
  throw ConfigError("config error at protocol.mode: unknown mode \"" + mode +
                    "\" (expected none, static, or alternating)");
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::run: return "run";
    case ExperimentKind::sweep_beta: return "sweep-beta";
    case ExperimentKind::sweep_omega: return "sweep-omega";
    case ExperimentKind::compare: return "compare";
    case ExperimentKind::snapshot: return "snapshot";
  }
  return "run";
}

std::string to_string(OutputFormat format) {
  return format == OutputFormat::csv ? "csv" : "json";
}

ExperimentConfig parse_config(const std::string& text,
                              std::optional<ExperimentKind> default_kind) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError("config syntax error at line " + std::to_string(line) + ", column " +
                      std::to_string(column) + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("config error: top level must be a JSON object");
  }
  reject_unknown_keys(doc, "config",
                      {"experiment", "lattice", "initial_site", "protocol", "propagator",
                       "horizon", "sample_every", "sweep", "output"});

  ExperimentConfig config;

  if (doc.contains("experiment")) {
    const auto name = get_field<std::string>(doc, "config", "experiment", "");
    config.experiment = parse_kind(name);
    if (default_kind && *default_kind != config.experiment) {
      throw ConfigError("config error at experiment: \"" + name +
                        "\" does not match the requested subcommand \"" +
                        to_string(*default_kind) + "\"");
    }
  } else if (default_kind) {
    config.experiment = *default_kind;
  } else {
    throw ConfigError("config error: missing key \"experiment\"");
  }

  if (doc.contains("lattice")) {
    const auto& lat = doc.at("lattice");
    reject_unknown_keys(lat, "lattice", {"num_sites", "epsilon", "gamma", "defect_site"});
    config.lattice.num_sites = get_field<int>(lat, "lattice", "num_sites", 0);
    config.lattice.epsilon = get_field<double>(lat, "lattice", "epsilon", 0.0);
    config.lattice.gamma = get_field<double>(lat, "lattice", "gamma", 1.0);
    config.lattice.defect_site = get_field<int>(lat, "lattice", "defect_site", 0);
  }
  config.initial_site = get_field<int>(doc, "config", "initial_site", 0);

  if (doc.contains("protocol")) config.protocol = parse_protocol(doc.at("protocol"));

  if (doc.contains("propagator")) {
    const auto& prop = doc.at("propagator");
    reject_unknown_keys(prop, "propagator",
                        {"substep", "tolerance", "edge_guard", "edge_threshold"});
    config.propagator.substep = get_field<double>(prop, "propagator", "substep", 0.05);
    config.propagator.tolerance = get_field<double>(prop, "propagator", "tolerance", 1e-12);
    config.propagator.edge_guard = get_field<int>(prop, "propagator", "edge_guard", 10);
    config.propagator.edge_threshold =
        get_field<double>(prop, "propagator", "edge_threshold", 1e-8);
  }
  config.propagator.validate();

  if (!doc.contains("horizon")) {
    throw ConfigError("config error: missing key \"horizon\" (target gamma*t)");
  }
  config.horizon = get_field<double>(doc, "config", "horizon", 0.0);
  if (!(config.horizon > 0.0) || !std::isfinite(config.horizon)) {
    throw ConfigError("config error at horizon: must be finite and > 0");
  }
  config.sample_every =
      get_field<double>(doc, "config", "sample_every", config.horizon / 100.0);
  if (!(config.sample_every > 0.0)) {
    throw ConfigError("config error at sample_every: must be > 0");
  }

  const bool is_sweep = config.experiment == ExperimentKind::sweep_beta ||
                        config.experiment == ExperimentKind::sweep_omega;
  if (doc.contains("sweep")) {
    if (!is_sweep) {
      throw ConfigError("config error at sweep: only sweep-beta/sweep-omega take a sweep range");
    }
    const auto& sw = doc.at("sweep");
    reject_unknown_keys(sw, "sweep", {"lo", "hi", "count"});
    config.sweep.lo = get_field<double>(sw, "sweep", "lo", 0.0);
    config.sweep.hi = get_field<double>(sw, "sweep", "hi", 0.0);
    config.sweep.count = get_field<int>(sw, "sweep", "count", 0);
    if (!sw.contains("lo") || !sw.contains("hi") || !sw.contains("count")) {
      throw ConfigError("config error at sweep: lo, hi, and count are all required");
    }
  } else if (config.experiment == ExperimentKind::sweep_beta) {
    config.sweep = SweepRange{-4.0, 2.0, 121};
  } else if (config.experiment == ExperimentKind::sweep_omega) {
    config.sweep = SweepRange{0.1, 10.0, 200};
  }

  if (doc.contains("output")) {
    const auto& out = doc.at("output");
    reject_unknown_keys(out, "output", {"directory", "format"});
    config.output.directory =
        std::filesystem::path(get_field<std::string>(out, "output", "directory", "out"));
    const auto format = get_field<std::string>(out, "output", "format", "csv");
    if (format == "csv") {
      config.output.format = OutputFormat::csv;
    } else if (format == "json") {
      config.output.format = OutputFormat::json;
    } else {
      throw ConfigError("config error at output.format: expected \"csv\" or \"json\"");
    }
  }

  // Semantic checks that do not need the resolved lattice size.
  if (config.experiment == ExperimentKind::compare ||
      config.experiment == ExperimentKind::sweep_omega) {
    if (config.protocol.mode != ProtocolMode::alternating) {
      throw ConfigError("config error at protocol.mode: " + to_string(config.experiment) +
                        " requires an alternating protocol (beta1, beta2 set)");
    }
  }
  if (config.lattice.num_sites != 0) {
    config.lattice.validate();
  } else {
    if (!(config.lattice.gamma > 0.0)) {
      throw ConfigError("config error at lattice.gamma: must be > 0");
    }
  }
  if (is_sweep) config.sweep_spec().validate();

  return config;
}

ExperimentConfig ExperimentConfig::resolve(double horizon_scale) const {
  if (!(horizon_scale > 0.0) || !std::isfinite(horizon_scale)) {
    throw ConfigError("horizon-scale: must be finite and > 0");
  }
  ExperimentConfig resolved = *this;
  resolved.horizon = horizon * horizon_scale;
  resolved.sample_every = sample_every * horizon_scale;
  if (resolved.lattice.num_sites == 0) {
    // The horizon is a gamma*t value, so the light cone spans 2*horizon sites.
    resolved.lattice.num_sites = auto_num_sites(1.0, resolved.horizon);
  }
  resolved.lattice.validate();

  const int ring = resolved.lattice.center_offset();
  if (initial_site < -ring || initial_site > ring) {
    throw ConfigError("config error at initial_site: outside the lattice (|site| <= " +
                      std::to_string(ring) + ")");
  }
  const bool is_sweep = experiment == ExperimentKind::sweep_beta ||
                        experiment == ExperimentKind::sweep_omega;
  if (is_sweep) resolved.sweep_spec().validate();
  return resolved;
}

SweepSpec ExperimentConfig::sweep_spec() const {
  SweepSpec spec;
  spec.kind = experiment == ExperimentKind::sweep_omega ? SweepSpec::Kind::omega
                                                        : SweepSpec::Kind::beta;
  spec.lo = sweep.lo;
  spec.hi = sweep.hi;
  spec.count = sweep.count;
  spec.fixed_beta1 = protocol.beta1;
  spec.fixed_beta2 = protocol.beta2;
  spec.horizon = horizon;
  spec.sample_every = sample_every;
  return spec;
}

std::string emit_config(const ExperimentConfig& config) {
  ordered_json doc;
  doc["experiment"] = to_string(config.experiment);

  ordered_json lat;
  if (config.lattice.num_sites != 0) lat["num_sites"] = config.lattice.num_sites;
  lat["epsilon"] = config.lattice.epsilon;
  lat["gamma"] = config.lattice.gamma;
  lat["defect_site"] = config.lattice.defect_site;
  doc["lattice"] = lat;

  doc["initial_site"] = config.initial_site;

  ordered_json proto;
  switch (config.protocol.mode) {
    case ProtocolMode::none:
      proto["mode"] = "none";
      break;
    case ProtocolMode::static_defect:
      proto["mode"] = "static";
      proto["beta"] = config.protocol.beta1;
      break;
    case ProtocolMode::alternating:
      // period is the stored field, so emitting it round-trips bit-exactly
      // even when the document was written in terms of omega.
      proto["mode"] = "alternating";
      proto["beta1"] = config.protocol.beta1;
      proto["beta2"] = config.protocol.beta2;
      proto["period"] = config.protocol.period;
      proto["phase"] = config.protocol.phase_offset;
      break;
  }
  doc["protocol"] = proto;

  doc["propagator"] = {{"substep", config.propagator.substep},
                       {"tolerance", config.propagator.tolerance},
                       {"edge_guard", config.propagator.edge_guard},
                       {"edge_threshold", config.propagator.edge_threshold}};
  doc["horizon"] = config.horizon;
  doc["sample_every"] = config.sample_every;

  const bool is_sweep = config.experiment == ExperimentKind::sweep_beta ||
                        config.experiment == ExperimentKind::sweep_omega;
  if (is_sweep) {
    doc["sweep"] = {{"lo", config.sweep.lo}, {"hi", config.sweep.hi},
                    {"count", config.sweep.count}};
  }
  doc["output"] = {{"directory", config.output.directory.string()},
                   {"format", to_string(config.output.format)}};
  return doc.dump(2) + "\n";
}

}  // namespace ctqw
