#include "ctqw/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "ctqw/errors.hpp"
#include "ctqw/version.hpp"

namespace ctqw {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* sweep_column(SweepSpec::Kind kind) {
  return kind == SweepSpec::Kind::beta ? "beta" : "omega";
}

ordered_json record_json(const ObservableRecord& r) {
  ordered_json j;
  j["time"] = r.time;
  j["sigma"] = r.sigma;
  if (r.sigma_ratio) j["sigma_ratio"] = *r.sigma_ratio;
  j["shannon"] = r.shannon;
  j["ipr"] = r.ipr;
  return j;
}

ordered_json series_json(const ObservableSeries& series) {
  ordered_json j;
  j["name"] = series.name;
  j["records"] = ordered_json::array();
  for (const auto& r : series.records) j["records"].push_back(record_json(r));
  return j;
}

ordered_json sweep_json(const SweepTable& table) {
  ordered_json j;
  j["kind"] = sweep_column(table.kind);
  j["sigma0"] = table.sigma0;
  j["rows"] = ordered_json::array();
  for (const auto& row : table.rows) {
    j["rows"].push_back({{sweep_column(table.kind), row.value}, {"sigma_ratio", row.sigma_ratio}});
  }
  return j;
}

ordered_json certificate_json(const ParrondoCertificate& c) {
  return ordered_json{{"ratio_beta1", c.ratio_beta1},
                      {"ratio_beta2", c.ratio_beta2},
                      {"ratio_alternating", c.ratio_alternating},
                      {"holds", c.holds()}};
}

ordered_json peaks_json(const PeakSummary& p) {
  return ordered_json{{"max_probability", p.max_probability},
                      {"probability_site", p.probability_site},
                      {"max_rqd", p.max_rqd},
                      {"rqd_site", p.rqd_site}};
}

ordered_json snapshot_json(const SnapshotResult& snap, int center_offset) {
  ordered_json j;
  j["time"] = snap.time;
  j["sigma"] = snap.sigma;
  j["peaks"] = peaks_json(snap.peaks);
  auto sites = ordered_json::array();
  for (std::size_t i = 0; i < snap.distribution.size(); ++i) {
    sites.push_back(static_cast<int>(i) - center_offset);
  }
  j["j"] = std::move(sites);
  j["probability"] = snap.distribution;
  j["rqd"] = snap.rqd;
  return j;
}

// Writes the data files for one experiment into `dir` and appends a summary
// for the manifest. Returns the list of files written.
struct EmittedExperiment {
  std::vector<std::filesystem::path> files;
  ordered_json results;
  ordered_json bundle;  // json-format payload, written once assembled
};

void emit_file(EmittedExperiment& out, const std::filesystem::path& dir, const std::string& name,
               const std::string& text) {
  const auto path = dir / name;
  write_text_file(path, text);
  out.files.push_back(path);
}

EmittedExperiment emit_run(const ExperimentConfig& cfg, int threads) {
  (void)threads;
  EmittedExperiment out;
  ObservableSeries series = run_series(cfg.lattice, cfg.protocol, cfg.horizon, cfg.sample_every,
                                       cfg.propagator, cfg.initial_site, "run");
  if (cfg.protocol.mode == ProtocolMode::none) {
    attach_reference(series, series);
  } else {
    const ObservableSeries reference =
        run_series(cfg.lattice, DefectProtocol::none_protocol(), cfg.horizon, cfg.sample_every,
                   cfg.propagator, cfg.initial_site, "defect_free");
    attach_reference(series, reference);
  }

  const ObservableRecord& last = series.records.back();
  out.results = {{"final_time", last.time},
                 {"final_sigma", last.sigma},
                 {"final_sigma_ratio", *last.sigma_ratio},
                 {"final_shannon", last.shannon},
                 {"final_ipr", last.ipr}};
  if (cfg.output.format == OutputFormat::csv) {
    emit_file(out, cfg.output.directory, "series.csv", series_csv(series));
  } else {
    out.bundle = series_json(series);
    emit_file(out, cfg.output.directory, "series.json", out.bundle.dump(2) + "\n");
  }
  return out;
}

EmittedExperiment emit_sweep(const ExperimentConfig& cfg, int threads) {
  EmittedExperiment out;
  const SweepSpec spec = cfg.sweep_spec();
  const SweepTable table =
      (spec.kind == SweepSpec::Kind::beta)
          ? sweep_beta(spec, cfg.lattice, cfg.propagator, cfg.initial_site, threads)
          : sweep_omega(spec, cfg.lattice, cfg.propagator, cfg.initial_site, threads);

  const int best = table.argmax_index();
  out.results = {{"sigma0", table.sigma0},
                 {"argmax", table.rows[best].value},
                 {"max_sigma_ratio", table.rows[best].sigma_ratio}};
  if (table.certificate) out.results["certificate"] = certificate_json(*table.certificate);

  const std::string stem =
      spec.kind == SweepSpec::Kind::beta ? "sweep_beta" : "sweep_omega";
  if (cfg.output.format == OutputFormat::csv) {
    emit_file(out, cfg.output.directory, stem + ".csv", sweep_csv(table));
  } else {
    out.bundle = sweep_json(table);
    emit_file(out, cfg.output.directory, stem + ".json", out.bundle.dump(2) + "\n");
  }
  return out;
}

EmittedExperiment emit_compare(const ExperimentConfig& cfg, int threads) {
  EmittedExperiment out;
  const ComparisonResult result =
      compare_protocols(cfg.lattice, cfg.protocol.beta1, cfg.protocol.beta2,
                        cfg.protocol.omega(), cfg.horizon, cfg.propagator, cfg.sample_every,
                        cfg.initial_site, threads);

  out.results["certificate"] = certificate_json(result.certificate);
  for (const auto& series : result.series) {
    const ObservableRecord& last = series.records.back();
    out.results["final"][series.name] = {{"sigma", last.sigma},
                                         {"sigma_ratio", *last.sigma_ratio},
                                         {"shannon", last.shannon},
                                         {"ipr", last.ipr}};
  }

  if (cfg.output.format == OutputFormat::csv) {
    for (const auto& series : result.series) {
      emit_file(out, cfg.output.directory, series.name + ".csv", series_csv(series));
    }
  } else {
    out.bundle["certificate"] = certificate_json(result.certificate);
    out.bundle["series"] = ordered_json::array();
    for (const auto& series : result.series) out.bundle["series"].push_back(series_json(series));
    emit_file(out, cfg.output.directory, "compare.json", out.bundle.dump(2) + "\n");
  }
  return out;
}

EmittedExperiment emit_snapshot(const ExperimentConfig& cfg, int threads) {
  (void)threads;
  EmittedExperiment out;
  const int offset = cfg.lattice.center_offset();
  const SnapshotResult snap =
      snapshot(cfg.lattice, cfg.protocol, cfg.horizon, cfg.propagator, cfg.initial_site);
  out.results = {{"time", snap.time}, {"sigma", snap.sigma}, {"peaks", peaks_json(snap.peaks)}};

  std::optional<SnapshotResult> reference;
  if (cfg.protocol.mode != ProtocolMode::none) {
    reference = snapshot(cfg.lattice, DefectProtocol::none_protocol(), cfg.horizon,
                         cfg.propagator, cfg.initial_site);
    out.results["reference"] = {{"sigma", reference->sigma},
                                {"peaks", peaks_json(reference->peaks)}};
    out.results["peak_ratios"] = {
        {"probability", snap.peaks.max_probability / reference->peaks.max_probability},
        {"rqd", snap.peaks.max_rqd / reference->peaks.max_rqd}};
  }

  if (cfg.output.format == OutputFormat::csv) {
    emit_file(out, cfg.output.directory, "distribution.csv",
              profile_csv("probability", snap.distribution, offset));
    emit_file(out, cfg.output.directory, "rqd.csv", profile_csv("rqd", snap.rqd, offset));
    if (reference) {
      emit_file(out, cfg.output.directory, "distribution_reference.csv",
                profile_csv("probability", reference->distribution, offset));
      emit_file(out, cfg.output.directory, "rqd_reference.csv",
                profile_csv("rqd", reference->rqd, offset));
    }
  } else {
    out.bundle = snapshot_json(snap, offset);
    if (reference) out.bundle["reference"] = snapshot_json(*reference, offset);
    emit_file(out, cfg.output.directory, "snapshot.json", out.bundle.dump(2) + "\n");
  }
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto result =
      std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 17);
  return std::string(buffer, result.ptr);
}

std::string series_csv(const ObservableSeries& series) {
  std::string text = "time,sigma,sigma_ratio,shannon,ipr\n";
  for (const ObservableRecord& r : series.records) {
    if (!r.sigma_ratio) {
      throw std::invalid_argument("series_csv: sigma_ratio missing; attach a reference first");
    }
    text += format_double(r.time) + ',' + format_double(r.sigma) + ',' +
            format_double(*r.sigma_ratio) + ',' + format_double(r.shannon) + ',' +
            format_double(r.ipr) + '\n';
  }
  return text;
}

std::string sweep_csv(const SweepTable& table) {
  std::string text = std::string(sweep_column(table.kind)) + ",sigma_ratio\n";
  for (const SweepRow& row : table.rows) {
    text += format_double(row.value) + ',' + format_double(row.sigma_ratio) + '\n';
  }
  return text;
}

std::string profile_csv(const std::string& value_column, std::span<const double> values,
                        int center_offset) {
  std::string text = "j," + value_column + "\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    text += std::to_string(static_cast<int>(i) - center_offset) + ',' +
            format_double(values[i]) + '\n';
  }
  return text;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw ConfigError("output: cannot create directory " + path.parent_path().string() + ": " +
                        ec.message());
    }
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw ConfigError("output: cannot open " + path.string() + " for writing");
  }
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!file) {
    throw ConfigError("output: write failed for " + path.string());
  }
}

std::vector<std::filesystem::path> execute_experiment(const ExperimentConfig& resolved,
                                                      int threads) {
  EmittedExperiment out;
  switch (resolved.experiment) {
    case ExperimentKind::run:
      out = emit_run(resolved, threads);
      break;
    case ExperimentKind::sweep_beta:
    case ExperimentKind::sweep_omega:
      out = emit_sweep(resolved, threads);
      break;
    case ExperimentKind::compare:
      out = emit_compare(resolved, threads);
      break;
    case ExperimentKind::snapshot:
      out = emit_snapshot(resolved, threads);
      break;
  }

  ordered_json manifest;
  manifest["engine"] = {{"name", std::string(kEngineName)},
                        {"version", std::string(kEngineVersion)}};
  manifest["config"] = ordered_json::parse(emit_config(resolved));
  ordered_json derived;
  derived["num_sites"] = resolved.lattice.num_sites;
  derived["samples"] = static_cast<long long>(std::llround(resolved.horizon /
                                                           resolved.sample_every));
  if (resolved.protocol.mode == ProtocolMode::alternating) {
    derived["period"] = resolved.protocol.period;
    derived["omega"] = resolved.protocol.omega();
  }
  manifest["derived"] = derived;
  manifest["results"] = out.results;
  auto outputs = ordered_json::array();
  for (const auto& file : out.files) outputs.push_back(file.filename().string());
  manifest["outputs"] = outputs;

  const auto manifest_path = resolved.output.directory / "manifest.json";
  write_text_file(manifest_path, manifest.dump(2) + "\n");
  out.files.push_back(manifest_path);
  return out.files;
}

}  // namespace ctqw
