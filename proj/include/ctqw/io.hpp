#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ctqw/config.hpp"
#include "ctqw/experiments.hpp"
#include "ctqw/observables.hpp"

namespace ctqw {

/// Locale-independent rendering with 17 significant digits.
std::string format_double(double value);

// CSV renderers. Single header row, LF line endings, no trailing delimiter.
std::string series_csv(const ObservableSeries& series);
std::string sweep_csv(const SweepTable& table);
std::string profile_csv(const std::string& value_column, std::span<const double> values,
                        int center_offset);

/// Write text to `path` exactly as given; parent directories are created.
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Run the resolved experiment and emit its output files (data plus the
/// run manifest) into config.output.directory. Returns the files written.
std::vector<std::filesystem::path> execute_experiment(const ExperimentConfig& resolved,
                                                      int threads = 1);

}  // namespace ctqw
