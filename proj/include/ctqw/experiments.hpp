#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ctqw/lattice.hpp"
#include "ctqw/observables.hpp"
#include "ctqw/propagator.hpp"

namespace ctqw {

/// Grid and fixed parameters for a one-dimensional parameter sweep.
/// All times are on the gamma*t axis; beta and omega are in units of gamma.
struct SweepSpec {
  enum class Kind { beta, omega };

  Kind kind = Kind::beta;
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;            ///< >= 2, inclusive endpoints
  double fixed_beta1 = 0.0; ///< omega sweeps: the alternated strengths
  double fixed_beta2 = 0.0;
  double horizon = 0.0;       ///< target gamma*t
  double sample_every = 0.0;  ///< must divide horizon evenly

  void validate() const;
  std::vector<double> grid() const;
};

struct SweepRow {
  double value = 0.0;  ///< the swept beta or omega
  double sigma = 0.0;
  double sigma_ratio = 0.0;
};

/// The machine-checkable statement of the Parrondo effect: both static
/// settings weaken spreading while the alternation enhances it.
struct ParrondoCertificate {
  double ratio_beta1 = 0.0;
  double ratio_beta2 = 0.0;
  double ratio_alternating = 0.0;

  bool holds() const {
    return ratio_beta1 < 1.0 && ratio_beta2 < 1.0 && ratio_alternating > 1.0;
  }
};

struct SweepTable {
  SweepSpec::Kind kind = SweepSpec::Kind::beta;
  double sigma0 = 0.0;  ///< defect-free reference at the shared horizon
  std::vector<SweepRow> rows;
  // omega sweeps only: static references and the certificate built from the
  // best row.
  std::optional<double> ratio_static_beta1;
  std::optional<double> ratio_static_beta2;
  std::optional<ParrondoCertificate> certificate;

  int argmax_index() const;
};

struct ComparisonResult {
  // defect-free, static beta1, static beta2, alternating — shared time grid.
  std::array<ObservableSeries, 4> series;
  ParrondoCertificate certificate;  ///< from the final-time records
};

struct PeakSummary {
  double max_probability = 0.0;
  int probability_site = 0;  ///< centered coordinates
  double max_rqd = 0.0;
  int rqd_site = 0;
};

struct SnapshotResult {
  double time = 0.0;  ///< gamma*t
  std::vector<double> distribution;
  std::vector<double> rqd;
  PeakSummary peaks;
  double sigma = 0.0;
};

/// Evolve one protocol and sample scalar observables every `sample_every`
/// (gamma*t units), t = 0 included. sigma_ratio is left for the caller to
/// attach.
ObservableSeries run_series(const LatticeSpec& lattice, const DefectProtocol& protocol,
                            double horizon, double sample_every, const PropagatorConfig& cfg,
                            int initial_site = 0, std::string name = {});

/// Static-defect sweep: one row per beta, sigma/sigma0 against the shared
/// defect-free reference. Rows are independent and may run on `threads`
/// workers; results are keyed by grid index. Row failures are rethrown with
/// the failing beta in the message.
SweepTable sweep_beta(const SweepSpec& spec, const LatticeSpec& lattice,
                      const PropagatorConfig& cfg, int initial_site = 0, int threads = 1);

/// Alternation-frequency sweep at fixed (beta1, beta2); also records the
/// static ratios and the certificate at the best row.
SweepTable sweep_omega(const SweepSpec& spec, const LatticeSpec& lattice,
                       const PropagatorConfig& cfg, int initial_site = 0, int threads = 1);

/// Explicit-grid variant shared by both sweeps (row order must not matter).
SweepTable sweep_points(SweepSpec::Kind kind, const std::vector<double>& points,
                        const SweepSpec& spec, const LatticeSpec& lattice,
                        const PropagatorConfig& cfg, int initial_site = 0, int threads = 1);

/// The four-protocol comparison behind the time-series figures: defect-free,
/// static beta1, static beta2, alternating(beta1, beta2, omega), all on one
/// sampling grid with sigma_ratio attached against the defect-free series.
ComparisonResult compare_protocols(const LatticeSpec& lattice, double beta1, double beta2,
                                   double omega, double horizon, const PropagatorConfig& cfg,
                                   double sample_every, int initial_site = 0, int threads = 1);

/// Full P_j and RQD profiles plus peak locations at a fixed time.
SnapshotResult snapshot(const LatticeSpec& lattice, const DefectProtocol& protocol,
                        double at_time, const PropagatorConfig& cfg, int initial_site = 0);

/// Least-squares slope of log sigma vs log t over records with
/// t_lo <= t <= t_hi (records at sigma = 0 or t = 0 are skipped).
double loglog_slope(const ObservableSeries& series, double t_lo, double t_hi);

}  // namespace ctqw
