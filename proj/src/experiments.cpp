#include "ctqw/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>
#include <utility>

#include "ctqw/errors.hpp"

namespace ctqw {

namespace {

// All experiment-facing quantities live on the paper's axes: times are
// gamma*t values and defect strengths are in units of gamma. The propagator
// works in raw energies and conjugate time, so convert at this boundary.
PropagatorConfig to_physical(const PropagatorConfig& cfg, double gamma) {
  PropagatorConfig phys = cfg;
  phys.substep = cfg.substep / gamma;
  return phys;
}

DefectProtocol to_physical(const DefectProtocol& protocol, double gamma) {
  DefectProtocol phys = protocol;
  phys.beta1 = protocol.beta1 * gamma;
  phys.beta2 = protocol.beta2 * gamma;
  if (protocol.mode == ProtocolMode::alternating) {
    phys.period = protocol.period / gamma;
    phys.phase_offset = protocol.phase_offset / gamma;
  }
  return phys;
}

long long sample_count(double horizon, double sample_every) {
  if (!(horizon > 0.0) || !(sample_every > 0.0)) {
    throw ConfigError("sampling: horizon and sample_every must be > 0");
  }
  const auto n = std::llround(horizon / sample_every);
  if (n < 1 || std::abs(static_cast<double>(n) * sample_every - horizon) >
                   1e-9 * std::max(1.0, horizon)) {
    throw ConfigError("sample_every: must divide horizon evenly (horizon=" +
                      std::to_string(horizon) + ", sample_every=" + std::to_string(sample_every) +
                      ")");
  }
  return n;
}

// Run `count` independent jobs on up to `threads` workers. Results are keyed
// by index inside `work`; the lowest-index failure is rethrown.
void parallel_rows(int count, int threads, const std::function<void(int)>& work) {
  const int workers = std::max(1, std::min(threads, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) work(i);
    return;
  }
  std::vector<std::exception_ptr> failures(count);
  std::atomic<int> next{0};
  auto loop = [&] {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        work(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(loop);
  for (auto& t : pool) t.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
}

template <typename Fn>
void annotate_row(const std::string& label, Fn&& fn) {
  try {
    fn();
  } catch (const BoundaryContamination& e) {
    throw BoundaryContamination(label + ": " + e.what(), e.time(), e.edge_probability());
  } catch (const ConvergenceFailure& e) {
    throw ConvergenceFailure(label + ": " + e.what());
  }
}

double final_sigma(const LatticeSpec& lattice, const DefectProtocol& protocol, double horizon,
                   const PropagatorConfig& cfg, int initial_site) {
  WalkerState state = WalkerState::localized(lattice, initial_site);
  evolve_protocol(state, lattice, to_physical(protocol, lattice.gamma), horizon / lattice.gamma,
                  to_physical(cfg, lattice.gamma));
  return standard_deviation(state);
}

double ratio_of(double sigma, double sigma0) {
  return (sigma == 0.0 && sigma0 == 0.0) ? 1.0 : sigma / sigma0;
}

}  // namespace

void SweepSpec::validate() const {
  if (!(lo < hi)) throw ConfigError("sweep: lo must be < hi");
  if (count < 2) throw ConfigError("sweep.count: need at least 2 points");
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw ConfigError("sweep: bounds must be finite");
  if (kind == Kind::omega && !(lo > 0.0)) {
    throw ConfigError("sweep: omega grid must be positive");
  }
  sample_count(horizon, sample_every);  // validates horizon and divisibility
}

std::vector<double> SweepSpec::grid() const {
  std::vector<double> points(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (int i = 0; i < count; ++i) points[i] = lo + step * static_cast<double>(i);
  points.back() = hi;
  return points;
}

int SweepTable::argmax_index() const {
  int best = 0;
  for (int i = 1; i < static_cast<int>(rows.size()); ++i) {
    if (rows[i].sigma_ratio > rows[best].sigma_ratio) best = i;
  }
  return best;
}

ObservableSeries run_series(const LatticeSpec& lattice, const DefectProtocol& protocol,
                            double horizon, double sample_every, const PropagatorConfig& cfg,
                            int initial_site, std::string name) {
  lattice.validate();
  protocol.validate();
  const long long samples = sample_count(horizon, sample_every);

  const DefectProtocol phys = to_physical(protocol, lattice.gamma);
  const PropagatorConfig pcfg = to_physical(cfg, lattice.gamma);

  ObservableSeries series;
  series.name = std::move(name);
  series.records.reserve(samples + 1);

  WalkerState state = WalkerState::localized(lattice, initial_site);
  series.records.push_back(measure(state, 0.0));
  for (long long k = 1; k <= samples; ++k) {
    const double target_gt = (k == samples) ? horizon : sample_every * static_cast<double>(k);
    const double duration = std::max(0.0, target_gt / lattice.gamma - state.time);
    evolve_protocol(state, lattice, phys, duration, pcfg);
    series.records.push_back(measure(state, target_gt));
  }
  return series;
}

SweepTable sweep_points(SweepSpec::Kind kind, const std::vector<double>& points,
                        const SweepSpec& spec, const LatticeSpec& lattice,
                        const PropagatorConfig& cfg, int initial_site, int threads) {
  lattice.validate();
  cfg.validate();

  SweepTable table;
  table.kind = kind;
  table.sigma0 =
      final_sigma(lattice, DefectProtocol::none_protocol(), spec.horizon, cfg, initial_site);
  table.rows.resize(points.size());

  const char* label = (kind == SweepSpec::Kind::beta) ? "beta" : "omega";
  parallel_rows(static_cast<int>(points.size()), threads, [&](int i) {
    annotate_row(std::string(label) + "=" + std::to_string(points[i]), [&] {
      const DefectProtocol protocol =
          (kind == SweepSpec::Kind::beta)
              ? DefectProtocol::static_defect(points[i])
              : DefectProtocol::alternating(spec.fixed_beta1, spec.fixed_beta2, points[i]);
      const double sigma = final_sigma(lattice, protocol, spec.horizon, cfg, initial_site);
      table.rows[i] = SweepRow{points[i], sigma, ratio_of(sigma, table.sigma0)};
    });
  });

  if (kind == SweepSpec::Kind::omega) {
    const double s1 = final_sigma(lattice, DefectProtocol::static_defect(spec.fixed_beta1),
                                  spec.horizon, cfg, initial_site);
    const double s2 = final_sigma(lattice, DefectProtocol::static_defect(spec.fixed_beta2),
                                  spec.horizon, cfg, initial_site);
    table.ratio_static_beta1 = ratio_of(s1, table.sigma0);
    table.ratio_static_beta2 = ratio_of(s2, table.sigma0);
    table.certificate = ParrondoCertificate{*table.ratio_static_beta1, *table.ratio_static_beta2,
                                            table.rows[table.argmax_index()].sigma_ratio};
  }
  return table;
}

SweepTable sweep_beta(const SweepSpec& spec, const LatticeSpec& lattice,
                      const PropagatorConfig& cfg, int initial_site, int threads) {
  spec.validate();
  return sweep_points(SweepSpec::Kind::beta, spec.grid(), spec, lattice, cfg, initial_site,
                      threads);
}

SweepTable sweep_omega(const SweepSpec& spec, const LatticeSpec& lattice,
                       const PropagatorConfig& cfg, int initial_site, int threads) {
  spec.validate();
  return sweep_points(SweepSpec::Kind::omega, spec.grid(), spec, lattice, cfg, initial_site,
                      threads);
}

ComparisonResult compare_protocols(const LatticeSpec& lattice, double beta1, double beta2,
                                   double omega, double horizon, const PropagatorConfig& cfg,
                                   double sample_every, int initial_site, int threads) {
  lattice.validate();
  cfg.validate();
  if (!(omega > 0.0)) throw ConfigError("compare: omega must be > 0");

  const std::array<DefectProtocol, 4> protocols = {
      DefectProtocol::none_protocol(),
      DefectProtocol::static_defect(beta1),
      DefectProtocol::static_defect(beta2),
      DefectProtocol::alternating(beta1, beta2, omega),
  };
  const std::array<std::string, 4> names = {"defect_free", "static_beta1", "static_beta2",
                                            "alternating"};

  ComparisonResult result;
  parallel_rows(4, threads, [&](int i) {
    annotate_row(names[i], [&] {
      result.series[i] =
          run_series(lattice, protocols[i], horizon, sample_every, cfg, initial_site, names[i]);
    });
  });

  for (auto& series : result.series) attach_reference(series, result.series[0]);

  result.certificate =
      ParrondoCertificate{*result.series[1].records.back().sigma_ratio,
                          *result.series[2].records.back().sigma_ratio,
                          *result.series[3].records.back().sigma_ratio};
  return result;
}

SnapshotResult snapshot(const LatticeSpec& lattice, const DefectProtocol& protocol,
                        double at_time, const PropagatorConfig& cfg, int initial_site) {
  lattice.validate();
  protocol.validate();
  if (!(at_time >= 0.0)) throw ConfigError("snapshot: at_time must be >= 0");

  WalkerState state = WalkerState::localized(lattice, initial_site);
  evolve_protocol(state, lattice, to_physical(protocol, lattice.gamma), at_time / lattice.gamma,
                  to_physical(cfg, lattice.gamma));

  SnapshotResult result;
  result.time = at_time;
  result.distribution = probability_distribution(state);
  result.rqd = relative_quadratic_deviation(state);
  result.sigma = standard_deviation(state);

  const auto p_max = std::max_element(result.distribution.begin(), result.distribution.end());
  const auto r_max = std::max_element(result.rqd.begin(), result.rqd.end());
  const int offset = lattice.center_offset();
  result.peaks.max_probability = *p_max;
  result.peaks.probability_site =
      static_cast<int>(p_max - result.distribution.begin()) - offset;
  result.peaks.max_rqd = *r_max;
  result.peaks.rqd_site = static_cast<int>(r_max - result.rqd.begin()) - offset;
  return result;
}

double loglog_slope(const ObservableSeries& series, double t_lo, double t_hi) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (const ObservableRecord& r : series.records) {
    if (r.time < t_lo || r.time > t_hi || r.time <= 0.0 || r.sigma <= 0.0) continue;
    const double x = std::log(r.time);
    const double y = std::log(r.sigma);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("loglog_slope: fewer than 2 usable records in window");
  const double denom = static_cast<double>(n) * sxx - sx * sx;
  return (static_cast<double>(n) * sxy - sx * sy) / denom;
}

}  // namespace ctqw
