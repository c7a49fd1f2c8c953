#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ctqw/errors.hpp"
#include "ctqw/experiments.hpp"

namespace {

ctqw::LatticeSpec desk_lattice(double horizon) {
  return ctqw::LatticeSpec{ctqw::auto_num_sites(1.0, horizon), 0.0, 1.0, 0};
}

ctqw::SweepSpec desk_sweep(ctqw::SweepSpec::Kind kind, double lo, double hi, int count,
                           double horizon) {
  ctqw::SweepSpec spec;
  spec.kind = kind;
  spec.lo = lo;
  spec.hi = hi;
  spec.count = count;
  spec.fixed_beta1 = -2.5;
  spec.fixed_beta2 = -3.0;
  spec.horizon = horizon;
  spec.sample_every = horizon / 10.0;
  return spec;
}

}  // namespace

TEST_SUITE_BEGIN("experiments");

TEST_CASE("beta sweep reproduces the cancellation, symmetry, and enhancement structure") {
  const double horizon = 50.0;
  const auto lattice = desk_lattice(horizon);
  const auto spec = desk_sweep(ctqw::SweepSpec::Kind::beta, -1.5, 0.0, 4, horizon);
  const auto table = sweep_beta(spec, lattice, ctqw::PropagatorConfig{}, 0, 2);

  REQUIRE(table.rows.size() == 4);
  CHECK(table.rows[0].value == -1.5);
  CHECK(table.rows[3].value == 0.0);

  CHECK(table.rows[3].sigma_ratio == 1.0);       // defect-free is its own reference
  CHECK(table.rows[1].sigma_ratio < 1e-10);      // beta = -1 cancels propagation
  CHECK(table.rows[2].sigma_ratio > 1.0);        // beta = -0.5 enhances spreading
  CHECK(std::abs(table.rows[0].sigma_ratio - table.rows[2].sigma_ratio) < 1e-8);  // -1 +/- 0.5
}

TEST_CASE("sweep grid hits both endpoints with evenly spaced interior points") {
  const auto spec = desk_sweep(ctqw::SweepSpec::Kind::beta, -4.0, 2.0, 121, 10.0);
  const auto grid = spec.grid();
  REQUIRE(grid.size() == 121);
  CHECK(grid.front() == -4.0);
  CHECK(grid.back() == 2.0);
  CHECK(grid[60] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("permuting sweep points leaves every row bit-identical") {
  const double horizon = 30.0;
  const auto lattice = desk_lattice(horizon);
  const auto spec = desk_sweep(ctqw::SweepSpec::Kind::beta, -2.0, 0.5, 3, horizon);

  const std::vector<double> forward = {-2.0, -0.75, 0.5};
  const std::vector<double> permuted = {0.5, -2.0, -0.75};
  const auto a = sweep_points(ctqw::SweepSpec::Kind::beta, forward, spec, lattice,
                              ctqw::PropagatorConfig{}, 0, 2);
  const auto b = sweep_points(ctqw::SweepSpec::Kind::beta, permuted, spec, lattice,
                              ctqw::PropagatorConfig{}, 0, 1);

  for (const auto& row : a.rows) {
    const auto match = std::find_if(b.rows.begin(), b.rows.end(),
                                    [&](const ctqw::SweepRow& r) { return r.value == row.value; });
    REQUIRE(match != b.rows.end());
    CHECK(match->sigma == row.sigma);              // bit-identical
    CHECK(match->sigma_ratio == row.sigma_ratio);  // bit-identical
  }
}

TEST_CASE("degenerate alternation: the omega sweep collapses onto the static ratio") {
  const double horizon = 50.0;
  const auto lattice = desk_lattice(horizon);
  auto spec = desk_sweep(ctqw::SweepSpec::Kind::omega, 1.0, 5.0, 3, horizon);
  spec.fixed_beta1 = -3.0;
  spec.fixed_beta2 = -3.0;
  const auto table = sweep_omega(spec, lattice, ctqw::PropagatorConfig{}, 0, 2);

  REQUIRE(table.rows.size() == 3);
  REQUIRE(table.ratio_static_beta1.has_value());
  const double static_ratio = *table.ratio_static_beta1;
  CHECK(static_ratio < 1.0);
  for (const auto& row : table.rows) {
    CHECK(row.sigma_ratio == doctest::Approx(static_ratio).epsilon(1e-9));
  }
}

TEST_CASE("comparison shares one grid and records the certificate") {
  const double horizon = 100.0;
  const auto lattice = desk_lattice(horizon);
  const auto result = compare_protocols(lattice, -2.5, -3.0, 2.71, horizon,
                                        ctqw::PropagatorConfig{}, 10.0, 0, 2);

  CHECK(result.series[0].name == "defect_free");
  CHECK(result.series[3].name == "alternating");
  for (const auto& series : result.series) {
    REQUIRE(series.records.size() == 11);
    for (std::size_t k = 0; k < series.records.size(); ++k) {
      CHECK(series.records[k].time == result.series[0].records[k].time);
      REQUIRE(series.records[k].sigma_ratio.has_value());
    }
  }
  for (const auto& record : result.series[0].records) {
    CHECK(*record.sigma_ratio == 1.0);  // the reference is computed once and shared
  }
  CHECK(result.certificate.ratio_beta1 == *result.series[1].records.back().sigma_ratio);
  CHECK(result.certificate.ratio_alternating == *result.series[3].records.back().sigma_ratio);
}

TEST_CASE("snapshot of the cancelled walk is a delta at the defect") {
  const auto lattice = desk_lattice(30.0);
  const auto snap = snapshot(lattice, ctqw::DefectProtocol::static_defect(-1.0), 30.0,
                             ctqw::PropagatorConfig{});
  CHECK(snap.peaks.max_probability == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(snap.peaks.probability_site == 0);
  CHECK(snap.peaks.max_rqd < 1e-20);
  CHECK(snap.sigma < 1e-12);
}

TEST_CASE("free walk is ballistic: log-log slope 1.00 +/- 0.01 over gamma*t in [50, 200]") {
  const double horizon = 200.0;
  const auto lattice = desk_lattice(horizon);
  const auto series = run_series(lattice, ctqw::DefectProtocol::none_protocol(), horizon, 10.0,
                                 ctqw::PropagatorConfig{}, 0, "free");
  CHECK(loglog_slope(series, 50.0, 200.0) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("gamma rescaling is absorbed by the gamma*t axis") {
  // identical gamma*t grids give bitwise-identical observables: the engine
  // works on the scaled axis throughout
  const double horizon = 40.0;
  ctqw::LatticeSpec slow{ctqw::auto_num_sites(1.0, horizon), 0.0, 1.0, 0};
  ctqw::LatticeSpec fast{ctqw::auto_num_sites(1.0, horizon), 0.0, 2.0, 0};
  const auto protocol = ctqw::DefectProtocol::alternating(-2.5, -3.0, 2.71);

  const auto a = run_series(slow, protocol, horizon, 10.0, ctqw::PropagatorConfig{}, 0, "g1");
  const auto b = run_series(fast, protocol, horizon, 10.0, ctqw::PropagatorConfig{}, 0, "g2");
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(a.records[k].sigma == doctest::Approx(b.records[k].sigma).epsilon(1e-12));
    CHECK(a.records[k].ipr == doctest::Approx(b.records[k].ipr).epsilon(1e-12));
  }
}

TEST_CASE("sweep validation names the violated constraint") {
  auto bad = desk_sweep(ctqw::SweepSpec::Kind::beta, 2.0, -4.0, 10, 10.0);
  CHECK_THROWS_AS(bad.validate(), ctqw::ConfigError);

  bad = desk_sweep(ctqw::SweepSpec::Kind::beta, -4.0, 2.0, 1, 10.0);
  CHECK_THROWS_AS(bad.validate(), ctqw::ConfigError);

  bad = desk_sweep(ctqw::SweepSpec::Kind::omega, -0.5, 2.0, 10, 10.0);
  CHECK_THROWS_AS(bad.validate(), ctqw::ConfigError);

  bad = desk_sweep(ctqw::SweepSpec::Kind::beta, -4.0, 2.0, 10, 10.0);
  bad.sample_every = 3.0;  // does not divide 10
  CHECK_THROWS_AS(bad.validate(), ctqw::ConfigError);
}

TEST_CASE("loglog_slope needs at least two usable records") {
  ctqw::ObservableSeries series{"s", {{0.0, 0.0, {}, 0.0, 1.0}, {10.0, 14.0, {}, 0.0, 1.0}}};
  CHECK_THROWS_AS(ctqw::loglog_slope(series, 50.0, 100.0), std::invalid_argument);
}

TEST_SUITE_END();
