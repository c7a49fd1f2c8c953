#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ctqw/errors.hpp"
#include "ctqw/observables.hpp"
#include "ctqw/propagator.hpp"
#include "support/oracles.hpp"

using ctqw::cx;

namespace {

ctqw::PropagatorConfig interior_cfg() {
  // the wavefront never reaches the edges in these cases
  return ctqw::PropagatorConfig{};
}

ctqw::PropagatorConfig finite_chain_cfg() {
  // reflections are part of the experiment; disable the guard
  ctqw::PropagatorConfig cfg;
  cfg.edge_monitor = false;
  return cfg;
}

}  // namespace

TEST_SUITE_BEGIN("propagator");

TEST_CASE("zero duration leaves the state untouched") {
  ctqw::LatticeSpec spec{21, 0.0, 1.0, 0};
  auto state = ctqw::WalkerState::localized(spec, 3);
  const auto before = state.amplitudes;
  evolve_static(state, build_hamiltonian(spec, -0.5), 0.0, interior_cfg());
  CHECK(state.time == 0.0);
  CHECK(oracles::max_abs_diff(state.amplitudes, before) == 0.0);
}

TEST_CASE("defect-free walk matches the analytic Bessel solution at gamma*t = 20") {
  // cross-checked three ways: Chebyshev propagator, dense spectral oracle,
  // and the infinite-line closed form
  const int n = 201;
  ctqw::LatticeSpec spec{n, 0.0, 1.0, 0};
  const auto h = build_hamiltonian(spec, 0.0);

  auto fast = ctqw::WalkerState::localized(spec, 0);
  evolve_static(fast, h, 20.0, interior_cfg());

  auto dense = ctqw::WalkerState::localized(spec, 0);
  oracle_evolve(dense, h, 20.0);

  const auto analytic = oracles::bessel_state(n, 20.0, 1.0, 0.0);

  CHECK(oracles::max_abs_diff(fast.amplitudes, analytic) < 1e-6);
  CHECK(oracles::max_abs_diff(dense.amplitudes, analytic) < 1e-6);
  CHECK(oracles::max_abs_diff(fast.amplitudes, dense.amplitudes) < 1e-8);
  CHECK(ctqw::standard_deviation(fast) ==
        doctest::Approx(std::sqrt(2.0) * 20.0).epsilon(1e-6));
}

TEST_CASE("nonzero on-site energy only adds the global phase of the analytic solution") {
  const int n = 201;
  ctqw::LatticeSpec spec{n, 0.6, 1.0, 0};
  auto state = ctqw::WalkerState::localized(spec, 0);
  evolve_static(state, build_hamiltonian(spec, 0.0), 20.0, interior_cfg());
  CHECK(oracles::max_abs_diff(state.amplitudes, oracles::bessel_state(n, 20.0, 1.0, 0.6)) < 1e-6);
}

TEST_CASE("beta = -gamma cancels propagation from the defect site") {
  ctqw::LatticeSpec spec{201, 0.0, 1.0, 0};
  auto state = ctqw::WalkerState::localized(spec, 0);
  evolve_static(state, build_hamiltonian(spec, -1.0), 35.0, interior_cfg());
  const auto p = ctqw::probability_distribution(state);
  CHECK(std::abs(p[spec.storage_index(0)] - 1.0) < 1e-12);
  CHECK(ctqw::standard_deviation(state) < 1e-12);
}

TEST_CASE("fast propagator agrees with the dense oracle for random defected cases") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> beta_dist(-4.0, 2.0);
  const int n = 64;
  for (int trial = 0; trial < 5; ++trial) {
    const double beta = beta_dist(rng);
    std::vector<double> diagonal(n, 0.0);
    std::vector<double> hopping(n - 1, -1.0);
    hopping[30] = hopping[31] = -(1.0 + beta);
    const ctqw::HamiltonianOperator h(diagonal, hopping);

    ctqw::WalkerState fast;
    fast.amplitudes = oracles::random_normalized_state(n, rng);
    ctqw::WalkerState dense = fast;

    evolve_static(fast, h, 50.0, finite_chain_cfg());
    oracle_evolve(dense, h, 50.0);
    CHECK(oracles::max_abs_diff(fast.amplitudes, dense.amplitudes) < 1e-8);
    CHECK(std::abs(fast.norm() - 1.0) < 1e-9);
  }
}

TEST_CASE("oracle: zero duration is the identity") {
  auto state = ctqw::WalkerState::localized(65, 5);
  const auto before = state.amplitudes;
  std::vector<double> diagonal(65, 0.3);
  std::vector<double> hopping(64, -1.0);
  oracle_evolve(state, ctqw::HamiltonianOperator(diagonal, hopping), 0.0);
  CHECK(oracles::max_abs_diff(state.amplitudes, before) < 1e-15);
}

TEST_CASE("oracle: a diagonal Hamiltonian evolves by pure phase") {
  const int n = 17;
  std::vector<double> diagonal(n, 0.8);
  std::vector<double> hopping(n - 1, 0.0);  // constructed directly; LatticeSpec forbids gamma=0
  const ctqw::HamiltonianOperator h(diagonal, hopping);

  std::mt19937 rng(3);
  ctqw::WalkerState state;
  state.amplitudes = oracles::random_normalized_state(n, rng);
  const auto initial = state.amplitudes;
  oracle_evolve(state, h, 2.5);

  const cx phase = std::exp(cx{0.0, -0.8 * 2.5});
  for (int i = 0; i < n; ++i) {
    CHECK(std::abs(state.amplitudes[i] - phase * initial[i]) < 1e-12);
  }
}

TEST_CASE("oracle rejects N > 512") {
  auto state = ctqw::WalkerState::localized(513, 0);
  std::vector<double> diagonal(513, 0.0);
  std::vector<double> hopping(512, -1.0);
  CHECK_THROWS_AS(oracle_evolve(state, ctqw::HamiltonianOperator(diagonal, hopping), 1.0),
                  std::invalid_argument);
}

TEST_CASE("degenerate alternation equals the static evolution") {
  ctqw::LatticeSpec spec{201, 0.0, 1.0, 0};
  auto alternating = ctqw::WalkerState::localized(spec, 0);
  evolve_protocol(alternating, spec, ctqw::DefectProtocol::alternating(-0.8, -0.8, 2.71), 12.0,
                  interior_cfg());

  auto static_run = ctqw::WalkerState::localized(spec, 0);
  evolve_static(static_run, build_hamiltonian(spec, -0.8), 12.0, interior_cfg());

  CHECK(oracles::max_abs_diff(alternating.amplitudes, static_run.amplitudes) < 1e-12);
}

TEST_CASE("one full period composes beta2 then beta1 half-periods") {
  ctqw::LatticeSpec spec{201, 0.0, 1.0, 0};
  const double omega = 1.9;
  const double period = 2.0 * std::numbers::pi / omega;

  auto protocol_run = ctqw::WalkerState::localized(spec, 0);
  evolve_protocol(protocol_run, spec, ctqw::DefectProtocol::alternating(-2.5, -3.0, omega),
                  period, interior_cfg());

  auto composed = ctqw::WalkerState::localized(spec, 0);
  evolve_static(composed, build_hamiltonian(spec, -3.0), period / 2.0, interior_cfg());
  evolve_static(composed, build_hamiltonian(spec, -2.5), period / 2.0, interior_cfg());

  CHECK(oracles::max_abs_diff(protocol_run.amplitudes, composed.amplitudes) < 1e-12);
}

TEST_CASE("protocol evolution matches the oracle composed over segments") {
  const double omega = 2.71;
  const double period = 2.0 * std::numbers::pi / omega;
  ctqw::LatticeSpec spec{65, 0.0, 1.0, 0};

  auto protocol_run = ctqw::WalkerState::localized(spec, 0);
  evolve_protocol(protocol_run, spec, ctqw::DefectProtocol::alternating(-2.5, -3.0, omega),
                  3.0 * period, finite_chain_cfg());

  auto oracle_run = ctqw::WalkerState::localized(spec, 0);
  for (int half = 0; half < 6; ++half) {
    oracle_evolve(oracle_run, build_hamiltonian(spec, half % 2 == 0 ? -3.0 : -2.5),
                  period / 2.0);
  }
  CHECK(oracles::max_abs_diff(protocol_run.amplitudes, oracle_run.amplitudes) < 1e-8);
}

TEST_CASE("time composition: two legs equal one combined leg") {
  ctqw::LatticeSpec spec{201, 0.0, 1.0, 0};
  const auto h = build_hamiltonian(spec, -0.5);

  auto two_legs = ctqw::WalkerState::localized(spec, 0);
  evolve_static(two_legs, h, 7.3, interior_cfg());
  evolve_static(two_legs, h, 12.7, interior_cfg());

  auto one_leg = ctqw::WalkerState::localized(spec, 0);
  evolve_static(one_leg, h, 20.0, interior_cfg());

  CHECK(two_legs.time == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(oracles::max_abs_diff(two_legs.amplitudes, one_leg.amplitudes) < 1e-9);
}

TEST_CASE("parity symmetry: P_j equals P_-j with walker and defect at the center") {
  ctqw::LatticeSpec spec{201, 0.0, 1.0, 0};
  auto state = ctqw::WalkerState::localized(spec, 0);
  evolve_static(state, build_hamiltonian(spec, -2.2), 30.0, interior_cfg());
  const auto p = ctqw::probability_distribution(state);
  const int offset = spec.center_offset();
  for (int j = 1; j <= offset; ++j) {
    CHECK(std::abs(p[offset + j] - p[offset - j]) < 1e-12);
  }
}

TEST_CASE("gauge symmetry: distributions at beta = -gamma +/- delta coincide") {
  // sign flip of the two defect links is absorbed by negating the defect-site
  // amplitude, so |psi_j|^2 matches even for a walker away from the defect
  ctqw::LatticeSpec spec{201, 0.0, 1.0, 0};
  const double delta = 0.6;

  for (int start : {0, 3}) {
    auto above = ctqw::WalkerState::localized(spec, start);
    evolve_static(above, build_hamiltonian(spec, -1.0 + delta), 25.0, interior_cfg());
    auto below = ctqw::WalkerState::localized(spec, start);
    evolve_static(below, build_hamiltonian(spec, -1.0 - delta), 25.0, interior_cfg());
    CHECK(oracles::max_abs_diff(ctqw::probability_distribution(above),
                                ctqw::probability_distribution(below)) < 1e-10);
  }
}

TEST_CASE("unitarity: norm drift stays below 1e-9 across defect strengths") {
  ctqw::LatticeSpec spec{401, 0.0, 1.0, 0};
  for (double beta : {0.0, -0.5, -1.0, -2.5, -3.0, 1.5}) {
    auto state = ctqw::WalkerState::localized(spec, 0);
    evolve_static(state, build_hamiltonian(spec, beta), 80.0, interior_cfg());
    CHECK(std::abs(state.norm() - 1.0) < 1e-9);
  }
}

TEST_CASE("halving the substep moves amplitudes by less than 10x tolerance") {
  ctqw::LatticeSpec spec{201, 0.0, 1.0, 0};
  const auto h = build_hamiltonian(spec, -2.5);

  auto coarse = ctqw::WalkerState::localized(spec, 0);
  auto cfg = interior_cfg();
  evolve_static(coarse, h, 20.0, cfg);

  auto fine = ctqw::WalkerState::localized(spec, 0);
  cfg.substep /= 2.0;
  evolve_static(fine, h, 20.0, cfg);

  CHECK(oracles::max_abs_diff(coarse.amplitudes, fine.amplitudes) < 10.0 * cfg.tolerance);
}

TEST_CASE("boundary contamination on an undersized lattice is a hard error") {
  ctqw::LatticeSpec spec{41, 0.0, 1.0, 0};
  auto state = ctqw::WalkerState::localized(spec, 0);
  CHECK_THROWS_AS(evolve_static(state, build_hamiltonian(spec, 0.0), 50.0, interior_cfg()),
                  ctqw::BoundaryContamination);
}

TEST_CASE("a hopeless expansion reports ConvergenceFailure") {
  ctqw::LatticeSpec spec{41, 0.0, 1.0, 0};
  auto state = ctqw::WalkerState::localized(spec, 0);
  auto cfg = finite_chain_cfg();
  cfg.substep = 1e7;  // one enormous step: the expansion order blows past its cap
  CHECK_THROWS_AS(evolve_static(state, build_hamiltonian(spec, 0.0), 1e7, cfg),
                  ctqw::ConvergenceFailure);
}

TEST_CASE("config and argument validation") {
  ctqw::LatticeSpec spec{21, 0.0, 1.0, 0};
  const auto h = build_hamiltonian(spec, 0.0);
  auto state = ctqw::WalkerState::localized(spec, 0);

  ctqw::PropagatorConfig cfg;
  cfg.substep = 0.0;
  CHECK_THROWS_AS(evolve_static(state, h, 1.0, cfg), ctqw::ConfigError);
  cfg = ctqw::PropagatorConfig{};
  cfg.tolerance = 1e-3;
  CHECK_THROWS_AS(evolve_static(state, h, 1.0, cfg), ctqw::ConfigError);
  cfg = ctqw::PropagatorConfig{};
  cfg.edge_guard = 0;
  CHECK_THROWS_AS(evolve_static(state, h, 1.0, cfg), ctqw::ConfigError);
  cfg = ctqw::PropagatorConfig{};
  cfg.edge_threshold = 1e-3;
  CHECK_THROWS_AS(evolve_static(state, h, 1.0, cfg), ctqw::ConfigError);

  CHECK_THROWS_AS(evolve_static(state, h, -1.0, interior_cfg()), std::invalid_argument);

  auto short_state = ctqw::WalkerState::localized(19, 0);
  CHECK_THROWS_AS(evolve_static(short_state, h, 1.0, interior_cfg()), std::invalid_argument);

  ctqw::DefectProtocol bad = ctqw::DefectProtocol::alternating(-1.0, -2.0, 1.0);
  bad.period = 0.0;
  CHECK_THROWS_AS(evolve_protocol(state, spec, bad, 1.0, interior_cfg()), ctqw::ConfigError);
  bad.period = -2.0;
  CHECK_THROWS_AS(evolve_protocol(state, spec, bad, 1.0, interior_cfg()), ctqw::ConfigError);
}

TEST_SUITE_END();
