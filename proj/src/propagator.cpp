#include "ctqw/propagator.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctqw/errors.hpp"

namespace ctqw {

namespace {

constexpr cx kImag{0.0, 1.0};

double edge_probability(std::span<const cx> psi, int guard, bool upper) {
  const int n = static_cast<int>(psi.size());
  const int m = std::min(guard, n);
  double p = 0.0;
  for (int k = 0; k < m; ++k) {
    p += std::norm(psi[upper ? n - 1 - k : k]);
  }
  return p;
}

void check_edges(const WalkerState& state, const PropagatorConfig& cfg) {
  if (!cfg.edge_monitor) return;
  for (bool upper : {false, true}) {
    const double p = edge_probability(state.amplitudes, cfg.edge_guard, upper);
    if (p > cfg.edge_threshold) {
      throw BoundaryContamination(
          "boundary contamination: probability " + std::to_string(p) + " on the " +
              (upper ? "upper" : "lower") + " " + std::to_string(cfg.edge_guard) +
              "-site guard window at t=" + std::to_string(state.time) +
              " exceeds " + std::to_string(cfg.edge_threshold) + " (lattice too small)",
          state.time, p);
    }
  }
}

// Chebyshev coefficients a_k of exp(-i x H_n) for H_n with spectrum in
// [-1, 1]: a_0 = J_0(x), a_k = 2 (-i)^k J_k(x). Terms are kept through the
// first run of three consecutive coefficients below the tolerance, which
// leaves the truncated tail far below it.
std::vector<cx> chebyshev_coefficients(double x, double tolerance) {
  if (!std::isfinite(x)) {
    throw ConvergenceFailure("Chebyshev expansion: non-finite spectral scale");
  }
  // The expansion order grows like x itself; refuse hopeless sub-steps early.
  if (x > 1e5) {
    throw ConvergenceFailure("Chebyshev expansion would need about " +
                             std::to_string(static_cast<long long>(x)) +
                             " terms; reduce the sub-step");
  }
  const std::size_t cap = static_cast<std::size_t>(1.2 * x) + 512;
  std::vector<cx> coeffs;
  coeffs.reserve(32);
  coeffs.push_back(cx{std::cyl_bessel_j(0.0, x), 0.0});
  cx phase{1.0, 0.0};  // (-i)^k
  int below = 0;
  for (std::size_t k = 1; k <= cap; ++k) {
    phase *= -kImag;
    const double jk = std::cyl_bessel_j(static_cast<double>(k), x);
    coeffs.push_back(2.0 * jk * phase);
    below = (std::abs(2.0 * jk) < tolerance) ? below + 1 : 0;
    if (below >= 3) return coeffs;
  }
  throw ConvergenceFailure("Chebyshev expansion did not reach tolerance " +
                           std::to_string(tolerance) + " within " + std::to_string(cap) +
                           " terms (spectral scale x=" + std::to_string(x) + ")");
}

}  // namespace

void PropagatorConfig::validate() const {
  if (!(substep > 0.0) || !std::isfinite(substep)) {
    throw ConfigError("propagator.substep: must be finite and > 0");
  }
  if (!(tolerance > 0.0) || tolerance > 1e-6) {
    throw ConfigError("propagator.tolerance: must lie in (0, 1e-6]");
  }
  if (edge_guard < 1) {
    throw ConfigError("propagator.edge_guard: must be >= 1");
  }
  if (!(edge_threshold > 0.0) || edge_threshold > 1e-4) {
    throw ConfigError("propagator.edge_threshold: must lie in (0, 1e-4]");
  }
}

double DefectProtocol::omega() const { return 2.0 * std::numbers::pi / period; }

DefectProtocol DefectProtocol::none_protocol() { return DefectProtocol{}; }

DefectProtocol DefectProtocol::static_defect(double beta) {
  DefectProtocol p;
  p.mode = ProtocolMode::static_defect;
  p.beta1 = beta;
  p.beta2 = beta;
  return p;
}

DefectProtocol DefectProtocol::alternating(double beta1, double beta2, double omega,
                                           double phase) {
  DefectProtocol p;
  p.mode = ProtocolMode::alternating;
  p.beta1 = beta1;
  p.beta2 = beta2;
  p.period = 2.0 * std::numbers::pi / omega;
  p.phase_offset = phase;
  return p;
}

double DefectProtocol::beta_at(double t) const {
  switch (mode) {
    case ProtocolMode::none:
      return 0.0;
    case ProtocolMode::static_defect:
      return beta1;
    case ProtocolMode::alternating: {
      const double half = period / 2.0;
      const auto k = static_cast<long long>(std::floor((t + phase_offset) / half + 1e-9));
      return (k % 2 == 0) ? beta2 : beta1;  // beta2 first, per the alternation definition
    }
  }
  return 0.0;
}

void DefectProtocol::validate() const {
  if (!std::isfinite(beta1) || !std::isfinite(beta2)) {
    throw ConfigError("protocol: defect strengths must be finite");
  }
  if (mode == ProtocolMode::alternating) {
    if (!(period > 0.0) || !std::isfinite(period)) {
      throw ConfigError("protocol.period: alternating mode requires T > 0");
    }
    if (!std::isfinite(phase_offset)) {
      throw ConfigError("protocol.phase: must be finite");
    }
  }
}

void evolve_static(WalkerState& state, const HamiltonianOperator& hamiltonian, double duration,
                   const PropagatorConfig& cfg) {
  cfg.validate();
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw std::invalid_argument("evolve_static: duration must be finite and >= 0");
  }
  const int n = hamiltonian.num_sites();
  if (state.num_sites() != n) {
    throw std::invalid_argument("evolve_static: state and Hamiltonian dimensions differ");
  }
  if (duration == 0.0) return;

  check_edges(state, cfg);

  const auto steps = static_cast<long long>(std::ceil(duration / cfg.substep - 1e-12));
  const long long n_steps = std::max<long long>(steps, 1);
  const double dt = duration / static_cast<double>(n_steps);

  // Shift-and-scale so the Gershgorin interval maps into [-1, 1]. Padding the
  // half-width is safe; undercovering the spectrum is not.
  const auto [lo, hi] = hamiltonian.spectral_bounds();
  const double center = 0.5 * (hi + lo);
  const double width = std::max(0.5 * (hi - lo), 1e-8 * std::max(1.0, std::abs(center)));

  const std::vector<cx> coeffs = chebyshev_coefficients(width * dt, cfg.tolerance);
  const std::size_t terms = coeffs.size();
  const cx step_phase = std::exp(-kImag * center * dt);

  std::vector<double> sdiag(n);
  std::vector<double> shop(std::max(n - 1, 0));
  for (int i = 0; i < n; ++i) sdiag[i] = (hamiltonian.diagonal()[i] - center) / width;
  for (int i = 0; i + 1 < n; ++i) shop[i] = hamiltonian.hopping()[i] / width;

  std::vector<cx> t_prev(n), t_cur(n), t_next(n), acc(n);
  const double t_start = state.time;

  for (long long step = 0; step < n_steps; ++step) {
    cx* psi = state.amplitudes.data();

    // acc = a_0 T_0 psi + a_1 T_1 psi with T_0 = I, T_1 = H_n.
    for (int i = 0; i < n; ++i) t_prev[i] = psi[i];
    for (int i = 0; i < n; ++i) {
      cx h = sdiag[i] * psi[i];
      if (i > 0) h += shop[i - 1] * psi[i - 1];
      if (i + 1 < n) h += shop[i] * psi[i + 1];
      t_cur[i] = h;
      acc[i] = coeffs[0] * psi[i] + (terms > 1 ? coeffs[1] * h : cx{0.0, 0.0});
    }

    // T_{k+1} = 2 H_n T_k - T_{k-1}, accumulated in the same pass.
    for (std::size_t k = 2; k < terms; ++k) {
      const cx ak = coeffs[k];
      const cx* cur = t_cur.data();
      const cx* prev = t_prev.data();
      cx* next = t_next.data();
      cx* out = acc.data();
      for (int i = 0; i < n; ++i) {
        cx h = sdiag[i] * cur[i];
        if (i > 0) h += shop[i - 1] * cur[i - 1];
        if (i + 1 < n) h += shop[i] * cur[i + 1];
        const cx v = 2.0 * h - prev[i];
        next[i] = v;
        out[i] += ak * v;
      }
      std::swap(t_prev, t_cur);
      std::swap(t_cur, t_next);
    }

    for (int i = 0; i < n; ++i) psi[i] = step_phase * acc[i];
    state.time = t_start + dt * static_cast<double>(step + 1);
    check_edges(state, cfg);
  }
  state.time = t_start + duration;

  const double drift = std::abs(state.norm() - 1.0);
  if (!(drift < 1e-6)) {
    throw ConvergenceFailure("evolve_static: norm drift " + std::to_string(drift) +
                             " after step to t=" + std::to_string(state.time));
  }
}

void evolve_protocol(WalkerState& state, const LatticeSpec& spec, const DefectProtocol& protocol,
                     double duration, const PropagatorConfig& cfg) {
  protocol.validate();
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw std::invalid_argument("evolve_protocol: duration must be finite and >= 0");
  }

  if (protocol.mode != ProtocolMode::alternating) {
    const double beta = protocol.mode == ProtocolMode::none ? 0.0 : protocol.beta1;
    evolve_static(state, build_hamiltonian(spec, beta), duration, cfg);
    return;
  }

  // Walk segment by segment; every switching instant n*T/2 (on the clock
  // t + phase_offset) becomes an exact evolve_static boundary.
  const double half = protocol.period / 2.0;
  const double t_end = state.time + duration;
  const HamiltonianOperator h1 = build_hamiltonian(spec, protocol.beta1);
  const HamiltonianOperator h2 = build_hamiltonian(spec, protocol.beta2);

  while (true) {
    const double remaining = t_end - state.time;
    if (remaining <= 1e-12 * std::max(1.0, std::abs(t_end))) break;
    const double clock = state.time + protocol.phase_offset;
    const auto k = static_cast<long long>(std::floor(clock / half + 1e-9));
    const double next_switch = static_cast<double>(k + 1) * half - protocol.phase_offset;
    const double segment = std::min(next_switch - state.time, remaining);
    const HamiltonianOperator& h = (k % 2 == 0) ? h2 : h1;
    evolve_static(state, h, segment, cfg);
  }
  state.time = t_end;
}

void oracle_evolve(WalkerState& state, const HamiltonianOperator& hamiltonian, double duration) {
  const int n = hamiltonian.num_sites();
  if (n > 512) {
    throw std::invalid_argument("oracle_evolve: dense diagonalization limited to N <= 512");
  }
  if (state.num_sites() != n) {
    throw std::invalid_argument("oracle_evolve: state and Hamiltonian dimensions differ");
  }
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw std::invalid_argument("oracle_evolve: duration must be finite and >= 0");
  }

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) h(i, i) = hamiltonian.diagonal()[i];
  for (int i = 0; i + 1 < n; ++i) {
    h(i, i + 1) = hamiltonian.hopping()[i];
    h(i + 1, i) = hamiltonian.hopping()[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("oracle_evolve: eigendecomposition failed");
  }

  Eigen::Map<Eigen::VectorXcd> psi(state.amplitudes.data(), n);
  Eigen::VectorXcd modal = solver.eigenvectors().transpose() * psi;
  for (int i = 0; i < n; ++i) {
    modal(i) *= std::exp(-kImag * solver.eigenvalues()(i) * duration);
  }
  psi = solver.eigenvectors() * modal;
  state.time += duration;
}

}  // namespace ctqw
