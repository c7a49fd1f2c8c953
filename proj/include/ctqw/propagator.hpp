#pragma once

#include "ctqw/lattice.hpp"
#include "ctqw/walker.hpp"

namespace ctqw {

/// Integration scheme parameters.
///
/// Times here are conjugate to the Hamiltonian (hbar = 1); callers working on
/// the gamma*t axis divide by gamma before handing values down.
struct PropagatorConfig {
  double substep = 0.05;         ///< max integration step
  double tolerance = 1e-12;      ///< truncation tolerance of the Chebyshev expansion, (0, 1e-6]
  int edge_guard = 10;           ///< outermost sites monitored per edge
  double edge_threshold = 1e-8;  ///< max probability allowed on either guard window, (0, 1e-4]
  bool edge_monitor = true;      ///< off for runs that deliberately study the finite chain

  void validate() const;
};

enum class ProtocolMode { none, static_defect, alternating };

/// Static or alternating defect strength schedule. Strengths here are raw
/// energies on the same scale as the Hamiltonian; the experiments layer
/// treats configured values as units of gamma and converts.
///
/// In alternating mode the active strength over [k*T/2, (k+1)*T/2) is beta2
/// for even k and beta1 for odd k (beta2 occupies the first half-period),
/// with the segment clock running on state time plus phase_offset.
struct DefectProtocol {
  ProtocolMode mode = ProtocolMode::none;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double period = 0.0;        ///< T > 0, alternating mode only
  double phase_offset = 0.0;  ///< shifts the protocol clock, alternating mode only

  double omega() const;  ///< 2*pi/T, alternating mode only

  static DefectProtocol none_protocol();
  static DefectProtocol static_defect(double beta);
  static DefectProtocol alternating(double beta1, double beta2, double omega, double phase = 0.0);

  /// Active strength for evolution over [t, t+dt) with dt below T/2.
  double beta_at(double t) const;

  void validate() const;
};

/// Advance state by `duration` under exp(-i H duration), computed in
/// sub-steps of at most cfg.substep via a Chebyshev expansion with Gershgorin
/// spectral bounds. Norm is never renormalized. Throws BoundaryContamination
/// when a guard window fills past cfg.edge_threshold at any sub-step and
/// ConvergenceFailure when the expansion cannot meet cfg.tolerance.
void evolve_static(WalkerState& state, const HamiltonianOperator& hamiltonian, double duration,
                   const PropagatorConfig& cfg);

/// Advance through the piecewise-constant schedule of the protocol.
/// Sub-steps are snapped so every switching instant t = n*T/2 is exactly a
/// segment boundary; the Hamiltonian is never averaged across a switch.
void evolve_protocol(WalkerState& state, const LatticeSpec& spec, const DefectProtocol& protocol,
                     double duration, const PropagatorConfig& cfg);

/// Exact reference evolution via dense spectral decomposition
/// H = V diag(w) V^T, psi(t) = V exp(-i w t) V^T psi(0). Rejects N > 512.
void oracle_evolve(WalkerState& state, const HamiltonianOperator& hamiltonian, double duration);

}  // namespace ctqw
