#pragma once

#include <vector>

#include "ctqw/lattice.hpp"

namespace ctqw {

/// Complex amplitude per site plus the current time.
///
/// The norm stays within 1e-9 of 1 under evolution; nothing ever
/// renormalizes it (norm drift is a diagnostic, not something to hide).
struct WalkerState {
  std::vector<cx> amplitudes;
  double time = 0.0;

  int num_sites() const { return static_cast<int>(amplitudes.size()); }
  int center_offset() const { return (num_sites() - 1) / 2; }
  double norm() const;

  /// |site> at time 0, centered coordinates.
  static WalkerState localized(int num_sites, int site);
  static WalkerState localized(const LatticeSpec& spec, int site);
};

}  // namespace ctqw
