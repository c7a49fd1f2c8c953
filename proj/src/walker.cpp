#include "ctqw/walker.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ctqw {

double WalkerState::norm() const {
  double s = 0.0;
  for (const cx& a : amplitudes) s += std::norm(a);
  return std::sqrt(s);
}

WalkerState WalkerState::localized(int num_sites, int site) {
  if (num_sites < 1) {
    throw std::invalid_argument("WalkerState::localized: num_sites must be >= 1");
  }
  const int offset = (num_sites - 1) / 2;
  const int index = site + offset;
  if (index < 0 || index >= num_sites) {
    throw std::invalid_argument("WalkerState::localized: site " + std::to_string(site) +
                                " outside lattice");
  }
  WalkerState state;
  state.amplitudes.assign(num_sites, cx{0.0, 0.0});
  state.amplitudes[index] = cx{1.0, 0.0};
  return state;
}

WalkerState WalkerState::localized(const LatticeSpec& spec, int site) {
  spec.validate();
  return localized(spec.num_sites, site);
}

}  // namespace ctqw
