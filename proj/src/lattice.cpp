#include "ctqw/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ctqw/errors.hpp"

namespace ctqw {

void LatticeSpec::validate() const {
  if (num_sites < 5) {
    throw ConfigError("lattice.num_sites: N must be >= 5 (got " + std::to_string(num_sites) + ")");
  }
  if (num_sites % 2 == 0) {
    throw ConfigError("lattice.num_sites: N must be odd so a unique center site exists (got " +
                      std::to_string(num_sites) + ")");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ConfigError("lattice.gamma: transition rate must be finite and > 0");
  }
  if (!std::isfinite(epsilon)) {
    throw ConfigError("lattice.epsilon: on-site energy must be finite");
  }
  const int ring = center_offset();
  if (defect_site <= -ring || defect_site >= ring) {
    throw ConfigError("lattice.defect_site: d must satisfy -(N-1)/2 < d < +(N-1)/2 "
                      "so both defect links exist (got d=" + std::to_string(defect_site) +
                      ", N=" + std::to_string(num_sites) + ")");
  }
}

int auto_num_sites(double gamma, double t_max, int margin) {
  const double cone = 2.0 * gamma * t_max;
  int half = static_cast<int>(std::ceil(cone)) + margin;
  half = std::max(half, 2);
  return 2 * half + 1;
}

HamiltonianOperator::HamiltonianOperator(std::vector<double> diagonal, std::vector<double> hopping)
    : diagonal_(std::move(diagonal)), hopping_(std::move(hopping)) {
  if (diagonal_.empty()) {
    throw std::invalid_argument("HamiltonianOperator: empty diagonal");
  }
  if (hopping_.size() + 1 != diagonal_.size()) {
    throw std::invalid_argument("HamiltonianOperator: hopping must have N-1 entries");
  }
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(diagonal_.begin(), diagonal_.end(), finite) ||
      !std::all_of(hopping_.begin(), hopping_.end(), finite)) {
    throw std::invalid_argument("HamiltonianOperator: entries must be finite");
  }
}

void HamiltonianOperator::apply(std::span<const cx> x, std::span<cx> y) const {
  const std::size_t n = diagonal_.size();
  if (x.size() != n || y.size() != n) {
    throw std::invalid_argument("HamiltonianOperator::apply: vector length mismatch");
  }
  if (n == 1) {
    y[0] = diagonal_[0] * x[0];
    return;
  }
  y[0] = diagonal_[0] * x[0] + hopping_[0] * x[1];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    y[i] = diagonal_[i] * x[i] + hopping_[i - 1] * x[i - 1] + hopping_[i] * x[i + 1];
  }
  y[n - 1] = diagonal_[n - 1] * x[n - 1] + hopping_[n - 2] * x[n - 2];
}

std::vector<cx> HamiltonianOperator::apply(std::span<const cx> x) const {
  std::vector<cx> y(x.size());
  apply(x, y);
  return y;
}

std::pair<double, double> HamiltonianOperator::spectral_bounds() const {
  const std::size_t n = diagonal_.size();
  double lo = diagonal_[0];
  double hi = diagonal_[0];
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(hopping_[i - 1]);
    if (i + 1 < n) radius += std::abs(hopping_[i]);
    lo = std::min(lo, diagonal_[i] - radius);
    hi = std::max(hi, diagonal_[i] + radius);
  }
  return {lo, hi};
}

HamiltonianOperator build_hamiltonian(const LatticeSpec& spec, double beta) {
  spec.validate();
  if (!std::isfinite(beta)) {
    throw ConfigError("beta: defect strength must be finite");
  }
  std::vector<double> diagonal(spec.num_sites, spec.epsilon);
  std::vector<double> hopping(spec.num_sites - 1, -spec.gamma);
  const int d = spec.storage_index(spec.defect_site);
  hopping[d - 1] = -(spec.gamma + beta);  // link (d-1, d)
  hopping[d] = -(spec.gamma + beta);      // link (d, d+1)
  return HamiltonianOperator(std::move(diagonal), std::move(hopping));
}

}  // namespace ctqw
