#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

namespace ctqw {

using cx = std::complex<double>;

/// Geometry and energy scales of the 1D chain.
///
/// Site indices are centered: j runs over -(N-1)/2 ... +(N-1)/2 and maps to
/// storage index j + (N-1)/2. The defect site must sit strictly inside the
/// boundary ring so that both of its links exist.
struct LatticeSpec {
  int num_sites = 0;     ///< N, odd, >= 5
  double epsilon = 0.0;  ///< on-site energy, units of gamma
  double gamma = 1.0;    ///< transition rate; sets the time unit
  int defect_site = 0;   ///< centered index d

  int center_offset() const { return (num_sites - 1) / 2; }
  int min_site() const { return -center_offset(); }
  int max_site() const { return num_sites - 1 - center_offset(); }
  int storage_index(int site) const { return site + center_offset(); }
  int site_at(int index) const { return index - center_offset(); }

  /// Throws ConfigError naming the violated invariant.
  void validate() const;
};

/// Smallest odd N that keeps `margin` untouched sites beyond the 2*gamma*t
/// light cone on each edge for a run to time t_max (in units of 1/gamma).
int auto_num_sites(double gamma, double t_max, int margin = 200);

/// Tridiagonal tight-binding operator: real on-site energies plus one real
/// coupling per link (j, j+1), j = 0 ... N-2.
///
/// Immutable after construction and safe to share across concurrent
/// evolutions; apply() is pure.
class HamiltonianOperator {
 public:
  HamiltonianOperator(std::vector<double> diagonal, std::vector<double> hopping);

  int num_sites() const { return static_cast<int>(diagonal_.size()); }
  std::span<const double> diagonal() const { return diagonal_; }
  std::span<const double> hopping() const { return hopping_; }

  /// y = H x. Throws std::invalid_argument on length mismatch.
  void apply(std::span<const cx> x, std::span<cx> y) const;
  std::vector<cx> apply(std::span<const cx> x) const;

  /// Gershgorin interval [lo, hi] containing the full spectrum.
  std::pair<double, double> spectral_bounds() const;

 private:
  std::vector<double> diagonal_;
  std::vector<double> hopping_;
};

/// H0 + beta*Hd: on-site energy epsilon everywhere, coupling -gamma on every
/// link except -(gamma+beta) on the two links adjacent to the defect site.
/// beta is in units of gamma. Throws ConfigError on an invalid spec or
/// non-finite beta.
HamiltonianOperator build_hamiltonian(const LatticeSpec& spec, double beta);

}  // namespace ctqw
