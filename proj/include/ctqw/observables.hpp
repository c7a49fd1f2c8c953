#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ctqw/walker.hpp"

namespace ctqw {

/// P_j = |<j|psi>|^2.
std::vector<double> probability_distribution(const WalkerState& state);

/// sqrt(sum j^2 P_j - (sum j P_j)^2) in centered coordinates; tiny negative
/// variance from rounding is clamped to zero.
double standard_deviation(const WalkerState& state);

/// S = -sum P_j ln P_j in nats, with the 0 ln 0 = 0 convention.
double shannon_entropy(const WalkerState& state);

/// IPR = (sum P_j^2)^-1, the effective number of occupied sites.
double inverse_participation_ratio(const WalkerState& state);

/// RQD(j) = (j - mean)^2 P_j, the per-site contribution to the variance.
std::vector<double> relative_quadratic_deviation(const WalkerState& state);

/// One time-stamped row of scalar observables. The time is on the gamma*t
/// axis. sigma_ratio is filled once a reference series is attached.
struct ObservableRecord {
  double time = 0.0;
  double sigma = 0.0;
  std::optional<double> sigma_ratio;
  double shannon = 0.0;
  double ipr = 0.0;
};

ObservableRecord measure(const WalkerState& state, double time_gamma_t);

struct ObservableSeries {
  std::string name;
  std::vector<ObservableRecord> records;
};

/// Fill sigma_ratio = sigma / sigma_reference record by record. Both series
/// must share the sampling grid. A 0/0 ratio (both walks still localized,
/// e.g. at t = 0) is defined as 1.
void attach_reference(ObservableSeries& series, const ObservableSeries& reference);

}  // namespace ctqw
