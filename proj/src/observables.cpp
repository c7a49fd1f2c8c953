#include "ctqw/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace ctqw {

namespace {

// Probability moments sum_j j^n P_j for n = 0, 1, 2 in centered coordinates.
struct Moments {
  double p_total = 0.0;
  double mean = 0.0;
  double second = 0.0;
};

Moments site_moments(const WalkerState& state) {
  const int offset = state.center_offset();
  Moments m;
  for (int i = 0; i < state.num_sites(); ++i) {
    const double p = std::norm(state.amplitudes[i]);
    const double j = static_cast<double>(i - offset);
    m.p_total += p;
    m.mean += j * p;
    m.second += j * j * p;
  }
  return m;
}

}  // namespace

std::vector<double> probability_distribution(const WalkerState& state) {
  std::vector<double> p(state.amplitudes.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(state.amplitudes[i]);
  return p;
}

double standard_deviation(const WalkerState& state) {
  const Moments m = site_moments(state);
  const double variance = m.second - m.mean * m.mean;
  if (variance < 0.0) return 0.0;  // rounding below 1e-14 on localized states
  return std::sqrt(variance);
}

double shannon_entropy(const WalkerState& state) {
  double s = 0.0;
  for (const cx& a : state.amplitudes) {
    const double p = std::norm(a);
    if (p < 1e-300) continue;
    s -= p * std::log(p);
  }
  return s;
}

double inverse_participation_ratio(const WalkerState& state) {
  double sum_sq = 0.0;
  for (const cx& a : state.amplitudes) {
    const double p = std::norm(a);
    sum_sq += p * p;
  }
  return 1.0 / sum_sq;
}

std::vector<double> relative_quadratic_deviation(const WalkerState& state) {
  const Moments m = site_moments(state);
  const int offset = state.center_offset();
  std::vector<double> rqd(state.amplitudes.size());
  for (int i = 0; i < state.num_sites(); ++i) {
    const double j = static_cast<double>(i - offset);
    rqd[i] = (j - m.mean) * (j - m.mean) * std::norm(state.amplitudes[i]);
  }
  return rqd;
}

ObservableRecord measure(const WalkerState& state, double time_gamma_t) {
  ObservableRecord r;
  r.time = time_gamma_t;
  r.sigma = standard_deviation(state);
  r.shannon = shannon_entropy(state);
  r.ipr = inverse_participation_ratio(state);
  return r;
}

void attach_reference(ObservableSeries& series, const ObservableSeries& reference) {
  if (series.records.size() != reference.records.size()) {
    throw std::invalid_argument("attach_reference: series lengths differ");
  }
  for (std::size_t i = 0; i < series.records.size(); ++i) {
    const double s = series.records[i].sigma;
    const double s0 = reference.records[i].sigma;
    series.records[i].sigma_ratio = (s0 == 0.0 && s == 0.0) ? 1.0 : s / s0;
  }
}

}  // namespace ctqw
