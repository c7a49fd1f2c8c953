#pragma once

#include <stdexcept>
#include <string>

namespace ctqw {

// Invalid or inconsistent user input: config files, CLI arguments, parameter
// values that violate a documented invariant.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Base class for runtime failures of the evolution engine.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Probability reached the guard window at the lattice edge: the finite chain
// no longer approximates the infinite line for the requested evolution time.
class BoundaryContamination : public NumericalError {
 public:
  BoundaryContamination(const std::string& what, double time, double edge_probability)
      : NumericalError(what), time_(time), edge_probability_(edge_probability) {}

  double time() const { return time_; }
  double edge_probability() const { return edge_probability_; }

 private:
  double time_ = 0.0;
  double edge_probability_ = 0.0;
};

// The polynomial expansion of exp(-iH dt) could not meet the requested
// truncation tolerance.
class ConvergenceFailure : public NumericalError {
 public:
  explicit ConvergenceFailure(const std::string& what) : NumericalError(what) {}
};

}  // namespace ctqw
