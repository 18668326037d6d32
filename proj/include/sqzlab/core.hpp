#pragma once

// Shared conventions for every evaluator in sqzlab.
//
// Quadratures are X = a + a^dagger and P = i(a^dagger - a), so the vacuum
// variance is 1 in both and a pure minimum-uncertainty state has
// sqrt(var_x * var_p) == 1. Phase-space vectors are ordered
// (X1, P1, X2, P2, ...). Squeezing is reported in dB with positive values
// meaning "below vacuum".

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sqzlab {

// Precondition violated by a caller-supplied parameter (exit code 2 in the CLI).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Malformed configuration: unknown parameter, bad axis, bad threshold.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A closed-form root branch stopped being real or failed its residual check.
class BranchError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Step-doubling check of a fixed-step integrator failed (exit code 3).
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct QuadratureStats {
  double var_x = 1.0;
  double var_p = 1.0;
};

enum class SqueezedAxis { Amplitude, Phase };

struct SqueezeMetrics {
  double squeeze_db = 0.0;      // -10 log10(min variance)
  double antisqueeze_db = 0.0;  // -10 log10(max variance), <= 0 for valid states
  double uncertainty = 1.0;
  SqueezedAxis squeezed_axis = SqueezedAxis::Amplitude;
};

/// Named method parameters in declaration order, e.g. {{"b", 1.0}, {"theta", 0.3}}.
using ParamList = std::vector<std::pair<std::string, double>>;

struct MethodPoint {
  double alpha_sq = 0.0;  // output displacement squared relative to pump input
  QuadratureStats stats;
  ParamList params;
};

/// sqrt(var_x * var_p). Throws DomainError on non-finite or non-positive input.
double uncertainty(const QuadratureStats& stats);

SqueezeMetrics squeeze_metrics(const QuadratureStats& stats);

/// Value of a named parameter; throws ConfigError if absent.
double param_value(const ParamList& params, const std::string& name);

const char* to_string(SqueezedAxis axis);

}  // namespace sqzlab
