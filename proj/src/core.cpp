#include "sqzlab/core.hpp"

#include <algorithm>
#include <cmath>

namespace sqzlab {

namespace {

void check_stats(const QuadratureStats& stats) {
  if (!std::isfinite(stats.var_x) || !std::isfinite(stats.var_p))
    throw DomainError("quadrature variances must be finite");
  if (stats.var_x <= 0.0 || stats.var_p <= 0.0)
    throw DomainError("quadrature variances must be positive");
}

}  // namespace

double uncertainty(const QuadratureStats& stats) {
  check_stats(stats);
  return std::sqrt(stats.var_x * stats.var_p);
}

SqueezeMetrics squeeze_metrics(const QuadratureStats& stats) {
  check_stats(stats);
  const double lo = std::min(stats.var_x, stats.var_p);
  const double hi = std::max(stats.var_x, stats.var_p);
  SqueezeMetrics m;
  m.squeeze_db = -10.0 * std::log10(lo);
  m.antisqueeze_db = -10.0 * std::log10(hi);
  m.uncertainty = std::sqrt(stats.var_x * stats.var_p);
  m.squeezed_axis = stats.var_x <= stats.var_p ? SqueezedAxis::Amplitude : SqueezedAxis::Phase;
  return m;
}

double param_value(const ParamList& params, const std::string& name) {
  auto it = std::find_if(params.begin(), params.end(),
                         [&](const auto& kv) { return kv.first == name; });
  if (it == params.end()) throw ConfigError("missing parameter '" + name + "'");
  return it->second;
}

const char* to_string(SqueezedAxis axis) {
  return axis == SqueezedAxis::Amplitude ? "amplitude" : "phase";
}

}  // namespace sqzlab
