#include "sqzlab/optomech.hpp"

#include <cmath>
#include <utility>

namespace sqzlab {

namespace {

void validate(const OmParams& p) {
  if (!(p.cc > 0.0) || !std::isfinite(p.cc)) throw DomainError("cc must be finite and > 0");
  if (!(p.dd >= 0.0) || !std::isfinite(p.dd)) throw DomainError("dd must be finite and >= 0");
  if (!(p.n_bar >= 0.0) || !std::isfinite(p.n_bar))
    throw DomainError("n_bar must be finite and >= 0");
  if (p.cc * p.dd > 1.0) throw DomainError("cc*dd must be <= 1");
}

QuadratureStats oriented(double amplitude_var, double phase_var, OmAxis axis) {
  if (axis == OmAxis::Phase) std::swap(amplitude_var, phase_var);
  return {amplitude_var, phase_var};
}

}  // namespace

MethodPoint om_evaluate(const OmParams& params) {
  validate(params);
  const double cc = params.cc;
  const double dd = params.dd;
  const double x = cc * dd;
  const double thermal = 2.0 * params.n_bar + 1.0;

  MethodPoint pt;
  double var_x = 0.0;
  double var_p = 0.0;
  if (x == 1.0) {
    // Vacuum seed output.
    pt.alpha_sq = 0.0;
    var_x = thermal / cc;
    var_p = cc * thermal;
  } else {
    const double gap = 1.0 - x;
    pt.alpha_sq = gap * gap * gap / (2.0 * cc * cc * (1.0 + dd * dd));
    var_x = 0.5 * (1.0 + dd * dd) * gap + cc * dd * dd * thermal;
    const double probe = gap / (1.0 + x);
    // 4 / (1 + 1/x)^2 / (cc dd^2) rewritten as 4 cc / (1 + x)^2, finite at dd = 0.
    const double mech = 4.0 * cc / ((1.0 + x) * (1.0 + x)) * thermal;
    var_p = probe * probe + mech;
  }
  pt.stats = oriented(var_x, var_p, params.axis);
  pt.params = {{"cc", cc}, {"dd", dd}, {"n_bar", params.n_bar}};
  return pt;
}

QuadratureStats om_leading_order(const OmParams& params, double alpha_sq) {
  if (!(params.dd > 0.0)) throw DomainError("dd must be > 0 for the leading-order expansion");
  if (!(alpha_sq >= 0.0)) throw DomainError("alpha_sq must be >= 0");
  const double dd = params.dd;
  const double base = (1.0 + 1.0 / (dd * dd)) / 4.0 * alpha_sq;
  const double third = std::cbrt(base);
  const double var_x = dd * (1.0 + (1.0 - dd) * (1.0 - dd) / dd * third);
  const double var_p = (1.0 - (1.0 - dd) * third * third) / dd;
  return oriented(var_x, var_p, params.axis);
}

bool om_below_heisenberg(const OmParams& params) {
  const MethodPoint pt = om_evaluate(params);
  return std::sqrt(pt.stats.var_x * pt.stats.var_p) < 1.0 - 1e-9;
}

OmAxis parse_om_axis(const std::string& name) {
  if (name == "amplitude") return OmAxis::Amplitude;
  if (name == "phase") return OmAxis::Phase;
  throw ConfigError("axis must be 'amplitude' or 'phase', got '" + name + "'");
}

const char* to_string(OmAxis axis) { return axis == OmAxis::Amplitude ? "amplitude" : "phase"; }

}  // namespace sqzlab
