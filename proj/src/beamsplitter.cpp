#include "sqzlab/beamsplitter.hpp"

#include <cmath>
#include <numbers>

namespace sqzlab {

namespace {

void validate(const BsParams& p) {
  if (!std::isfinite(p.b)) throw DomainError("b must be finite");
  if (!(p.theta >= 0.0 && p.theta <= std::numbers::pi / 2))
    throw DomainError("theta must lie in [0, pi/2]");
}

}  // namespace

MethodPoint bs_evaluate(const BsParams& params) {
  validate(params);
  const double s = std::sin(params.theta);
  const double c = std::cos(params.theta);
  const double s2 = s * s;
  const double c2 = c * c;

  MethodPoint pt;
  pt.alpha_sq = s2;
  pt.stats.var_x = std::exp(-2.0 * params.b) * c2 + s2;
  pt.stats.var_p = std::exp(2.0 * params.b) * c2 + s2;
  pt.params = {{"b", params.b}, {"theta", params.theta}};
  return pt;
}

double bs_uncertainty(const BsParams& params) {
  validate(params);
  const double s = std::sin(params.theta);
  const double c = std::cos(params.theta);
  const double sh = std::sinh(params.b);
  // 1 - alpha^2 taken as cos^2 to avoid cancellation near alpha^2 = 1.
  return std::sqrt(1.0 + 4.0 * (s * s) * (c * c) * sh * sh);
}

double bs_uncertainty_mixing_form(const BsParams& params) {
  validate(params);
  const double s = std::sin(params.theta);
  const double c = std::cos(params.theta);
  // cosh(2b) - 1 via expm1 so small b keeps its digits.
  const double ch = 0.5 * (std::expm1(2.0 * params.b) + std::expm1(-2.0 * params.b));
  return std::sqrt(1.0 + 2.0 * c * c * s * s * ch);
}

}  // namespace sqzlab
