#include "sqzlab/opo.hpp"

#include <algorithm>
#include <cmath>

namespace sqzlab {

namespace {

void validate(const OpoParams& p) {
  if (!(p.c0 > 0.0 && p.c0 < 1.0)) throw DomainError("c0 must lie in (0,1)");
  if (!(p.seed_ratio >= 0.0) || !std::isfinite(p.seed_ratio))
    throw DomainError("seed_ratio must be finite and >= 0");
}

struct Variances {
  double var_x, var_p;
};

// Zero-frequency output quadratures for real intracavity amplitudes.
Variances output_variances(double a_s, double a_p) {
  const double s2 = a_s * a_s;
  const double hp = 0.5 * a_p;
  const double cross = a_s * a_s;  // (kappa g A_s)^2
  const double nx = s2 - hp - 0.25;
  const double dx = s2 - hp + 0.25;
  const double np = s2 + hp - 0.25;
  const double dp = s2 + hp + 0.25;
  return {(nx * nx + cross) / (dx * dx), (np * np + cross) / (dp * dp)};
}

}  // namespace

OpoInputs opo_inputs(const OpoParams& params) {
  validate(params);
  const double magnitude = params.c0 / 4.0;
  OpoInputs in;
  in.e_p = params.regime == OpoRegime::PhaseSqueezing ? -magnitude : magnitude;
  in.e_s = params.seed_ratio * magnitude;
  return in;
}

double opo_residual(const OpoParams& params, const OpoSteadyState& st) {
  const OpoInputs in = opo_inputs(params);
  const double r_s = st.a_s - (2.0 * st.a_s * st.a_p - 2.0 * in.e_s);
  const double r_p = st.a_p - (-st.a_s * st.a_s - 2.0 * in.e_p);
  return std::max(std::abs(r_s), std::abs(r_p));
}

OpoSteadyState opo_steady_state(const OpoParams& params) {
  const OpoInputs in = opo_inputs(params);

  // Eliminating A_p leaves the depressed cubic A^3 + p A + q = 0.
  const double p = 0.5 * (1.0 + 4.0 * in.e_p);
  const double q = in.e_s;

  OpoSteadyState st;
  if (q == 0.0) {
    st.a_s = 0.0;
    st.chi = 0.0;
  } else {
    const double growth = (1.0 + 4.0 * in.e_p) / 3.0;
    const double radicand = 1.0 + growth * growth * growth / (2.0 * q * q);
    if (!(radicand >= 0.0) || !std::isfinite(radicand))
      throw BranchError("OPO cubic branch is not real for this seed");
    st.chi = q * (1.0 - std::sqrt(radicand));

    // u^3 = -chi/2 and v^3 = -q - u^3 are the two Cardano terms; with
    // u^3 + v^3 = -q the root is -q / (u^2 - uv + v^2), free of cancellation.
    const double u = std::cbrt(-0.5 * st.chi);
    const double v = std::cbrt(-q + 0.5 * st.chi);
    double a = -q / (u * u - u * v + v * v);

    const double f = a * a * a + p * a + q;
    const double df = 3.0 * a * a + p;
    if (df != 0.0) a -= f / df;
    st.a_s = a;
  }
  st.a_p = -st.a_s * st.a_s - 2.0 * in.e_p;

  const double res = opo_residual(params, st);
  if (!(res < kOpoResidualTol))
    throw BranchError("OPO steady state failed residual check (residual " +
                      std::to_string(res) + ")");
  return st;
}

MethodPoint opo_evaluate(const OpoParams& params) {
  const OpoInputs in = opo_inputs(params);
  const OpoSteadyState st = opo_steady_state(params);
  const Variances v = output_variances(st.a_s, st.a_p);

  const double e_out = in.e_s + st.a_s;
  MethodPoint pt;
  pt.alpha_sq = (e_out / in.e_p) * (e_out / in.e_p);
  pt.stats = {v.var_x, v.var_p};
  pt.params = {{"c0", params.c0}, {"seed_ratio", params.seed_ratio}};
  return pt;
}

double opo_signed_c0(double c0, OpoRegime regime) {
  return regime == OpoRegime::PhaseSqueezing ? c0 : -c0;
}

QuadratureStats opo_perturbative_at(double c0, OpoRegime regime, double alpha_sq) {
  if (!(c0 > 0.0 && c0 < 1.0)) throw DomainError("c0 must lie in (0,1)");
  if (!(alpha_sq >= 0.0)) throw DomainError("alpha_sq must be >= 0");
  const double k = opo_signed_c0(c0, regime);
  const double lead = k * k / ((1.0 + k) * (1.0 + k));
  const double kx = 1.5 * lead * alpha_sq;
  const double kp = 0.5 * lead * alpha_sq;
  const double pump = 4.0 * lead * alpha_sq;

  const double dx = kx + (1.0 - k);
  const double dp = kp + (1.0 + k);
  const double fx = (kx - (1.0 + k)) / dx;
  const double fp = (kp - (1.0 - k)) / dp;
  return {fx * fx + pump / (dx * dx), fp * fp + pump / (dp * dp)};
}

MethodPoint opo_perturbative(const OpoParams& params) {
  validate(params);
  const double k = opo_signed_c0(params.c0, params.regime);
  const double gain = (1.0 + k) / (1.0 - k) * params.seed_ratio;
  MethodPoint pt;
  pt.alpha_sq = gain * gain;
  pt.stats = opo_perturbative_at(params.c0, params.regime, pt.alpha_sq);
  pt.params = {{"c0", params.c0}, {"seed_ratio", params.seed_ratio}};
  return pt;
}

double opo_turning_seed_ratio(double c0, OpoRegime regime) {
  const OpoInputs in = opo_inputs({c0, 0.0, regime});
  // dE_out/dE_s = 1 - 2/(6A^2 + 1 + 4E_p) vanishes at 6A^2 = 1 - 4E_p.
  const double a = -std::sqrt((1.0 - 4.0 * in.e_p) / 6.0);
  const double e_s = -0.5 * (2.0 * a * a * a + a * (1.0 + 4.0 * in.e_p));
  return e_s / std::abs(in.e_p);
}

OpoRegime parse_opo_regime(const std::string& name) {
  if (name == "phase") return OpoRegime::PhaseSqueezing;
  if (name == "amplitude") return OpoRegime::AmplitudeSqueezing;
  throw ConfigError("regime must be 'phase' or 'amplitude', got '" + name + "'");
}

const char* to_string(OpoRegime regime) {
  return regime == OpoRegime::PhaseSqueezing ? "phase" : "amplitude";
}

}  // namespace sqzlab
