#pragma once

// Seeded degenerate optical parametric oscillator, single-sided cavity,
// zero-frequency output spectrum.
//
// Everything is evaluated in the chart kappa = 1, g = 1. The pump input is
// fixed by c0 = g A_p^0 / (kappa/2), the normalized intracavity pump at zero
// seed, which gives |E_p^in| = c0 / 4. The sign of E_p^in selects the regime:
// negative pump amplifies the seed and squeezes the phase quadrature,
// positive pump deamplifies it and squeezes the amplitude quadrature.

#include "sqzlab/core.hpp"

namespace sqzlab {

enum class OpoRegime { PhaseSqueezing, AmplitudeSqueezing };

struct OpoParams {
  double c0 = 0.5;          // (0, 1), below threshold
  double seed_ratio = 0.0;  // E_s^in / |E_p^in|, >= 0
  OpoRegime regime = OpoRegime::PhaseSqueezing;
};

struct OpoInputs {
  double e_p = 0.0;  // pump input amplitude E_p^in
  double e_s = 0.0;  // seed input amplitude E_s^in
};

struct OpoSteadyState {
  double a_s = 0.0;  // intracavity seed amplitude
  double a_p = 0.0;  // intracavity pump amplitude
  double chi = 0.0;  // cubic auxiliary
};

/// Residual bound enforced on every returned steady state.
inline constexpr double kOpoResidualTol = 1e-9;

OpoInputs opo_inputs(const OpoParams& params);

/// Max absolute residual of the steady-state pair
///   A_s = 2 A_s A_p - 2 E_s,  A_p = -A_s^2 - 2 E_p.
double opo_residual(const OpoParams& params, const OpoSteadyState& state);

OpoSteadyState opo_steady_state(const OpoParams& params);

/// Exact output variances and alpha^2 = ((E_s + A_s)/E_p)^2.
MethodPoint opo_evaluate(const OpoParams& params);

/// Signed small-seed parameter: +c0 when amplifying, -c0 when deamplifying.
double opo_signed_c0(double c0, OpoRegime regime);

/// Small-seed expansion evaluated at a given alpha^2.
QuadratureStats opo_perturbative_at(double c0, OpoRegime regime, double alpha_sq);

/// Small-seed expansion with alpha^2 = ((1 + C0)/(1 - C0) * seed_ratio)^2.
MethodPoint opo_perturbative(const OpoParams& params);

/// Seed ratio at which |E_s^out| stops growing with the seed input (the
/// alpha^2 turning point). Past it the map seed -> output is no longer monotone.
double opo_turning_seed_ratio(double c0, OpoRegime regime);

OpoRegime parse_opo_regime(const std::string& name);
const char* to_string(OpoRegime regime);

}  // namespace sqzlab
