#pragma once

// Seeded dissipative optomechanical squeezer in the resolved-sideband regime
// (Gamma < kappa << Omega), parameterized by the composites
//   cc = 4 g^2 |E+ - E-|^2 / (Gamma Omega)   (cooperativity)
//   dd = |E+ + E-| / (2 |E+ - E-|)           (probe asymmetry)
//   n_bar                                    (mechanical thermal occupation)
// Imaginary probes squeeze the amplitude quadrature; real probes swap the two
// variance expressions and squeeze the phase quadrature.
//
// The closed forms are only reliable near cc * dd = 1 (dim outputs). Far from
// it they can drop below the Heisenberg bound; om_below_heisenberg() reports
// that so sweeps can exclude such points on request.

#include "sqzlab/core.hpp"

namespace sqzlab {

enum class OmAxis { Amplitude, Phase };

struct OmParams {
  double cc = 1.0;
  double dd = 1.0;
  double n_bar = 0.0;
  OmAxis axis = OmAxis::Amplitude;
};

/// alpha^2 = (1 - cc dd)^3 / (2 cc^2 (1 + dd^2)) and the two output variances.
/// Throws DomainError when cc * dd > 1.
MethodPoint om_evaluate(const OmParams& params);

/// Leading order in alpha^2 at n_bar = 0 (requires 0 < dd). Axis-aware.
QuadratureStats om_leading_order(const OmParams& params, double alpha_sq);

/// True when the closed form gives sqrt(var_x var_p) < 1 - 1e-9.
bool om_below_heisenberg(const OmParams& params);

OmAxis parse_om_axis(const std::string& name);
const char* to_string(OmAxis axis);

}  // namespace sqzlab
