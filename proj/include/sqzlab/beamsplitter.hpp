#pragma once

#include "sqzlab/core.hpp"

namespace sqzlab {

// Squeezed vacuum mixed with a strong coherent pump on a beam splitter, in the
// limit where the pump amplitude drops out. b > 0 squeezes the amplitude
// quadrature of the input; theta is the mixing angle (eta * t).
struct BsParams {
  double b = 0.0;
  double theta = 0.0;  // [0, pi/2]
};

/// alpha^2 = sin^2(theta), var_x = e^{-2b} cos^2 + sin^2, var_p = e^{2b} cos^2 + sin^2.
MethodPoint bs_evaluate(const BsParams& params);

/// sqrt(1 + 4 alpha^2 (1 - alpha^2) sinh^2 b).
double bs_uncertainty(const BsParams& params);

/// Alternative form sqrt(1 + 2 cos^2 sin^2 (cosh 2b - 1)); equal to bs_uncertainty.
double bs_uncertainty_mixing_form(const BsParams& params);

}  // namespace sqzlab
