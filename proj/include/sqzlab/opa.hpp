#pragma once

// Seeded single-pass degenerate parametric amplifier with pump depletion.
//
// Time is dimensionless, tau = g * |E_p| * t, with g = 1 and |E_p| = 1. The
// regime is the sign of the pump relative to the seed: a positive pump
// amplifies the seed (phase squeezing), a negative one deamplifies it
// (amplitude squeezing). Mean fields use the exact sech/tanh solution of
//   dA_s/dt = A_s A_p,  dA_p/dt = -A_s^2 / 2,
// and the linearized quadrature noise is integrated with fixed-step RK4:
//   X sector (x_s, x_p): M = [[A_p, A_s], [-A_s, 0]]
//   P sector (p_s, p_p): M = [[-A_p, A_s], [-A_s, 0]]
//   dV/dt = M V + V M^T, V(0) = identity.

#include <cstddef>
#include <vector>

#include "sqzlab/core.hpp"

namespace sqzlab {

enum class OpaRegime { PhaseSqueezing, AmplitudeSqueezing };

struct OpaParams {
  double seed_ratio = 0.0;  // E_s / |E_p|
  double t_max = 1.0;       // final dimensionless time
  int n_steps = 4096;       // RK4 steps over [0, t_max]
  OpaRegime regime = OpaRegime::PhaseSqueezing;
};

inline constexpr int kOpaStepsPerUnit = 4096;
inline constexpr double kOpaConvergenceTol = 1e-6;

/// Default step count for a horizon: kOpaStepsPerUnit per unit of tau, at least 2.
int opa_default_steps(double t_max);

struct MeanField {
  double a_s = 0.0;
  double a_p = 0.0;
};

// Symmetric 2x2 block [[a, b], [b, c]].
struct Cov2 {
  double a = 1.0;
  double b = 0.0;
  double c = 1.0;

  double det() const { return a * c - b * b; }
};

struct OpaTrajectory {
  OpaParams params;
  std::vector<double> times;
  std::vector<double> a_s;
  std::vector<double> a_p;
  std::vector<Cov2> cov_x;  // (seed, pump) X-quadrature covariance
  std::vector<Cov2> cov_p;  // (seed, pump) P-quadrature covariance

  /// Largest scaled change of a terminal variance when the step count doubles.
  double convergence_delta = 0.0;
  bool converged = true;

  std::size_t size() const { return times.size(); }
  double step() const { return params.t_max / params.n_steps; }

  /// Seed-mode state at grid index k.
  MethodPoint point(std::size_t k) const;

  /// Seed-mode state at arbitrary t in [0, t_max]: one partial RK4 step from the
  /// preceding grid point.
  MethodPoint sample(double t) const;

  /// det of the joint (x_s, x_p, p_s, p_p) covariance at index k.
  double joint_determinant(std::size_t k) const { return cov_x[k].det() * cov_p[k].det(); }
};

/// c1 = E_p^2 + E_s^2 / 2, conserved by the mean-field flow.
double opa_conserved(const OpaParams& params);

MeanField opa_mean_field(const OpaParams& params, double t);

/// Integrates the covariance; when check_convergence is set the run is repeated
/// with twice the steps and the terminal variances compared.
OpaTrajectory opa_propagate(const OpaParams& params, bool check_convergence = true);

/// alpha^2 = A_s(t)^2 / E_p^2 and the seed-mode variances at t. Throws
/// ConvergenceError if the step-doubling check fails.
MethodPoint opa_evaluate(const OpaParams& params, double t);

OpaRegime parse_opa_regime(const std::string& name);
const char* to_string(OpaRegime regime);

}  // namespace sqzlab
