#pragma once

// Independent cross-checks for the closed-form evaluators.
//
// GaussianState is a brute-force phase-space engine: Gaussian unitaries act as
// symplectic matrices S on the quadrature vector (X1, P1, X2, P2, ...), so
// mean -> S mean and cov -> S cov S^T. Vacuum is the identity covariance.
//
// Beam-splitter phase convention: the exchange Hamiltonian
// -eta (a^dag b + a b^dag) gives a -> a cos(theta) + i b sin(theta), i.e.
//   X_a' = c X_a - s P_b,  P_a' = c P_a + s X_b,
//   X_b' = c X_b - s P_a,  P_b' = c P_b + s X_a.
// A real displacement fed into port b therefore emerges in P of port a; only
// marginal variances and |mean| are compared against the closed forms.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "sqzlab/core.hpp"
#include "sqzlab/opa.hpp"

namespace sqzlab::oracle {

struct GaussianState {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  static GaussianState vacuum(int modes);
  int modes() const { return static_cast<int>(mean.size() / 2); }

  /// Marginal (var_x, var_p) of one mode.
  QuadratureStats marginal(int mode) const;
};

/// Standard symplectic form, block diag of [[0, 1], [-1, 0]].
Eigen::MatrixXd symplectic_form(int modes);

Eigen::MatrixXd squeeze_symplectic(int modes, int mode, double b);
Eigen::MatrixXd beamsplitter_symplectic(int modes, int mode_a, int mode_b, double theta);

GaussianState apply_squeeze(const GaussianState& state, int mode, double b);
GaussianState apply_displacement(const GaussianState& state, int mode, std::complex<double> amp);
GaussianState apply_beamsplitter(const GaussianState& state, int mode_a, int mode_b,
                                 double theta);

/// Smallest eigenvalue of the Hermitian matrix cov + i Omega; >= 0 for
/// physical states in the vacuum = 1 convention.
double min_physical_eigenvalue(const GaussianState& state);

struct BsOracleResult {
  QuadratureStats stats;
  double alpha_sq = 0.0;
};

/// Squeezed vacuum (mode 0) and displaced vacuum (mode 1, amplitude pump_amp)
/// through the beam splitter; reads out mode 0.
BsOracleResult beamsplitter_marginal(double b, double theta, double pump_amp = 1.0);

struct MeanFieldTrajectory {
  std::vector<double> times;
  std::vector<double> a_s;
  std::vector<double> a_p;
  double error_estimate = 0.0;  // max |full step - half step| over the grid
  bool converged = true;
};

/// Brute-force RK4 on dA_s/dt = A_s A_p, dA_p/dt = -A_s^2 / 2 from
/// (seed_ratio, +-1), with a step-halving error estimate.
MeanFieldTrajectory mean_field_ode(const OpaParams& params);

}  // namespace sqzlab::oracle
