#include "sqzlab/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace sqzlab::oracle {

namespace {

void check_mode(int modes, int mode) {
  if (mode < 0 || mode >= modes)
    throw DomainError("mode index " + std::to_string(mode) + " out of range");
}

GaussianState transform(const GaussianState& state, const Eigen::MatrixXd& s) {
  return {s * state.mean, s * state.cov * s.transpose()};
}

}  // namespace

GaussianState GaussianState::vacuum(int modes) {
  if (modes < 1) throw DomainError("need at least one mode");
  return {Eigen::VectorXd::Zero(2 * modes), Eigen::MatrixXd::Identity(2 * modes, 2 * modes)};
}

QuadratureStats GaussianState::marginal(int mode) const {
  check_mode(modes(), mode);
  return {cov(2 * mode, 2 * mode), cov(2 * mode + 1, 2 * mode + 1)};
}

Eigen::MatrixXd symplectic_form(int modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

Eigen::MatrixXd squeeze_symplectic(int modes, int mode, double b) {
  check_mode(modes, mode);
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * modes, 2 * modes);
  s(2 * mode, 2 * mode) = std::exp(-b);
  s(2 * mode + 1, 2 * mode + 1) = std::exp(b);
  return s;
}

Eigen::MatrixXd beamsplitter_symplectic(int modes, int mode_a, int mode_b, double theta) {
  check_mode(modes, mode_a);
  check_mode(modes, mode_b);
  if (mode_a == mode_b) throw DomainError("beam splitter needs two distinct modes");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const int xa = 2 * mode_a, pa = xa + 1, xb = 2 * mode_b, pb = xb + 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2 * modes, 2 * modes);
  m(xa, xa) = c;
  m(xa, pb) = -s;
  m(pa, pa) = c;
  m(pa, xb) = s;
  m(xb, xb) = c;
  m(xb, pa) = -s;
  m(pb, pb) = c;
  m(pb, xa) = s;
  return m;
}

GaussianState apply_squeeze(const GaussianState& state, int mode, double b) {
  return transform(state, squeeze_symplectic(state.modes(), mode, b));
}

GaussianState apply_displacement(const GaussianState& state, int mode, std::complex<double> amp) {
  check_mode(state.modes(), mode);
  GaussianState out = state;
  out.mean(2 * mode) += 2.0 * amp.real();
  out.mean(2 * mode + 1) += 2.0 * amp.imag();
  return out;
}

GaussianState apply_beamsplitter(const GaussianState& state, int mode_a, int mode_b,
                                 double theta) {
  return transform(state, beamsplitter_symplectic(state.modes(), mode_a, mode_b, theta));
}

double min_physical_eigenvalue(const GaussianState& state) {
  const Eigen::MatrixXcd h =
      state.cov.cast<std::complex<double>>() +
      std::complex<double>(0.0, 1.0) * symplectic_form(state.modes()).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

BsOracleResult beamsplitter_marginal(double b, double theta, double pump_amp) {
  GaussianState st = GaussianState::vacuum(2);
  st = apply_squeeze(st, 0, b);
  st = apply_displacement(st, 1, {pump_amp, 0.0});
  st = apply_beamsplitter(st, 0, 1, theta);

  BsOracleResult r;
  r.stats = st.marginal(0);
  const double mx = st.mean(0);
  const double mp = st.mean(1);
  r.alpha_sq = (mx * mx + mp * mp) / (4.0 * pump_amp * pump_amp);
  return r;
}

namespace {

struct Amp {
  double s, p;
};

Amp field_rhs(const Amp& a) { return {a.s * a.p, -0.5 * a.s * a.s}; }

Amp field_step(const Amp& a, double h) {
  const Amp k1 = field_rhs(a);
  const Amp k2 = field_rhs({a.s + 0.5 * h * k1.s, a.p + 0.5 * h * k1.p});
  const Amp k3 = field_rhs({a.s + 0.5 * h * k2.s, a.p + 0.5 * h * k2.p});
  const Amp k4 = field_rhs({a.s + h * k3.s, a.p + h * k3.p});
  return {a.s + h / 6.0 * (k1.s + 2.0 * k2.s + 2.0 * k3.s + k4.s),
          a.p + h / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p)};
}

}  // namespace

MeanFieldTrajectory mean_field_ode(const OpaParams& params) {
  if (!(params.t_max > 0.0) || params.n_steps < 2)
    throw DomainError("mean_field_ode needs t_max > 0 and n_steps >= 2");
  const double pump = params.regime == OpaRegime::PhaseSqueezing ? 1.0 : -1.0;
  const int n = params.n_steps;
  const double h = params.t_max / n;

  MeanFieldTrajectory out;
  out.times.reserve(n + 1);
  out.a_s.reserve(n + 1);
  out.a_p.reserve(n + 1);

  Amp full{params.seed_ratio, pump};
  Amp half = full;
  for (int k = 0;; ++k) {
    out.times.push_back(k * h);
    out.a_s.push_back(full.s);
    out.a_p.push_back(full.p);
    out.error_estimate =
        std::max({out.error_estimate, std::abs(full.s - half.s), std::abs(full.p - half.p)});
    if (k == n) break;
    full = field_step(full, h);
    half = field_step(field_step(half, 0.5 * h), 0.5 * h);
  }
  out.converged = out.error_estimate <= kOpaConvergenceTol;
  return out;
}

}  // namespace sqzlab::oracle
