#include "sqzlab/opa.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sqzlab {

namespace {

void validate(const OpaParams& p) {
  if (!(p.seed_ratio >= 0.0) || !std::isfinite(p.seed_ratio))
    throw DomainError("seed_ratio must be finite and >= 0");
  if (!(p.t_max > 0.0) || !std::isfinite(p.t_max)) throw DomainError("t_max must be > 0");
  if (p.n_steps < 2) throw DomainError("n_steps must be >= 2");
}

double pump_sign(OpaRegime regime) { return regime == OpaRegime::PhaseSqueezing ? 1.0 : -1.0; }

struct SectorState {
  Cov2 x;
  Cov2 p;
};

Cov2 drift(const Cov2& v, double m11, double m12, double m21) {
  return {2.0 * (m11 * v.a + m12 * v.b), m11 * v.b + m12 * v.c + m21 * v.a, 2.0 * m21 * v.b};
}

SectorState derivative(const SectorState& s, const MeanField& f) {
  return {drift(s.x, f.a_p, f.a_s, -f.a_s), drift(s.p, -f.a_p, f.a_s, -f.a_s)};
}

Cov2 axpy(const Cov2& v, double h, const Cov2& d) {
  return {v.a + h * d.a, v.b + h * d.b, v.c + h * d.c};
}

SectorState axpy(const SectorState& s, double h, const SectorState& d) {
  return {axpy(s.x, h, d.x), axpy(s.p, h, d.p)};
}

SectorState rk4_step(const OpaParams& params, const SectorState& s, double t, double h,
                     const MeanField& f0, const MeanField& f1) {
  const MeanField fm = opa_mean_field(params, t + 0.5 * h);
  const SectorState k1 = derivative(s, f0);
  const SectorState k2 = derivative(axpy(s, 0.5 * h, k1), fm);
  const SectorState k3 = derivative(axpy(s, 0.5 * h, k2), fm);
  const SectorState k4 = derivative(axpy(s, h, k3), f1);
  auto combine = [h](const Cov2& v, const Cov2& a, const Cov2& b, const Cov2& c, const Cov2& d) {
    return Cov2{v.a + h / 6.0 * (a.a + 2.0 * b.a + 2.0 * c.a + d.a),
                v.b + h / 6.0 * (a.b + 2.0 * b.b + 2.0 * c.b + d.b),
                v.c + h / 6.0 * (a.c + 2.0 * b.c + 2.0 * c.c + d.c)};
  };
  return {combine(s.x, k1.x, k2.x, k3.x, k4.x), combine(s.p, k1.p, k2.p, k3.p, k4.p)};
}

// Integrates to t_max with n steps; fills trajectory arrays when out != nullptr.
SectorState integrate(const OpaParams& params, int n, OpaTrajectory* out) {
  const double h = params.t_max / n;
  SectorState s;
  MeanField f0 = opa_mean_field(params, 0.0);
  if (out) {
    out->times.reserve(n + 1);
    out->a_s.reserve(n + 1);
    out->a_p.reserve(n + 1);
    out->cov_x.reserve(n + 1);
    out->cov_p.reserve(n + 1);
  }
  for (int k = 0;; ++k) {
    const double t = k * h;
    if (out) {
      out->times.push_back(t);
      out->a_s.push_back(f0.a_s);
      out->a_p.push_back(f0.a_p);
      out->cov_x.push_back(s.x);
      out->cov_p.push_back(s.p);
    }
    if (k == n) break;
    const MeanField f1 = opa_mean_field(params, (k + 1) * h);
    s = rk4_step(params, s, t, h, f0, f1);
    f0 = f1;
  }
  return s;
}

double scaled_change(double coarse, double fine) {
  return std::abs(coarse - fine) / std::max(1.0, std::abs(fine));
}

}  // namespace

int opa_default_steps(double t_max) {
  return std::max(2, static_cast<int>(std::ceil(kOpaStepsPerUnit * t_max)));
}

double opa_conserved(const OpaParams& params) {
  return 1.0 + 0.5 * params.seed_ratio * params.seed_ratio;
}

MeanField opa_mean_field(const OpaParams& params, double t) {
  const double e_p = pump_sign(params.regime);
  const double s = params.seed_ratio;
  if (s == 0.0) return {0.0, e_p};

  const double c1 = opa_conserved(params);
  const double r = std::sqrt(c1);
  // atanh(1/r) = log(sqrt(2) (r + 1) / s), exact and free of the 1 - 1/r cancellation.
  const double u0 = -e_p * std::log(std::numbers::sqrt2 * (r + 1.0) / s);
  const double u = r * t + u0;
  return {std::sqrt(2.0 * c1) / std::cosh(u), -r * std::tanh(u)};
}

OpaTrajectory opa_propagate(const OpaParams& params, bool check_convergence) {
  validate(params);
  OpaTrajectory traj;
  traj.params = params;
  const SectorState coarse = integrate(params, params.n_steps, &traj);

  if (check_convergence) {
    const SectorState fine = integrate(params, 2 * params.n_steps, nullptr);
    traj.convergence_delta = std::max({scaled_change(coarse.x.a, fine.x.a),
                                       scaled_change(coarse.x.c, fine.x.c),
                                       scaled_change(coarse.p.a, fine.p.a),
                                       scaled_change(coarse.p.c, fine.p.c)});
    traj.converged = traj.convergence_delta <= kOpaConvergenceTol;
  }
  return traj;
}

MethodPoint OpaTrajectory::point(std::size_t k) const {
  MethodPoint pt;
  pt.alpha_sq = a_s[k] * a_s[k];
  pt.stats = {cov_x[k].a, cov_p[k].a};
  pt.params = {{"seed_ratio", params.seed_ratio}, {"tau", times[k]}};
  return pt;
}

MethodPoint OpaTrajectory::sample(double t) const {
  if (!(t >= 0.0 && t <= params.t_max * (1.0 + 1e-12)))
    throw DomainError("t must lie in [0, t_max]");
  const double h = step();
  auto k = static_cast<std::size_t>(std::floor(t / h));
  k = std::min(k, size() - 1);
  const double dt = t - times[k];

  MethodPoint pt;
  if (dt <= 0.0) {
    pt = point(k);
  } else {
    const MeanField f1 = opa_mean_field(params, t);
    const SectorState s = rk4_step(params, {cov_x[k], cov_p[k]}, times[k], dt,
                                   {a_s[k], a_p[k]}, f1);
    pt.alpha_sq = f1.a_s * f1.a_s;
    pt.stats = {s.x.a, s.p.a};
  }
  pt.params = {{"seed_ratio", params.seed_ratio}, {"tau", t}};
  return pt;
}

MethodPoint opa_evaluate(const OpaParams& params, double t) {
  validate(params);
  if (!(t >= 0.0 && t <= params.t_max)) throw DomainError("t must lie in [0, t_max]");
  const OpaTrajectory traj = opa_propagate(params);
  if (!traj.converged)
    throw ConvergenceError("OPA covariance did not converge under step doubling (delta " +
                           std::to_string(traj.convergence_delta) + ")");
  return traj.sample(t);
}

OpaRegime parse_opa_regime(const std::string& name) {
  if (name == "phase") return OpaRegime::PhaseSqueezing;
  if (name == "amplitude") return OpaRegime::AmplitudeSqueezing;
  throw ConfigError("regime must be 'phase' or 'amplitude', got '" + name + "'");
}

const char* to_string(OpaRegime regime) {
  return regime == OpaRegime::PhaseSqueezing ? "phase" : "amplitude";
}

}  // namespace sqzlab
