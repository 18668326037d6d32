#include <algorithm>
#include <cmath>
#include <numbers>

#include <omp.h>

#include "sqzlab/beamsplitter.hpp"
#include "sqzlab/frontier.hpp"
#include "sqzlab/opa.hpp"
#include "sqzlab/opo.hpp"
#include "sqzlab/optomech.hpp"

namespace sqzlab {

namespace {

struct MethodInfo {
  Method method;
  const char* name;
  std::vector<std::string> required;
  std::vector<std::string> optional;
};

const std::vector<MethodInfo>& method_table() {
  static const std::vector<MethodInfo> table = {
      {Method::BeamSplitter, "bs", {"b", "theta"}, {}},
      {Method::OpoPhase, "opo-phase", {"c0", "seed_ratio"}, {}},
      {Method::OpoAmplitude, "opo-amplitude", {"c0", "seed_ratio"}, {}},
      {Method::OpaPhase, "opa-phase", {"seed_ratio", "tau"}, {"steps_per_unit"}},
      {Method::OpaAmplitude, "opa-amplitude", {"seed_ratio", "tau"}, {"steps_per_unit"}},
      {Method::OmAmplitude, "om-amplitude", {"cc", "dd"}, {"n_bar"}},
      {Method::OmPhase, "om-phase", {"cc", "dd"}, {"n_bar"}},
  };
  return table;
}

const MethodInfo& info(Method m) {
  for (const auto& i : method_table())
    if (i.method == m) return i;
  throw ConfigError("unknown method");
}

bool is_opa(Method m) { return m == Method::OpaPhase || m == Method::OpaAmplitude; }
bool is_opo(Method m) { return m == Method::OpoPhase || m == Method::OpoAmplitude; }
bool has_seed(Method m) { return is_opa(m) || is_opo(m); }

double default_value(const std::string& name) {
  if (name == "steps_per_unit") return kOpaStepsPerUnit;
  return 0.0;  // n_bar
}

struct Layout {
  std::vector<std::vector<double>> values;
  std::vector<std::size_t> strides;  // row-major, first axis outermost
  std::size_t total = 1;
};

Layout make_layout(const SweepGrid& grid) {
  Layout l;
  for (const auto& ax : grid.axes) l.values.push_back(ax.values());
  l.strides.assign(grid.axes.size(), 1);
  for (std::size_t i = grid.axes.size(); i-- > 0;) {
    l.strides[i] = l.total;
    l.total *= l.values[i].size();
  }
  return l;
}

ParamList swept_params(const SweepGrid& grid, const Layout& l, std::size_t flat) {
  ParamList out;
  out.reserve(grid.axes.size());
  for (std::size_t a = 0; a < grid.axes.size(); ++a) {
    const std::size_t k = (flat / l.strides[a]) % l.values[a].size();
    out.emplace_back(grid.axes[a].name, l.values[a][k]);
  }
  return out;
}

double lookup(const SweepGrid& grid, const ParamList& swept, const std::string& name) {
  for (const auto& [k, v] : swept)
    if (k == name) return v;
  for (const auto& [k, v] : grid.fixed)
    if (k == name) return v;
  return default_value(name);
}

SweepRecord skipped(ParamList params, std::string reason) {
  SweepRecord r;
  r.ok = false;
  r.point.params = std::move(params);
  r.skip_reason = std::move(reason);
  return r;
}

void apply_heisenberg_floor(const SweepGrid& grid, SweepRecord& rec) {
  if (!rec.ok || !grid.constraints.heisenberg_floor) return;
  const auto& s = rec.point.stats;
  if (std::sqrt(s.var_x * s.var_p) < 1.0 - 1e-9) {
    rec.ok = false;
    rec.skip_reason = skip::kHeisenberg;
  }
}

bool over_seed_cap(const SweepGrid& grid, double seed_ratio) {
  return grid.constraints.seed_input_cap && seed_ratio > *grid.constraints.seed_input_cap;
}

// One closed-form point (everything except the OPA).
SweepRecord evaluate_point(const SweepGrid& grid, ParamList swept) {
  const Method m = grid.method;
  if (has_seed(m) && over_seed_cap(grid, lookup(grid, swept, "seed_ratio")))
    return skipped(std::move(swept), skip::kSeedCap);

  SweepRecord rec;
  try {
    switch (m) {
      case Method::BeamSplitter:
        rec.point = bs_evaluate({lookup(grid, swept, "b"), lookup(grid, swept, "theta")});
        break;
      case Method::OpoPhase:
      case Method::OpoAmplitude:
        rec.point = opo_evaluate({lookup(grid, swept, "c0"), lookup(grid, swept, "seed_ratio"),
                                  m == Method::OpoPhase ? OpoRegime::PhaseSqueezing
                                                        : OpoRegime::AmplitudeSqueezing});
        break;
      case Method::OmAmplitude:
      case Method::OmPhase:
        rec.point = om_evaluate({lookup(grid, swept, "cc"), lookup(grid, swept, "dd"),
                                 lookup(grid, swept, "n_bar"),
                                 m == Method::OmAmplitude ? OmAxis::Amplitude : OmAxis::Phase});
        break;
      default:
        throw ConfigError("trajectory methods are not point evaluators");
    }
  } catch (const DomainError& e) {
    return skipped(std::move(swept), std::string(skip::kDomain) + ": " + e.what());
  } catch (const BranchError& e) {
    return skipped(std::move(swept), std::string(skip::kBranch) + ": " + e.what());
  }
  rec.point.params = std::move(swept);
  apply_heisenberg_floor(grid, rec);
  return rec;
}

// OPA lines: every combination of the non-tau axes shares one trajectory.
struct OpaLines {
  int tau_axis = -1;                 // index into grid.axes, -1 if tau is fixed
  std::vector<double> taus;          // sample times
  std::vector<std::size_t> starts;   // flat index of tau = first sample per line
  std::size_t tau_stride = 1;
};

OpaLines opa_lines(const SweepGrid& grid, const Layout& l) {
  OpaLines lines;
  for (std::size_t a = 0; a < grid.axes.size(); ++a)
    if (grid.axes[a].name == "tau") lines.tau_axis = static_cast<int>(a);
  if (lines.tau_axis >= 0) {
    lines.taus = l.values[lines.tau_axis];
    lines.tau_stride = l.strides[lines.tau_axis];
  } else {
    lines.taus = {lookup(grid, {}, "tau")};
  }
  for (std::size_t flat = 0; flat < l.total; ++flat) {
    const bool first = lines.tau_axis < 0 || (flat / lines.tau_stride) % lines.taus.size() == 0;
    if (first) lines.starts.push_back(flat);
  }
  return lines;
}

void evaluate_opa_line(const SweepGrid& grid, const Layout& l, const OpaLines& lines,
                       std::size_t start, std::vector<SweepRecord>& out) {
  auto flat_of = [&](std::size_t k) { return start + k * lines.tau_stride; };
  const ParamList head = swept_params(grid, l, start);
  const double seed = lookup(grid, head, "seed_ratio");
  const double t_max = *std::max_element(lines.taus.begin(), lines.taus.end());

  auto fill_skipped = [&](const std::string& reason) {
    for (std::size_t k = 0; k < lines.taus.size(); ++k)
      out[flat_of(k)] = skipped(swept_params(grid, l, flat_of(k)), reason);
  };

  if (over_seed_cap(grid, seed)) return fill_skipped(skip::kSeedCap);

  OpaParams p;
  p.seed_ratio = seed;
  p.t_max = t_max;
  p.n_steps = std::max(2, static_cast<int>(std::ceil(lookup(grid, head, "steps_per_unit") * t_max)));
  p.regime = grid.method == Method::OpaPhase ? OpaRegime::PhaseSqueezing
                                             : OpaRegime::AmplitudeSqueezing;
  OpaTrajectory traj;
  try {
    traj = opa_propagate(p);
  } catch (const DomainError& e) {
    return fill_skipped(std::string(skip::kDomain) + ": " + e.what());
  }
  if (!traj.converged) return fill_skipped(skip::kNonConvergence);

  for (std::size_t k = 0; k < lines.taus.size(); ++k) {
    SweepRecord rec;
    rec.point = traj.sample(lines.taus[k]);
    rec.point.params = swept_params(grid, l, flat_of(k));
    apply_heisenberg_floor(grid, rec);
    out[flat_of(k)] = std::move(rec);
  }
}

// Deamplifying OPO sweeps stop where alpha^2 stops growing with the seed.
void apply_opo_cutoff(const SweepGrid& grid, const Layout& l, std::vector<SweepRecord>& out) {
  if (grid.method != Method::OpoAmplitude) return;
  int seed_axis = -1;
  for (std::size_t a = 0; a < grid.axes.size(); ++a)
    if (grid.axes[a].name == "seed_ratio") seed_axis = static_cast<int>(a);
  if (seed_axis < 0) return;

  const std::size_t stride = l.strides[seed_axis];
  const std::size_t n = l.values[seed_axis].size();
  for (std::size_t flat = 0; flat < l.total; ++flat) {
    if ((flat / stride) % n != 0) continue;
    bool cut = false;
    double prev = -1.0;
    for (std::size_t k = 0; k < n; ++k) {
      SweepRecord& rec = out[flat + k * stride];
      if (!rec.ok) continue;
      if (!cut && prev >= 0.0 && rec.point.alpha_sq < prev) cut = true;
      prev = rec.point.alpha_sq;
      if (cut) {
        rec.ok = false;
        rec.skip_reason = skip::kNonmonotonic;
      }
    }
  }
}

}  // namespace

Method parse_method(const std::string& name) {
  for (const auto& i : method_table())
    if (name == i.name) return i.method;
  throw ConfigError("unknown method '" + name + "'");
}

const char* to_string(Method method) { return info(method).name; }

std::vector<Method> all_methods() {
  std::vector<Method> out;
  for (const auto& i : method_table()) out.push_back(i.method);
  return out;
}

std::vector<std::string> method_parameters(Method method) {
  const auto& i = info(method);
  std::vector<std::string> out = i.required;
  out.insert(out.end(), i.optional.begin(), i.optional.end());
  return out;
}

std::vector<double> Axis::values() const {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / (count - 1);
    v[i] = spacing == Spacing::Linear ? min + (max - min) * f
                                      : std::exp(std::log(min) + (std::log(max) - std::log(min)) * f);
  }
  v.front() = min;
  v.back() = max;
  return v;
}

void SweepGrid::validate() const {
  const auto& i = info(method);
  const auto allowed = method_parameters(method);
  std::vector<std::string> seen;
  auto declare = [&](const std::string& name) {
    if (std::find(allowed.begin(), allowed.end(), name) == allowed.end())
      throw ConfigError("unknown parameter '" + name + "' for method " + i.name);
    if (std::find(seen.begin(), seen.end(), name) != seen.end())
      throw ConfigError("parameter '" + name + "' given more than once");
    seen.push_back(name);
  };
  for (const auto& ax : axes) {
    declare(ax.name);
    if (ax.count < 2) throw ConfigError("axis '" + ax.name + "' needs count >= 2");
    if (!std::isfinite(ax.min) || !std::isfinite(ax.max) || !(ax.min < ax.max))
      throw ConfigError("axis '" + ax.name + "' needs finite min < max");
    if (ax.spacing == Spacing::Log && !(ax.min > 0.0))
      throw ConfigError("log axis '" + ax.name + "' needs min > 0");
  }
  for (const auto& [name, value] : fixed) {
    declare(name);
    if (!std::isfinite(value)) throw ConfigError("parameter '" + name + "' must be finite");
  }
  for (const auto& req : i.required)
    if (std::find(seen.begin(), seen.end(), req) == seen.end())
      throw ConfigError("method " + std::string(i.name) + " needs parameter '" + req + "'");
  if (constraints.seed_input_cap) {
    if (!has_seed(method)) throw ConfigError("seed_input_cap applies only to opo/opa methods");
    if (!(*constraints.seed_input_cap >= 0.0)) throw ConfigError("seed_input_cap must be >= 0");
  }
  if (is_opa(method)) {
    double t_max = 0.0;
    for (const auto& ax : axes)
      if (ax.name == "tau") t_max = ax.max;
    for (const auto& [name, value] : fixed)
      if (name == "tau") t_max = value;
    if (!(t_max > 0.0)) throw ConfigError("tau must reach a value > 0");
    for (const auto& ax : axes)
      if (ax.name == "tau" && ax.min < 0.0) throw ConfigError("tau must be >= 0");
  }
  double total = 1.0;
  for (const auto& ax : axes) total *= ax.count;
  if (total > 1e9) throw ConfigError("sweep grid exceeds 1e9 points");
}

std::size_t SweepGrid::size() const {
  std::size_t n = 1;
  for (const auto& ax : axes) n *= static_cast<std::size_t>(ax.count);
  return n;
}

SweepGrid default_grid(Method method) {
  SweepGrid g;
  g.method = method;
  switch (method) {
    case Method::BeamSplitter:
      g.axes = {{"b", 0.0, 10.0, 201, Spacing::Linear},
                {"theta", 5e-4, std::numbers::pi / 2, 400, Spacing::Log}};
      break;
    case Method::OpoPhase:
      g.axes = {{"c0", 0.01, 0.999, 200, Spacing::Linear},
                {"seed_ratio", 1e-6, 10.0, 300, Spacing::Log}};
      break;
    case Method::OpoAmplitude:
      g.axes = {{"c0", 0.01, 0.999, 200, Spacing::Linear},
                {"seed_ratio", 1e-4, 100.0, 300, Spacing::Log}};
      break;
    case Method::OpaPhase:
    case Method::OpaAmplitude:
      g.axes = {{"seed_ratio", 1e-3, 30.0, 120, Spacing::Log},
                {"tau", 0.0, 6.0, 601, Spacing::Linear}};
      g.fixed = {{"steps_per_unit", kOpaStepsPerUnit}};
      break;
    case Method::OmAmplitude:
    case Method::OmPhase:
      g.axes = {{"cc", 1e-2, 1e3, 300, Spacing::Log}, {"dd", 1e-3, 1.0, 300, Spacing::Log}};
      g.fixed = {{"n_bar", 0.0}};
      break;
  }
  return g;
}

std::vector<SweepRecord> sweep_serial(const SweepGrid& grid) {
  grid.validate();
  const Layout l = make_layout(grid);
  std::vector<SweepRecord> out(l.total);
  if (is_opa(grid.method)) {
    const OpaLines lines = opa_lines(grid, l);
    for (std::size_t start : lines.starts) evaluate_opa_line(grid, l, lines, start, out);
  } else {
    for (std::size_t flat = 0; flat < l.total; ++flat)
      out[flat] = evaluate_point(grid, swept_params(grid, l, flat));
  }
  apply_opo_cutoff(grid, l, out);
  return out;
}

std::vector<SweepRecord> sweep(const SweepGrid& grid, int threads) {
  grid.validate();
  const Layout l = make_layout(grid);
  std::vector<SweepRecord> out(l.total);
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();

  if (is_opa(grid.method)) {
    const OpaLines lines = opa_lines(grid, l);
    const auto n = static_cast<std::ptrdiff_t>(lines.starts.size());
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
    for (std::ptrdiff_t i = 0; i < n; ++i)
      evaluate_opa_line(grid, l, lines, lines.starts[i], out);
  } else {
    const auto n = static_cast<std::ptrdiff_t>(l.total);
#pragma omp parallel for schedule(static) num_threads(nthreads)
    for (std::ptrdiff_t i = 0; i < n; ++i)
      out[i] = evaluate_point(grid, swept_params(grid, l, static_cast<std::size_t>(i)));
  }
  apply_opo_cutoff(grid, l, out);
  return out;
}

}  // namespace sqzlab
