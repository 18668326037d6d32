// sqzlab command-line front end.
//
// Exit codes: 0 success, 2 configuration or domain error, 3 numerical
// non-convergence.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sqzlab/beamsplitter.hpp"
#include "sqzlab/core.hpp"
#include "sqzlab/frontier.hpp"
#include "sqzlab/io.hpp"
#include "sqzlab/opa.hpp"
#include "sqzlab/opo.hpp"
#include "sqzlab/optomech.hpp"
#include "sqzlab/oracle.hpp"

namespace {

using namespace sqzlab;

constexpr int kExitConfig = 2;
constexpr int kExitConvergence = 3;

struct PointOptions {
  std::string method;
  double b = 0.0, theta = 0.0;
  double c0 = 0.5, seed_ratio = 0.0;
  std::string regime = "phase";
  double tau = 0.0;
  double steps_per_unit = kOpaStepsPerUnit;
  double cc = 1.0, dd = 1.0, n_bar = 0.0;
  std::string axis = "amplitude";
  std::string format = "csv";
  std::string out;
};

struct GridOptions {
  std::vector<std::string> methods;
  std::vector<std::string> axes;   // name:min:max:count[:log|:linear]
  std::vector<std::string> fixed;  // name=value
  std::optional<double> seed_cap;
  bool heisenberg_floor = false;
  std::string format = "csv";
  std::string out;
};

struct FrontierOptions {
  std::vector<std::string> thresholds;
  std::string bins = "1e-6:1:200";
  bool include_zero = false;
  std::string points;  // JSON sweep output to re-ingest
};

struct TrajectoryOptions {
  double seed_ratio = 0.05;
  double t_max = 5.0;
  int n_steps = 0;
  std::string regime = "phase";
  int samples = 201;
  std::string out;
};

struct OracleOptions {
  std::string which;
  double b = 1.0, theta = std::numbers::pi / 4;
  double seed_ratio = 0.05, t_max = 5.0;
  std::string regime = "phase";
};

int thread_cap() {
  const char* env = std::getenv("SQZLAB_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 0) throw ConfigError("SQZLAB_THREADS must be a non-negative integer");
  return static_cast<int>(v);
}

double parse_double(const std::string& text, const std::string& what) {
  if (text == "inf" || text == "infinity" || text == "unbounded")
    return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty())
    throw ConfigError("cannot parse " + what + " '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

Axis parse_axis(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 4 && parts.size() != 5)
    throw ConfigError("axis must be name:min:max:count[:log|linear], got '" + spec + "'");
  Axis ax;
  ax.name = parts[0];
  ax.min = parse_double(parts[1], "axis min");
  ax.max = parse_double(parts[2], "axis max");
  const double count = parse_double(parts[3], "axis count");
  if (count != std::floor(count) || count < 0 || count > 1e8)
    throw ConfigError("axis count must be an integer");
  ax.count = static_cast<int>(count);
  if (parts.size() == 5) {
    if (parts[4] == "log")
      ax.spacing = Spacing::Log;
    else if (parts[4] != "linear")
      throw ConfigError("axis spacing must be 'log' or 'linear'");
  }
  return ax;
}

SweepGrid build_grid(Method method, const GridOptions& opt) {
  SweepGrid grid = default_grid(method);
  if (!opt.axes.empty()) {
    grid.axes.clear();
    for (const auto& a : opt.axes) grid.axes.push_back(parse_axis(a));
    grid.fixed.clear();
  }
  for (const auto& f : opt.fixed) {
    const auto eq = f.find('=');
    if (eq == std::string::npos) throw ConfigError("fixed parameter must be name=value");
    const std::string name = f.substr(0, eq);
    const double value = parse_double(f.substr(eq + 1), "fixed value");
    bool replaced = false;
    for (auto& kv : grid.fixed)
      if (kv.first == name) {
        kv.second = value;
        replaced = true;
      }
    if (!replaced) grid.fixed.emplace_back(name, value);
  }
  grid.constraints.seed_input_cap = opt.seed_cap;
  grid.constraints.heisenberg_floor = opt.heisenberg_floor;
  grid.validate();
  return grid;
}

std::string axis_label(const Axis& ax) {
  return ax.name + ":" + io::format_number(ax.min) + ":" + io::format_number(ax.max) + ":" +
         std::to_string(ax.count) + ":" + (ax.spacing == Spacing::Log ? "log" : "linear");
}

io::Metadata grid_metadata(const std::string& command, const SweepGrid& grid) {
  io::Metadata meta{{"command", command}, {"method", to_string(grid.method)}};
  for (const auto& ax : grid.axes) meta.emplace_back("axis", axis_label(ax));
  for (const auto& [k, v] : grid.fixed) meta.emplace_back("fixed", k + "=" + io::format_number(v));
  meta.emplace_back("seed_cap", grid.constraints.seed_input_cap
                                    ? io::format_number(*grid.constraints.seed_input_cap)
                                    : "none");
  meta.emplace_back("heisenberg_floor", grid.constraints.heisenberg_floor ? "on" : "off");
  return meta;
}

// Output sink: a file when a path is given, stdout otherwise.
class Sink {
public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      const auto parent = std::filesystem::path(path).parent_path();
      if (!parent.empty()) std::filesystem::create_directories(parent);
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw ConfigError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
  std::unique_ptr<std::ofstream> file_;
};

void check_format(const std::string& format, bool allow_svg) {
  if (format == "csv" || format == "json" || (allow_svg && format == "svg")) return;
  throw ConfigError("unsupported format '" + format + "'");
}

Method point_method(const PointOptions& o) {
  if (o.method == "bs") return Method::BeamSplitter;
  if (o.method == "opo")
    return parse_opo_regime(o.regime) == OpoRegime::PhaseSqueezing ? Method::OpoPhase
                                                                    : Method::OpoAmplitude;
  if (o.method == "opa")
    return parse_opa_regime(o.regime) == OpaRegime::PhaseSqueezing ? Method::OpaPhase
                                                                    : Method::OpaAmplitude;
  if (o.method == "om")
    return parse_om_axis(o.axis) == OmAxis::Amplitude ? Method::OmAmplitude : Method::OmPhase;
  return parse_method(o.method);
}

int run_point(const PointOptions& o) {
  check_format(o.format, false);
  const Method m = point_method(o);
  MethodPoint pt;
  switch (m) {
    case Method::BeamSplitter:
      pt = bs_evaluate({o.b, o.theta});
      break;
    case Method::OpoPhase:
    case Method::OpoAmplitude:
      pt = opo_evaluate({o.c0, o.seed_ratio,
                         m == Method::OpoPhase ? OpoRegime::PhaseSqueezing
                                               : OpoRegime::AmplitudeSqueezing});
      break;
    case Method::OpaPhase:
    case Method::OpaAmplitude: {
      if (!(o.tau >= 0.0)) throw DomainError("tau must be >= 0");
      OpaParams p;
      p.seed_ratio = o.seed_ratio;
      p.t_max = o.tau > 0.0 ? o.tau : 1.0;
      p.n_steps = std::max(2, static_cast<int>(std::ceil(o.steps_per_unit * p.t_max)));
      p.regime = m == Method::OpaPhase ? OpaRegime::PhaseSqueezing : OpaRegime::AmplitudeSqueezing;
      pt = opa_evaluate(p, o.tau);
      break;
    }
    case Method::OmAmplitude:
    case Method::OmPhase:
      pt = om_evaluate({o.cc, o.dd, o.n_bar,
                        m == Method::OmAmplitude ? OmAxis::Amplitude : OmAxis::Phase});
      break;
  }
  Sink sink(o.out);
  if (o.format == "json")
    sink.stream() << io::point_to_json(to_string(m), pt).dump(2) << '\n';
  else
    io::write_point_csv(sink.stream(), to_string(m), pt);
  return 0;
}

int run_sweep(const GridOptions& o) {
  check_format(o.format, false);
  if (o.methods.size() != 1) throw ConfigError("sweep takes exactly one --method");
  const SweepGrid grid = build_grid(parse_method(o.methods.front()), o);
  const auto records = sweep(grid, thread_cap());
  const auto meta = grid_metadata("sweep", grid);
  Sink sink(o.out);
  if (o.format == "json")
    sink.stream() << io::sweep_to_json(grid, records, meta).dump(1) << '\n';
  else
    io::write_sweep_csv(sink.stream(), grid, records, meta);
  return 0;
}

BinSpec parse_bins(const FrontierOptions& f) {
  const auto parts = split(f.bins, ':');
  if (parts.size() != 3) throw ConfigError("bins must be lo:hi:count");
  BinSpec bins;
  bins.lo = parse_double(parts[0], "bin lo");
  bins.hi = parse_double(parts[1], "bin hi");
  const double count = parse_double(parts[2], "bin count");
  if (count != std::floor(count) || count < 1 || count > 1e7)
    throw ConfigError("bin count must be a positive integer");
  bins.count = static_cast<int>(count);
  bins.include_zero = f.include_zero;
  bins.validate();
  return bins;
}

std::string output_path(const std::string& out, const std::string& method, bool many) {
  if (!many || out.empty()) return out;
  std::filesystem::path p(out);
  const std::string stem = p.stem().string() + "_" + method;
  return (p.parent_path() / (stem + p.extension().string())).string();
}

int run_frontier(const GridOptions& o, const FrontierOptions& f) {
  check_format(o.format, true);
  std::vector<double> thresholds;
  for (const auto& t : f.thresholds) {
    for (const auto& piece : split(t, ',')) thresholds.push_back(parse_double(piece, "threshold"));
  }
  if (thresholds.empty()) thresholds = default_thresholds();
  for (double t : thresholds)
    if (!(t >= 1.0)) throw ConfigError("threshold must be >= 1");
  const BinSpec bins = parse_bins(f);

  std::string threshold_list;
  for (double t : thresholds)
    threshold_list += (threshold_list.empty() ? "" : ",") + io::threshold_label(t);
  std::string bin_label = io::format_number(bins.lo) + ":" + io::format_number(bins.hi) + ":" +
                          std::to_string(bins.count) + (bins.include_zero ? "+zero" : "");

  struct Job {
    std::string method;
    std::vector<FrontierCurve> curves;
    io::Metadata meta;
    std::vector<std::string> param_names;
  };
  std::vector<Job> jobs;

  if (!f.points.empty()) {
    std::ifstream in(f.points);
    if (!in) throw ConfigError("cannot read points file '" + f.points + "'");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("points file is not valid JSON: ") + e.what());
    }
    std::vector<MethodPoint> pts;
    try {
      pts = io::points_from_json(doc);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("points file has an unexpected layout: ") + e.what());
    }
    const std::string method =
        doc.is_object() && doc.contains("method") ? doc["method"].get<std::string>() : "points";
    Job job{method, {}, {{"command", "frontier"}, {"method", method}, {"points", f.points}}, {}};
    for (double t : thresholds)
      job.curves.push_back(frontier(std::span<const MethodPoint>(pts), t, bins));
    jobs.push_back(std::move(job));
  } else {
    if (o.methods.empty()) throw ConfigError("frontier needs --method or --points");
    if (o.methods.size() > 1 && !o.axes.empty())
      throw ConfigError("--axis applies to a single --method");
    const int threads = thread_cap();
    for (const auto& name : o.methods) {
      const SweepGrid grid = build_grid(parse_method(name), o);
      Job job{name, frontier_suite(grid, thresholds, bins, threads),
              grid_metadata("frontier", grid), {}};
      for (const auto& ax : grid.axes) job.param_names.push_back(ax.name);
      jobs.push_back(std::move(job));
    }
  }

  if (jobs.size() > 1 && o.out.empty())
    throw ConfigError("several methods need --out (one file per method)");

  for (auto& job : jobs) {
    job.meta.emplace_back("thresholds", threshold_list);
    job.meta.emplace_back("bins", bin_label);
    for (const auto& c : job.curves)
      if (c.points.empty())
        std::cerr << "warning: " << job.method << ": no feasible points for threshold "
                  << io::threshold_label(c.threshold) << '\n';

    Sink sink(output_path(o.out, job.method, jobs.size() > 1));
    if (o.format == "json")
      sink.stream() << io::frontier_to_json(job.method, job.curves, bins, job.meta).dump(1) << '\n';
    else if (o.format == "svg")
      sink.stream() << io::frontier_svg(job.method, job.curves, bins);
    else
      io::write_frontier_csv(sink.stream(), job.curves, job.meta, job.param_names);
  }
  return 0;
}

int run_trajectory(const TrajectoryOptions& o) {
  OpaParams p;
  p.seed_ratio = o.seed_ratio;
  p.t_max = o.t_max;
  p.n_steps = o.n_steps > 0 ? o.n_steps : opa_default_steps(o.t_max);
  p.regime = parse_opa_regime(o.regime);
  const OpaTrajectory traj = opa_propagate(p);
  const io::Metadata meta{{"command", "opa-trajectory"},
                          {"seed_ratio", io::format_number(p.seed_ratio)},
                          {"t_max", io::format_number(p.t_max)},
                          {"n_steps", std::to_string(p.n_steps)},
                          {"regime", to_string(p.regime)},
                          {"convergence_delta", io::format_number(traj.convergence_delta)}};
  {
    Sink sink(o.out);
    io::write_trajectory_csv(sink.stream(), traj, o.samples, meta);
  }
  if (!traj.converged) {
    std::cerr << "error: covariance not converged under step doubling (delta "
              << traj.convergence_delta << ")\n";
    return kExitConvergence;
  }
  return 0;
}

int run_oracle(const OracleOptions& o) {
  std::cout.precision(15);
  if (o.which == "bs") {
    const auto r = oracle::beamsplitter_marginal(o.b, o.theta);
    const auto c = bs_evaluate({o.b, o.theta});
    std::cout << "oracle var_x " << r.stats.var_x << " var_p " << r.stats.var_p << " alpha_sq "
              << r.alpha_sq << "\nclosed var_x " << c.stats.var_x << " var_p " << c.stats.var_p
              << " alpha_sq " << c.alpha_sq << '\n';
    return 0;
  }
  if (o.which == "opa") {
    OpaParams p{o.seed_ratio, o.t_max, opa_default_steps(o.t_max), parse_opa_regime(o.regime)};
    const auto ode = oracle::mean_field_ode(p);
    double worst = 0.0;
    for (std::size_t k = 0; k < ode.times.size(); ++k) {
      const MeanField f = opa_mean_field(p, ode.times[k]);
      worst = std::max({worst, std::abs(f.a_s - ode.a_s[k]), std::abs(f.a_p - ode.a_p[k])});
    }
    std::cout << "max |closed - rk4| " << worst << " rk4 step-halving estimate "
              << ode.error_estimate << '\n';
    return ode.converged ? 0 : kExitConvergence;
  }
  throw ConfigError("oracle target must be 'bs' or 'opa'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sqzlab: brightness/squeezing/uncertainty trade-offs of squeezed-light sources"};
  app.set_config("--config", "", "key = value configuration file (flags override it)");
  app.require_subcommand(1);

  PointOptions po;
  auto* point = app.add_subcommand("point", "Evaluate one parameter point");
  point->add_option("method", po.method, "bs | opo | opa | om (or a full method name)")->required();
  point->add_option("--b", po.b, "beam splitter: squeeze parameter B");
  point->add_option("--theta", po.theta, "beam splitter: mixing angle in [0, pi/2]");
  point->add_option("--c0", po.c0, "OPO: normalized pump in (0,1)");
  point->add_option("--seed-ratio", po.seed_ratio, "OPO/OPA: seed input over pump input");
  point->add_option("--regime", po.regime, "OPO/OPA: phase | amplitude");
  point->add_option("--tau", po.tau, "OPA: dimensionless interaction time");
  point->add_option("--steps-per-unit", po.steps_per_unit, "OPA: RK4 steps per unit tau");
  point->add_option("--cc", po.cc, "optomechanics: cooperativity");
  point->add_option("--dd", po.dd, "optomechanics: probe asymmetry");
  point->add_option("--nbar", po.n_bar, "optomechanics: thermal occupation");
  point->add_option("--axis", po.axis, "optomechanics: amplitude | phase");
  point->add_option("--format", po.format, "csv | json");
  point->add_option("--out", po.out, "output file (stdout if omitted)");

  GridOptions so;
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate a Cartesian parameter grid");
  sweep_cmd->add_option("--method", so.methods, "method name")->required();
  sweep_cmd->add_option("--axis", so.axes, "name:min:max:count[:log|linear] (repeatable)");
  sweep_cmd->add_option("--fixed", so.fixed, "name=value (repeatable)");
  sweep_cmd->add_option("--seed-cap", so.seed_cap, "skip seed inputs above this multiple of the pump");
  sweep_cmd->add_flag("--heisenberg-floor", so.heisenberg_floor, "skip points with uncertainty < 1");
  sweep_cmd->add_option("--format", so.format, "csv | json");
  sweep_cmd->add_option("--out", so.out, "output file (stdout if omitted)");

  GridOptions fo;
  FrontierOptions ff;
  auto* frontier_cmd = app.add_subcommand("frontier", "Best squeezing vs alpha^2 under uncertainty thresholds");
  frontier_cmd->add_option("--method", fo.methods, "method name(s)");
  frontier_cmd->add_option("--axis", fo.axes, "name:min:max:count[:log|linear] (single method)");
  frontier_cmd->add_option("--fixed", fo.fixed, "name=value (repeatable)");
  frontier_cmd->add_option("--seed-cap", fo.seed_cap, "skip seed inputs above this multiple of the pump");
  frontier_cmd->add_flag("--heisenberg-floor", fo.heisenberg_floor, "skip points with uncertainty < 1");
  frontier_cmd->add_option("--thresholds", ff.thresholds, "uncertainty ceilings (>= 1, 'inf' allowed)");
  frontier_cmd->add_option("--bins", ff.bins, "lo:hi:count log-spaced alpha^2 bins");
  frontier_cmd->add_flag("--include-zero", ff.include_zero, "extra bin for alpha^2 below lo");
  frontier_cmd->add_option("--points", ff.points, "re-ingest a JSON sweep instead of sweeping");
  frontier_cmd->add_option("--format", fo.format, "csv | json | svg");
  frontier_cmd->add_option("--out", fo.out, "output file; with several methods, suffixed per method");

  TrajectoryOptions to;
  auto* traj_cmd = app.add_subcommand("opa-trajectory", "Time series of the parametric amplifier");
  traj_cmd->add_option("--seed-ratio", to.seed_ratio, "seed input over pump input");
  traj_cmd->add_option("--t-max", to.t_max, "final dimensionless time");
  traj_cmd->add_option("--n-steps", to.n_steps, "RK4 steps (0: 4096 per unit time)");
  traj_cmd->add_option("--regime", to.regime, "phase | amplitude");
  traj_cmd->add_option("--samples", to.samples, "output rows");
  traj_cmd->add_option("--out", to.out, "output file (stdout if omitted)");

  OracleOptions oo;
  auto* oracle_cmd = app.add_subcommand("oracle", "");
  oracle_cmd->group("");
  oracle_cmd->add_option("which", oo.which, "bs | opa")->required();
  oracle_cmd->add_option("--b", oo.b);
  oracle_cmd->add_option("--theta", oo.theta);
  oracle_cmd->add_option("--seed-ratio", oo.seed_ratio);
  oracle_cmd->add_option("--t-max", oo.t_max);
  oracle_cmd->add_option("--regime", oo.regime);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*point) return run_point(po);
    if (*sweep_cmd) return run_sweep(so);
    if (*frontier_cmd) return run_frontier(fo, ff);
    if (*traj_cmd) return run_trajectory(to);
    if (*oracle_cmd) return run_oracle(oo);
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const BranchError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
