#pragma once

// Parameter sweeps over any evaluator and the constrained envelope
// "best squeezing vs alpha^2 subject to uncertainty <= threshold".
//
// Sweep parameters by method (defaults in brackets):
//   bs             b, theta
//   opo-phase      c0, seed_ratio
//   opo-amplitude  c0, seed_ratio
//   opa-phase      seed_ratio, tau, steps_per_unit [4096]
//   opa-amplitude  seed_ratio, tau, steps_per_unit [4096]
//   om-amplitude   cc, dd, n_bar [0]
//   om-phase       cc, dd, n_bar [0]
// Every parameter is either a swept Axis or a fixed value.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sqzlab/core.hpp"

namespace sqzlab {

enum class Method { BeamSplitter, OpoPhase, OpoAmplitude, OpaPhase, OpaAmplitude, OmAmplitude, OmPhase };

Method parse_method(const std::string& name);
const char* to_string(Method method);
std::vector<Method> all_methods();

/// Parameter names accepted by a method, in canonical order.
std::vector<std::string> method_parameters(Method method);

enum class Spacing { Linear, Log };

struct Axis {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  int count = 2;
  Spacing spacing = Spacing::Linear;

  /// Grid values; endpoints are exact.
  std::vector<double> values() const;
};

struct Constraints {
  /// Skip points whose seed input exceeds this multiple of the pump input.
  std::optional<double> seed_input_cap;
  /// Skip points whose uncertainty falls below 1 - 1e-9 (unphysical closed forms).
  bool heisenberg_floor = false;
};

struct SweepGrid {
  Method method = Method::BeamSplitter;
  std::vector<Axis> axes;
  ParamList fixed;
  Constraints constraints;

  /// Throws ConfigError on unknown/missing/duplicate names or malformed axes.
  void validate() const;
  std::size_t size() const;
};

/// Dense default grid per method; the documented configuration table.
SweepGrid default_grid(Method method);

struct SweepRecord {
  MethodPoint point;  // params hold the swept values in axis order
  bool ok = true;
  std::string skip_reason;  // machine-readable code, optionally ": detail"
};

namespace skip {
inline constexpr const char* kNonmonotonic = "nonmonotonic_alpha_sq";
inline constexpr const char* kSeedCap = "seed_input_cap";
inline constexpr const char* kHeisenberg = "below_heisenberg_floor";
inline constexpr const char* kNonConvergence = "non_convergence";
inline constexpr const char* kDomain = "domain_error";
inline constexpr const char* kBranch = "branch_error";
}  // namespace skip

/// Cartesian-product evaluation, row-major over axes (first axis outermost).
/// Parallel over points (OPA: over trajectories) with OpenMP; threads <= 0
/// means the OpenMP default. Output is identical to sweep_serial.
std::vector<SweepRecord> sweep(const SweepGrid& grid, int threads = 0);

/// Single-threaded reference implementation of sweep().
std::vector<SweepRecord> sweep_serial(const SweepGrid& grid);

struct BinSpec {
  double lo = 1e-6;
  double hi = 1.0;
  int count = 200;  // log-spaced bins over [lo, hi]
  /// Adds a bin with center 0 collecting alpha^2 in [0, lo).
  bool include_zero = false;

  void validate() const;
  /// Bin index for alpha^2, -1 when outside; the zero bin is index count.
  int index(double alpha_sq) const;
  double center(int index) const;  // geometric center
};

struct FrontierPoint {
  double alpha_sq_bin = 0.0;  // bin center
  double squeeze_db = 0.0;
  double uncertainty = 1.0;
  double alpha_sq = 0.0;  // achieving point
  ParamList params;
};

struct FrontierCurve {
  double threshold = 1.0;  // may be +infinity
  std::vector<FrontierPoint> points;  // ascending alpha_sq_bin
};

/// Slack allowed on the uncertainty threshold.
inline constexpr double kThresholdSlack = 1e-12;

/// Per bin, the largest squeeze_db among points with uncertainty <= threshold.
/// Ties go to smaller uncertainty, then smaller alpha^2, then input order.
FrontierCurve frontier(std::span<const MethodPoint> points, double threshold,
                       const BinSpec& bins = {});

/// Same, over the ok records of a sweep.
FrontierCurve frontier(std::span<const SweepRecord> records, double threshold,
                       const BinSpec& bins = {});

std::vector<FrontierCurve> frontier_suite(std::span<const SweepRecord> records,
                                          std::span<const double> thresholds,
                                          const BinSpec& bins = {});

/// One sweep shared by every threshold.
std::vector<FrontierCurve> frontier_suite(const SweepGrid& grid,
                                          std::span<const double> thresholds,
                                          const BinSpec& bins = {}, int threads = 0);

std::vector<double> default_thresholds();

}  // namespace sqzlab
