#pragma once

// Output formats for the CLI. CSV is comma-delimited with LF endings and
// '.' decimals; numbers use 12 significant digits. Metadata (the effective
// run configuration) precedes the header as "# key: value" comment lines.
// JSON carries full double precision so sweep output can be re-ingested.

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sqzlab/core.hpp"
#include "sqzlab/frontier.hpp"
#include "sqzlab/opa.hpp"

namespace sqzlab::io {

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// %.12g, with -0 printed as 0.
std::string format_number(double value);

/// Quotes a CSV field if it contains a delimiter, quote or newline.
std::string csv_field(const std::string& text);

void write_point_csv(std::ostream& os, const std::string& method, const MethodPoint& pt);
nlohmann::json point_to_json(const std::string& method, const MethodPoint& pt);

void write_sweep_csv(std::ostream& os, const SweepGrid& grid, std::span<const SweepRecord> records,
                     const Metadata& meta = {});
nlohmann::json sweep_to_json(const SweepGrid& grid, std::span<const SweepRecord> records,
                             const Metadata& meta = {});

/// Ok records of a sweep JSON document (or a bare array of points) as points.
std::vector<MethodPoint> points_from_json(const nlohmann::json& doc);

/// Parameter columns are param_names followed by any other names the points carry,
/// so an empty curve still gets a complete header.
void write_frontier_csv(std::ostream& os, std::span<const FrontierCurve> curves,
                        const Metadata& meta = {},
                        const std::vector<std::string>& param_names = {});
nlohmann::json frontier_to_json(const std::string& method, std::span<const FrontierCurve> curves,
                                const BinSpec& bins, const Metadata& meta = {});

/// Self-contained SVG: one polyline per threshold, log alpha^2 axis.
std::string frontier_svg(const std::string& title, std::span<const FrontierCurve> curves,
                         const BinSpec& bins);

/// Evenly spaced samples of a trajectory: t, a_s, a_p, var_x_s, var_p_s, uncertainty.
void write_trajectory_csv(std::ostream& os, const OpaTrajectory& traj, int samples,
                          const Metadata& meta = {});

/// Threshold label used in tables: the number, or "unbounded" for infinity.
std::string threshold_label(double threshold);

}  // namespace sqzlab::io
