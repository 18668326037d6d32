#include <cmath>
#include <numbers>
#include <regex>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "sqzlab/frontier.hpp"
#include "sqzlab/io.hpp"
#include "sqzlab/opa.hpp"

using namespace sqzlab;

namespace {

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') out.push_back(line);
  return out;
}

// Every numeric token in a document parses to a finite value.
void expect_all_finite(const std::string& text) {
  EXPECT_EQ(text.find("nan"), std::string::npos);
  EXPECT_EQ(text.find("inf"), std::string::npos);
  const std::regex num(R"([-+]?\d+(\.\d+)?([eE][-+]?\d+)?)");
  for (auto it = std::sregex_iterator(text.begin(), text.end(), num); it != std::sregex_iterator(); ++it)
    EXPECT_TRUE(std::isfinite(std::stod(it->str()))) << it->str();
}

SweepGrid small_bs() {
  SweepGrid g;
  g.method = Method::BeamSplitter;
  g.axes = {{"b", 0.0, 3.0, 10, Spacing::Linear}, {"theta", 0.0, std::numbers::pi / 2, 10, Spacing::Linear}};
  return g;
}

}  // namespace

TEST(Io, NumberFormatting) {
  EXPECT_EQ(io::format_number(0.1), "0.1");
  EXPECT_EQ(io::format_number(-0.0), "0");
  EXPECT_EQ(io::format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(io::format_number(1e-20), "1e-20");
  EXPECT_EQ(io::threshold_label(std::numeric_limits<double>::infinity()), "unbounded");
  EXPECT_EQ(io::threshold_label(1.1), "1.1");
}

TEST(Io, CsvFieldQuoting) {
  EXPECT_EQ(io::csv_field("plain"), "plain");
  EXPECT_EQ(io::csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(io::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(Io, SweepCsvHasHeaderPlusOneRowPerPoint) {
  const auto g = small_bs();
  const auto rec = sweep(g);
  std::ostringstream os;
  io::write_sweep_csv(os, g, rec, {{"command", "sweep"}});
  const auto lines = data_lines(os.str());
  ASSERT_EQ(lines.size(), 101u);
  EXPECT_EQ(lines[0], "method,b,theta,alpha_sq,var_x,var_p,squeeze_db,uncertainty,status,skip_reason");
  EXPECT_EQ(os.str().rfind("# command: sweep\n", 0), 0u);
  EXPECT_EQ(os.str().find('\r'), std::string::npos);
  for (std::size_t i = 1; i < lines.size(); ++i)
    EXPECT_EQ(std::count(lines[i].begin(), lines[i].end(), ','), 9);
  expect_all_finite(os.str());
}

TEST(Io, SkippedRowsLeaveNumbersEmpty) {
  SweepGrid g;
  g.method = Method::OmAmplitude;
  g.axes = {{"cc", 1.0, 4.0, 2, Spacing::Linear}, {"dd", 0.5, 1.0, 2, Spacing::Linear}};
  const auto rec = sweep(g);
  std::ostringstream os;
  io::write_sweep_csv(os, g, rec);
  const auto lines = data_lines(os.str());
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_NE(lines[4].find(",,,,,skipped,"), std::string::npos) << lines[4];
}

TEST(Io, JsonRoundTripReproducesFrontier) {
  SweepGrid g = default_grid(Method::OpoAmplitude);
  g.axes[0].count = 30;
  g.axes[1].count = 60;
  const auto rec = sweep(g);
  const auto doc = io::sweep_to_json(g, rec);
  const auto reparsed = nlohmann::json::parse(doc.dump());
  const auto pts = io::points_from_json(reparsed);

  std::size_t ok = 0;
  for (const auto& r : rec) ok += r.ok;
  ASSERT_EQ(pts.size(), ok);

  const auto ts = default_thresholds();
  const auto direct = frontier_suite(std::span<const SweepRecord>(rec), ts);
  std::vector<FrontierCurve> again;
  for (double t : ts) again.push_back(frontier(std::span<const MethodPoint>(pts), t));
  std::ostringstream a, b;
  io::write_frontier_csv(a, direct);
  io::write_frontier_csv(b, again);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(io::frontier_to_json("x", direct, {}).dump(), io::frontier_to_json("x", again, {}).dump());
}

TEST(Io, PointJsonKeepsParameterOrder) {
  const MethodPoint pt{0.25, {0.5, 2.0}, {{"theta", 0.5}, {"b", 1.0}}};
  const auto back = io::points_from_json(nlohmann::json::array({io::point_to_json("bs", pt)}));
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].params, pt.params);
  EXPECT_EQ(back[0].alpha_sq, 0.25);
}

TEST(Io, UnboundedThresholdIsWrittenWithoutInfinity) {
  const auto rec = sweep(small_bs());
  const std::vector<double> ts{2.0, std::numeric_limits<double>::infinity()};
  const auto curves = frontier_suite(std::span<const SweepRecord>(rec), ts);
  std::ostringstream os;
  io::write_frontier_csv(os, curves);
  EXPECT_NE(os.str().find("\nunbounded,"), std::string::npos);
  const auto j = io::frontier_to_json("bs", curves, {});
  EXPECT_TRUE(j.at("curves").at(1).at("threshold").is_null());
  std::string csv = os.str();
  csv.erase(0, csv.find('\n'));
  for (std::size_t p; (p = csv.find("unbounded")) != std::string::npos;) csv.erase(p, 9);
  expect_all_finite(csv);
  expect_all_finite(j.dump());
}

TEST(Io, SvgIsSelfContained) {
  const auto rec = sweep(small_bs());
  const std::vector<double> ts{1.1, 2.0, 10.0};
  const auto curves = frontier_suite(std::span<const SweepRecord>(rec), ts);
  const auto svg = io::frontier_svg("bs", curves, {});
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  std::size_t n = 0;
  for (std::size_t p = 0; (p = svg.find("<polyline", p)) != std::string::npos; ++p) ++n;
  EXPECT_EQ(n, 3u);
  EXPECT_EQ(svg.find("href"), std::string::npos);
  EXPECT_NE(svg.find("squeezing"), std::string::npos);
  EXPECT_EQ(svg.find("nan"), std::string::npos);
}

TEST(Io, TrajectoryCsvColumnsAndSampling) {
  const auto traj = opa_propagate({0.05, 2.0, 1024, OpaRegime::PhaseSqueezing});
  std::ostringstream os;
  io::write_trajectory_csv(os, traj, 11);
  const auto lines = data_lines(os.str());
  ASSERT_EQ(lines.size(), 12u);
  EXPECT_EQ(lines[0], "t,a_s,a_p,var_x_s,var_p_s,uncertainty");
  EXPECT_EQ(lines[1].rfind("0,0.05,1,1,1,1", 0), 0u);
  EXPECT_EQ(lines.back().rfind("2,", 0), 0u);
  expect_all_finite(os.str());
}
