#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include <gtest/gtest.h>

#include "sqzlab/beamsplitter.hpp"
#include "sqzlab/frontier.hpp"
#include "support.hpp"

using namespace sqzlab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MethodPoint synthetic(double alpha_sq, double var_x, double var_p, double tag) {
  return {alpha_sq, {var_x, var_p}, {{"tag", tag}}};
}

std::map<double, double> by_bin(const FrontierCurve& c) {
  std::map<double, double> m;
  for (const auto& p : c.points) m[p.alpha_sq_bin] = p.squeeze_db;
  return m;
}

SweepGrid bs_grid(int nb, int nt) {
  SweepGrid g;
  g.method = Method::BeamSplitter;
  g.axes = {{"b", 0.0, 6.0, nb, Spacing::Linear}, {"theta", 1e-3, std::numbers::pi / 2, nt, Spacing::Log}};
  return g;
}

double best_near(std::span<const FrontierCurve> curves, std::size_t i, double alpha_sq) {
  double best = -kInf;
  for (const auto& p : curves[i].points)
    if (std::abs(std::log(p.alpha_sq_bin / alpha_sq)) < 0.05) best = std::max(best, p.squeeze_db);
  return best;
}

}  // namespace

TEST(Axis, ValuesHaveExactEndpoints) {
  const Axis lin{"b", 0.0, 3.0, 4, Spacing::Linear};
  EXPECT_EQ(lin.values(), (std::vector<double>{0.0, 1.0, 2.0, 3.0}));
  const auto lg = Axis{"theta", 1e-3, 1.0, 4, Spacing::Log}.values();
  EXPECT_EQ(lg.front(), 1e-3);
  EXPECT_EQ(lg.back(), 1.0);
  EXPECT_NEAR(lg[1], 1e-2, 1e-15);
}

TEST(SweepGrid, ValidationRejectsBadConfigurations) {
  SweepGrid g = bs_grid(3, 3);
  g.axes[0].name = "B";
  EXPECT_THROW(g.validate(), ConfigError);
  g = bs_grid(3, 3);
  g.axes[0].count = 1;
  EXPECT_THROW(g.validate(), ConfigError);
  g = bs_grid(3, 3);
  g.axes[1].min = 0.0;  // log axis needs min > 0
  EXPECT_THROW(g.validate(), ConfigError);
  g = bs_grid(3, 3);
  g.axes[0].max = g.axes[0].min;
  EXPECT_THROW(g.validate(), ConfigError);
  g = bs_grid(3, 3);
  g.axes.pop_back();  // theta missing
  EXPECT_THROW(g.validate(), ConfigError);
  g = bs_grid(3, 3);
  g.fixed = {{"b", 1.0}};  // both swept and fixed
  EXPECT_THROW(g.validate(), ConfigError);
  EXPECT_THROW(parse_method("laser"), ConfigError);
  for (auto m : all_methods()) {
    EXPECT_EQ(parse_method(to_string(m)), m);
    EXPECT_NO_THROW(default_grid(m).validate());
    EXPECT_GE(default_grid(m).size(), 10000u);
  }
}

TEST(Sweep, BeamSplitterGridIsRowMajorAndFinite) {
  SweepGrid g;
  g.method = Method::BeamSplitter;
  g.axes = {{"b", 0.0, 3.0, 10, Spacing::Linear}, {"theta", 0.0, std::numbers::pi / 2, 10, Spacing::Linear}};
  const auto rec = sweep(g);
  ASSERT_EQ(rec.size(), 100u);
  for (std::size_t i = 0; i < rec.size(); ++i) {
    ASSERT_TRUE(rec[i].ok);
    EXPECT_TRUE(std::isfinite(rec[i].point.stats.var_x) && std::isfinite(rec[i].point.stats.var_p));
    EXPECT_DOUBLE_EQ(param_value(rec[i].point.params, "b"), 3.0 * (i / 10) / 9.0);
    EXPECT_DOUBLE_EQ(param_value(rec[i].point.params, "theta"), g.axes[1].values()[i % 10]);
  }
}

TEST(Sweep, DomainErrorsBecomeSkippedRecords) {
  SweepGrid g;
  g.method = Method::OmAmplitude;
  g.axes = {{"cc", 0.5, 4.0, 8, Spacing::Linear}, {"dd", 0.1, 1.0, 8, Spacing::Linear}};
  const auto rec = sweep(g);
  ASSERT_EQ(rec.size(), 64u);
  int skipped = 0;
  for (const auto& r : rec) {
    const double x = param_value(r.point.params, "cc") * param_value(r.point.params, "dd");
    EXPECT_EQ(r.ok, x <= 1.0);
    if (!r.ok) {
      ++skipped;
      EXPECT_EQ(r.skip_reason.rfind(skip::kDomain, 0), 0u) << r.skip_reason;
    }
  }
  EXPECT_GT(skipped, 0);
}

TEST(Sweep, OpaRowsAreSeedOuterTauInner) {
  SweepGrid g;
  g.method = Method::OpaPhase;
  g.axes = {{"seed_ratio", 0.01, 0.1, 3, Spacing::Log}, {"tau", 0.0, 2.0, 5, Spacing::Linear}};
  g.fixed = {{"steps_per_unit", 512}};
  const auto rec = sweep(g);
  ASSERT_EQ(rec.size(), 15u);
  for (std::size_t i = 0; i < rec.size(); ++i) {
    EXPECT_DOUBLE_EQ(param_value(rec[i].point.params, "seed_ratio"), g.axes[0].values()[i / 5]);
    EXPECT_DOUBLE_EQ(param_value(rec[i].point.params, "tau"), 0.5 * (i % 5));
  }
  EXPECT_NEAR(rec[0].point.alpha_sq, 1e-4, 1e-16);
}

TEST(Sweep, TauMayComeFirst) {
  SweepGrid a;
  a.method = Method::OpaAmplitude;
  a.axes = {{"tau", 0.0, 2.0, 5, Spacing::Linear}, {"seed_ratio", 0.01, 0.1, 3, Spacing::Log}};
  a.fixed = {{"steps_per_unit", 512}};
  SweepGrid b = a;
  std::swap(b.axes[0], b.axes[1]);
  const auto ra = sweep(a), rb = sweep(b);
  for (int t = 0; t < 5; ++t)
    for (int s = 0; s < 3; ++s)
      EXPECT_EQ(ra[t * 3 + s].point.stats.var_x, rb[s * 5 + t].point.stats.var_x);
}

TEST(Sweep, ParallelMatchesSerialExactly) {
  for (auto m : all_methods()) {
    SweepGrid g = default_grid(m);
    for (auto& ax : g.axes) ax.count = std::max(2, ax.count / 8);
    const auto a = sweep(g, 0), b = sweep_serial(g), c = sweep(g, 3);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      ASSERT_EQ(a[i].ok, b[i].ok);
      ASSERT_EQ(a[i].skip_reason, b[i].skip_reason);
      ASSERT_EQ(a[i].point.alpha_sq, b[i].point.alpha_sq);
      ASSERT_EQ(a[i].point.stats.var_x, b[i].point.stats.var_x);
      ASSERT_EQ(a[i].point.stats.var_p, c[i].point.stats.var_p);
      ASSERT_EQ(a[i].point.params, b[i].point.params);
    }
  }
}

TEST(Sweep, SeedCapAndHeisenbergFloorSkipPoints) {
  SweepGrid g;
  g.method = Method::OpaAmplitude;
  g.axes = {{"seed_ratio", 0.1, 10.0, 5, Spacing::Log}, {"tau", 0.0, 1.0, 3, Spacing::Linear}};
  g.fixed = {{"steps_per_unit", 256}};
  g.constraints.seed_input_cap = 1.0;
  for (const auto& r : sweep(g)) {
    const bool over = param_value(r.point.params, "seed_ratio") > 1.0;
    EXPECT_EQ(r.ok, !over);
    if (over) EXPECT_EQ(r.skip_reason, skip::kSeedCap);
  }
  SweepGrid om;
  om.method = Method::OmAmplitude;
  om.axes = {{"cc", 0.05, 2.0, 20, Spacing::Log}, {"dd", 0.5, 0.5001, 2, Spacing::Linear}};
  om.constraints.heisenberg_floor = true;
  int floored = 0;
  for (const auto& r : sweep(om)) {
    if (r.ok) {
      EXPECT_GE(squeeze_metrics(r.point.stats).uncertainty, 1.0 - 1e-9);
    } else if (r.skip_reason == skip::kHeisenberg) {
      ++floored;
    }
  }
  EXPECT_GT(floored, 0);
}

TEST(Bins, IndexAndCenters) {
  BinSpec b{1e-4, 1.0, 4, false};
  EXPECT_EQ(b.index(1e-4), 0);
  EXPECT_EQ(b.index(0.5e-3), 0);
  EXPECT_EQ(b.index(2e-3), 1);
  EXPECT_EQ(b.index(1.0), 3);
  EXPECT_EQ(b.index(1.5), -1);
  EXPECT_EQ(b.index(0.0), -1);
  EXPECT_NEAR(b.center(0), std::sqrt(1e-4 * 1e-3), 1e-16);
  b.include_zero = true;
  EXPECT_EQ(b.index(0.0), 4);
  EXPECT_EQ(b.index(5e-5), 4);
  EXPECT_EQ(b.center(4), 0.0);
  EXPECT_THROW((BinSpec{1.0, 0.5, 4, false}.validate()), ConfigError);
  EXPECT_THROW((BinSpec{0.0, 1.0, 4, false}.validate()), ConfigError);
}

TEST(Frontier, RejectsEmptyInputAndSubunitThreshold) {
  std::vector<MethodPoint> none;
  EXPECT_THROW(frontier(std::span<const MethodPoint>(none), 2.0), ConfigError);
  std::vector<MethodPoint> one{synthetic(0.1, 0.5, 2.0, 0)};
  EXPECT_THROW(frontier(std::span<const MethodPoint>(one), 0.999), ConfigError);
  EXPECT_NO_THROW(frontier(std::span<const MethodPoint>(one), kInf));
}

TEST(Frontier, TiesPreferLowerUncertaintyThenSmallerAlphaThenOrder) {
  const BinSpec bins{0.01, 1.0, 1, false};
  std::vector<MethodPoint> pts{synthetic(0.5, 0.5, 4.0, 0), synthetic(0.4, 0.5, 3.0, 1),
                               synthetic(0.3, 0.5, 3.0, 2), synthetic(0.3, 0.5, 3.0, 3)};
  const auto c = frontier(std::span<const MethodPoint>(pts), 10.0, bins);
  ASSERT_EQ(c.points.size(), 1u);
  EXPECT_EQ(param_value(c.points[0].params, "tag"), 2.0);
  EXPECT_EQ(c.points[0].alpha_sq, 0.3);
}

TEST(Frontier, EmptyBinsAreOmittedAndPointsAscend) {
  prop::Gen gen(61);
  std::vector<MethodPoint> pts;
  for (int i = 0; i < 300; ++i) {
    const double v = gen.uniform(0.05, 1.0);
    pts.push_back(synthetic(gen.log_uniform(1e-3, 1e-1), v, gen.uniform(1.0 / v, 3.0 / v), i));
  }
  const auto c = frontier(std::span<const MethodPoint>(pts), 2.0);
  ASSERT_FALSE(c.points.empty());
  EXPECT_LT(c.points.size(), 200u);
  for (std::size_t i = 1; i < c.points.size(); ++i)
    EXPECT_LT(c.points[i - 1].alpha_sq_bin, c.points[i].alpha_sq_bin);
  for (const auto& p : c.points) EXPECT_LE(p.uncertainty, 2.0 + kThresholdSlack);
}

TEST(Frontier, ThresholdMonotonicity) {
  const auto g = bs_grid(41, 80);
  const auto rec = sweep(g);
  const std::vector<double> ts{1.001, 1.01, 1.1, 2.0, 10.0, kInf};
  const auto curves = frontier_suite(std::span<const SweepRecord>(rec), ts);
  for (std::size_t i = 1; i < curves.size(); ++i) {
    const auto lo = by_bin(curves[i - 1]), hi = by_bin(curves[i]);
    for (const auto& [bin, db] : lo) {
      ASSERT_TRUE(hi.count(bin)) << bin;
      EXPECT_LE(db, hi.at(bin) + 1e-12);
    }
  }
}

TEST(Frontier, GridRefinementNeverLowersABin) {
  const auto coarse = sweep(bs_grid(21, 40));
  const auto fine = sweep(bs_grid(41, 79));  // contains every coarse node
  for (double t : {1.01, 2.0}) {
    const auto a = by_bin(frontier(std::span<const SweepRecord>(coarse), t));
    const auto b = by_bin(frontier(std::span<const SweepRecord>(fine), t));
    for (const auto& [bin, db] : a) {
      ASSERT_TRUE(b.count(bin));
      EXPECT_GE(b.at(bin), db - 1e-12);
    }
  }
}

TEST(Frontier, BeamSplitterUnboundedEnvelopeApproachesAlphaLimit) {
  const auto curve = frontier(std::span<const SweepRecord>(sweep(default_grid(Method::BeamSplitter))), kInf);
  const BinSpec bins;
  const double half_width_db = 10.0 * std::log10(bins.hi / bins.lo) / bins.count / 2;
  ASSERT_GT(curve.points.size(), 150u);
  for (const auto& p : curve.points) {
    const double bound = -10.0 * std::log10(p.alpha_sq_bin);
    EXPECT_LE(p.squeeze_db, bound + half_width_db + 1e-9) << p.alpha_sq_bin;
    EXPECT_GE(p.squeeze_db, bound - half_width_db - 0.05) << p.alpha_sq_bin;
  }
}

TEST(Frontier, UnitThresholdKeepsOnlySqueezedVacuum) {
  SweepGrid g = bs_grid(30, 30);
  g.axes[0].min = 0.5;
  g.axes[1] = {"theta", 0.0, std::numbers::pi / 2, 30, Spacing::Linear};
  const auto rec = sweep(g);
  BinSpec bins;
  bins.include_zero = true;
  // alpha^2 (1 - alpha^2) sinh^2 b = 0 leaves the squeezed vacuum and, at
  // theta = pi/2, the unsqueezed coherent state.
  const auto c = frontier(std::span<const SweepRecord>(rec), 1.0, bins);
  ASSERT_EQ(c.points.size(), 2u);
  EXPECT_EQ(c.points[0].alpha_sq_bin, 0.0);
  EXPECT_NEAR(c.points[0].squeeze_db, 120.0 / std::log(10.0), 1e-9);  // var_x = e^{-12}
  EXPECT_NEAR(c.points[1].alpha_sq, 1.0, 1e-15);
  EXPECT_NEAR(c.points[1].squeeze_db, 0.0, 1e-12);
  g.axes[1].max = 1.5;
  const auto inner = sweep(g);
  bins.include_zero = false;
  EXPECT_TRUE(frontier(std::span<const SweepRecord>(inner), 1.0, bins).points.empty());
}

TEST(Frontier, SuiteIsDeterministic) {
  const auto g = bs_grid(20, 30);
  const auto ts = default_thresholds();
  const auto a = frontier_suite(g, ts), b = frontier_suite(g, ts, {}, 1);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].points.size(), b[i].points.size());
    for (std::size_t k = 0; k < a[i].points.size(); ++k) {
      EXPECT_EQ(a[i].points[k].squeeze_db, b[i].points[k].squeeze_db);
      EXPECT_EQ(a[i].points[k].params, b[i].points[k].params);
    }
  }
}

TEST(Frontier, OpaSeedCapTruncatesHighBrightness) {
  SweepGrid g = default_grid(Method::OpaAmplitude);
  g.axes[0].count = 40;
  g.axes[1].count = 121;
  const std::vector<double> ts{10.0};
  const auto open = frontier_suite(g, ts);
  g.constraints.seed_input_cap = 1.0;
  const auto capped = frontier_suite(g, ts);
  ASSERT_FALSE(open[0].points.empty());
  ASSERT_FALSE(capped[0].points.empty());
  EXPECT_LT(capped[0].points.back().alpha_sq_bin, open[0].points.back().alpha_sq_bin);
  for (const auto& p : capped[0].points) EXPECT_LE(param_value(p.params, "seed_ratio"), 1.0);
}

TEST(Frontier, OptomechanicsTightThresholdFavoursBrighterOutput) {
  // With a tight uncertainty budget the dim end of the optomechanical
  // frontier squeezes less than a brighter operating point.
  SweepGrid g = default_grid(Method::OmAmplitude);
  g.constraints.heisenberg_floor = true;
  const std::vector<double> ts{1.01};
  const auto c = frontier_suite(g, ts)[0];
  ASSERT_GT(c.points.size(), 10u);
  double best = -kInf;
  for (const auto& p : c.points) best = std::max(best, p.squeeze_db);
  EXPECT_LT(c.points.front().squeeze_db, best);
  EXPECT_LT(c.points.front().alpha_sq_bin, 1e-4);
}

TEST(Frontier, MethodOrderingAtModerateBrightness) {
  const std::vector<double> ts{2.0};
  std::vector<std::vector<FrontierCurve>> curves;
  for (auto m : {Method::OpoPhase, Method::BeamSplitter, Method::OmAmplitude})
    curves.push_back(frontier_suite(default_grid(m), ts));
  const double opo = best_near(curves[0], 0, 0.1);
  const double bs = best_near(curves[1], 0, 0.1);
  const double om = best_near(curves[2], 0, 0.1);
  EXPECT_GE(opo, bs);
  EXPECT_GE(bs, om);
}
