#include <algorithm>
#include <cmath>
#include <limits>

#include "sqzlab/frontier.hpp"

namespace sqzlab {

void BinSpec::validate() const {
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi))
    throw ConfigError("bins need 0 < lo < hi");
  if (count < 1) throw ConfigError("bins need count >= 1");
}

int BinSpec::index(double alpha_sq) const {
  if (!(alpha_sq >= 0.0)) return -1;
  if (alpha_sq < lo) return include_zero ? count : -1;
  if (alpha_sq > hi) return -1;
  const double f = std::log(alpha_sq / lo) / std::log(hi / lo);
  const int k = static_cast<int>(std::floor(f * count));
  return std::min(k, count - 1);
}

double BinSpec::center(int k) const {
  if (k == count) return 0.0;
  const double step = std::log(hi / lo) / count;
  return lo * std::exp((k + 0.5) * step);
}

FrontierCurve frontier(std::span<const MethodPoint> points, double threshold, const BinSpec& bins) {
  if (points.empty()) throw ConfigError("frontier needs at least one point");
  if (!(threshold >= 1.0)) throw ConfigError("threshold must be >= 1");
  bins.validate();

  struct Best {
    bool set = false;
    double squeeze_db = 0.0;
    double uncertainty = 0.0;
    std::size_t source = 0;
  };
  std::vector<Best> best(bins.count + 1);

  for (std::size_t i = 0; i < points.size(); ++i) {
    const MethodPoint& pt = points[i];
    const int k = bins.index(pt.alpha_sq);
    if (k < 0) continue;
    const SqueezeMetrics m = squeeze_metrics(pt.stats);
    if (!(m.uncertainty <= threshold + kThresholdSlack)) continue;

    Best& b = best[k];
    bool better = !b.set || m.squeeze_db > b.squeeze_db;
    if (!better && m.squeeze_db == b.squeeze_db) {
      if (m.uncertainty < b.uncertainty)
        better = true;
      else if (m.uncertainty == b.uncertainty && pt.alpha_sq < points[b.source].alpha_sq)
        better = true;
    }
    if (better) b = {true, m.squeeze_db, m.uncertainty, i};
  }

  FrontierCurve curve;
  curve.threshold = threshold;
  auto emit = [&](int k) {
    const Best& b = best[k];
    if (!b.set) return;
    const MethodPoint& src = points[b.source];
    curve.points.push_back({bins.center(k), b.squeeze_db, b.uncertainty, src.alpha_sq, src.params});
  };
  if (bins.include_zero) emit(bins.count);
  for (int k = 0; k < bins.count; ++k) emit(k);
  return curve;
}

namespace {

std::vector<MethodPoint> ok_points(std::span<const SweepRecord> records) {
  std::vector<MethodPoint> pts;
  pts.reserve(records.size());
  for (const auto& r : records)
    if (r.ok) pts.push_back(r.point);
  return pts;
}

}  // namespace

FrontierCurve frontier(std::span<const SweepRecord> records, double threshold, const BinSpec& bins) {
  const auto pts = ok_points(records);
  return frontier(std::span<const MethodPoint>(pts), threshold, bins);
}

std::vector<FrontierCurve> frontier_suite(std::span<const SweepRecord> records,
                                          std::span<const double> thresholds,
                                          const BinSpec& bins) {
  const auto pts = ok_points(records);
  std::vector<FrontierCurve> out;
  out.reserve(thresholds.size());
  for (double t : thresholds) out.push_back(frontier(std::span<const MethodPoint>(pts), t, bins));
  return out;
}

std::vector<FrontierCurve> frontier_suite(const SweepGrid& grid, std::span<const double> thresholds,
                                          const BinSpec& bins, int threads) {
  for (double t : thresholds)
    if (!(t >= 1.0)) throw ConfigError("threshold must be >= 1");
  bins.validate();
  const auto records = sweep(grid, threads);
  return frontier_suite(std::span<const SweepRecord>(records), thresholds, bins);
}

std::vector<double> default_thresholds() { return {1.001, 1.01, 1.1, 2.0, 10.0}; }

}  // namespace sqzlab
