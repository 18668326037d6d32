#include "sqzlab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

namespace sqzlab::io {

using nlohmann::json;

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string threshold_label(double threshold) {
  return std::isinf(threshold) ? "unbounded" : format_number(threshold);
}

namespace {

void write_meta(std::ostream& os, const Metadata& meta) {
  for (const auto& [k, v] : meta) os << "# " << k << ": " << v << '\n';
}

json params_json(const ParamList& params) {
  json obj = json::object();
  for (const auto& [k, v] : params) obj[k] = v;
  return obj;
}

json param_order(const ParamList& params) {
  json arr = json::array();
  for (const auto& kv : params) arr.push_back(kv.first);
  return arr;
}

json meta_json(const Metadata& meta) {
  json obj = json::object();
  for (const auto& [k, v] : meta) obj[k] = v;
  return obj;
}

// Stats columns shared by point and sweep rows.
void write_stats(std::ostream& os, const MethodPoint& pt) {
  const SqueezeMetrics m = squeeze_metrics(pt.stats);
  os << format_number(pt.alpha_sq) << ',' << format_number(pt.stats.var_x) << ','
     << format_number(pt.stats.var_p) << ',' << format_number(m.squeeze_db) << ','
     << format_number(m.uncertainty);
}

}  // namespace

void write_point_csv(std::ostream& os, const std::string& method, const MethodPoint& pt) {
  os << "method";
  for (const auto& [k, v] : pt.params) os << ',' << k;
  os << ",alpha_sq,var_x,var_p,squeeze_db,uncertainty\n";
  os << method;
  for (const auto& [k, v] : pt.params) os << ',' << format_number(v);
  os << ',';
  write_stats(os, pt);
  os << '\n';
}

json point_to_json(const std::string& method, const MethodPoint& pt) {
  const SqueezeMetrics m = squeeze_metrics(pt.stats);
  return {{"method", method},
          {"params", params_json(pt.params)},
          {"param_order", param_order(pt.params)},
          {"alpha_sq", pt.alpha_sq},
          {"var_x", pt.stats.var_x},
          {"var_p", pt.stats.var_p},
          {"squeeze_db", m.squeeze_db},
          {"antisqueeze_db", m.antisqueeze_db},
          {"uncertainty", m.uncertainty},
          {"squeezed_axis", to_string(m.squeezed_axis)}};
}

void write_sweep_csv(std::ostream& os, const SweepGrid& grid, std::span<const SweepRecord> records,
                     const Metadata& meta) {
  write_meta(os, meta);
  const std::string method = to_string(grid.method);
  os << "method";
  for (const auto& ax : grid.axes) os << ',' << ax.name;
  os << ",alpha_sq,var_x,var_p,squeeze_db,uncertainty,status,skip_reason\n";
  for (const auto& r : records) {
    os << method;
    for (const auto& [k, v] : r.point.params) os << ',' << format_number(v);
    os << ',';
    if (r.ok)
      write_stats(os, r.point);
    else
      os << ",,,,";
    os << ',' << (r.ok ? "ok" : "skipped") << ',' << csv_field(r.skip_reason) << '\n';
  }
}

json sweep_to_json(const SweepGrid& grid, std::span<const SweepRecord> records,
                   const Metadata& meta) {
  json axes = json::array();
  for (const auto& ax : grid.axes)
    axes.push_back({{"name", ax.name},
                    {"min", ax.min},
                    {"max", ax.max},
                    {"count", ax.count},
                    {"spacing", ax.spacing == Spacing::Log ? "log" : "linear"}});
  json recs = json::array();
  const std::string method = to_string(grid.method);
  for (const auto& r : records) {
    if (r.ok) {
      json j = point_to_json(method, r.point);
      j["status"] = "ok";
      recs.push_back(std::move(j));
    } else {
      recs.push_back({{"method", method},
                      {"params", params_json(r.point.params)},
                      {"status", "skipped"},
                      {"skip_reason", r.skip_reason}});
    }
  }
  return {{"method", method},
          {"axes", axes},
          {"fixed", params_json(grid.fixed)},
          {"config", meta_json(meta)},
          {"records", recs}};
}

std::vector<MethodPoint> points_from_json(const json& doc) {
  const json& recs = doc.is_array() ? doc : doc.at("records");
  std::vector<MethodPoint> out;
  out.reserve(recs.size());
  for (const auto& r : recs) {
    if (r.value("status", std::string("ok")) != "ok") continue;
    MethodPoint pt;
    pt.alpha_sq = r.at("alpha_sq").get<double>();
    pt.stats = {r.at("var_x").get<double>(), r.at("var_p").get<double>()};
    // json objects sort their keys; param_order restores declaration order.
    if (r.contains("param_order")) {
      for (const auto& name : r.at("param_order"))
        pt.params.emplace_back(name.get<std::string>(), r.at("params").at(name.get<std::string>()));
    } else {
      for (const auto& [k, v] : r.at("params").items()) pt.params.emplace_back(k, v.get<double>());
    }
    out.push_back(std::move(pt));
  }
  return out;
}

void write_frontier_csv(std::ostream& os, std::span<const FrontierCurve> curves,
                        const Metadata& meta, const std::vector<std::string>& param_names) {
  write_meta(os, meta);
  std::vector<std::string> names = param_names;
  for (const auto& c : curves)
    for (const auto& p : c.points)
      for (const auto& [k, v] : p.params)
        if (std::find(names.begin(), names.end(), k) == names.end()) names.push_back(k);

  os << "threshold,alpha_sq_bin,squeeze_db,uncertainty,alpha_sq";
  for (const auto& n : names) os << ',' << n;
  os << '\n';
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      os << threshold_label(c.threshold) << ',' << format_number(p.alpha_sq_bin) << ','
         << format_number(p.squeeze_db) << ',' << format_number(p.uncertainty) << ','
         << format_number(p.alpha_sq);
      for (const auto& n : names) {
        os << ',';
        for (const auto& [k, v] : p.params)
          if (k == n) os << format_number(v);
      }
      os << '\n';
    }
  }
}

json frontier_to_json(const std::string& method, std::span<const FrontierCurve> curves,
                      const BinSpec& bins, const Metadata& meta) {
  json jc = json::array();
  for (const auto& c : curves) {
    json pts = json::array();
    for (const auto& p : c.points)
      pts.push_back({{"alpha_sq_bin", p.alpha_sq_bin},
                     {"squeeze_db", p.squeeze_db},
                     {"uncertainty", p.uncertainty},
                     {"alpha_sq", p.alpha_sq},
                     {"params", params_json(p.params)}});
    jc.push_back({{"threshold", std::isinf(c.threshold) ? json(nullptr) : json(c.threshold)},
                  {"points", pts}});
  }
  return {{"method", method},
          {"bins",
           {{"lo", bins.lo}, {"hi", bins.hi}, {"count", bins.count},
            {"include_zero", bins.include_zero}}},
          {"config", meta_json(meta)},
          {"curves", jc}};
}

std::string frontier_svg(const std::string& title, std::span<const FrontierCurve> curves,
                         const BinSpec& bins) {
  constexpr double width = 760, height = 480;
  constexpr double left = 80, right = 170, top = 50, bottom = 70;
  const double pw = width - left - right;
  const double ph = height - top - bottom;

  double ymax = 1.0;
  for (const auto& c : curves)
    for (const auto& p : c.points) ymax = std::max(ymax, p.squeeze_db);
  double ymin = 0.0;
  for (const auto& c : curves)
    for (const auto& p : c.points) ymin = std::min(ymin, p.squeeze_db);
  const double ystep = ymax - ymin > 40 ? 10.0 : (ymax - ymin > 12 ? 5.0 : 1.0);
  ymax = std::ceil(ymax / ystep) * ystep;
  ymin = std::floor(ymin / ystep) * ystep;

  const double lx0 = std::log10(bins.lo);
  const double lx1 = std::log10(bins.hi);
  auto sx = [&](double a2) {
    // The zero bin, if present, is pinned to the left edge.
    const double lx = a2 > 0.0 ? std::log10(a2) : lx0;
    return left + (lx - lx0) / (lx1 - lx0) * pw;
  };
  auto sy = [&](double db) { return top + (ymax - db) / (ymax - ymin) * ph; };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << left + pw / 2 << "\" y=\"28\" font-size=\"16\" text-anchor=\"middle\">"
     << title << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int d = static_cast<int>(std::ceil(lx0)); d <= static_cast<int>(std::floor(lx1)); ++d) {
    const double x = sx(std::pow(10.0, d));
    os << "<line x1=\"" << x << "\" y1=\"" << top + ph << "\" x2=\"" << x << "\" y2=\""
       << top + ph + 6 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << x << "\" y=\"" << top + ph + 22
       << "\" font-size=\"12\" text-anchor=\"middle\">1e" << d << "</text>\n";
  }
  for (double v = ymin; v <= ymax + 1e-9; v += ystep) {
    const double y = sy(v);
    os << "<line x1=\"" << left - 6 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\"" << y
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left - 10 << "\" y=\"" << y + 4
       << "\" font-size=\"12\" text-anchor=\"end\">" << format_number(v) << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 20
     << "\" font-size=\"14\" text-anchor=\"middle\">relative squared output displacement "
        "α²</text>\n";
  os << "<text x=\"22\" y=\"" << top + ph / 2 << "\" font-size=\"14\" text-anchor=\"middle\" "
     << "transform=\"rotate(-90 22 " << top + ph / 2 << ")\">squeezing (dB)</text>\n";

  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    const char* color = palette[i % std::size(palette)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < c.points.size(); ++k) {
      if (k) os << ' ';
      os << format_number(sx(c.points[k].alpha_sq_bin)) << ','
         << format_number(sy(c.points[k].squeeze_db));
    }
    os << "\"/>\n";
    const double ly = top + 16 + 20 * static_cast<double>(i);
    os << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 36
       << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << left + pw + 42 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
       << "ΔXΔP ≤ " << threshold_label(c.threshold) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_trajectory_csv(std::ostream& os, const OpaTrajectory& traj, int samples,
                          const Metadata& meta) {
  write_meta(os, meta);
  os << "t,a_s,a_p,var_x_s,var_p_s,uncertainty\n";
  const int n = std::max(2, samples);
  for (int i = 0; i < n; ++i) {
    const double t = traj.params.t_max * i / (n - 1);
    const MethodPoint pt = traj.sample(t);
    const MeanField f = opa_mean_field(traj.params, t);
    os << format_number(t) << ',' << format_number(f.a_s) << ',' << format_number(f.a_p) << ','
       << format_number(pt.stats.var_x) << ',' << format_number(pt.stats.var_p) << ','
       << format_number(uncertainty(pt.stats)) << '\n';
  }
}

}  // namespace sqzlab::io
