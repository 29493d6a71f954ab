#include "trajgan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "trajgan/error.hpp"

namespace trajgan {

double ade(const std::vector<Vec2>& y_hat, const std::vector<Vec2>& y) {
  if (y_hat.size() != y.size() || y.empty()) {
    throw DimensionError("ade: trajectories must have equal nonzero length");
  }
  double s = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    s += (y_hat[t] - y[t]).norm();
  }
  return s / static_cast<double>(y.size());
}

double fde(const std::vector<Vec2>& y_hat, const std::vector<Vec2>& y) {
  if (y_hat.size() != y.size() || y.empty()) {
    throw DimensionError("fde: trajectories must have equal nonzero length");
  }
  return (y_hat.back() - y.back()).norm();
}

std::vector<Vec2> constant_velocity_baseline(const Scene& scene) {
  const auto& agent = scene.agent();
  const Vec2 last = agent.at_frame_replicated(scene.t_obs - 1);
  const Vec2 prev = agent.at_frame_replicated(scene.t_obs - 2);
  const Vec2 delta = last - prev;
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(scene.t_pred));
  for (int t = 1; t <= scene.t_pred; ++t) {
    out.push_back(last + delta * static_cast<double>(t));
  }
  return out;
}

std::vector<Vec2> ground_truth_future(const Scene& scene) {
  if (!scene.has_future()) {
    throw DataError("scene " + scene.scene_id + " has no ground-truth future");
  }
  const auto& agent = scene.agent();
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(scene.t_pred));
  for (int f = scene.t_obs; f < scene.horizon(); ++f) {
    out.push_back(agent.at_frame_replicated(f));
  }
  return out;
}

Aggregate aggregate_values(std::vector<double> values) {
  Aggregate agg;
  agg.count = values.size();
  if (values.empty()) return agg;
  double s = 0.0;
  for (double v : values) s += v;
  agg.mean = s / static_cast<double>(values.size());
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
  };
  agg.q1 = quantile(0.25);
  agg.median = quantile(0.5);
  agg.q3 = quantile(0.75);
  return agg;
}

EvalReport make_report(std::vector<EvalRow> rows) {
  EvalReport report;
  std::vector<double> s_ade, s_fde, c_ade, c_fde, all_ade, all_fde;
  for (const auto& row : rows) {
    all_ade.push_back(row.ade);
    all_fde.push_back(row.fde);
    if (row.label == Curvature::kStraight) {
      s_ade.push_back(row.ade);
      s_fde.push_back(row.fde);
    } else {
      c_ade.push_back(row.ade);
      c_fde.push_back(row.fde);
    }
  }
  if (!s_ade.empty()) {
    report.straight_ade = aggregate_values(std::move(s_ade));
    report.straight_fde = aggregate_values(std::move(s_fde));
  }
  if (!c_ade.empty()) {
    report.curve_ade = aggregate_values(std::move(c_ade));
    report.curve_fde = aggregate_values(std::move(c_fde));
  }
  report.overall_ade = aggregate_values(std::move(all_ade));
  report.overall_fde = aggregate_values(std::move(all_fde));
  report.rows = std::move(rows);
  return report;
}

void write_report_csv(const std::string& path, const EvalReport& report) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw DataError("cannot open report for writing: " + path);
  // Published full-benchmark reference, far outside desk scale; kept as
  // context only, not comparable to the numbers below.
  os << "# reference_full_scale_argoverse: ade=1.67 fde=3.82 (k=1)\n";
  os << "scene_id,label,ade,fde\n";
  for (const auto& row : report.rows) {
    os << row.scene_id << ',' << curvature_name(row.label) << ','
       << format_double(row.ade) << ',' << format_double(row.fde) << '\n';
  }
  if (!os) throw DataError("write failed: " + path);
}

namespace {

void write_aggregate(std::ostream& os, const char* name, const Aggregate& ade,
                     const Aggregate& fde, bool trailing_comma) {
  os << "    \"" << name << "\": {\"count\": " << ade.count
     << ", \"ade\": {\"mean\": " << format_double(ade.mean)
     << ", \"q1\": " << format_double(ade.q1)
     << ", \"median\": " << format_double(ade.median)
     << ", \"q3\": " << format_double(ade.q3) << "}"
     << ", \"fde\": {\"mean\": " << format_double(fde.mean)
     << ", \"q1\": " << format_double(fde.q1)
     << ", \"median\": " << format_double(fde.median)
     << ", \"q3\": " << format_double(fde.q3) << "}}"
     << (trailing_comma ? ",\n" : "\n");
}

}  // namespace

void write_report_json(const std::string& path, const EvalReport& report) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw DataError("cannot open report for writing: " + path);
  os << "{\n";
  os << "  \"reference_full_scale_argoverse\": {\"ade\": 1.67, \"fde\": 3.82},\n";
  if (!report.straight_ade) {
    os << "  \"note\": \"straight class absent, aggregate omitted\",\n";
  } else if (!report.curve_ade) {
    os << "  \"note\": \"curve class absent, aggregate omitted\",\n";
  }
  os << "  \"classes\": {\n";
  if (report.straight_ade) {
    write_aggregate(os, "straight", *report.straight_ade, *report.straight_fde,
                    report.curve_ade.has_value());
  }
  if (report.curve_ade) {
    write_aggregate(os, "curve", *report.curve_ade, *report.curve_fde, false);
  }
  os << "  },\n";
  os << "  \"overall\": {\n";
  write_aggregate(os, "all", report.overall_ade, report.overall_fde, false);
  os << "  }\n}\n";
  if (!os) throw DataError("write failed: " + path);
}

}  // namespace trajgan
