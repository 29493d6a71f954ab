#include "trajgan/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace trajgan {

namespace {

// Legend colors follow the usual scene-plot convention: ego blue, target
// agent red, other agents green, ground truth orange, prediction purple,
// goal points brown.
const char* kAgentColor = "#d62728";
const char* kAvColor = "#1f77b4";
const char* kOtherColor = "#2ca02c";
const char* kTruthColor = "#ff7f0e";
const char* kPredColor = "#9467bd";
const char* kGoalColor = "#8c564b";
const char* kMapFill = "#e8e8e8";
const char* kMapEdge = "#c4c4c4";

struct Mapper {
  double min_x = 0.0, max_y = 0.0, scale = 8.0, margin = 20.0;

  double x(Vec2 p) const { return (p.x - min_x) * scale + margin; }
  double y(Vec2 p) const { return (max_y - p.y) * scale + margin; }

  std::string pt(Vec2 p) const {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f,%.2f", x(p), y(p));
    return buf;
  }

  std::string num(double v) const {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
  }
};

std::string color_for(Role role) {
  switch (role) {
    case Role::kAgent: return kAgentColor;
    case Role::kAv: return kAvColor;
    case Role::kOther: return kOtherColor;
  }
  return kOtherColor;
}

}  // namespace

std::string render_scene_svg(const Scene& scene,
                             const SceneRenderOptions& options) {
  double min_x = 1e18, min_y = 1e18, max_x = -1e18, max_y = -1e18;
  auto grow = [&](Vec2 p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  };
  for (const auto& poly : scene.map->polygons) {
    for (const auto& v : poly) grow(v);
  }
  for (const auto& track : scene.tracks) {
    for (const auto& p : track.positions) grow({p.x, p.y});
  }
  for (const auto& p : options.prediction) grow(p);
  for (const auto& p : options.target_points) grow(p);
  min_x -= 4.0;
  min_y -= 4.0;
  max_x += 4.0;
  max_y += 4.0;

  Mapper m;
  m.min_x = min_x;
  m.max_y = max_y;
  const double width = (max_x - min_x) * m.scale + 2.0 * m.margin;
  const double height = (max_y - min_y) * m.scale + 2.0 * m.margin;

  std::ostringstream os;
  char head[160];
  std::snprintf(head, sizeof(head),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" "
                "height=\"%.0f\">\n",
                width, height);
  os << head;

  for (const auto& poly : scene.map->polygons) {
    os << "  <polygon points=\"";
    for (std::size_t i = 0; i < poly.size(); ++i) {
      if (i) os << ' ';
      os << m.pt(poly[i]);
    }
    os << "\" fill=\"" << kMapFill << "\" stroke=\"" << kMapEdge << "\"/>\n";
  }

  // One polyline per track: the observed part, marker at the current
  // (last observed) position.
  for (const auto& track : scene.tracks) {
    std::vector<Vec2> observed;
    for (const auto& p : track.positions) {
      if (p.frame < scene.t_obs) observed.push_back({p.x, p.y});
    }
    if (observed.empty()) {
      observed.push_back({track.positions.front().x,
                          track.positions.front().y});
    }
    os << "  <polyline points=\"";
    for (std::size_t i = 0; i < observed.size(); ++i) {
      if (i) os << ' ';
      os << m.pt(observed[i]);
    }
    os << "\" fill=\"none\" stroke=\"" << color_for(track.role)
       << "\" stroke-width=\"2\"/>\n";
    os << "  <rect x=\"" << m.num(m.x(observed.back()) - 2.5) << "\" y=\""
       << m.num(m.y(observed.back()) - 2.5)
       << "\" width=\"5\" height=\"5\" fill=\"" << color_for(track.role)
       << "\"/>\n";
  }

  if (options.draw_ground_truth) {
    const auto& agent = scene.agent();
    std::vector<Vec2> future;
    for (const auto& p : agent.positions) {
      if (p.frame >= scene.t_obs) future.push_back({p.x, p.y});
    }
    if (!future.empty()) {
      os << "  <path d=\"M " << m.pt(future.front());
      for (std::size_t i = 1; i < future.size(); ++i) {
        os << " L " << m.pt(future[i]);
      }
      os << "\" fill=\"none\" stroke=\"" << kTruthColor
         << "\" stroke-width=\"2\"/>\n";
    }
  }

  if (!options.prediction.empty()) {
    os << "  <path d=\"M " << m.pt(options.prediction.front());
    for (std::size_t i = 1; i < options.prediction.size(); ++i) {
      os << " L " << m.pt(options.prediction[i]);
    }
    os << "\" fill=\"none\" stroke=\"" << kPredColor
       << "\" stroke-width=\"2\" stroke-dasharray=\"4,3\"/>\n";
  }

  for (const auto& p : options.target_points) {
    os << "  <circle cx=\"" << m.num(m.x(p)) << "\" cy=\"" << m.num(m.y(p))
       << "\" r=\"2.5\" fill=\"" << kGoalColor << "\"/>\n";
  }

  os << "</svg>\n";
  return os.str();
}

std::string render_boxplot_svg(const std::string& title,
                               const std::string& unit,
                               const std::vector<BoxplotSeries>& series) {
  const double width = 120.0 + 90.0 * static_cast<double>(series.size());
  const double height = 260.0;
  const double plot_top = 40.0, plot_bottom = 220.0;

  double max_v = 0.0;
  for (const auto& s : series) max_v = std::max(max_v, s.stats.q3 * 1.3);
  if (max_v <= 0.0) max_v = 1.0;
  auto y_of = [&](double v) {
    return plot_bottom - (v / max_v) * (plot_bottom - plot_top);
  };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width)
     << "\" height=\"" << num(height) << "\">\n";
  os << "  <text x=\"10\" y=\"20\" font-size=\"14\">" << title << " ["
     << unit << "]</text>\n";
  os << "  <line x1=\"50\" y1=\"" << num(plot_top) << "\" x2=\"50\" y2=\""
     << num(plot_bottom) << "\" stroke=\"#444444\"/>\n";
  os << "  <line x1=\"50\" y1=\"" << num(plot_bottom) << "\" x2=\""
     << num(width - 20.0) << "\" y2=\"" << num(plot_bottom)
     << "\" stroke=\"#444444\"/>\n";

  double x = 90.0;
  for (const auto& s : series) {
    const double box_w = 46.0;
    os << "  <rect x=\"" << num(x) << "\" y=\"" << num(y_of(s.stats.q3))
       << "\" width=\"" << num(box_w) << "\" height=\""
       << num(y_of(s.stats.q1) - y_of(s.stats.q3))
       << "\" fill=\"#9ecae1\" stroke=\"#333333\"/>\n";
    os << "  <line x1=\"" << num(x) << "\" y1=\"" << num(y_of(s.stats.median))
       << "\" x2=\"" << num(x + box_w) << "\" y2=\""
       << num(y_of(s.stats.median))
       << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
    os << "  <text x=\"" << num(x) << "\" y=\"" << num(plot_bottom + 16.0)
       << "\" font-size=\"12\">" << s.label << " (n=" << s.stats.count
       << ")</text>\n";
    os << "  <text x=\"" << num(x) << "\" y=\""
       << num(y_of(s.stats.median) - 6.0) << "\" font-size=\"10\">"
       << num(s.stats.median) << "</text>\n";
    x += 90.0;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace trajgan
