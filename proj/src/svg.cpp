// Copyright 2026 The mmrplan Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     https://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mmrplan/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace mmrplan {

namespace {
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}
}  // namespace

SvgCanvas::SvgCanvas(double min_x, double min_y, double max_x, double max_y,
                     double pixels_per_meter)
    : min_x_(min_x), min_y_(min_y), max_x_(max_x), max_y_(max_y),
      scale_(pixels_per_meter) {
  width_ = (max_x_ - min_x_) * scale_;
  height_ = (max_y_ - min_y_) * scale_;
}

double SvgCanvas::sx(double x) const { return (x - min_x_) * scale_; }
double SvgCanvas::sy(double y) const { return (max_y_ - y) * scale_; }

void SvgCanvas::polygon(const std::vector<Point2>& pts,
                        const std::string& fill, const std::string& stroke,
                        double stroke_width, double fill_opacity) {
  std::ostringstream s;
  s << "<polygon points=\"";
  for (const auto& p : pts) s << num(sx(p.x())) << "," << num(sy(p.y())) << " ";
  s << "\" fill=\"" << fill << "\" fill-opacity=\"" << fill_opacity
    << "\" stroke=\"" << stroke << "\" stroke-width=\"" << stroke_width
    << "\"/>\n";
  body_ += s.str();
}

void SvgCanvas::circle(const Point2& center, double radius,
                       const std::string& fill, const std::string& stroke,
                       double fill_opacity) {
  std::ostringstream s;
  s << "<circle cx=\"" << num(sx(center.x())) << "\" cy=\""
    << num(sy(center.y())) << "\" r=\"" << num(radius * scale_)
    << "\" fill=\"" << fill << "\" fill-opacity=\"" << fill_opacity
    << "\" stroke=\"" << stroke << "\"/>\n";
  body_ += s.str();
}

void SvgCanvas::polyline(const std::vector<Point2>& pts,
                         const std::string& stroke, double width,
                         const std::string& dash) {
  std::ostringstream s;
  s << "<polyline points=\"";
  for (const auto& p : pts) s << num(sx(p.x())) << "," << num(sy(p.y())) << " ";
  s << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << width
    << "\"";
  if (!dash.empty()) s << " stroke-dasharray=\"" << dash << "\"";
  s << "/>\n";
  body_ += s.str();
}

void SvgCanvas::line(const Point2& a, const Point2& b,
                     const std::string& stroke, double width) {
  std::ostringstream s;
  s << "<line x1=\"" << num(sx(a.x())) << "\" y1=\"" << num(sy(a.y()))
    << "\" x2=\"" << num(sx(b.x())) << "\" y2=\"" << num(sy(b.y()))
    << "\" stroke=\"" << stroke << "\" stroke-width=\"" << width << "\"/>\n";
  body_ += s.str();
}

void SvgCanvas::text(const Point2& at, const std::string& s, double size_px) {
  std::ostringstream o;
  o << "<text x=\"" << num(sx(at.x())) << "\" y=\"" << num(sy(at.y()))
    << "\" font-size=\"" << size_px << "\" font-family=\"sans-serif\">" << s
    << "</text>\n";
  body_ += o.str();
}

void SvgCanvas::comment(const std::string& s) {
  body_ += "<!-- " + s + " -->\n";
}

std::string SvgCanvas::finish() const {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width_)
    << "\" height=\"" << num(height_) << "\" viewBox=\"0 0 " << num(width_)
    << " " << num(height_) << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << body_ << "</svg>\n";
  return s.str();
}

namespace {

SvgCanvas world_canvas(const World& world) {
  const auto box = world.bounds.bounding_box();
  const double pad = 0.5;
  return SvgCanvas(box.min().x() - pad, box.min().y() - pad,
                   box.max().x() + pad, box.max().y() + pad);
}

void draw_world(SvgCanvas& svg, const World& world) {
  svg.polygon(world.bounds.vertices(), "none", "black", 2.0);
  for (const auto& o : world.statics)
    svg.polygon(o.shape, "#9a9a9a", "#666666", 1.0);
}

void draw_regions(SvgCanvas& svg, const RegionSet& regions) {
  for (const auto& r : regions.regions)
    svg.polygon(r.vertices(), "#7ac87a", "#3a7a3a", 1.0, 0.18);
}

void draw_formation(SvgCanvas& svg, const World& world,
                    const FormationConfig& c) {
  const Eigen::Rotation2Dd rot(c.psi);
  std::vector<Point2> obj;
  for (const auto& v : world.formation.grasp.object_footprint)
    obj.push_back(c.p + rot * v);
  svg.polygon(obj, "#9fd3f0", "#20607d", 1.0, 0.9);
  for (const auto& r : c.robots) {
    const Eigen::Rotation2Dd rb(r.phi);
    std::vector<Point2> base;
    for (const auto& v : world.formation.base.footprint)
      base.push_back(r.p + rb * v);
    svg.polygon(base, "#4f7bd9", "#1b3a7a", 1.0, 0.9);
    svg.line(r.p, ee_position(r), "#c03030", 2.0);
  }
}

}  // namespace

std::string render_plan_svg(const World& world, const GlobalPlan& plan) {
  SvgCanvas svg = world_canvas(world);
  svg.comment("scenario_hash=" + std::to_string(plan.scenario_hash) +
              " seed=" + std::to_string(plan.seed));
  draw_world(svg, world);
  draw_regions(svg, plan.regions);
  for (size_t i = 0; i < plan.seeds.points.size(); ++i) {
    svg.circle(plan.seeds.points[i], 0.06, "#d07000", "#804000");
    svg.text(plan.seeds.points[i] + Vec2(0.1, 0.1), std::to_string(i + 1));
  }
  for (const auto& e : plan.graph.edges)
    svg.line(plan.graph.nodes[e.a].config.p, plan.graph.nodes[e.b].config.p,
             "#bbbbbb", 0.8);
  std::vector<Point2> path_pts;
  for (int id : plan.path) path_pts.push_back(plan.graph.nodes[id].config.p);
  svg.polyline(path_pts, "black", 2.5);
  std::vector<Point2> smooth;
  for (double t = 0.0; t <= plan.ref.total_time(); t += 0.25)
    smooth.push_back(plan.ref.position(t));
  smooth.push_back(plan.ref.position(plan.ref.total_time()));
  svg.polyline(smooth, "#6020a0", 1.5, "6,4");
  for (int id : plan.path) draw_formation(svg, world, plan.graph.nodes[id].config);
  svg.circle(world.start, 0.08, "green", "darkgreen");
  svg.circle(world.goal, 0.08, "red", "darkred");
  return svg.finish();
}

std::string render_snapshot_svg(const World& world, const GlobalPlan& plan,
                                const SimLog& log, double t) {
  SvgCanvas svg = world_canvas(world);
  svg.comment("scenario_hash=" + std::to_string(plan.scenario_hash) +
              " seed=" + std::to_string(log.seed) +
              " t=" + std::to_string(t));
  draw_world(svg, world);
  draw_regions(svg, plan.regions);
  std::vector<Point2> smooth;
  for (double s = 0.0; s <= plan.ref.total_time(); s += 0.25)
    smooth.push_back(plan.ref.position(s));
  svg.polyline(smooth, "#6020a0", 1.0, "6,4");

  // Closest logged step to the requested time.
  size_t best = 0;
  for (size_t i = 1; i < log.steps.size(); ++i)
    if (std::abs(log.steps[i].t - t) < std::abs(log.steps[best].t - t))
      best = i;
  const SimStep& stp = log.steps[best];
  std::vector<Point2> trace;
  for (size_t i = 0; i <= best; ++i) trace.push_back(log.steps[i].config.p);
  svg.polyline(trace, "#202020", 1.2);
  draw_formation(svg, world, stp.config);
  for (const auto& d : world.dynamics) {
    const Point2 pos = dynamic_state(d, stp.t).position;
    svg.circle(pos, d.radius, "#e05050", "#902020", 0.8);
  }
  svg.text(Point2(world.bounds.bounding_box().min().x() + 0.1,
                  world.bounds.bounding_box().max().y() - 0.2),
           "t = " + std::to_string(stp.t) + " s");
  return svg.finish();
}

std::string render_margin_svg(const SimLog& log, const PlannerParams& params) {
  if (log.steps.empty()) return "<svg/>";
  const double t_max = std::max(log.steps.back().t, 1e-9);
  double m_max = 0.0;
  for (const auto& s : log.steps) {
    m_max = std::max(m_max, s.static_margin);
    for (double d : s.dyn_margins) m_max = std::max(m_max, d);
  }
  m_max = std::min(std::max(m_max, 0.2), 3.0);
  SvgCanvas svg(0.0, -0.05, t_max, m_max, 700.0 / t_max);
  svg.comment("scenario_hash=" + std::to_string(log.scenario_hash) +
              " seed=" + std::to_string(log.seed));
  // Axes and safety reference lines.
  svg.line(Point2(0, 0), Point2(t_max, 0), "black", 1.0);
  svg.line(Point2(0, -0.05), Point2(0, m_max), "black", 1.0);
  svg.line(Point2(0, params.d_safe), Point2(t_max, params.d_safe), "#808080",
           1.0);
  svg.text(Point2(0.2, params.d_safe + 0.02), "d_safe");
  svg.line(Point2(0, params.d_safe_dyn), Point2(t_max, params.d_safe_dyn),
           "#b06060", 1.0);
  svg.text(Point2(0.2, params.d_safe_dyn + 0.02), "d_safe_dyn");

  std::vector<Point2> stat;
  for (const auto& s : log.steps)
    stat.push_back(Point2(s.t, std::min(s.static_margin, m_max)));
  svg.polyline(stat, "#2060c0", 1.5);
  const char* colors[] = {"#c03030", "#c08030", "#8030c0", "#30c0a0"};
  for (size_t d = 0; d < log.dyn_count; ++d) {
    std::vector<Point2> dyn;
    for (const auto& s : log.steps)
      dyn.push_back(Point2(s.t, std::min(s.dyn_margins[d], m_max)));
    svg.polyline(dyn, colors[d % 4], 1.5);
  }
  return svg.finish();
}

}  // namespace mmrplan
