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

#ifndef MMRPLAN_SVG_HPP
#define MMRPLAN_SVG_HPP

#include <string>
#include <vector>

#include "mmrplan/global_planner.hpp"
#include "mmrplan/sim_harness.hpp"
#include "mmrplan/world.hpp"

namespace mmrplan {

/// Tiny SVG canvas with a y-up world-to-screen mapping.
class SvgCanvas {
 public:
  SvgCanvas(double min_x, double min_y, double max_x, double max_y,
            double pixels_per_meter = 60.0);

  void polygon(const std::vector<Point2>& pts, const std::string& fill,
               const std::string& stroke, double stroke_width = 1.0,
               double fill_opacity = 1.0);
  void circle(const Point2& center, double radius, const std::string& fill,
              const std::string& stroke, double fill_opacity = 1.0);
  void polyline(const std::vector<Point2>& pts, const std::string& stroke,
                double width = 1.5, const std::string& dash = "");
  void line(const Point2& a, const Point2& b, const std::string& stroke,
            double width = 1.5);
  void text(const Point2& at, const std::string& s, double size_px = 12.0);
  void comment(const std::string& s);

  std::string finish() const;

 private:
  double sx(double x) const;
  double sy(double y) const;
  double min_x_, min_y_, max_x_, max_y_, scale_;
  double width_, height_;
  std::string body_;
};

std::string render_plan_svg(const World& world, const GlobalPlan& plan);
std::string render_snapshot_svg(const World& world, const GlobalPlan& plan,
                                const SimLog& log, double t);
std::string render_margin_svg(const SimLog& log, const PlannerParams& params);

}  // namespace mmrplan

#endif  // MMRPLAN_SVG_HPP
