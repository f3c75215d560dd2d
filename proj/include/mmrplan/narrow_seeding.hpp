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

#ifndef MMRPLAN_NARROW_SEEDING_HPP
#define MMRPLAN_NARROW_SEEDING_HPP

#include <vector>

#include "mmrplan/geom2d.hpp"
#include "mmrplan/rng.hpp"
#include "mmrplan/world.hpp"

namespace mmrplan {

/// Shortest connection between the boundaries of obstacles i and j.
struct GapEdge {
  int i = 0;
  int j = 0;
  Point2 p_i;
  Point2 p_j;
  double length = 0.0;

  Point2 midpoint() const { return 0.5 * (p_i + p_j); }
};

/// Midpoints of the connecting gap edges, ordered by edge length ascending.
struct SeedList {
  std::vector<Point2> points;
  std::vector<double> edge_lengths;  // parallel to points
};

/// One GapEdge per unordered obstacle pair via closest_point_pair.
std::vector<GapEdge> all_gap_edges(const std::vector<StaticObstacle>& obstacles);

/// Spanning set of shortest inter-obstacle edges: initialized from the
/// globally shortest edge, grown by each frontier obstacle's shortest
/// remaining edge; stalled frontiers are reseeded from a random unconnected
/// obstacle. Ties break on lexicographic (i, j).
std::vector<GapEdge> connect_static_obstacles(
    const std::vector<StaticObstacle>& obstacles,
    std::vector<GapEdge> edges, Rng& rng);

/// Midpoints of the connecting edges sorted by length; midpoints lying on or
/// inside any obstacle are dropped (with a note to stderr).
SeedList seed_points(const std::vector<StaticObstacle>& obstacles, Rng& rng);

/// Obstacle set used for gap detection: the statics plus one thin strip per
/// workspace-boundary face, so door-like openings against the outer walls
/// produce gap edges too.
std::vector<StaticObstacle> gap_obstacles(const World& world);

}  // namespace mmrplan

#endif  // MMRPLAN_NARROW_SEEDING_HPP
