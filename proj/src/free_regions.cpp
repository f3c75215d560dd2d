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

#include "mmrplan/free_regions.hpp"

#include <iostream>

#include "mmrplan/narrow_seeding.hpp"

namespace mmrplan {

namespace {
constexpr int kMaxRounds = 20;
constexpr double kCenterMoveTol = 1e-4;
constexpr int kCoverageSamples = 10000;
constexpr int kSeedAttempts = 500;

std::vector<Halfspace> separators_at(
    const Point2& center, const std::vector<StaticObstacle>& obstacles) {
  std::vector<Halfspace> hs;
  hs.reserve(obstacles.size());
  for (const auto& o : obstacles) {
    const Point2 q = closest_point_on_convex(o.shape, center);
    Vec2 n = q - center;
    const double len = n.norm();
    if (len < 1e-12) continue;  // center on the obstacle; no valid separator
    n /= len;
    hs.push_back(Halfspace{n, n.dot(q)});
  }
  return hs;
}

}  // namespace

bool RegionSet::any_contains(const Point2& p, double slack) const {
  for (const auto& r : regions)
    if (r.contains(p, slack)) return true;
  return false;
}

ConvexRegion inflate_region(const Point2& seed,
                            const std::vector<StaticObstacle>& obstacles,
                            const ConvexRegion& bounds) {
  if (!bounds.contains(seed, 0.0))
    throw SeedBlocked("inflate_region: seed outside the workspace bounds");
  for (const auto& o : obstacles)
    if (convex_contains(o.shape, seed, 1e-12))
      throw SeedBlocked("inflate_region: seed inside an obstacle");

  auto region_at = [&](const Point2& center) {
    std::vector<Halfspace> hs = separators_at(center, obstacles);
    hs.insert(hs.end(), bounds.halfspaces().begin(),
              bounds.halfspaces().end());
    return hs;
  };

  Point2 center = seed;
  std::vector<Halfspace> best_hs = region_at(center);
  for (int round = 0; round < kMaxRounds; ++round) {
    const std::vector<Halfspace> hs = region_at(center);
    const ChebyshevResult ch = chebyshev_center(hs);
    if (ch.radius <= 0.0) break;
    // Resolve degenerate recentering (a whole face of centers attains the
    // maximal inscribed radius, e.g. along a door axis) to the incumbent:
    // a center that is already optimal stays put.
    double incumbent_radius = std::numeric_limits<double>::infinity();
    for (const auto& h : hs)
      incumbent_radius =
          std::min(incumbent_radius, h.offset - h.normal.dot(center));
    const Point2 next =
        incumbent_radius >= ch.radius - 1e-9 ? center : ch.center;
    // Keep only centers whose separator set still covers the seed.
    const std::vector<Halfspace> cand = region_at(next);
    bool seed_ok = true;
    for (const auto& h : cand)
      if (h.normal.dot(seed) > h.offset + 1e-9) seed_ok = false;
    if (!seed_ok) break;
    best_hs = cand;
    const double moved = (next - center).norm();
    center = next;
    if (moved < kCenterMoveTol) break;
  }
  return ConvexRegion::from_halfspaces(best_hs);
}

RegionSet build_region_set(const World& world, Rng& rng,
                           double coverage_target, int max_regions) {
  RegionSet set;

  // Fixed evaluation sample set over W_free keeps the coverage estimate
  // monotone as regions are appended.
  const Eigen::AlignedBox2d box = world.bounds.bounding_box();
  std::vector<Point2> free_samples;
  free_samples.reserve(kCoverageSamples);
  while (free_samples.size() < kCoverageSamples) {
    const Point2 p(rng.uniform(box.min().x(), box.max().x()),
                   rng.uniform(box.min().y(), box.max().y()));
    if (world.in_free_space(p, 0.0)) free_samples.push_back(p);
  }
  auto coverage_of = [&free_samples](const RegionSet& s) {
    size_t hit = 0;
    for (const auto& p : free_samples)
      if (s.any_contains(p, 0.0)) ++hit;
    return static_cast<double>(hit) / static_cast<double>(free_samples.size());
  };

  // Phase 1: targeted narrow-gap seeds, shortest gaps first.
  const SeedList seeds = seed_points(gap_obstacles(world), rng);
  for (const auto& seed : seeds.points) {
    if (static_cast<int>(set.regions.size()) >= max_regions) break;
    if (set.any_contains(seed, 0.0)) continue;  // already explored
    if (!world.in_free_space(seed, 0.0)) continue;
    set.regions.push_back(inflate_region(seed, world.statics, world.bounds));
    set.provenance.push_back(RegionProvenance::kTargetedSeed);
    set.coverage = coverage_of(set);
    if (set.coverage >= coverage_target) {
      set.coverage_reached = true;
      return set;
    }
  }

  // Phase 2: uniform random seeds in the unexplored free space.
  while (static_cast<int>(set.regions.size()) < max_regions) {
    std::optional<Point2> seed;
    for (int attempt = 0; attempt < kSeedAttempts; ++attempt) {
      const Point2 p(rng.uniform(box.min().x(), box.max().x()),
                     rng.uniform(box.min().y(), box.max().y()));
      if (world.in_free_space(p, 1e-6) && !set.any_contains(p, 0.0)) {
        seed = p;
        break;
      }
    }
    if (!seed) {  // nothing left to explore
      set.coverage_reached = set.coverage >= coverage_target;
      return set;
    }
    set.regions.push_back(inflate_region(*seed, world.statics, world.bounds));
    set.provenance.push_back(RegionProvenance::kRandomSeed);
    set.coverage = coverage_of(set);
    if (set.coverage >= coverage_target) {
      set.coverage_reached = true;
      return set;
    }
  }
  set.coverage_reached = set.coverage >= coverage_target;
  if (!set.coverage_reached)
    std::cerr << "build_region_set: max_regions reached at coverage "
              << set.coverage << "\n";
  return set;
}

}  // namespace mmrplan
