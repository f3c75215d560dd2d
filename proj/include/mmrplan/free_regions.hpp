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

#ifndef MMRPLAN_FREE_REGIONS_HPP
#define MMRPLAN_FREE_REGIONS_HPP

#include <vector>

#include "mmrplan/geom2d.hpp"
#include "mmrplan/rng.hpp"
#include "mmrplan/world.hpp"

namespace mmrplan {

struct SeedBlocked : std::runtime_error {
  explicit SeedBlocked(const std::string& what) : std::runtime_error(what) {}
};

enum class RegionProvenance { kTargetedSeed, kRandomSeed };

struct RegionSet {
  std::vector<ConvexRegion> regions;
  std::vector<RegionProvenance> provenance;  // parallel to regions
  double coverage = 0.0;
  bool coverage_reached = false;

  bool any_contains(const Point2& p, double slack = 0.0) const;
};

/// Grows an obstacle-free convex region around the seed: alternately place
/// one separating halfspace per obstacle through the obstacle point closest
/// to the current center, then recenter at the Chebyshev center of the
/// halfspaces intersected with the workspace bounds. Stops when the center
/// moves < 1e-4 m or after 20 rounds. The result always contains the seed.
ConvexRegion inflate_region(const Point2& seed,
                            const std::vector<StaticObstacle>& obstacles,
                            const ConvexRegion& bounds);

/// Phase 1 inflates the targeted seeds in order (skipping seeds already
/// covered by an earlier region); phase 2 draws uniform seeds from the
/// unexplored free space until the Monte-Carlo coverage estimate reaches
/// the target or max_regions is hit (flagged, not thrown).
RegionSet build_region_set(const World& world, Rng& rng,
                           double coverage_target, int max_regions);

}  // namespace mmrplan

#endif  // MMRPLAN_FREE_REGIONS_HPP
