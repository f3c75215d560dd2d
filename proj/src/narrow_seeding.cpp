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

#include "mmrplan/narrow_seeding.hpp"

#include <algorithm>
#include <iostream>
#include <set>

namespace mmrplan {

namespace {

bool edge_less(const GapEdge& a, const GapEdge& b) {
  if (a.length != b.length) return a.length < b.length;
  if (a.i != b.i) return a.i < b.i;
  return a.j < b.j;
}

}  // namespace

std::vector<GapEdge> all_gap_edges(
    const std::vector<StaticObstacle>& obstacles) {
  std::vector<GapEdge> edges;
  const size_t n = obstacles.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const ClosestPair cp =
          closest_point_pair(obstacles[i].shape, obstacles[j].shape);
      edges.push_back(GapEdge{obstacles[i].id, obstacles[j].id, cp.on_a,
                              cp.on_b, cp.dist});
    }
  }
  return edges;
}

std::vector<GapEdge> connect_static_obstacles(
    const std::vector<StaticObstacle>& obstacles, std::vector<GapEdge> edges,
    Rng& rng) {
  if (obstacles.size() < 2 || edges.empty()) return {};
  std::vector<GapEdge> connected;
  std::set<int> all_ids;
  for (const auto& o : obstacles) all_ids.insert(o.id);

  auto take_shortest = [&edges](auto&& pred) -> std::optional<GapEdge> {
    auto best = edges.end();
    for (auto it = edges.begin(); it != edges.end(); ++it)
      if (pred(*it) && (best == edges.end() || edge_less(*it, *best)))
        best = it;
    if (best == edges.end()) return std::nullopt;
    GapEdge e = *best;
    edges.erase(best);
    return e;
  };

  const GapEdge first = *take_shortest([](const GapEdge&) { return true; });
  connected.push_back(first);
  std::set<int> linked{first.i, first.j};
  std::vector<int> frontier{std::min(first.i, first.j),
                            std::max(first.i, first.j)};

  while (!frontier.empty()) {
    std::vector<int> found;
    for (int id : frontier) {
      auto e = take_shortest(
          [id](const GapEdge& g) { return g.i == id || g.j == id; });
      if (!e) continue;
      connected.push_back(*e);
      found.push_back(e->i == id ? e->j : e->i);
    }
    frontier.clear();
    for (int id : found)
      if (!linked.count(id)) frontier.push_back(id);
    std::sort(frontier.begin(), frontier.end());
    frontier.erase(std::unique(frontier.begin(), frontier.end()),
                   frontier.end());
    if (!frontier.empty()) {
      for (int id : frontier) linked.insert(id);
    } else {
      std::vector<int> remaining;
      for (int id : all_ids)
        if (!linked.count(id)) remaining.push_back(id);
      if (!remaining.empty()) {
        const int pick = remaining[rng.index(remaining.size())];
        linked.insert(pick);
        frontier.push_back(pick);
      }
    }
  }
  return connected;
}

SeedList seed_points(const std::vector<StaticObstacle>& obstacles, Rng& rng) {
  std::vector<GapEdge> edges =
      connect_static_obstacles(obstacles, all_gap_edges(obstacles), rng);
  std::sort(edges.begin(), edges.end(), edge_less);
  SeedList seeds;
  for (const auto& e : edges) {
    const Point2 mid = e.midpoint();
    bool blocked = false;
    for (const auto& o : obstacles) {
      if (convex_contains(o.shape, mid, 1e-9)) {
        blocked = true;
        break;
      }
    }
    if (blocked) {
      std::cerr << "seed_points: dropping blocked midpoint of edge ("
                << e.i << "," << e.j << ")\n";
      continue;
    }
    seeds.points.push_back(mid);
    seeds.edge_lengths.push_back(e.length);
  }
  return seeds;
}

std::vector<StaticObstacle> gap_obstacles(const World& world) {
  std::vector<StaticObstacle> out = world.statics;
  int next_id = 0;
  for (const auto& o : out) next_id = std::max(next_id, o.id + 1);
  const double thickness = 0.05;
  const auto& verts = world.bounds.vertices();
  const size_t n = verts.size();
  for (size_t i = 0; i < n; ++i) {
    const Point2& a = verts[i];
    const Point2& b = verts[(i + 1) % n];
    const Vec2 dir = (b - a).normalized();
    const Vec2 outward(dir.y(), -dir.x());  // right of a CCW boundary edge
    StaticObstacle strip;
    strip.id = next_id++;
    strip.shape = convex_hull(
        {a, b, b + thickness * outward, a + thickness * outward});
    out.push_back(std::move(strip));
  }
  return out;
}

}  // namespace mmrplan
