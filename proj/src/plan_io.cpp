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

#include "mmrplan/plan_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mmrplan/world.hpp"

namespace mmrplan {

using nlohmann::json;

uint64_t fnv1a_hash(const std::string& text) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

json point_to_json(const Point2& p) { return json::array({p.x(), p.y()}); }

Point2 point_from_json(const json& j) {
  return Point2(j.at(0).get<double>(), j.at(1).get<double>());
}

json points_to_json(const std::vector<Point2>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(point_to_json(p));
  return a;
}

std::vector<Point2> points_from_json(const json& j) {
  std::vector<Point2> out;
  for (const auto& e : j) out.push_back(point_from_json(e));
  return out;
}

json config_to_json(const FormationConfig& c) {
  json robots = json::array();
  for (const auto& r : c.robots)
    robots.push_back(json{{"p", point_to_json(r.p)},
                          {"phi", r.phi},
                          {"q", json::array({r.q[0], r.q[1], r.q[2]})}});
  return json{{"p", point_to_json(c.p)}, {"psi", c.psi}, {"robots", robots}};
}

FormationConfig config_from_json(const json& j) {
  FormationConfig c;
  c.p = point_from_json(j.at("p"));
  c.psi = j.at("psi").get<double>();
  for (const auto& e : j.at("robots")) {
    MmrState s;
    s.p = point_from_json(e.at("p"));
    s.phi = e.at("phi").get<double>();
    const auto& q = e.at("q");
    s.q = {q.at(0).get<double>(), q.at(1).get<double>(), q.at(2).get<double>()};
    c.robots.push_back(s);
  }
  return c;
}

}  // namespace

std::string serialize_plan(const GlobalPlan& plan) {
  json j;
  j["format"] = "mmrplan-plan-v1";
  j["scenario_hash"] = std::to_string(plan.scenario_hash);
  j["seed"] = std::to_string(plan.seed);
  j["v_op"] = plan.v_op;
  if (!plan.params_json.empty()) j["params"] = json::parse(plan.params_json);

  json regions = json::array();
  for (size_t r = 0; r < plan.regions.regions.size(); ++r) {
    regions.push_back(
        json{{"provenance",
              plan.regions.provenance[r] == RegionProvenance::kTargetedSeed
                  ? "targeted"
                  : "random"},
             {"vertices", points_to_json(plan.regions.regions[r].vertices())}});
  }
  j["regions"] = json{{"coverage", plan.regions.coverage},
                      {"reached", plan.regions.coverage_reached},
                      {"items", regions}};
  j["seeds"] = json{{"points", points_to_json(plan.seeds.points)},
                    {"lengths", plan.seeds.edge_lengths}};

  json nodes = json::array();
  for (const auto& node : plan.graph.nodes)
    nodes.push_back(json{{"config", config_to_json(node.config)},
                         {"hosts", json::array({node.hosts[0], node.hosts[1]})},
                         {"cost", node.cost}});
  json edges = json::array();
  for (const auto& e : plan.graph.edges)
    edges.push_back(json{
        {"a", e.a}, {"b", e.b}, {"w", e.weight}, {"region", e.region}});
  j["graph"] = json{{"nodes", nodes},
                    {"edges", edges},
                    {"start_id", plan.graph.start_id},
                    {"goal_id", plan.graph.goal_id}};
  j["path"] = plan.path;
  j["corridor"] = plan.corridor;

  json bez = json::array();
  for (const auto& seg : plan.bezier)
    bez.push_back(json::array({point_to_json(seg.ctrl[0]),
                               point_to_json(seg.ctrl[1]),
                               point_to_json(seg.ctrl[2]),
                               point_to_json(seg.ctrl[3])}));
  j["bezier"] = bez;
  j["start_formation"] = config_to_json(plan.start_formation);
  return j.dump(2) + "\n";
}

GlobalPlan deserialize_plan(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("plan file: ") + e.what());
  }
  if (j.value("format", "") != "mmrplan-plan-v1")
    throw ParseError("plan file: unknown format");
  GlobalPlan plan;
  plan.scenario_hash = std::stoull(j.at("scenario_hash").get<std::string>());
  plan.seed = std::stoull(j.at("seed").get<std::string>());
  plan.v_op = j.at("v_op").get<double>();
  if (j.contains("params")) plan.params_json = j.at("params").dump();

  for (const auto& e : j.at("regions").at("items")) {
    plan.regions.regions.push_back(
        ConvexRegion::from_vertices(points_from_json(e.at("vertices"))));
    plan.regions.provenance.push_back(e.at("provenance") == "targeted"
                                          ? RegionProvenance::kTargetedSeed
                                          : RegionProvenance::kRandomSeed);
  }
  plan.regions.coverage = j.at("regions").at("coverage").get<double>();
  plan.regions.coverage_reached = j.at("regions").at("reached").get<bool>();
  plan.seeds.points = points_from_json(j.at("seeds").at("points"));
  plan.seeds.edge_lengths =
      j.at("seeds").at("lengths").get<std::vector<double>>();

  for (const auto& e : j.at("graph").at("nodes")) {
    FormationNode node;
    node.config = config_from_json(e.at("config"));
    node.hosts = {e.at("hosts").at(0).get<int>(),
                  e.at("hosts").at(1).get<int>()};
    node.cost = e.at("cost").get<double>();
    plan.graph.nodes.push_back(std::move(node));
  }
  for (const auto& e : j.at("graph").at("edges"))
    plan.graph.edges.push_back(FormationGraph::Edge{
        e.at("a").get<int>(), e.at("b").get<int>(), e.at("w").get<double>(),
        e.at("region").get<int>()});
  plan.graph.start_id = j.at("graph").at("start_id").get<int>();
  plan.graph.goal_id = j.at("graph").at("goal_id").get<int>();
  plan.path = j.at("path").get<std::vector<int>>();
  plan.corridor = j.at("corridor").get<std::vector<int>>();

  for (const auto& e : j.at("bezier")) {
    BezierSegment seg;
    for (int c = 0; c < 4; ++c) seg.ctrl[c] = point_from_json(e.at(c));
    plan.bezier.push_back(seg);
  }
  plan.ref = ReferenceTrajectory(plan.bezier, plan.v_op);
  plan.start_formation = config_from_json(j.at("start_formation"));
  return plan;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace mmrplan
