#include "ccasters/building_graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <queue>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ccasters {

using nlohmann::json;

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::room: return "room";
    case NodeKind::hall: return "hall";
    case NodeKind::exit: return "exit";
  }
  return "?";
}

std::string_view to_string(DoorKind kind) {
  switch (kind) {
    case DoorKind::none: return "none";
    case DoorKind::single_door: return "single";
    case DoorKind::double_door: return "double";
  }
  return "?";
}

int door_throughput(DoorKind kind, int capacity) {
  switch (kind) {
    case DoorKind::single_door: return 2;
    case DoorKind::double_door: return 4;
    case DoorKind::none: break;
  }
  return capacity;
}

namespace {

// Dijkstra over sojourn times from a set of sources.
std::vector<int> dijkstra(const BuildingGraph& g, std::span<const NodeId> sources) {
  const int n = g.node_count();
  std::vector<int> dist(n + 1, kUnreachable);
  using Item = std::pair<int, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (NodeId s : sources) {
    dist[s] = 0;
    pq.push({0, s});
  }
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (const Arc& a : g.neighbors(u)) {
      int nd = d + a.sojourn_s;
      if (nd < dist[a.to]) {
        dist[a.to] = nd;
        pq.push({nd, a.to});
      }
    }
  }
  return dist;
}

std::vector<int> bfs_hops(const BuildingGraph& g, NodeId source) {
  std::vector<int> hops(g.node_count() + 1, kUnreachable);
  std::queue<NodeId> q;
  hops[source] = 0;
  q.push(source);
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop();
    for (const Arc& a : g.neighbors(u)) {
      if (hops[a.to] == kUnreachable) {
        hops[a.to] = hops[u] + 1;
        q.push(a.to);
      }
    }
  }
  return hops;
}

NodeKind parse_kind(const std::string& s) {
  if (s == "room") return NodeKind::room;
  if (s == "hall") return NodeKind::hall;
  if (s == "exit") return NodeKind::exit;
  throw EnvironmentError("unknown node kind '" + s + "'");
}

DoorKind parse_door(const std::string& s) {
  if (s == "none") return DoorKind::none;
  if (s == "single") return DoorKind::single_door;
  if (s == "double") return DoorKind::double_door;
  throw EnvironmentError("unknown door kind '" + s + "'");
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    std::string_view where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      throw EnvironmentError("unknown key '" + it.key() + "' in " + std::string(where));
    }
  }
}

Point parse_point(const json& j) {
  if (!j.is_array() || j.size() != 2) throw EnvironmentError("position must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

const NodeSpec& BuildingGraph::node(NodeId id) const {
  if (!has_node(id)) throw std::out_of_range("unknown node " + std::to_string(id));
  return nodes_[id - 1];
}

std::span<const Arc> BuildingGraph::neighbors(NodeId id) const {
  if (!has_node(id)) throw std::out_of_range("unknown node " + std::to_string(id));
  return adjacency_[id];
}

std::optional<Arc> BuildingGraph::arc(NodeId from, NodeId to) const {
  for (const Arc& a : neighbors(from)) {
    if (a.to == to) return a;
  }
  return std::nullopt;
}

NodeId BuildingGraph::directed_from(int directed) const {
  const EdgeSpec& e = edges_[directed / 2];
  return (directed % 2 == 0) ? e.a : e.b;
}

NodeId BuildingGraph::directed_to(int directed) const {
  const EdgeSpec& e = edges_[directed / 2];
  return (directed % 2 == 0) ? e.b : e.a;
}

std::span<const NodeId> BuildingGraph::line_of_sight(NodeId id) const {
  if (!has_node(id)) throw std::out_of_range("unknown node " + std::to_string(id));
  return los_[id];
}

bool BuildingGraph::sees(NodeId from, NodeId to) const {
  return sees_[static_cast<size_t>(from - 1) * node_count() + (to - 1)] != 0;
}

int BuildingGraph::exit_time(NodeId id) const {
  if (!has_node(id)) throw std::out_of_range("unknown node " + std::to_string(id));
  return exit_time_[id];
}

int BuildingGraph::travel_time(NodeId a, NodeId b) const {
  return travel_[static_cast<size_t>(a - 1) * node_count() + (b - 1)];
}

int BuildingGraph::hop_distance(NodeId a, NodeId b) const {
  return hops_[static_cast<size_t>(a - 1) * node_count() + (b - 1)];
}

BuildingGraph BuildingGraph::from_parts(GraphParts parts, Check check) {
  const bool strict = check == Check::strict;
  BuildingGraph g;
  g.name_ = std::move(parts.name);
  g.description_ = std::move(parts.description);
  g.walls_ = std::move(parts.walls);

  std::sort(parts.nodes.begin(), parts.nodes.end(),
            [](const NodeSpec& a, const NodeSpec& b) { return a.id < b.id; });
  for (size_t i = 0; i < parts.nodes.size(); ++i) {
    if (parts.nodes[i].id != static_cast<int>(i) + 1) {
      throw EnvironmentError("node ids must be unique and contiguous from 1");
    }
  }
  g.nodes_ = std::move(parts.nodes);
  const int n = g.node_count();

  g.adjacency_.assign(n + 1, {});
  for (size_t i = 0; i < parts.edges.size(); ++i) {
    EdgeSpec& e = parts.edges[i];
    if (!g.has_node(e.a) || !g.has_node(e.b)) {
      throw EnvironmentError("edge " + std::to_string(e.a) + "-" + std::to_string(e.b) +
                             " references an unknown node");
    }
    if (e.a == e.b) throw EnvironmentError("self-loop edge at node " + std::to_string(e.a));
    if (e.sojourn_s < 1 || e.capacity < 1) {
      throw EnvironmentError("edge " + std::to_string(e.a) + "-" + std::to_string(e.b) +
                             " needs positive sojourn and capacity");
    }
    e.throughput_per_s = door_throughput(e.door_kind, e.capacity);
    int idx = static_cast<int>(i);
    g.adjacency_[e.a].push_back({e.b, idx, 2 * idx, e.sojourn_s});
    g.adjacency_[e.b].push_back({e.a, idx, 2 * idx + 1, e.sojourn_s});
    g.max_sojourn_ = std::max(g.max_sojourn_, e.sojourn_s);
  }
  g.edges_ = std::move(parts.edges);
  for (auto& adj : g.adjacency_) {
    std::sort(adj.begin(), adj.end(), [](const Arc& x, const Arc& y) { return x.to < y.to; });
    for (size_t i = 1; i < adj.size(); ++i) {
      if (adj[i].to == adj[i - 1].to) throw EnvironmentError("duplicate edge");
    }
  }

  for (const NodeSpec& s : g.nodes_) {
    if (s.kind == NodeKind::exit) g.exits_.push_back(s.id);
  }
  if (strict && g.exits_.empty()) throw EnvironmentError("environment has no exit node");

  // Line of sight: explicit table wins, else wall-segment visibility.
  g.los_.assign(n + 1, {});
  if (parts.los) {
    for (auto& [id, seen] : *parts.los) {
      if (!g.has_node(id)) throw EnvironmentError("los entry for unknown node " + std::to_string(id));
      for (NodeId m : seen) {
        if (!g.has_node(m)) throw EnvironmentError("los references unknown node " + std::to_string(m));
      }
      g.los_[id] = seen;
    }
    if (strict) {
      for (NodeId id = 1; id <= n; ++id) {
        if (!parts.los->contains(id)) g.los_[id] = {id};
      }
    }
  } else {
    for (const NodeSpec& s : g.nodes_) {
      if (!s.position) throw EnvironmentError("node " + std::to_string(s.id) + " needs a position to derive line of sight");
    }
    for (NodeId a = 1; a <= n; ++a) {
      for (NodeId b = 1; b <= n; ++b) {
        if (a == b || visible(*g.nodes_[a - 1].position, *g.nodes_[b - 1].position, g.walls_)) {
          g.los_[a].push_back(b);
        }
      }
    }
  }
  g.sees_.assign(static_cast<size_t>(n) * n, 0);
  for (NodeId a = 1; a <= n; ++a) {
    std::sort(g.los_[a].begin(), g.los_[a].end());
    g.los_[a].erase(std::unique(g.los_[a].begin(), g.los_[a].end()), g.los_[a].end());
    for (NodeId b : g.los_[a]) g.sees_[static_cast<size_t>(a - 1) * n + (b - 1)] = 1;
  }

  g.travel_.assign(static_cast<size_t>(n) * n, kUnreachable);
  g.hops_.assign(static_cast<size_t>(n) * n, kUnreachable);
  for (NodeId a = 1; a <= n; ++a) {
    NodeId src[] = {a};
    auto d = dijkstra(g, src);
    auto h = bfs_hops(g, a);
    for (NodeId b = 1; b <= n; ++b) {
      g.travel_[static_cast<size_t>(a - 1) * n + (b - 1)] = d[b];
      g.hops_[static_cast<size_t>(a - 1) * n + (b - 1)] = h[b];
    }
  }

  auto computed = dijkstra(g, g.exits_);
  g.exit_time_ = computed;
  if (strict) {
    for (NodeId a = 1; a <= n; ++a) {
      if (computed[a] >= kUnreachable) {
        throw EnvironmentError("node " + std::to_string(a) + " has no path to any exit");
      }
    }
  }
  if (parts.exit_time) {
    for (auto& [id, secs] : *parts.exit_time) {
      if (!g.has_node(id)) throw EnvironmentError("exit_time entry for unknown node " + std::to_string(id));
      g.exit_time_[id] = secs;
    }
  }

  if (strict) {
    auto problems = validate(g);
    if (!problems.empty()) {
      std::string msg = "environment failed validation:";
      for (auto& p : problems) msg += "\n  " + p;
      throw EnvironmentError(msg);
    }
  }
  return g;
}

std::vector<std::string> validate(const BuildingGraph& g) {
  std::vector<std::string> out;
  const int n = g.node_count();
  auto str = [](auto v) { return std::to_string(v); };

  if (g.exits_.empty()) out.push_back("no exit node");
  for (const NodeSpec& s : g.nodes_) {
    if (s.hardness < 0) out.push_back("node " + str(s.id) + " has negative hardness");
    if (s.max_occupancy < 1) out.push_back("node " + str(s.id) + " has non-positive max_occupancy");
    if (s.kind == NodeKind::exit && s.max_occupancy != kExitOccupancy) {
      out.push_back("exit node " + str(s.id) + " must have max_occupancy " + str(kExitOccupancy));
    }
  }
  for (const EdgeSpec& e : g.edges_) {
    if (e.throughput_per_s != door_throughput(e.door_kind, e.capacity)) {
      out.push_back("edge " + str(e.a) + "-" + str(e.b) + " throughput inconsistent with door kind");
    }
  }

  for (NodeId a = 1; a <= n; ++a) {
    if (!g.sees(a, a)) out.push_back("los not reflexive at node " + str(a));
    for (NodeId b : g.los_[a]) {
      if (!g.sees(b, a)) {
        out.push_back("los asymmetric: " + str(a) + " sees " + str(b) + " but not the reverse");
      }
    }
  }

  auto expected = dijkstra(g, g.exits_);
  for (NodeId a = 1; a <= n; ++a) {
    if (expected[a] >= kUnreachable) {
      out.push_back("node " + str(a) + " cannot reach an exit");
    } else if (g.exit_time_[a] != expected[a]) {
      out.push_back("exit_time of node " + str(a) + " is " + str(g.exit_time_[a]) +
                    " but shortest path gives " + str(expected[a]));
    }
  }
  return out;
}

BuildingGraph load_environment(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw EnvironmentError(std::string("parse error: ") + e.what());
  }
  if (!doc.is_object()) throw EnvironmentError("environment document must be an object");
  reject_unknown(doc, {"name", "description", "nodes", "edges", "los", "walls", "exit_time"}, "environment");

  GraphParts parts;
  try {
    parts.name = doc.value("name", "");
    parts.description = doc.value("description", "");
    if (!doc.contains("nodes") || !doc.contains("edges")) {
      throw EnvironmentError("environment needs 'nodes' and 'edges'");
    }
    for (const json& jn : doc.at("nodes")) {
      reject_unknown(jn, {"id", "kind", "hardness", "max_occupancy", "position"}, "node");
      NodeSpec s;
      s.id = jn.at("id").get<int>();
      s.kind = parse_kind(jn.at("kind").get<std::string>());
      s.hardness = jn.value("hardness", s.kind == NodeKind::room ? 5 : 0);
      s.max_occupancy = jn.value("max_occupancy", s.kind == NodeKind::exit ? kExitOccupancy : 20);
      if (jn.contains("position")) s.position = parse_point(jn.at("position"));
      parts.nodes.push_back(s);
    }
    std::map<NodeId, Point> pos;
    for (const NodeSpec& s : parts.nodes) {
      if (s.position) pos[s.id] = *s.position;
    }
    for (const json& je : doc.at("edges")) {
      reject_unknown(je, {"a", "b", "sojourn_s", "capacity", "door_kind"}, "edge");
      EdgeSpec e;
      e.a = je.at("a").get<int>();
      e.b = je.at("b").get<int>();
      e.door_kind = parse_door(je.value("door_kind", "none"));
      int default_cap = e.door_kind == DoorKind::single_door ? 2
                        : e.door_kind == DoorKind::double_door ? 4 : 20;
      e.capacity = je.value("capacity", default_cap);
      if (je.contains("sojourn_s")) {
        e.sojourn_s = je.at("sojourn_s").get<int>();
      } else {
        if (!pos.contains(e.a) || !pos.contains(e.b)) {
          throw EnvironmentError("edge " + std::to_string(e.a) + "-" + std::to_string(e.b) +
                                 " has no sojourn_s and its endpoints lack positions");
        }
        double dx = pos[e.a].x - pos[e.b].x, dy = pos[e.a].y - pos[e.b].y;
        e.sojourn_s = std::max(1, static_cast<int>(std::ceil(std::hypot(dx, dy) / 1.5 - 1e-9)));
      }
      parts.edges.push_back(e);
    }
    if (doc.contains("walls")) {
      for (const json& jw : doc.at("walls")) {
        if (!jw.is_array() || jw.size() != 4) throw EnvironmentError("wall must be [x1, y1, x2, y2]");
        parts.walls.push_back({{jw[0].get<double>(), jw[1].get<double>()},
                               {jw[2].get<double>(), jw[3].get<double>()}});
      }
    }
    if (doc.contains("los")) {
      LosTable los;
      for (auto it = doc.at("los").begin(); it != doc.at("los").end(); ++it) {
        los[std::stoi(it.key())] = it.value().get<std::vector<NodeId>>();
      }
      parts.los = std::move(los);
    }
    if (doc.contains("exit_time")) {
      std::map<NodeId, int> et;
      for (auto it = doc.at("exit_time").begin(); it != doc.at("exit_time").end(); ++it) {
        et[std::stoi(it.key())] = it.value().get<int>();
      }
      parts.exit_time = std::move(et);
    }
  } catch (const json::exception& e) {
    throw EnvironmentError(std::string("malformed environment: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw EnvironmentError("malformed environment: non-numeric node key");
  }
  return BuildingGraph::from_parts(std::move(parts));
}

BuildingGraph load_environment_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw EnvironmentError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return load_environment(ss.str());
}

std::filesystem::path bundled_path(std::string_view name) {
  return std::filesystem::path(CCASTERS_DATA_DIR) / (std::string(name) + ".json");
}

BuildingGraph load_bundled(std::string_view name) {
  return load_environment_file(bundled_path(name));
}

Path shortest_path(const BuildingGraph& g, NodeId from, NodeId to) {
  if (!g.has_node(from) || !g.has_node(to)) throw std::out_of_range("shortest_path: unknown node");
  NodeId src[] = {to};
  auto dist = dijkstra(g, src);
  if (dist[from] >= kUnreachable) {
    throw EnvironmentError("node " + std::to_string(to) + " unreachable from " + std::to_string(from));
  }
  // Walking forward and always taking the smallest id on a tight arc yields
  // the lexicographically smallest of all shortest paths.
  Path p{{from}, dist[from]};
  NodeId cur = from;
  while (cur != to) {
    for (const Arc& a : g.neighbors(cur)) {
      if (dist[a.to] + a.sojourn_s == dist[cur]) {
        cur = a.to;
        break;
      }
    }
    p.nodes.push_back(cur);
  }
  return p;
}

std::vector<int> compute_exit_times(const BuildingGraph& g) {
  auto dist = dijkstra(g, g.exits());
  std::vector<int> out(dist.begin() + 1, dist.end());
  for (size_t i = 0; i < out.size(); ++i) {
    if (out[i] >= kUnreachable) {
      throw EnvironmentError("node " + std::to_string(i + 1) + " has no path to any exit");
    }
  }
  return out;
}

std::span<const NodeId> line_of_sight_set(const BuildingGraph& g, NodeId n) {
  return g.line_of_sight(n);
}

}  // namespace ccasters
