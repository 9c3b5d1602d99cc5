#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ccasters/geometry.hpp"

namespace ccasters {

using NodeId = int;

enum class NodeKind { room, hall, exit };
enum class DoorKind { none, single_door, double_door };

std::string_view to_string(NodeKind kind);
std::string_view to_string(DoorKind kind);

inline constexpr int kExitOccupancy = 999;
inline constexpr int kUnreachable = 1'000'000'000;

struct NodeSpec {
  NodeId id = 0;
  NodeKind kind = NodeKind::hall;
  int hardness = 0;
  int max_occupancy = 20;
  std::optional<Point> position;
};

struct EdgeSpec {
  NodeId a = 0;
  NodeId b = 0;
  int sojourn_s = 1;
  int capacity = 20;
  DoorKind door_kind = DoorKind::none;
  int throughput_per_s = 20;
};

// Persons per second through a doorway of the given kind; for open
// passages the edge capacity itself bounds the flow.
int door_throughput(DoorKind kind, int capacity);

// Raised for malformed or unusable environment documents.
class EnvironmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One outgoing arc of the adjacency list.
struct Arc {
  NodeId to = 0;
  int edge = 0;      // index into edges()
  int directed = 0;  // directed-edge index: 2 * edge + (from == edge.b)
  int sojourn_s = 0;
};

using LosTable = std::map<NodeId, std::vector<NodeId>>;

// Raw material for a BuildingGraph; derived tables are optional.
struct GraphParts {
  std::string name;
  std::string description;
  std::vector<NodeSpec> nodes;
  std::vector<EdgeSpec> edges;
  std::vector<Wall> walls;
  std::optional<LosTable> los;
  std::optional<std::map<NodeId, int>> exit_time;
};

// Capacitated building graph. Immutable once built.
class BuildingGraph {
 public:
  enum class Check { strict, none };

  // Strict mode throws EnvironmentError on dangling endpoints, missing exits,
  // disconnected nodes, and on any validate() violation. Check::none keeps
  // whatever LOS / exit-time tables were supplied so that broken graphs can
  // be inspected.
  static BuildingGraph from_parts(GraphParts parts, Check check = Check::strict);

  const std::string& name() const { return name_; }
  const std::string& description() const { return description_; }

  int node_count() const { return static_cast<int>(nodes_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int directed_count() const { return 2 * edge_count(); }

  bool has_node(NodeId id) const { return id >= 1 && id <= node_count(); }
  const NodeSpec& node(NodeId id) const;
  std::span<const NodeSpec> nodes() const { return nodes_; }
  std::span<const EdgeSpec> edges() const { return edges_; }
  std::span<const Wall> walls() const { return walls_; }
  NodeKind kind(NodeId id) const { return node(id).kind; }
  bool is_exit(NodeId id) const { return kind(id) == NodeKind::exit; }
  std::span<const NodeId> exits() const { return exits_; }

  std::span<const Arc> neighbors(NodeId id) const;
  std::optional<Arc> arc(NodeId from, NodeId to) const;
  bool adjacent(NodeId a, NodeId b) const { return arc(a, b).has_value(); }
  // Endpoints of a directed edge index.
  NodeId directed_from(int directed) const;
  NodeId directed_to(int directed) const;
  const EdgeSpec& directed_edge(int directed) const { return edges_[directed / 2]; }
  bool is_door(int directed) const { return directed_edge(directed).door_kind != DoorKind::none; }

  std::span<const NodeId> line_of_sight(NodeId id) const;
  bool sees(NodeId from, NodeId to) const;

  int exit_time(NodeId id) const;
  // All-pairs shortest travel time in seconds and unweighted hop count.
  int travel_time(NodeId a, NodeId b) const;
  int hop_distance(NodeId a, NodeId b) const;
  int max_sojourn() const { return max_sojourn_; }

 private:
  std::string name_;
  std::string description_;
  std::vector<NodeSpec> nodes_;
  std::vector<EdgeSpec> edges_;
  std::vector<Wall> walls_;
  std::vector<NodeId> exits_;
  std::vector<std::vector<Arc>> adjacency_;
  std::vector<std::vector<NodeId>> los_;
  std::vector<char> sees_;  // row-major N x N
  std::vector<int> exit_time_;
  std::vector<int> travel_;
  std::vector<int> hops_;
  int max_sojourn_ = 1;

  friend std::vector<std::string> validate(const BuildingGraph& g);
};

// Loads a JSON environment document (see README for the schema).
BuildingGraph load_environment(std::string_view json_text);
BuildingGraph load_environment_file(const std::filesystem::path& path);
// Bundled environments by name: "acyclic_school", "cyclic_school", "toy_graph".
BuildingGraph load_bundled(std::string_view name);
std::filesystem::path bundled_path(std::string_view name);

struct Path {
  std::vector<NodeId> nodes;
  int length_s = 0;
};

// Minimum-time path; ties go to the lexicographically smallest id sequence.
// Throws std::out_of_range for unknown nodes and EnvironmentError if the
// target cannot be reached.
Path shortest_path(const BuildingGraph& g, NodeId from, NodeId to);

// Seconds to the nearest exit for every node (index id - 1).
// Throws EnvironmentError when a node cannot reach any exit.
std::vector<int> compute_exit_times(const BuildingGraph& g);

// Visible node set; explicit tables are returned verbatim.
std::span<const NodeId> line_of_sight_set(const BuildingGraph& g, NodeId n);

// Human-readable invariant violations; empty when the graph is consistent.
std::vector<std::string> validate(const BuildingGraph& g);

}  // namespace ccasters
