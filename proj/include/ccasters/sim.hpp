#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ccasters/baselines.hpp"
#include "ccasters/building_graph.hpp"
#include "ccasters/planner.hpp"
#include "ccasters/rng.hpp"

namespace ccasters {

enum class Distribution { rooms_only, rooms_and_halls };
enum class PlannerKind { ccasters, naive_asters, natural_response };

std::string_view to_string(Distribution d);
std::string_view to_string(PlannerKind p);
Distribution parse_distribution(std::string_view s);
PlannerKind parse_planner(std::string_view s);

struct ReplanPolicy {
  enum class Kind { on_shooter_node_change, every_k_seconds };
  Kind kind = Kind::on_shooter_node_change;
  int k = 10;
};

struct ScenarioConfig {
  std::string environment = "acyclic_school";
  Distribution distribution = Distribution::rooms_only;
  int evacuees_per_node = 10;
  NodeId shooter_spawn = 1;
  PlannerKind planner = PlannerKind::ccasters;
  double reward_max = 10.0;
  std::uint64_t seed = 1;
  int horizon_s = kEventHorizon;
  ReplanPolicy replan;
  NaturalResponseParams natural;
  // Planner knobs; its reward field is overwritten from reward_max.
  PlannerConfig planner_cfg;
  bool keep_trace = true;
};

// Evacuee placement at t=0: one count per node, index id - 1.
std::vector<int> initial_occupancy(const BuildingGraph& g, Distribution d, int per_node);

enum class EventType { spawn, request, grant, depart, arrive, wait, escape, casualty, in_los, replan };
std::string_view to_string(EventType e);

// Entity conventions: spawn/arrive/wait/escape/replan carry a node id;
// request/grant carry a ledger-style entity index (node id - 1, or N + directed);
// depart carries the origin node and the directed edge in aux; casualty
// carries the node the victim occupied, or 0 when it was on an edge.
struct Event {
  int t = 0;
  int agent = 0;
  EventType type = EventType::spawn;
  int where = 0;
  int aux = 0;
  bool operator==(const Event&) const = default;
};

struct SimResult {
  int initial = 0;
  int casualties = 0;
  int escapes = 0;
  int remaining = 0;
  long los_seconds_total = 0;
  // Rows are seconds 0..horizon (state after that second), columns node id - 1.
  std::vector<std::vector<int>> occupancy;
  std::vector<int> in_transit;
  std::vector<int> cumulative_casualties;
  std::vector<int> cumulative_escapes;
  int capacity_violations = 0;
  int replans = 0;
  bool shelter_fallback = false;
  std::vector<Event> trace;
};

// Rebuilds every metric from an event trace. Agent 0 is the shooter.
SimResult collect_metrics(const std::vector<Event>& trace, int initial, int node_count, int horizon_s);

enum class Verdict { safe, in_los, casualty };

struct Position {
  NodeId node = 0;     // node at, or origin while on an edge
  int directed = -1;   // directed edge, -1 when at a node
  int enter_t = 0;
  int arrive_t = 0;
  bool on_edge() const { return directed >= 0; }
};

// Node an agent is judged at during second t: the origin while on an edge,
// switching to the destination on the final occupied second.
NodeId judged_node(const BuildingGraph& g, const Position& p, int t);
Verdict adjudicate(const BuildingGraph& g, const Position& evac, const Position& shooter, int t);

struct ShooterState {
  Position pos;
  NodeId target = 0;
  std::vector<NodeId> path;  // remaining nodes to the target, excluding pos.node
  int resume_t = 0;
  std::set<NodeId> visited;
  bool idle = false;
};

// Samples an unvisited room with weight 1 / (1 + travel seconds); 0 if none remain.
NodeId shooter_choose_target(const BuildingGraph& g, NodeId current, const std::set<NodeId>& visited, AgentRng& rng);

ShooterState shooter_spawn(const BuildingGraph& g, NodeId node);
// Advances the shooter to second t. Returns true when it reached a new node.
bool shooter_step(const BuildingGraph& g, ShooterState& s, int t, AgentRng& rng);

class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, SimResult partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const SimResult& partial() const { return partial_; }

 private:
  SimResult partial_;
};

SimResult run_simulation(const BuildingGraph& g, const ScenarioConfig& cfg);
SimResult run_simulation(const ScenarioConfig& cfg);

// Per-run exports.
std::string occupancy_csv(const SimResult& r, int node_count);
std::string trace_log(const SimResult& r);

}  // namespace ccasters
