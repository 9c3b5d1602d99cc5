#include "ccasters/baselines.hpp"

#include <tuple>

namespace ccasters {

namespace {

PlannerConfig unconstrained(PlannerConfig cfg) {
  cfg.uniform_capacity = kUnconstrainedCapacity;
  return cfg;
}

}  // namespace

NaiveAsters::NaiveAsters(const BuildingGraph& g, const HarmField& h, int t0, const PlannerConfig& cfg)
    : g_(&g), vi_(g, h, t0, unconstrained(cfg)) {
  vi_.solve(CapacityLedger(g, cfg.horizon_s, kUnconstrainedCapacity));
}

Route NaiveAsters::route(NodeId start) const {
  if (!g_->has_node(start)) throw std::out_of_range("naive route: unknown node");
  auto r = vi_.route_from(start);
  // Without capacity limits staying is always feasible, so this only
  // triggers at the very end of the horizon.
  if (!r) return Route{{start}, vi_.t0(), 0};
  r->maxsend = kUnconstrainedCapacity;
  return *r;
}

Route plan_naive_asters(const BuildingGraph& g, const HarmField& h, NodeId start, int t0, const PlannerConfig& cfg) {
  return NaiveAsters(g, h, t0, cfg).route(start);
}

Route plan_natural_response(const BuildingGraph& g, NodeId evac_node, NodeId shooter_node,
                            const NaturalResponseParams& params, int t0) {
  if (!g.has_node(evac_node) || !g.has_node(shooter_node)) {
    throw std::out_of_range("natural response: unknown node");
  }
  Route stay{{evac_node}, t0, 0};
  if (g.is_exit(evac_node)) return stay;

  const int d = g.hop_distance(evac_node, shooter_node);
  if (d >= params.d_threshold) {
    std::optional<std::tuple<int, int, NodeId>> best;  // (length, -first-step d, exit)
    Path best_path;
    for (NodeId e : g.exits()) {
      Path p = shortest_path(g, evac_node, e);
      // Leaving a dead-end room always closes one hop, so for room evacuees
      // the test applies to the first step taken from the room's doorway.
      size_t step = 1;
      int before = d;
      if (g.kind(evac_node) == NodeKind::room && p.nodes.size() > 2) {
        step = 2;
        before = g.hop_distance(p.nodes[1], shooter_node);
      }
      const int first_d = g.hop_distance(p.nodes[step], shooter_node);
      if (first_d < before) continue;
      auto key = std::tuple(p.length_s, -first_d, e);
      if (!best || key < *best) {
        best = key;
        best_path = std::move(p);
      }
    }
    if (!best) return stay;
    return Route{best_path.nodes, t0, 0};
  }

  if (g.kind(evac_node) == NodeKind::room) return stay;
  std::optional<std::pair<int, NodeId>> room;
  for (const Arc& a : g.neighbors(evac_node)) {
    if (g.kind(a.to) != NodeKind::room) continue;
    auto key = std::pair(a.sojourn_s, a.to);
    if (!room || key < *room) room = key;
  }
  if (!room) return stay;
  return Route{{evac_node, room->second}, t0, 0};
}

}  // namespace ccasters
