#pragma once

#include "ccasters/building_graph.hpp"
#include "ccasters/ledger.hpp"
#include "ccasters/planner.hpp"
#include "ccasters/threat.hpp"

namespace ccasters {

inline constexpr int kUnconstrainedCapacity = 1'000'000;

// Uncapacitated value iteration: one solve serves every start node.
class NaiveAsters {
 public:
  NaiveAsters(const BuildingGraph& g, const HarmField& h, int t0, const PlannerConfig& cfg);
  Route route(NodeId start) const;

 private:
  const BuildingGraph* g_;
  ValueIteration vi_;
};

Route plan_naive_asters(const BuildingGraph& g, const HarmField& h, NodeId start, int t0, const PlannerConfig& cfg);

struct NaturalResponseParams {
  int d_threshold = 7;
};

// Run when the shooter is at least d_threshold hops away, otherwise hide.
Route plan_natural_response(const BuildingGraph& g, NodeId evac_node, NodeId shooter_node,
                            const NaturalResponseParams& params = {}, int t0 = 0);

}  // namespace ccasters
