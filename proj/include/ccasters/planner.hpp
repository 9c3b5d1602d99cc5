#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ccasters/building_graph.hpp"
#include "ccasters/kernels.hpp"
#include "ccasters/ledger.hpp"
#include "ccasters/threat.hpp"

namespace ccasters {

struct RewardParams {
  double reward_max = 10.0;
  double penalty_max = -10.0;
  // Magnitude of the +1 / -1 interim branches.
  double interim = 1.0;
  // Value per remaining second credited on reaching an exit. Exits are
  // absorbing (an escaped evacuee cannot be harmed), so the stay-at-exit
  // reward is collected once per remaining second instead of via actions.
  double exit_credit_per_s = 10.0;

  static RewardParams with_reward_max(double r) { return {r, -r, 1.0, r}; }
  RewardParams scaled(double f) const {
    return {reward_max * f, penalty_max * f, interim * f, exit_credit_per_s * f};
  }
};

enum class Outcome { normal, death, exit };

double reward(const BuildingGraph& g, NodeId from, NodeId to, Outcome outcome, const RewardParams& params);

struct PlannerConfig {
  RewardParams reward;
  int lookahead_s = 60;
  int horizon_s = kEventHorizon;
  // When positive, greedy unrolling stops once the route reaches
  // t0 + unroll_window_s (a leg already under way is completed). Zero unrolls
  // to an exit or the end of the lookahead, so the reserved footprint covers
  // the whole route.
  int unroll_window_s = 0;
  int route_max = 5;
  // > 0 overrides every ledger capacity (10^6 gives the uncapacitated problem).
  int uniform_capacity = 0;
  kernels::Exec exec = kernels::Exec::serial;
};

class NoFeasibleAction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Finite-horizon value iteration over (node, t) for one shooter sighting. The
// harm-dependent parts are built once; solve() refreshes action feasibility
// from a ledger and reruns the backward sweep.
class ValueIteration {
 public:
  ValueIteration(const BuildingGraph& g, const HarmField& h, int t0, const PlannerConfig& cfg);

  int t0() const { return t0_; }
  int end_t() const { return t0_ + problem_.layers - 1; }

  void solve(const CapacityLedger& ledger);
  // Optimal expected value from (start, t0 + offset); kernels::kInfeasible if none.
  double value(NodeId start, int offset = 0) const;
  // Greedy route from (start, t0); nullopt when no action is feasible there.
  std::optional<Route> route_from(NodeId start) const;
  // Expected value of following a fixed route (used to check optimality).
  double route_value(const Route& r) const;

  const kernels::SweepProblem& problem() const { return problem_; }

 private:
  int action_index(NodeId from, NodeId to) const;

  const BuildingGraph* g_;
  PlannerConfig cfg_;
  int t0_;
  kernels::SweepProblem problem_;
  std::vector<double> value_;
  std::vector<int> choice_;
};

// Harm field for a shooter last seen at node_s at t0, covering the lookahead.
HarmField threat_field(const BuildingGraph& g, NodeId node_s, int t0, const PlannerConfig& cfg);

struct ViResult {
  Route route;
  double value = 0.0;
};

// Throws NoFeasibleAction when the start state has no feasible action.
ViResult value_iteration(const BuildingGraph& g, const HarmField& h, const CapacityLedger& ledger, NodeId start,
                         int t0, const PlannerConfig& cfg);

std::vector<NodeId> order_nodes(const BuildingGraph& g, NodeId node_s);

struct Assignment {
  Route route;
  int assigned = 0;
};

struct EvacuationPlan {
  int t0 = 0;
  NodeId node_s = 0;
  std::map<NodeId, std::vector<Assignment>> assignments;
  int round_count = 0;
  // Set when evacuees were left over after route_max rounds and were told to
  // shelter in place.
  bool shelter_fallback = false;

  int assigned_at(NodeId n) const;
};

// occupancy maps node id -> evacuees waiting there at t0 (exits not allowed).
EvacuationPlan plan_ccasters(const BuildingGraph& g, const std::map<NodeId, int>& occupancy, NodeId node_s,
                             const PlannerConfig& cfg, int t0 = 0);

std::string plan_to_json(const EvacuationPlan& plan);
std::string route_to_json(const Route& r);

}  // namespace ccasters
