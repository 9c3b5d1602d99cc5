#include "ccasters/planner.hpp"

#include <algorithm>
#include <tuple>

#include "json.hpp"

namespace ccasters {

double reward(const BuildingGraph& g, NodeId from, NodeId to, Outcome outcome, const RewardParams& params) {
  if (from != to && !g.adjacent(from, to)) throw std::invalid_argument("reward: nodes are not adjacent");
  if (outcome == Outcome::death) return params.penalty_max;
  if (outcome == Outcome::exit || g.is_exit(to)) return params.reward_max;
  if (g.node(to).hardness - g.node(from).hardness >= 0) return params.interim;
  if (g.exit_time(to) - g.exit_time(from) < 0) return params.interim;
  return -params.interim;
}

HarmField threat_field(const BuildingGraph& g, NodeId node_s, int t0, const PlannerConfig& cfg) {
  const int end = std::min(t0 + cfg.lookahead_s, cfg.horizon_s);
  if (end <= t0) throw std::invalid_argument("threat_field: t0 is at or beyond the horizon");
  return smear_harm(propagate_location(g, node_s, end - t0), g, t0, cfg.exec);
}

ValueIteration::ValueIteration(const BuildingGraph& g, const HarmField& h, int t0, const PlannerConfig& cfg)
    : g_(&g), cfg_(cfg), t0_(t0) {
  const int end = std::min({t0 + cfg.lookahead_s, cfg.horizon_s, h.end_t()});
  if (t0 < h.start_t() || end <= t0) throw std::invalid_argument("ValueIteration: t0 outside the harm field");
  const int n = g.node_count();
  auto& p = problem_;
  p.nodes = n;
  p.layers = end - t0 + 1;
  p.penalty = cfg.reward.penalty_max;
  p.exit_credit = cfg.reward.exit_credit_per_s;
  p.is_exit.resize(n);
  p.action_begin.push_back(0);
  for (NodeId u = 1; u <= n; ++u) {
    p.is_exit[u - 1] = g.is_exit(u);
    p.action_to.push_back(u - 1);
    p.action_s.push_back(1);
    p.action_reward.push_back(g.is_exit(u) ? 0.0 : reward(g, u, u, Outcome::normal, cfg.reward));
    for (const Arc& a : g.neighbors(u)) {
      p.action_to.push_back(a.to - 1);
      p.action_s.push_back(a.sojourn_s);
      p.action_reward.push_back(g.is_exit(u) ? 0.0 : reward(g, u, a.to, Outcome::normal, cfg.reward));
    }
    p.action_begin.push_back(static_cast<int>(p.action_to.size()));
  }

  const int A = p.actions();
  p.p_harm.assign(static_cast<size_t>(p.layers) * A, 0.0);
  p.feasible.assign(static_cast<size_t>(p.layers) * A, 0);
  for (int k = 0; k + 1 < p.layers; ++k) {
    const int t = t0 + k;
    for (int u = 0; u < n; ++u) {
      for (int a = p.action_begin[u]; a < p.action_begin[u + 1]; ++a) {
        const int s = p.action_s[a];
        if (k + s >= p.layers) continue;
        const NodeId from = u + 1, to = p.action_to[a] + 1;
        double survive = 1.0 - h.harm(t, from);
        for (int j = 1; j < s; ++j) survive *= 1.0 - std::max(h.harm(t + j, from), h.harm(t + j, to));
        p.p_harm[static_cast<size_t>(k) * A + a] = 1.0 - survive;
      }
    }
  }
}

void ValueIteration::solve(const CapacityLedger& ledger) {
  auto& p = problem_;
  const int A = p.actions();
  const int n = p.nodes;
  const int nodes_offset = ledger.node_count();
  for (int k = 0; k + 1 < p.layers; ++k) {
    const int t = t0_ + k;
    for (int u = 0; u < n; ++u) {
      int a = p.action_begin[u];
      p.feasible[static_cast<size_t>(k) * A + a] = t + 1 <= ledger.horizon_s() && ledger.avail(t + 1, u) > 0;
      for (const Arc& arc : g_->neighbors(u + 1)) {
        ++a;
        const int s = arc.sojourn_s;
        bool ok = t + s <= ledger.horizon_s() && ledger.avail(t + s, arc.to - 1) > 0;
        const int last = g_->is_door(arc.directed) ? t + 1 : std::max(t + 1, t + s - 1);
        for (int tau = t + 1; ok && tau <= last; ++tau) {
          ok = ledger.avail(tau, nodes_offset + arc.directed) > 0;
        }
        p.feasible[static_cast<size_t>(k) * A + a] = ok;
      }
    }
  }
  kernels::backward_sweep(p, value_, choice_, cfg_.exec);
}

double ValueIteration::value(NodeId start, int offset) const {
  return value_.at(static_cast<size_t>(offset) * problem_.nodes + (start - 1));
}

std::optional<Route> ValueIteration::route_from(NodeId start) const {
  const auto& p = problem_;
  Route r{{start}, t0_, 0};
  if (g_->is_exit(start)) return r;
  int k = 0;
  NodeId cur = start;
  while (!g_->is_exit(cur) && k < p.layers - 1 &&
         (cfg_.unroll_window_s <= 0 || k < cfg_.unroll_window_s)) {
    const int a = choice_[static_cast<size_t>(k) * p.nodes + (cur - 1)];
    if (a < 0) {
      if (k == 0) return std::nullopt;
      break;
    }
    cur = p.action_to[a] + 1;
    r.steps.push_back(cur);
    k += p.action_s[a];
  }
  return r;
}

int ValueIteration::action_index(NodeId from, NodeId to) const {
  const auto& p = problem_;
  for (int a = p.action_begin[from - 1]; a < p.action_begin[from]; ++a) {
    if (p.action_to[a] == to - 1) return a;
  }
  throw std::invalid_argument("route step is not an action");
}

double ValueIteration::route_value(const Route& r) const {
  const auto& p = problem_;
  const int A = p.actions();
  struct Leg { int k; int a; };
  std::vector<Leg> legs;
  int k = r.depart_t - t0_;
  for (size_t i = 1; i < r.steps.size(); ++i) {
    int a = action_index(r.steps[i - 1], r.steps[i]);
    legs.push_back({k, a});
    k += p.action_s[a];
  }
  if (k >= p.layers) throw std::invalid_argument("route runs past the planning horizon");
  double v = value(r.last(), k);
  for (auto it = legs.rbegin(); it != legs.rend(); ++it) {
    const double ph = p.p_harm[static_cast<size_t>(it->k) * A + it->a];
    v = ph * p.penalty + (1.0 - ph) * (p.action_reward[it->a] + v);
  }
  return v;
}

ViResult value_iteration(const BuildingGraph& g, const HarmField& h, const CapacityLedger& ledger, NodeId start,
                         int t0, const PlannerConfig& cfg) {
  if (!g.has_node(start)) throw std::out_of_range("value_iteration: unknown start node");
  ValueIteration vi(g, h, t0, cfg);
  vi.solve(ledger);
  auto r = vi.route_from(start);
  if (!r) throw NoFeasibleAction("no feasible action from node " + std::to_string(start));
  return {*r, vi.value(start)};
}

std::vector<NodeId> order_nodes(const BuildingGraph& g, NodeId node_s) {
  if (!g.has_node(node_s)) throw std::out_of_range("order_nodes: unknown shooter node");
  std::vector<NodeId> out;
  for (NodeId n = 1; n <= g.node_count(); ++n) {
    if (!g.is_exit(n)) out.push_back(n);
  }
  std::sort(out.begin(), out.end(), [&](NodeId a, NodeId b) {
    return std::tuple(g.exit_time(a), g.travel_time(a, node_s), a) <
           std::tuple(g.exit_time(b), g.travel_time(b, node_s), b);
  });
  return out;
}

int EvacuationPlan::assigned_at(NodeId n) const {
  auto it = assignments.find(n);
  if (it == assignments.end()) return 0;
  int total = 0;
  for (const auto& a : it->second) total += a.assigned;
  return total;
}

EvacuationPlan plan_ccasters(const BuildingGraph& g, const std::map<NodeId, int>& occupancy, NodeId node_s,
                             const PlannerConfig& cfg, int t0) {
  EvacuationPlan plan;
  plan.t0 = t0;
  plan.node_s = node_s;
  std::vector<int> remaining(g.node_count() + 1, 0);
  int total = 0;
  for (auto [n, count] : occupancy) {
    if (!g.has_node(n)) throw std::out_of_range("plan_ccasters: unknown node " + std::to_string(n));
    if (count < 0) throw std::invalid_argument("plan_ccasters: negative occupancy");
    if (count > 0 && g.is_exit(n)) throw std::invalid_argument("plan_ccasters: evacuees placed on an exit");
    remaining[n] = count;
    total += count;
  }
  if (total == 0) return plan;

  ValueIteration vi(g, threat_field(g, node_s, t0, cfg), t0, cfg);
  CapacityLedger ledger(g, cfg.horizon_s, cfg.uniform_capacity);
  const auto order = order_nodes(g, node_s);

  for (int round = 1; round <= cfg.route_max && total > 0; ++round) {
    plan.round_count = round;
    for (NodeId n : order) {
      if (remaining[n] == 0) continue;
      vi.solve(ledger);
      auto route = vi.route_from(n);
      if (!route) continue;  // deferred to the next round
      const int k = compute_maxsend(g, *route, ledger);
      if (k <= 0) continue;
      const int send = std::min(k, remaining[n]);
      reserve_capacity(g, ledger, *route, send);
      route->maxsend = k;
      plan.assignments[n].push_back({*route, send});
      remaining[n] -= send;
      total -= send;
    }
  }
  for (NodeId n = 1; n <= g.node_count(); ++n) {
    if (remaining[n] > 0) {
      plan.assignments[n].push_back({Route{{n}, t0, 0}, remaining[n]});
      plan.shelter_fallback = true;
    }
  }
  return plan;
}

std::string route_to_json(const Route& r) {
  nlohmann::json j{{"route", r.steps}, {"depart_t", r.depart_t}, {"maxsend", r.maxsend}};
  return j.dump();
}

std::string plan_to_json(const EvacuationPlan& plan) {
  nlohmann::json nodes = nlohmann::json::object();
  for (const auto& [n, list] : plan.assignments) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& a : list) {
      arr.push_back({{"route", a.route.steps}, {"depart_t", a.route.depart_t}, {"maxsend", a.route.maxsend},
                     {"assigned", a.assigned}});
    }
    nodes[std::to_string(n)] = arr;
  }
  nlohmann::json j{{"t0", plan.t0},
                   {"node_s", plan.node_s},
                   {"round_count", plan.round_count},
                   {"shelter_fallback", plan.shelter_fallback},
                   {"assignments", nodes}};
  return j.dump(1);
}

}  // namespace ccasters
