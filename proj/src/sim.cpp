#include "ccasters/sim.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <map>
#include <sstream>

namespace ccasters {

std::string_view to_string(Distribution d) {
  return d == Distribution::rooms_only ? "rooms_only" : "rooms_and_halls";
}

std::string_view to_string(PlannerKind p) {
  switch (p) {
    case PlannerKind::ccasters: return "ccasters";
    case PlannerKind::naive_asters: return "naive_asters";
    case PlannerKind::natural_response: return "natural_response";
  }
  return "?";
}

Distribution parse_distribution(std::string_view s) {
  if (s == "rooms_only") return Distribution::rooms_only;
  if (s == "rooms_and_halls") return Distribution::rooms_and_halls;
  throw std::invalid_argument("unknown distribution '" + std::string(s) + "'");
}

PlannerKind parse_planner(std::string_view s) {
  if (s == "ccasters") return PlannerKind::ccasters;
  if (s == "naive_asters") return PlannerKind::naive_asters;
  if (s == "natural_response") return PlannerKind::natural_response;
  throw std::invalid_argument("unknown planner '" + std::string(s) + "'");
}

std::string_view to_string(EventType e) {
  switch (e) {
    case EventType::spawn: return "spawn";
    case EventType::request: return "request";
    case EventType::grant: return "grant";
    case EventType::depart: return "depart";
    case EventType::arrive: return "arrive";
    case EventType::wait: return "wait";
    case EventType::escape: return "escape";
    case EventType::casualty: return "casualty";
    case EventType::in_los: return "in_los";
    case EventType::replan: return "replan";
  }
  return "?";
}

std::vector<int> initial_occupancy(const BuildingGraph& g, Distribution d, int per_node) {
  if (per_node < 0) throw std::invalid_argument("evacuees_per_node must be non-negative");
  std::vector<int> occ(g.node_count(), 0);
  for (NodeId n = 1; n <= g.node_count(); ++n) {
    NodeKind k = g.kind(n);
    if (k == NodeKind::room || (k == NodeKind::hall && d == Distribution::rooms_and_halls)) {
      if (per_node > g.node(n).max_occupancy) {
        throw std::invalid_argument("evacuees_per_node exceeds the capacity of node " + std::to_string(n));
      }
      occ[n - 1] = per_node;
    }
  }
  return occ;
}

SimResult collect_metrics(const std::vector<Event>& trace, int initial, int node_count, int horizon_s) {
  SimResult r;
  r.initial = initial;
  r.occupancy.assign(horizon_s + 1, std::vector<int>(node_count, 0));
  r.in_transit.assign(horizon_s + 1, 0);
  r.cumulative_casualties.assign(horizon_s + 1, 0);
  r.cumulative_escapes.assign(horizon_s + 1, 0);

  std::vector<int> occ(node_count, 0);
  int transit = 0;
  size_t i = 0;
  for (int t = 0; t <= horizon_s; ++t) {
    for (; i < trace.size() && trace[i].t <= t; ++i) {
      const Event& e = trace[i];
      if (e.type == EventType::replan) {
        ++r.replans;
        continue;
      }
      if (e.agent == 0) continue;
      switch (e.type) {
        case EventType::spawn: ++occ[e.where - 1]; break;
        case EventType::depart: --occ[e.where - 1]; ++transit; break;
        case EventType::arrive: ++occ[e.where - 1]; --transit; break;
        case EventType::escape: --transit; ++r.escapes; break;
        case EventType::casualty:
          if (e.where > 0) {
            --occ[e.where - 1];
          } else {
            --transit;
          }
          ++r.casualties;
          break;
        case EventType::in_los: ++r.los_seconds_total; break;
        default: break;
      }
    }
    r.occupancy[t] = occ;
    r.in_transit[t] = transit;
    r.cumulative_casualties[t] = r.casualties;
    r.cumulative_escapes[t] = r.escapes;
  }
  r.remaining = initial - r.casualties - r.escapes;
  return r;
}

NodeId judged_node(const BuildingGraph& g, const Position& p, int t) {
  if (!p.on_edge()) return p.node;
  return t < p.arrive_t - 1 ? g.directed_from(p.directed) : g.directed_to(p.directed);
}

Verdict adjudicate(const BuildingGraph& g, const Position& evac, const Position& shooter, int t) {
  if (evac.on_edge() && shooter.on_edge() && evac.directed / 2 == shooter.directed / 2) return Verdict::casualty;
  const NodeId e = judged_node(g, evac, t);
  const NodeId s = judged_node(g, shooter, t);
  if (!g.sees(s, e)) return Verdict::safe;
  return g.hop_distance(s, e) <= 3 ? Verdict::casualty : Verdict::in_los;
}

NodeId shooter_choose_target(const BuildingGraph& g, NodeId current, const std::set<NodeId>& visited, AgentRng& rng) {
  std::vector<NodeId> rooms;
  std::vector<double> weights;
  double total = 0.0;
  for (NodeId n = 1; n <= g.node_count(); ++n) {
    if (g.kind(n) != NodeKind::room || visited.contains(n)) continue;
    const int tt = g.travel_time(current, n);
    if (tt >= kUnreachable) continue;
    rooms.push_back(n);
    weights.push_back(1.0 / (1.0 + tt));
    total += weights.back();
  }
  if (rooms.empty()) return 0;
  double u = rng.uniform() * total;
  for (size_t i = 0; i < rooms.size(); ++i) {
    if (u < weights[i]) return rooms[i];
    u -= weights[i];
  }
  return rooms.back();
}

ShooterState shooter_spawn(const BuildingGraph& g, NodeId node) {
  if (!g.has_node(node)) throw std::invalid_argument("shooter spawn node does not exist");
  ShooterState s;
  s.pos.node = node;
  if (g.kind(node) == NodeKind::room) s.visited.insert(node);
  return s;
}

bool shooter_step(const BuildingGraph& g, ShooterState& s, int t, AgentRng& rng) {
  bool reached = false;
  if (s.pos.on_edge() && t >= s.pos.arrive_t) {
    s.pos = Position{g.directed_to(s.pos.directed)};
    reached = true;
    if (s.pos.node == s.target) {
      s.visited.insert(s.target);
      s.target = 0;
      s.path.clear();
      s.resume_t = t + 5;
    }
  }
  if (s.pos.on_edge()) return reached;

  if (s.target == 0 && !s.idle && t >= s.resume_t) {
    s.target = shooter_choose_target(g, s.pos.node, s.visited, rng);
    if (s.target == 0) {
      s.idle = true;
    } else if (s.target == s.pos.node) {
      s.visited.insert(s.target);
      s.target = 0;
      s.resume_t = t + 5;
    } else {
      auto p = shortest_path(g, s.pos.node, s.target).nodes;
      s.path.assign(p.begin() + 1, p.end());
    }
  }
  if (s.target != 0 && !s.path.empty()) {
    const NodeId next = s.path.front();
    s.path.erase(s.path.begin());
    const Arc a = *g.arc(s.pos.node, next);
    s.pos = Position{s.pos.node, a.directed, t, t + a.sojourn_s};
  }
  return reached;
}

namespace {

enum class Status { at_node, on_edge, escaped, dead };

struct Evacuee {
  int id = 0;
  Status status = Status::at_node;
  Position pos;
  Route route;
  size_t idx = 0;  // route.steps[idx] is the current node
  int queued_edge = -1;
  bool queued_node = false;
  bool holds_edge = false;
};

class Engine {
 public:
  Engine(const BuildingGraph& g, const ScenarioConfig& cfg)
      : g_(g), cfg_(cfg), rng_(cfg.seed, 0), node_held_(g.node_count() + 1, 0),
        edge_held_(g.directed_count(), 0), edge_q_(g.directed_count()), node_q_(g.node_count() + 1) {
    pcfg_ = cfg.planner_cfg;
    pcfg_.reward = RewardParams::with_reward_max(cfg.reward_max);
    pcfg_.horizon_s = cfg.horizon_s;
    shooter_ = shooter_spawn(g, cfg.shooter_spawn);

    auto occ = initial_occupancy(g, cfg.distribution, cfg.evacuees_per_node);
    evac_.push_back({});  // agent 0 is the shooter
    for (NodeId n = 1; n <= g.node_count(); ++n) {
      for (int i = 0; i < occ[n - 1]; ++i) {
        Evacuee e;
        e.id = static_cast<int>(evac_.size());
        e.pos.node = n;
        e.route = Route{{n}, 0, 0};
        evac_.push_back(e);
        ++node_held_[n];
        emit(0, e.id, EventType::spawn, n);
      }
    }
    initial_ = static_cast<int>(evac_.size()) - 1;
  }

  SimResult run() {
    const int H = cfg_.horizon_s;
    int active = initial_;
    for (int t = 0; t <= H; ++t) {
      const bool moved = shooter_step(g_, shooter_, t, rng_);
      if (active > 0 && t < H && wants_replan(t, moved)) {
        try {
          replan(t);
        } catch (const std::exception& ex) {
          throw SimulationError(std::string("planner failed at t=") + std::to_string(t) + ": " + ex.what(),
                                finish());
        }
      }
      release_doors();
      arrivals(t);
      movements(t);
      adjudicate_all(t);
      check_capacity();
      active = 0;
      for (size_t i = 1; i < evac_.size(); ++i) {
        if (evac_[i].status == Status::at_node || evac_[i].status == Status::on_edge) ++active;
      }
    }
    return finish();
  }

 private:
  void emit(int t, int agent, EventType type, int where, int aux = 0) {
    trace_.push_back({t, agent, type, where, aux});
  }

  bool wants_replan(int t, bool moved) const {
    if (t == 0) return true;
    if (cfg_.replan.kind == ReplanPolicy::Kind::every_k_seconds) return cfg_.replan.k > 0 && t % cfg_.replan.k == 0;
    return moved;
  }

  void replan(int t) {
    const NodeId node_s = shooter_.pos.node;
    emit(t, 0, EventType::replan, node_s);
    std::map<NodeId, std::vector<int>> at;
    for (size_t i = 1; i < evac_.size(); ++i) {
      if (evac_[i].status == Status::at_node) at[evac_[i].pos.node].push_back(static_cast<int>(i));
    }
    if (at.empty()) return;

    auto assign = [&](Evacuee& e, Route r) {
      e.route = std::move(r);
      e.idx = 0;
    };
    switch (cfg_.planner) {
      case PlannerKind::ccasters: {
        std::map<NodeId, int> occupancy;
        for (auto& [n, ids] : at) occupancy[n] = static_cast<int>(ids.size());
        EvacuationPlan plan = plan_ccasters(g_, occupancy, node_s, pcfg_, t);
        shelter_fallback_ = shelter_fallback_ || plan.shelter_fallback;
        for (auto& [n, ids] : at) {
          size_t next = 0;
          for (const Assignment& a : plan.assignments.at(n)) {
            for (int c = 0; c < a.assigned; ++c) assign(evac_[ids[next++]], a.route);
          }
        }
        break;
      }
      case PlannerKind::naive_asters: {
        NaiveAsters naive(g_, threat_field(g_, node_s, t, pcfg_), t, pcfg_);
        for (auto& [n, ids] : at) {
          Route r = naive.route(n);
          for (int id : ids) assign(evac_[id], r);
        }
        break;
      }
      case PlannerKind::natural_response: {
        for (auto& [n, ids] : at) {
          Route r = plan_natural_response(g_, n, node_s, cfg_.natural, t);
          for (int id : ids) assign(evac_[id], r);
        }
        break;
      }
    }
  }

  void release_doors() {
    for (int id : door_release_) {
      Evacuee& e = evac_[id];
      if (e.holds_edge && e.status == Status::on_edge) {
        --edge_held_[e.pos.directed];
        e.holds_edge = false;
      }
    }
    door_release_.clear();
  }

  void arrivals(int t) {
    std::vector<NodeId> touched;
    for (size_t i = 1; i < evac_.size(); ++i) {
      Evacuee& e = evac_[i];
      if (e.status != Status::on_edge || t < e.pos.arrive_t || e.queued_node) continue;
      const NodeId v = g_.directed_to(e.pos.directed);
      if (g_.is_exit(v)) {
        drop_edge_token(e);
        if (!shooter_.pos.on_edge() && shooter_.pos.node == v) {
          e.status = Status::dead;
          emit(t, e.id, EventType::casualty, 0);
        } else {
          e.status = Status::escaped;
          emit(t, e.id, EventType::escape, v);
        }
        continue;
      }
      node_q_[v].push_back(e.id);
      e.queued_node = true;
      emit(t, e.id, EventType::request, v - 1);
      touched.push_back(v);
    }
    // Blocked arrivals from earlier seconds are still queued; serve every node.
    for (NodeId v = 1; v <= g_.node_count(); ++v) {
      auto& q = node_q_[v];
      while (!q.empty() && node_held_[v] < g_.node(v).max_occupancy) {
        Evacuee& e = evac_[q.front()];
        q.pop_front();
        e.queued_node = false;
        ++node_held_[v];
        emit(t, e.id, EventType::grant, v - 1);
        drop_edge_token(e);
        e.status = Status::at_node;
        e.pos = Position{v};
        emit(t, e.id, EventType::arrive, v);
      }
    }
  }

  void drop_edge_token(Evacuee& e) {
    if (e.holds_edge) {
      --edge_held_[e.pos.directed];
      e.holds_edge = false;
    }
  }

  void leave_edge_queue(Evacuee& e) {
    if (e.queued_edge < 0) return;
    auto& q = edge_q_[e.queued_edge];
    q.erase(std::find(q.begin(), q.end(), e.id));
    e.queued_edge = -1;
  }

  void movements(int t) {
    for (size_t i = 1; i < evac_.size(); ++i) {
      Evacuee& e = evac_[i];
      if (e.status != Status::at_node) continue;
      if (e.idx + 1 >= e.route.steps.size()) {
        leave_edge_queue(e);
        continue;
      }
      const NodeId next = e.route.steps[e.idx + 1];
      if (next == e.pos.node) {
        leave_edge_queue(e);
        ++e.idx;
        emit(t, e.id, EventType::wait, e.pos.node);
        continue;
      }
      const int d = g_.arc(e.pos.node, next)->directed;
      if (e.queued_edge == d) continue;
      leave_edge_queue(e);
      edge_q_[d].push_back(e.id);
      e.queued_edge = d;
      emit(t, e.id, EventType::request, g_.node_count() + d);
    }
    for (int d = 0; d < g_.directed_count(); ++d) {
      auto& q = edge_q_[d];
      const EdgeSpec& spec = g_.directed_edge(d);
      while (!q.empty() && edge_held_[d] < spec.capacity) {
        Evacuee& e = evac_[q.front()];
        q.pop_front();
        e.queued_edge = -1;
        ++edge_held_[d];
        e.holds_edge = true;
        emit(t, e.id, EventType::grant, g_.node_count() + d);
        --node_held_[e.pos.node];
        emit(t, e.id, EventType::depart, e.pos.node, d);
        e.status = Status::on_edge;
        e.pos = Position{e.pos.node, d, t, t + spec.sojourn_s};
        ++e.idx;
        if (spec.door_kind != DoorKind::none) door_release_.push_back(e.id);
      }
      // Agents still waiting for this edge lose the second.
      for (int id : q) emit(t, id, EventType::wait, evac_[id].pos.node);
    }
  }

  void adjudicate_all(int t) {
    for (size_t i = 1; i < evac_.size(); ++i) {
      Evacuee& e = evac_[i];
      if (e.status != Status::at_node && e.status != Status::on_edge) continue;
      Verdict v = adjudicate(g_, e.pos, shooter_.pos, t);
      if (v == Verdict::in_los) {
        emit(t, e.id, EventType::in_los, judged_node(g_, e.pos, t));
      } else if (v == Verdict::casualty) {
        if (e.status == Status::at_node) {
          --node_held_[e.pos.node];
          leave_edge_queue(e);
          emit(t, e.id, EventType::casualty, e.pos.node);
        } else {
          drop_edge_token(e);
          if (e.queued_node) {
            auto& q = node_q_[g_.directed_to(e.pos.directed)];
            q.erase(std::find(q.begin(), q.end(), e.id));
            e.queued_node = false;
          }
          emit(t, e.id, EventType::casualty, 0);
        }
        e.status = Status::dead;
      }
    }
  }

  void check_capacity() {
    for (NodeId n = 1; n <= g_.node_count(); ++n) {
      if (!g_.is_exit(n) && node_held_[n] > g_.node(n).max_occupancy) ++violations_;
    }
    for (int d = 0; d < g_.directed_count(); ++d) {
      if (edge_held_[d] > g_.directed_edge(d).capacity) ++violations_;
    }
  }

  SimResult finish() {
    SimResult r = collect_metrics(trace_, initial_, g_.node_count(), cfg_.horizon_s);
    r.capacity_violations = violations_;
    r.shelter_fallback = shelter_fallback_;
    if (cfg_.keep_trace) r.trace = trace_;
    return r;
  }

  const BuildingGraph& g_;
  const ScenarioConfig& cfg_;
  PlannerConfig pcfg_;
  AgentRng rng_;
  ShooterState shooter_;
  std::vector<Evacuee> evac_;
  int initial_ = 0;
  std::vector<int> node_held_;
  std::vector<int> edge_held_;
  std::vector<std::deque<int>> edge_q_;
  std::vector<std::deque<int>> node_q_;
  std::vector<int> door_release_;
  std::vector<Event> trace_;
  int violations_ = 0;
  bool shelter_fallback_ = false;
};

}  // namespace

SimResult run_simulation(const BuildingGraph& g, const ScenarioConfig& cfg) {
  if (cfg.horizon_s < 1 || cfg.horizon_s > kEventHorizon) throw std::invalid_argument("horizon_s must be in 1..300");
  if (!g.has_node(cfg.shooter_spawn)) throw std::invalid_argument("shooter spawn node does not exist");
  if (cfg.reward_max <= 0) throw std::invalid_argument("reward_max must be positive");
  return Engine(g, cfg).run();
}

SimResult run_simulation(const ScenarioConfig& cfg) {
  return run_simulation(load_bundled(cfg.environment), cfg);
}

std::string occupancy_csv(const SimResult& r, int node_count) {
  std::ostringstream out;
  out << "t";
  for (int n = 1; n <= node_count; ++n) out << ",n" << n;
  out << '\n';
  for (size_t t = 0; t < r.occupancy.size(); ++t) {
    out << t;
    for (int v : r.occupancy[t]) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

std::string trace_log(const SimResult& r) {
  std::ostringstream out;
  for (const Event& e : r.trace) {
    out << e.t << ' ' << e.agent << ' ' << to_string(e.type) << ' ' << e.where;
    if (e.type == EventType::depart) out << ' ' << e.aux;
    out << '\n';
  }
  return out.str();
}

}  // namespace ccasters
