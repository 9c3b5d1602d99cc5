// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Usage: acceptance [criterion numbers...]   (default: all)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>

#include "../oracles.hpp"
#include "../toy_tables.hpp"
#include "ccasters/baselines.hpp"
#include "ccasters/experiment.hpp"
#include "ccasters/planner.hpp"

using namespace ccasters;
using Clock = std::chrono::steady_clock;

namespace {

struct Result {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ------------------------------------------------------------------ 1-5

Result toy_location() {
  auto g = load_bundled("toy_graph");
  auto t0 = Clock::now();
  auto f = propagate_location(g, 4, toy::kSeconds - 1);
  double secs = seconds_since(t0);
  double worst = 0;
  int cells = 0;
  for (int t = 0; t < toy::kSeconds; ++t) {
    for (NodeId n = 1; n <= 6; ++n, ++cells)
      worst = std::max(worst, std::abs(oracle::round2(f.node_mass(t, n)) - toy::kNodeMass[n - 1][t]));
    for (size_t i = 0; i < toy::kEdges.size(); ++i, ++cells) {
      auto arc = g.arc(toy::kEdges[i].first, toy::kEdges[i].second);
      worst = std::max(worst, std::abs(oracle::round2(f.undirected_mass(t, arc->edge)) - toy::kEdgeMass[i][t]));
    }
  }
  return {worst <= 0.01 + 1e-9 && secs < 1.0,
          fmt("%d cells, max deviation %.3f, %.2e s", cells, worst, secs)};
}

Result toy_harm_t0() {
  auto g = load_bundled("toy_graph");
  auto h = smear_harm(propagate_location(g, 4, 7), g);
  bool ok = true;
  for (NodeId n = 1; n <= 6; ++n) ok = ok && h.harm(0, n) == toy::kHarmT0[n - 1];
  // structural checks on later columns: clamping and dominance over location
  auto f = propagate_location(g, 4, 7);
  for (int t = 0; t <= 7; ++t)
    for (NodeId n = 1; n <= 6; ++n) ok = ok && h.harm(t, n) <= 1.0 && h.harm(t, n) >= f.node_mass(t, n);
  return {ok, fmt("N1..N6 at t=0: %.2f %.2f %.2f %.2f %.2f %.2f", h.harm(0, 1), h.harm(0, 2), h.harm(0, 3),
                  h.harm(0, 4), h.harm(0, 5), h.harm(0, 6))};
}

Result ledger_example() {
  auto g = load_bundled("acyclic_school");
  CapacityLedger L(g);
  Route r{{2, 1, 52}, 0, 0};
  auto t0 = Clock::now();
  reserve_capacity(g, L, r, 4);
  double secs = seconds_since(t0);
  const int rows[] = {L.node_entity(1), L.node_entity(2), L.node_entity(52),
                      L.edge_entity(g.arc(2, 1)->directed), L.edge_entity(g.arc(1, 52)->directed)};
  int bad = 0;
  for (int i = 0; i < 5; ++i)
    for (int t = 0; t < toy::kSeconds; ++t) bad += L.avail(t, rows[i]) != toy::kLedger[i][t];
  return {bad == 0 && secs < 1e-3, fmt("%d of 40 cells differ, reserve took %.2e s", bad, secs)};
}

Result maxsend_example() {
  auto g = load_bundled("acyclic_school");
  CapacityLedger L(g);
  const int a = L.edge_avail(1, g.arc(2, 1)->directed), b = L.edge_avail(5, g.arc(1, 52)->directed);
  const int k = compute_maxsend(g, Route{{2, 1, 52}, 0, 0}, L);
  return {a == 20 && b == 4 && k == 4, fmt("availabilities (%d, %d) -> maxsend %d", a, b, k)};
}

BuildingGraph reward_fixture() {
  GraphParts p;
  p.nodes = {{1, NodeKind::exit, 0, kExitOccupancy, {}},
             {2, NodeKind::hall, 0, 20, {}},
             {3, NodeKind::room, 5, 20, {}},
             {4, NodeKind::hall, 0, 20, {}}};
  p.edges = {{1, 2, 2, 20, DoorKind::none, 20}, {2, 3, 2, 2, DoorKind::single_door, 2}, {3, 4, 2, 20, DoorKind::none, 20}};
  p.los = LosTable{{1, {1, 2}}, {2, {1, 2}}, {3, {3}}, {4, {4}}};
  return BuildingGraph::from_parts(p);
}

Result reward_suite() {
  auto g = reward_fixture();
  RewardParams r;
  int ok = 0;
  ok += reward(g, 3, 2, Outcome::death, r) == r.penalty_max;
  ok += reward(g, 2, 1, Outcome::normal, r) == r.reward_max;
  ok += reward(g, 3, 3, Outcome::normal, r) == 1.0;
  ok += reward(g, 2, 3, Outcome::normal, r) == 1.0;
  ok += reward(g, 3, 2, Outcome::normal, r) == 1.0;
  ok += reward(g, 3, 4, Outcome::normal, r) == -1.0;

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 0.7);
  int same = 0, total = 0;
  for (int trial = 0; trial < 50; ++trial) {
    HarmField h(0, 30, 4);
    for (int k = 0; k <= 30; ++k)
      for (NodeId n = 1; n <= 4; ++n) h.local(k, n) = u(rng);
    PlannerConfig base;
    ValueIteration v(g, h, 0, base);
    v.solve(CapacityLedger(g));
    for (double f : {0.1, 0.5, 2.0, 9.0}) {
      PlannerConfig c = base;
      c.reward = base.reward.scaled(f);
      ValueIteration s(g, h, 0, c);
      s.solve(CapacityLedger(g));
      for (NodeId n = 2; n <= 4; ++n, ++total) same += s.route_from(n) == v.route_from(n);
    }
  }
  return {ok == 6 && same == total, fmt("%d/6 branch checks, %d/%d scaled argmax routes identical", ok, same, total)};
}

// ------------------------------------------------------------------ 6-8

Result uncapacitated_equivalence() {
  std::mt19937_64 rng(606);
  int graphs = 0, mismatched = 0, compared = 0;
  while (graphs < 200) {
    int n = std::uniform_int_distribution<int>(2, 12)(rng);
    auto g = BuildingGraph::from_parts(oracle::random_parts(rng, n, graphs % 2 == 0));
    ++graphs;
    PlannerConfig cfg;
    cfg.uniform_capacity = kUnconstrainedCapacity;
    NodeId s = std::uniform_int_distribution<int>(1, n)(rng);
    int t0 = std::uniform_int_distribution<int>(0, 20)(rng);
    std::map<NodeId, int> occ;
    for (NodeId v = 1; v <= n; ++v)
      if (!g.is_exit(v)) occ[v] = std::uniform_int_distribution<int>(1, 40)(rng);
    auto plan = plan_ccasters(g, occ, s, cfg, t0);
    NaiveAsters naive(g, threat_field(g, s, t0, cfg), t0, cfg);
    for (auto [v, c] : occ) {
      ++compared;
      const auto& list = plan.assignments.at(v);
      if (plan.round_count != 1 || list.size() != 1 || list[0].route.steps != naive.route(v).steps) ++mismatched;
    }
  }
  return {mismatched == 0, fmt("%d graphs, %d start nodes, %d mismatches", graphs, compared, mismatched)};
}

Result small_instance_optimality() {
  std::mt19937_64 rng(707);
  int fields = 0, states = 0, mismatched = 0;
  long leaves = 0;
  while (fields < 100) {
    int n = std::uniform_int_distribution<int>(2, 6)(rng);
    auto g = BuildingGraph::from_parts(oracle::random_parts(rng, n, fields % 2 == 0, 3));
    const int H = std::uniform_int_distribution<int>(4, 12)(rng);
    const int t0 = std::uniform_int_distribution<int>(0, 5)(rng);
    HarmField h(t0, H, n);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k <= H; ++k)
      for (NodeId v = 1; v <= n; ++v) {
        double x = u(rng);
        h.local(k, v) = x < 0.35 ? 0.0 : (x > 0.95 ? 1.0 : 0.7 * u(rng));
      }
    // Partly booked ledger so feasibility matters too.
    CapacityLedger L(g);
    int blocks = std::uniform_int_distribution<int>(0, 6)(rng);
    for (int i = 0; i < blocks; ++i) {
      int e = std::uniform_int_distribution<int>(0, L.entity_count() - 1)(rng);
      int t = t0 + std::uniform_int_distribution<int>(1, H)(rng);
      L.debit({{e, t}}, L.avail(t, e));
    }
    PlannerConfig cfg;
    cfg.lookahead_s = H;
    ValueIteration vi(g, h, t0, cfg);
    vi.solve(L);
    ++fields;
    const oracle::Rewards rw{cfg.reward.reward_max, cfg.reward.penalty_max, cfg.reward.interim,
                             cfg.reward.exit_credit_per_s};
    NodeId start = std::uniform_int_distribution<int>(1, n)(rng);
    for (NodeId s : {start, static_cast<NodeId>(start % n + 1)}) {
      ++states;
      double best = oracle::best_sequence_value(g, h, L, s, t0, t0 + H, rw, &leaves);
      if (std::isinf(best)) {
        mismatched += vi.value(s) != kernels::kInfeasible;
        continue;
      }
      auto r = vi.route_from(s);
      const double got = r ? vi.route_value(*r) : kernels::kInfeasible;
      if (std::abs(got - best) > 1e-9 * std::max(1.0, std::abs(best)) || vi.value(s) != got) ++mismatched;
    }
  }
  return {mismatched == 0,
          fmt("%d harm fields, %d start states, %ld enumerated sequences, %d mismatches", fields, states, leaves,
              mismatched)};
}

Result conservation() {
  std::mt19937_64 rng(808);
  double worst = 0;
  for (int i = 0; i < 500; ++i) {
    int n = std::uniform_int_distribution<int>(2, 30)(rng);
    auto g = BuildingGraph::from_parts(oracle::random_parts(rng, n, i % 2 == 0, 8));
    auto f = propagate_location(g, std::uniform_int_distribution<int>(1, n)(rng), 60);
    for (int t = 0; t <= 60; ++t) worst = std::max(worst, std::abs(f.total(t) - 1.0));
  }
  return {worst <= 1e-9, fmt("500 graphs x 61 seconds, max |sum - 1| = %.2e", worst)};
}

// ------------------------------------------------------------------ 9-13

struct Matrix {
  ExperimentResult acyclic_a, acyclic_b, cyclic;
  double acyclic_secs = 0, cyclic_secs = 0;
  bool ready = false;
};

Matrix& matrix() {
  static Matrix m;
  if (m.ready) return m;
  ExperimentSpec spec;
  spec.environments = {"acyclic_school"};
  auto t0 = Clock::now();
  m.acyclic_a = run_experiment(spec);
  m.acyclic_secs = seconds_since(t0);
  m.acyclic_b = run_experiment(spec);
  spec.environments = {"cyclic_school"};
  t0 = Clock::now();
  m.cyclic = run_experiment(spec);
  m.cyclic_secs = seconds_since(t0);
  m.ready = true;
  return m;
}

Result simulator_safety() {
  auto& m = matrix();
  long runs = 0, violations = 0, conservation = 0, errors = 0;
  for (const auto* r : {&m.acyclic_a, &m.cyclic}) {
    for (const auto& row : r->rows) {
      ++runs;
      violations += row.capacity_violations;
      conservation += row.conservation_failures;
      errors += !row.error.empty();
      conservation += row.casualties + row.escapes + row.remaining != row.initial;
    }
  }
  return {violations == 0 && conservation == 0 && errors == 0 && runs == 2040,
          fmt("%ld runs, %ld capacity violations, %ld conservation failures, %ld errors", runs, violations,
              conservation, errors)};
}

Result determinism() {
  auto& m = matrix();
  ExperimentSpec spec;
  spec.environments = {"acyclic_school"};
  bool same = runs_csv(m.acyclic_a) == runs_csv(m.acyclic_b) &&
              aggregates_csv(m.acyclic_a) == aggregates_csv(m.acyclic_b) &&
              crowding_csv(m.acyclic_a, "acyclic_school") == crowding_csv(m.acyclic_b, "acyclic_school") &&
              summary_csv(summarize(csv::parse(runs_csv(m.acyclic_a)))) ==
                  summary_csv(summarize(csv::parse(runs_csv(m.acyclic_b))));
  return {same && m.acyclic_a.rows.size() == 1080,
          fmt("%zu runs twice, CSVs %s, one pass %.1f s", m.acyclic_a.rows.size(), same ? "identical" : "DIFFER",
              m.acyclic_secs)};
}

Result directional_casualties() {
  auto& m = matrix();
  // (env, category, distribution) -> planner -> (sum, count)
  std::map<std::tuple<std::string, std::string, std::string>, std::map<PlannerKind, std::pair<double, int>>> cells;
  std::map<PlannerKind, double> totals;
  for (const auto* r : {&m.acyclic_a, &m.cyclic}) {
    for (const auto& row : r->rows) {
      auto& acc = cells[{row.environment, row.category, std::string(to_string(row.distribution))}][row.planner];
      acc.first += row.casualties;
      acc.second += 1;
      totals[row.planner] += row.casualties;
    }
  }
  int wins = 0;
  std::string per_cell;
  for (auto& [key, by] : cells) {
    auto mean = [&](PlannerKind p) { return by[p].first / by[p].second; };
    const double cc = mean(PlannerKind::ccasters), na = mean(PlannerKind::naive_asters),
                 nr = mean(PlannerKind::natural_response);
    const bool win = cc < na && cc < nr;
    wins += win;
    std::printf("    %-15s %-5s %-16s cc %7.2f  naive %7.2f  natural %7.2f %s\n", std::get<0>(key).c_str(),
                std::get<1>(key).c_str(), std::get<2>(key).c_str(), cc, na, nr, win ? "" : "(no win)");
  }
  const double vs_naive = 1.0 - totals[PlannerKind::ccasters] / totals[PlannerKind::naive_asters];
  const double vs_natural = 1.0 - totals[PlannerKind::ccasters] / totals[PlannerKind::natural_response];
  return {cells.size() == 12 && wins >= 10 && vs_naive >= 0.15 && vs_natural >= 0.25,
          fmt("wins %d/12 cells, reduction vs naive %.1f%%, vs natural %.1f%%", wins, 100 * vs_naive,
              100 * vs_natural)};
}

Result crowding() {
  auto& m = matrix();
  bool ok = true;
  std::string detail;
  for (const auto* r : {&m.acyclic_a, &m.cyclic}) {
    const std::string env = r->rows.front().environment;
    const auto nodes = default_crowding_nodes(env);
    // planner -> node -> summed series over all runs of that planner
    std::map<PlannerKind, std::map<NodeId, std::vector<double>>> sum;
    std::map<PlannerKind, int> runs;
    for (const auto& row : r->rows) {
      ++runs[row.planner];
      for (size_t i = 0; i < row.crowding_nodes.size(); ++i) {
        auto& s = sum[row.planner][row.crowding_nodes[i]];
        s.resize(row.crowding[i].size(), 0.0);
        for (size_t t = 0; t < row.crowding[i].size(); ++t) s[t] += row.crowding[i][t];
      }
    }
    auto peak = [&](PlannerKind p, NodeId n) {
      double best = 0;
      for (double v : sum[p][n]) best = std::max(best, v / runs[p]);
      return best;
    };
    int good = 0;
    for (NodeId n : nodes) {
      const double cc = peak(PlannerKind::ccasters, n);
      const double base = std::max(peak(PlannerKind::naive_asters, n), peak(PlannerKind::natural_response, n));
      good += cc <= 0.7 * base;
      std::printf("    %-15s node %2d  peak cc %6.2f  baselines max %6.2f  ratio %.2f\n", env.c_str(), n, cc, base,
                  base > 0 ? cc / base : 0.0);
    }
    ok = ok && 2 * good > static_cast<int>(nodes.size());
    detail += fmt("%s %d/%zu nodes; ", env.c_str(), good, nodes.size());
  }
  return {ok, detail};
}

Result reward_sweep_shape() {
  ExperimentSpec spec;
  spec.environments = {"cyclic_school"};
  auto r = sweep_reward(spec, "cyclic_school", Distribution::rooms_and_halls);
  std::map<double, std::pair<double, int>> acc;
  for (const auto& row : r.rows) {
    acc[row.reward_max].first += row.cumulative_casualties.back();
    acc[row.reward_max].second += 1;
  }
  double best_v = 0, best = 1e300;
  std::string line;
  for (auto& [v, a] : acc) {
    const double mean = a.first / a.second;
    line += fmt("r%g=%.2f ", v, mean);
    if (mean < best) best = mean, best_v = v;
  }
  auto mean_of = [&](double v) { return acc[v].first / acc[v].second; };
  const bool ok = (best_v >= 8 && best_v <= 11) && mean_of(6) > best && mean_of(14) > best;
  return {ok, fmt("best reward_max %g; casualties at 300 s: %s", best_v, line.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"toy graph location field within 0.01", toy_location},
      {"toy graph harm at t=0", toy_harm_t0},
      {"capacity ledger after reserving 4 along [2,1,52]", ledger_example},
      {"maxsend of availabilities (20, 4)", maxsend_example},
      {"reward branches and scaling invariance", reward_suite},
      {"uncapacitated planner equals naive baseline", uncapacitated_equivalence},
      {"value iteration equals exhaustive enumeration", small_instance_optimality},
      {"location mass conservation", conservation},
      {"simulator capacity and conservation over the full matrix", simulator_safety},
      {"determinism of the acyclic matrix", determinism},
      {"directional casualty comparison", directional_casualties},
      {"directional crowding comparison", crowding},
      {"reward sweep shape", reward_sweep_shape},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!wanted.empty() && !wanted.contains(id)) continue;
    auto t0 = Clock::now();
    Result v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s %2d %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                v.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
