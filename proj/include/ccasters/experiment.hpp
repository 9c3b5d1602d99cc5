#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ccasters/csv.hpp"
#include "ccasters/sim.hpp"

namespace ccasters {

// Spawn lists and crowding node sets used by the bundled environments.
std::vector<NodeId> default_spawns(const std::string& env);
std::vector<NodeId> default_crowding_nodes(const std::string& env);
int default_evacuees_per_node(const std::string& env);
std::vector<double> default_reward_sweep();

struct ExperimentSpec {
  std::vector<std::string> environments{"acyclic_school", "cyclic_school"};
  std::vector<PlannerKind> planners{PlannerKind::ccasters, PlannerKind::naive_asters, PlannerKind::natural_response};
  std::vector<Distribution> distributions{Distribution::rooms_only, Distribution::rooms_and_halls};
  std::map<std::string, std::vector<NodeId>> spawns;           // empty entry -> default list
  std::map<std::string, int> evacuees_per_node;                // missing -> environment default
  std::map<std::string, std::vector<NodeId>> crowding_nodes;   // missing -> exit-adjacent defaults
  std::vector<std::uint64_t> seeds;                            // empty -> 20 consecutive from base_seed
  std::uint64_t base_seed = 1;
  double reward_max = 10.0;
  std::vector<double> reward_sweep = default_reward_sweep();
  int crowding_until_s = 75;
  int workers = 0;  // 0 -> OpenMP default
  std::string output_dir = "out";

  std::vector<std::uint64_t> seed_list() const;
  std::vector<NodeId> spawn_list(const std::string& env) const;
  int evacuees_for(const std::string& env) const;
  std::vector<NodeId> crowding_for(const std::string& env) const;
};

// Parses the JSON spec format documented in the README; throws std::invalid_argument.
ExperimentSpec parse_spec(const std::string& json_text);

std::string spawn_category(const BuildingGraph& g, NodeId spawn);

struct RunRow {
  std::string environment;
  PlannerKind planner = PlannerKind::ccasters;
  Distribution distribution = Distribution::rooms_only;
  NodeId spawn = 0;
  std::string category;
  std::uint64_t seed = 0;
  double reward_max = 10.0;
  int initial = 0;
  int casualties = 0;
  int escapes = 0;
  int remaining = 0;
  long los_seconds = 0;
  int capacity_violations = 0;
  int conservation_failures = 0;
  std::string error;
  std::vector<int> cumulative_casualties;
  // Occupancy of the crowding nodes for t = 0..crowding_until_s, [node][t].
  std::vector<std::vector<int>> crowding;
  std::vector<NodeId> crowding_nodes;
};

struct ExperimentResult {
  std::vector<RunRow> rows;
  int failures() const;
};

struct ExperimentCell {
  std::string environment;
  PlannerKind planner;
  Distribution distribution;
  NodeId spawn;
  std::uint64_t seed;
  double reward_max;
};

// Deterministic lexicographic cell order: environment, planner, distribution, spawn, seed.
std::vector<ExperimentCell> enumerate_cells(const ExperimentSpec& spec);

// Runs cells concurrently; row order follows the cell order.
ExperimentResult run_cells(const ExperimentSpec& spec, const std::vector<ExperimentCell>& cells);
ExperimentResult run_experiment(const ExperimentSpec& spec);
// C-CASTERS only, one cell per (reward value, spawn, seed).
ExperimentResult sweep_reward(const ExperimentSpec& spec, const std::string& env, Distribution dist);

std::string runs_csv(const ExperimentResult& r);
std::string aggregates_csv(const ExperimentResult& r);
// Seed-averaged occupancy at the crowding nodes of one environment, long format:
// distribution,planner,node,t,mean_occupancy for t = 0..crowding_until_s.
std::string crowding_csv(const ExperimentResult& r, const std::string& env);
// Cumulative average casualties per reward value, rows t = 0..300.
std::string reward_sweep_csv(const ExperimentResult& r, const std::vector<double>& values);

struct SummaryRow {
  std::string environment;
  std::string planner;
  std::string category;
  std::string distribution;
  int runs = 0;
  double initial = 0;
  double casualties = 0;
  double casualty_pct = 0;
  double escapes = 0;
  double escape_pct = 0;
  double los_seconds = 0;
};

// Table-shaped summary over (environment, planner, spawn category, distribution).
std::vector<SummaryRow> summarize(const csv::Table& runs);
std::string summary_csv(const std::vector<SummaryRow>& rows);

// Writes runs.csv, aggregates.csv, summary.csv and crowding_<env>.csv to dir.
void write_outputs(const ExperimentSpec& spec, const ExperimentResult& r, const std::string& dir);

}  // namespace ccasters
