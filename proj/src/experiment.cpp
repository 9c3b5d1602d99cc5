#include "ccasters/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <map>
#include <memory>
#include <tuple>

#include <omp.h>

#include "json.hpp"

namespace ccasters {

std::vector<NodeId> default_spawns(const std::string& env) {
  if (env == "acyclic_school") return {2, 6, 11, 20, 38, 51, 52, 54, 55};
  if (env == "cyclic_school") return {2, 16, 29, 30, 37, 44, 59, 70};
  return {1};
}

std::vector<NodeId> default_crowding_nodes(const std::string& env) {
  if (env == "acyclic_school") return {1, 12, 18};
  if (env == "cyclic_school") return {2, 13, 16, 27};
  return {};
}

// 10 per node matches the acyclic reference totals (330 / 510); the cyclic
// totals (156 / 272) correspond to 4 per node.
int default_evacuees_per_node(const std::string& env) {
  return env == "cyclic_school" ? 4 : 10;
}

std::vector<double> default_reward_sweep() { return {6, 8, 9, 10, 11, 12, 14}; }

std::vector<std::uint64_t> ExperimentSpec::seed_list() const {
  if (!seeds.empty()) return seeds;
  std::vector<std::uint64_t> out;
  for (int i = 0; i < 20; ++i) out.push_back(base_seed + i);
  return out;
}

std::vector<NodeId> ExperimentSpec::spawn_list(const std::string& env) const {
  auto it = spawns.find(env);
  if (it != spawns.end() && !it->second.empty()) return it->second;
  return default_spawns(env);
}

int ExperimentSpec::evacuees_for(const std::string& env) const {
  auto it = evacuees_per_node.find(env);
  return it != evacuees_per_node.end() ? it->second : default_evacuees_per_node(env);
}

std::vector<NodeId> ExperimentSpec::crowding_for(const std::string& env) const {
  auto it = crowding_nodes.find(env);
  return it != crowding_nodes.end() ? it->second : default_crowding_nodes(env);
}

ExperimentSpec parse_spec(const std::string& json_text) {
  using nlohmann::json;
  ExperimentSpec spec;
  try {
    json j = json::parse(json_text);
    for (auto it = j.begin(); it != j.end(); ++it) {
      static const std::vector<std::string> known{"environments", "planners", "distributions", "spawns",
                                                  "evacuees_per_node", "crowding_nodes", "seeds", "seed_count",
                                                  "base_seed", "reward_max", "reward_sweep", "crowding_until_s",
                                                  "workers", "output_dir"};
      if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
        throw std::invalid_argument("unknown spec key '" + it.key() + "'");
      }
    }
    if (j.contains("environments")) spec.environments = j["environments"].get<std::vector<std::string>>();
    if (j.contains("planners")) {
      spec.planners.clear();
      for (auto& p : j["planners"]) spec.planners.push_back(parse_planner(p.get<std::string>()));
    }
    if (j.contains("distributions")) {
      spec.distributions.clear();
      for (auto& d : j["distributions"]) spec.distributions.push_back(parse_distribution(d.get<std::string>()));
    }
    if (j.contains("spawns")) spec.spawns = j["spawns"].get<std::map<std::string, std::vector<NodeId>>>();
    if (j.contains("evacuees_per_node")) spec.evacuees_per_node = j["evacuees_per_node"].get<std::map<std::string, int>>();
    if (j.contains("crowding_nodes")) {
      spec.crowding_nodes = j["crowding_nodes"].get<std::map<std::string, std::vector<NodeId>>>();
    }
    spec.base_seed = j.value("base_seed", spec.base_seed);
    if (j.contains("seeds")) spec.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    if (j.contains("seed_count")) {
      int n = j["seed_count"].get<int>();
      if (n < 1) throw std::invalid_argument("seed_count must be positive");
      spec.seeds.clear();
      for (int i = 0; i < n; ++i) spec.seeds.push_back(spec.base_seed + i);
    }
    spec.reward_max = j.value("reward_max", spec.reward_max);
    if (j.contains("reward_sweep")) spec.reward_sweep = j["reward_sweep"].get<std::vector<double>>();
    spec.crowding_until_s = j.value("crowding_until_s", spec.crowding_until_s);
    spec.workers = j.value("workers", spec.workers);
    spec.output_dir = j.value("output_dir", spec.output_dir);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad spec: ") + e.what());
  }
  if (spec.environments.empty() || spec.planners.empty() || spec.distributions.empty()) {
    throw std::invalid_argument("spec needs at least one environment, planner and distribution");
  }
  if (spec.reward_max <= 0) throw std::invalid_argument("reward_max must be positive");
  return spec;
}

std::string spawn_category(const BuildingGraph& g, NodeId spawn) {
  return std::string(to_string(g.kind(spawn)));
}

int ExperimentResult::failures() const {
  int n = 0;
  for (const auto& r : rows) {
    if (!r.error.empty() || r.capacity_violations > 0 || r.conservation_failures > 0) ++n;
  }
  return n;
}

std::vector<ExperimentCell> enumerate_cells(const ExperimentSpec& spec) {
  std::vector<ExperimentCell> cells;
  const auto seeds = spec.seed_list();
  for (const auto& env : spec.environments) {
    for (PlannerKind p : spec.planners) {
      for (Distribution d : spec.distributions) {
        for (NodeId s : spec.spawn_list(env)) {
          for (auto seed : seeds) cells.push_back({env, p, d, s, seed, spec.reward_max});
        }
      }
    }
  }
  return cells;
}

namespace {

RunRow run_one(const BuildingGraph& g, const ExperimentSpec& spec, const ExperimentCell& c) {
  RunRow row;
  row.environment = c.environment;
  row.planner = c.planner;
  row.distribution = c.distribution;
  row.spawn = c.spawn;
  row.seed = c.seed;
  row.reward_max = c.reward_max;
  row.crowding_nodes = spec.crowding_for(c.environment);

  ScenarioConfig cfg;
  cfg.environment = c.environment;
  cfg.distribution = c.distribution;
  cfg.evacuees_per_node = spec.evacuees_for(c.environment);
  cfg.shooter_spawn = c.spawn;
  cfg.planner = c.planner;
  cfg.reward_max = c.reward_max;
  cfg.seed = c.seed;
  cfg.keep_trace = false;

  SimResult res;
  try {
    if (!g.has_node(c.spawn)) throw std::invalid_argument("spawn node " + std::to_string(c.spawn) + " does not exist");
    row.category = spawn_category(g, c.spawn);
    res = run_simulation(g, cfg);
  } catch (const SimulationError& e) {
    row.error = e.what();
    res = e.partial();
  } catch (const std::exception& e) {
    row.error = e.what();
    return row;
  }

  row.initial = res.initial;
  row.casualties = res.casualties;
  row.escapes = res.escapes;
  row.remaining = res.remaining;
  row.los_seconds = res.los_seconds_total;
  row.capacity_violations = res.capacity_violations;
  row.cumulative_casualties = res.cumulative_casualties;
  for (size_t t = 0; t < res.occupancy.size(); ++t) {
    int present = res.in_transit[t];
    for (NodeId n = 1; n <= g.node_count(); ++n) {
      const int occ = res.occupancy[t][n - 1];
      present += occ;
      if (!g.is_exit(n) && occ > g.node(n).max_occupancy) ++row.capacity_violations;
    }
    if (present + res.cumulative_casualties[t] + res.cumulative_escapes[t] != res.initial) ++row.conservation_failures;
  }
  const int until = std::min<int>(spec.crowding_until_s, static_cast<int>(res.occupancy.size()) - 1);
  for (NodeId n : row.crowding_nodes) {
    std::vector<int> series;
    if (g.has_node(n)) {
      for (int t = 0; t <= until; ++t) series.push_back(res.occupancy[t][n - 1]);
    }
    row.crowding.push_back(std::move(series));
  }
  return row;
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / v.size();
}

double stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / (v.size() - 1));
}

}  // namespace

ExperimentResult run_cells(const ExperimentSpec& spec, const std::vector<ExperimentCell>& cells) {
  std::map<std::string, std::unique_ptr<BuildingGraph>> graphs;
  std::map<std::string, std::string> load_errors;
  for (const auto& c : cells) {
    if (graphs.contains(c.environment) || load_errors.contains(c.environment)) continue;
    try {
      graphs[c.environment] = std::make_unique<BuildingGraph>(load_bundled(c.environment));
    } catch (const std::exception& e) {
      load_errors[c.environment] = e.what();
    }
  }

  ExperimentResult out;
  out.rows.resize(cells.size());
  const int workers = spec.workers > 0 ? spec.workers : omp_get_max_threads();
  const long n = static_cast<long>(cells.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (long i = 0; i < n; ++i) {
    const auto& c = cells[i];
    auto it = graphs.find(c.environment);
    if (it == graphs.end()) {
      RunRow row;
      row.environment = c.environment;
      row.planner = c.planner;
      row.distribution = c.distribution;
      row.spawn = c.spawn;
      row.seed = c.seed;
      row.reward_max = c.reward_max;
      row.error = load_errors.at(c.environment);
      out.rows[i] = std::move(row);
    } else {
      out.rows[i] = run_one(*it->second, spec, c);
    }
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) { return run_cells(spec, enumerate_cells(spec)); }

ExperimentResult sweep_reward(const ExperimentSpec& spec, const std::string& env, Distribution dist) {
  std::vector<ExperimentCell> cells;
  const auto seeds = spec.seed_list();
  for (double r : spec.reward_sweep) {
    for (NodeId s : spec.spawn_list(env)) {
      for (auto seed : seeds) cells.push_back({env, PlannerKind::ccasters, dist, s, seed, r});
    }
  }
  return run_cells(spec, cells);
}

namespace {

std::string clean(std::string s) {
  for (char& ch : s) {
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  }
  return s;
}

}  // namespace

std::string runs_csv(const ExperimentResult& r) {
  std::string out =
      "environment,planner,distribution,spawn,spawn_category,seed,reward_max,initial,casualties,escapes,remaining,"
      "los_seconds,capacity_violations,conservation_failures,error\n";
  for (const auto& row : r.rows) {
    out += csv::join({row.environment, std::string(to_string(row.planner)), std::string(to_string(row.distribution)),
                      std::to_string(row.spawn), row.category, std::to_string(row.seed), csv::fmt(row.reward_max, 2),
                      std::to_string(row.initial), std::to_string(row.casualties), std::to_string(row.escapes),
                      std::to_string(row.remaining), std::to_string(row.los_seconds),
                      std::to_string(row.capacity_violations), std::to_string(row.conservation_failures),
                      clean(row.error)});
    out += '\n';
  }
  return out;
}

std::string aggregates_csv(const ExperimentResult& r) {
  using Key = std::tuple<std::string, std::string, std::string, NodeId, double>;
  struct Acc {
    std::string category;
    std::vector<double> cas, esc, los;
    double initial = 0;
  };
  std::map<Key, Acc> groups;
  for (const auto& row : r.rows) {
    if (!row.error.empty()) continue;
    Key k{row.environment, std::string(to_string(row.planner)), std::string(to_string(row.distribution)), row.spawn,
          row.reward_max};
    Acc& a = groups[k];
    a.category = row.category;
    a.initial = row.initial;
    a.cas.push_back(row.casualties);
    a.esc.push_back(row.escapes);
    a.los.push_back(static_cast<double>(row.los_seconds));
  }
  std::string out =
      "environment,planner,distribution,spawn,spawn_category,reward_max,runs,initial,casualties_mean,casualties_sd,"
      "casualties_pct,escapes_mean,escapes_sd,escapes_pct,los_seconds_mean,los_seconds_sd\n";
  for (const auto& [k, a] : groups) {
    const double cm = mean(a.cas), em = mean(a.esc);
    const double pct_c = a.initial > 0 ? 100.0 * cm / a.initial : 0.0;
    const double pct_e = a.initial > 0 ? 100.0 * em / a.initial : 0.0;
    out += csv::join({std::get<0>(k), std::get<1>(k), std::get<2>(k), std::to_string(std::get<3>(k)), a.category,
                      csv::fmt(std::get<4>(k), 2), std::to_string(a.cas.size()), csv::fmt(a.initial, 0),
                      csv::fmt(cm), csv::fmt(stddev(a.cas)), csv::fmt(pct_c), csv::fmt(em), csv::fmt(stddev(a.esc)),
                      csv::fmt(pct_e), csv::fmt(mean(a.los)), csv::fmt(stddev(a.los))});
    out += '\n';
  }
  return out;
}

std::string crowding_csv(const ExperimentResult& r, const std::string& env) {
  using Key = std::tuple<std::string, std::string, NodeId>;
  std::map<Key, std::pair<std::vector<double>, int>> sums;
  for (const auto& row : r.rows) {
    if (row.environment != env || !row.error.empty()) continue;
    for (size_t i = 0; i < row.crowding_nodes.size(); ++i) {
      auto& [sum, count] = sums[{std::string(to_string(row.distribution)), std::string(to_string(row.planner)),
                                 row.crowding_nodes[i]}];
      const auto& series = row.crowding[i];
      if (sum.size() < series.size()) sum.resize(series.size(), 0.0);
      for (size_t t = 0; t < series.size(); ++t) sum[t] += series[t];
      ++count;
    }
  }
  std::string out = "distribution,planner,node,t,mean_occupancy\n";
  for (const auto& [k, v] : sums) {
    for (size_t t = 0; t < v.first.size(); ++t) {
      out += csv::join({std::get<0>(k), std::get<1>(k), std::to_string(std::get<2>(k)), std::to_string(t),
                        csv::fmt(v.first[t] / v.second)});
      out += '\n';
    }
  }
  return out;
}

std::string reward_sweep_csv(const ExperimentResult& r, const std::vector<double>& values) {
  std::vector<std::vector<double>> sum(values.size());
  std::vector<int> count(values.size(), 0);
  size_t len = 0;
  for (const auto& row : r.rows) {
    if (!row.error.empty()) continue;
    for (size_t i = 0; i < values.size(); ++i) {
      if (row.reward_max != values[i]) continue;
      auto& s = sum[i];
      if (s.size() < row.cumulative_casualties.size()) s.resize(row.cumulative_casualties.size(), 0.0);
      for (size_t t = 0; t < row.cumulative_casualties.size(); ++t) s[t] += row.cumulative_casualties[t];
      ++count[i];
      len = std::max(len, s.size());
    }
  }
  std::string out = "t";
  for (double v : values) out += ",r" + csv::fmt(v, 2);
  out += '\n';
  for (size_t t = 0; t < len; ++t) {
    out += std::to_string(t);
    for (size_t i = 0; i < values.size(); ++i) {
      const double m = (count[i] > 0 && t < sum[i].size()) ? sum[i][t] / count[i] : 0.0;
      out += ',' + csv::fmt(m);
    }
    out += '\n';
  }
  return out;
}

std::vector<SummaryRow> summarize(const csv::Table& runs) {
  const int c_env = runs.column("environment"), c_pl = runs.column("planner"), c_dist = runs.column("distribution"),
            c_cat = runs.column("spawn_category"), c_init = runs.column("initial"),
            c_cas = runs.column("casualties"), c_esc = runs.column("escapes"), c_los = runs.column("los_seconds"),
            c_err = runs.column("error");
  using Key = std::tuple<std::string, std::string, std::string, std::string>;
  struct Acc {
    int n = 0;
    double init = 0, cas = 0, esc = 0, los = 0;
  };
  std::map<Key, Acc> groups;
  for (const auto& row : runs.rows) {
    if (!row[c_err].empty()) continue;
    Acc& a = groups[{row[c_env], row[c_pl], row[c_cat], row[c_dist]}];
    ++a.n;
    a.init += std::stod(row[c_init]);
    a.cas += std::stod(row[c_cas]);
    a.esc += std::stod(row[c_esc]);
    a.los += std::stod(row[c_los]);
  }
  std::vector<SummaryRow> out;
  for (const auto& [k, a] : groups) {
    SummaryRow s;
    std::tie(s.environment, s.planner, s.category, s.distribution) = k;
    s.runs = a.n;
    s.initial = a.init / a.n;
    s.casualties = a.cas / a.n;
    s.escapes = a.esc / a.n;
    s.los_seconds = a.los / a.n;
    s.casualty_pct = s.initial > 0 ? 100.0 * s.casualties / s.initial : 0.0;
    s.escape_pct = s.initial > 0 ? 100.0 * s.escapes / s.initial : 0.0;
    out.push_back(s);
  }
  return out;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out =
      "environment,planner,spawn_category,distribution,runs,initial,casualties_mean,casualties_pct,escapes_mean,"
      "escapes_pct,los_seconds_mean\n";
  for (const auto& s : rows) {
    out += csv::join({s.environment, s.planner, s.category, s.distribution, std::to_string(s.runs),
                      csv::fmt(s.initial, 2), csv::fmt(s.casualties), csv::fmt(s.casualty_pct), csv::fmt(s.escapes),
                      csv::fmt(s.escape_pct), csv::fmt(s.los_seconds)});
    out += '\n';
  }
  return out;
}

void write_outputs(const ExperimentSpec& spec, const ExperimentResult& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::string runs = runs_csv(r);
  csv::write_file(dir + "/runs.csv", runs);
  csv::write_file(dir + "/aggregates.csv", aggregates_csv(r));
  csv::write_file(dir + "/summary.csv", summary_csv(summarize(csv::parse(runs))));
  for (const auto& env : spec.environments) {
    if (!spec.crowding_for(env).empty()) csv::write_file(dir + "/crowding_" + env + ".csv", crowding_csv(r, env));
  }
}

}  // namespace ccasters
