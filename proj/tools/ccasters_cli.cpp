// Command-line front end for the experiment harness.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ccasters/experiment.hpp"

using namespace ccasters;

namespace {

constexpr int kOk = 0;
constexpr int kCellFailure = 1;
constexpr int kConfigError = 2;

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<NodeId> parse_ids(const std::string& s) {
  std::vector<NodeId> ids;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("bad node id '" + tok + "'");
    ids.push_back(v);
  }
  return ids;
}

int report(const ExperimentResult& r) {
  const int bad = r.failures();
  std::fprintf(stderr, "%zu runs, %d failed\n", r.rows.size(), bad);
  for (const auto& row : r.rows) {
    if (!row.error.empty()) std::fprintf(stderr, "  %s spawn %d seed %llu: %s\n", row.environment.c_str(), row.spawn,
                                         static_cast<unsigned long long>(row.seed), row.error.c_str());
  }
  return bad > 0 ? kCellFailure : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity-constrained evacuation planning experiments"};
  app.require_subcommand(1);

  std::string spec_path, out_dir = "out";
  int workers = 0;
  auto* run = app.add_subcommand("run", "Run a scenario matrix from a JSON spec");
  run->add_option("--spec", spec_path, "Experiment spec file")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--workers", workers, "Concurrent runs (0 = all cores)");

  std::string env = "cyclic_school", dist = "rooms_and_halls", values;
  int seeds = 20;
  std::uint64_t base_seed = 1;
  auto* sweep = app.add_subcommand("sweep-reward", "C-CASTERS casualties for several reward_max values");
  sweep->add_option("--env", env)->required();
  sweep->add_option("--dist", dist)->required();
  sweep->add_option("--out", out_dir);
  sweep->add_option("--values", values, "Comma separated reward values (default 6,8,9,10,11,12,14)");
  sweep->add_option("--seeds", seeds);
  sweep->add_option("--base-seed", base_seed);
  sweep->add_option("--workers", workers);

  std::string nodes;
  auto* crowd = app.add_subcommand("crowding", "Seed-averaged occupancy at chosen nodes for every planner");
  crowd->add_option("--env", env)->required();
  crowd->add_option("--nodes", nodes, "Comma separated node ids (default: exit-adjacent nodes)");
  crowd->add_option("--dist", dist);
  crowd->add_option("--out", out_dir);
  crowd->add_option("--seeds", seeds);
  crowd->add_option("--base-seed", base_seed);
  crowd->add_option("--workers", workers);

  std::string runs_path, summary_out;
  auto* summ = app.add_subcommand("summarize", "Summarise a runs.csv by spawn category");
  summ->add_option("--runs", runs_path)->required();
  summ->add_option("--out", summary_out)->required();

  std::string env_file;
  auto* val = app.add_subcommand("validate-env", "Load and validate an environment file");
  val->add_option("file", env_file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) {
      ExperimentSpec spec = parse_spec(read_text(spec_path));
      if (workers > 0) spec.workers = workers;
      if (run->count("--out")) spec.output_dir = out_dir;
      for (const auto& e : spec.environments) load_bundled(e);
      auto r = run_experiment(spec);
      write_outputs(spec, r, spec.output_dir);
      return report(r);
    }
    if (*sweep || *crowd) {
      ExperimentSpec spec;
      spec.environments = {env};
      spec.distributions = {parse_distribution(dist)};
      spec.seeds.clear();
      for (int i = 0; i < seeds; ++i) spec.seeds.push_back(base_seed + i);
      spec.workers = workers;
      load_bundled(env);
      std::filesystem::create_directories(out_dir);
      if (*sweep) {
        if (!values.empty()) {
          spec.reward_sweep.clear();
          std::stringstream ss(values);
          std::string tok;
          while (std::getline(ss, tok, ',')) spec.reward_sweep.push_back(std::stod(tok));
        }
        auto r = sweep_reward(spec, env, spec.distributions[0]);
        csv::write_file(out_dir + "/reward_sweep_" + env + "_" + dist + ".csv", reward_sweep_csv(r, spec.reward_sweep));
        csv::write_file(out_dir + "/runs.csv", runs_csv(r));
        return report(r);
      }
      if (!nodes.empty()) spec.crowding_nodes[env] = parse_ids(nodes);
      auto g = load_bundled(env);
      for (NodeId n : spec.crowding_for(env)) {
        if (!g.has_node(n)) throw std::invalid_argument("unknown node id " + std::to_string(n));
      }
      auto r = run_experiment(spec);
      csv::write_file(out_dir + "/crowding_" + env + ".csv", crowding_csv(r, env));
      return report(r);
    }
    if (*summ) {
      auto rows = summarize(csv::read_file(runs_path));
      csv::write_file(summary_out, summary_csv(rows));
      return kOk;
    }
    if (*val) {
      try {
        auto g = load_environment_file(env_file);
        std::printf("%s: %d nodes, %d edges, %zu exits, valid\n", env_file.c_str(), g.node_count(), g.edge_count(),
                    g.exits().size());
        return kOk;
      } catch (const EnvironmentError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kCellFailure;
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigError;
  }
  return kOk;
}
