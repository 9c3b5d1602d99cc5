#include <cmath>
#include <filesystem>
#include <map>

#include "ccasters/experiment.hpp"
#include "doctest.h"

using namespace ccasters;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec s;
  s.environments = {"acyclic_school"};
  s.planners = {PlannerKind::natural_response, PlannerKind::naive_asters};
  s.distributions = {Distribution::rooms_only};
  s.spawns["acyclic_school"] = {52, 20};
  s.seeds = {1, 2, 3};
  return s;
}

}  // namespace

TEST_CASE("spec parsing") {
  auto s = parse_spec(R"({"environments": ["cyclic_school"], "planners": ["ccasters"],
                          "distributions": ["rooms_only"], "seed_count": 3, "base_seed": 40,
                          "spawns": {"cyclic_school": [2, 69]}})");
  CHECK(s.environments == std::vector<std::string>{"cyclic_school"});
  CHECK(s.seed_list() == std::vector<std::uint64_t>{40, 41, 42});
  CHECK(s.spawn_list("cyclic_school") == std::vector<NodeId>{2, 69});
  CHECK(s.evacuees_for("cyclic_school") == 4);
  CHECK(s.crowding_for("cyclic_school") == default_crowding_nodes("cyclic_school"));
  CHECK_THROWS_AS(parse_spec(R"({"seedz": 3})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec(R"({"planners": ["psychic"]})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec(R"({"planners": []})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec(R"({"reward_max": -2})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec("not json"), std::invalid_argument);
}

TEST_CASE("the default matrix has the expected shape and order") {
  ExperimentSpec s;
  s.environments = {"acyclic_school"};
  auto cells = enumerate_cells(s);
  CHECK(cells.size() == 1080);
  CHECK(cells.front().planner == PlannerKind::ccasters);
  CHECK(cells.front().spawn == 2);
  CHECK(cells.front().seed == 1);
  CHECK(cells[1].seed == 2);
  CHECK(cells[20].spawn == 6);
  CHECK(cells.back().planner == PlannerKind::natural_response);
  CHECK(cells.back().distribution == Distribution::rooms_and_halls);
  s.environments = {"cyclic_school"};
  CHECK(enumerate_cells(s).size() == 960);
}

TEST_CASE("spawn categories") {
  auto g = load_bundled("acyclic_school");
  std::map<std::string, int> count;
  for (NodeId s : default_spawns("acyclic_school")) ++count[spawn_category(g, s)];
  CHECK(count["exit"] == 3);
  CHECK(count["hall"] == 3);
  CHECK(count["room"] == 3);
  auto c = load_bundled("cyclic_school");
  count.clear();
  for (NodeId s : default_spawns("cyclic_school")) ++count[spawn_category(c, s)];
  CHECK(count["exit"] == 1);
  CHECK(count["hall"] == 3);
  CHECK(count["room"] == 4);
}

TEST_CASE("aggregates and summaries re-derive from the per-run rows") {
  auto spec = small_spec();
  auto r = run_experiment(spec);
  REQUIRE(r.rows.size() == 12);
  CHECK(r.failures() == 0);

  // Independent re-aggregation straight from the row structs.
  std::map<std::tuple<std::string, NodeId>, std::vector<double>> cas;
  for (const auto& row : r.rows) cas[{std::string(to_string(row.planner)), row.spawn}].push_back(row.casualties);
  auto agg = csv::parse(aggregates_csv(r));
  REQUIRE(agg.rows.size() == 4);
  const int cp = agg.column("planner"), cs = agg.column("spawn"), cm = agg.column("casualties_mean"),
            csd = agg.column("casualties_sd"), cn = agg.column("runs");
  for (const auto& row : agg.rows) {
    const auto& v = cas.at({row[cp], std::stoi(row[cs])});
    double m = 0;
    for (double x : v) m += x;
    m /= v.size();
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    CHECK(std::stoi(row[cn]) == 3);
    CHECK(std::stod(row[cm]) == doctest::Approx(m).epsilon(1e-4));
    CHECK(std::stod(row[csd]) == doctest::Approx(std::sqrt(ss / 2)).epsilon(1e-4));
  }

  auto summary = summarize(csv::parse(runs_csv(r)));
  REQUIRE(summary.size() == 4);  // 2 planners x 2 categories
  for (const auto& s : summary) {
    double total = 0, init = 0;
    int n = 0;
    for (const auto& row : r.rows) {
      if (std::string(to_string(row.planner)) != s.planner || row.category != s.category) continue;
      total += row.casualties;
      init += row.initial;
      ++n;
    }
    CHECK(s.runs == n);
    CHECK(s.casualties == doctest::Approx(total / n));
    CHECK(s.casualty_pct == doctest::Approx(100.0 * total / init));
  }
}

TEST_CASE("outputs do not depend on the worker count") {
  auto spec = small_spec();
  spec.workers = 1;
  auto a = run_experiment(spec);
  spec.workers = 3;
  auto b = run_experiment(spec);
  CHECK(runs_csv(a) == runs_csv(b));
  CHECK(aggregates_csv(a) == aggregates_csv(b));
  CHECK(crowding_csv(a, "acyclic_school") == crowding_csv(b, "acyclic_school"));
}

TEST_CASE("crowding series cover every planner and node") {
  auto spec = small_spec();
  auto r = run_experiment(spec);
  auto t = csv::parse(crowding_csv(r, "acyclic_school"));
  CHECK(t.header == std::vector<std::string>{"distribution", "planner", "node", "t", "mean_occupancy"});
  CHECK(t.rows.size() == 2u * 3u * 76u);
}

TEST_CASE("bad cells are reported, not fatal") {
  auto spec = small_spec();
  spec.spawns["acyclic_school"] = {52, 400};
  spec.planners = {PlannerKind::natural_response};
  auto r = run_experiment(spec);
  CHECK(r.failures() == 3);
  CHECK(runs_csv(r).find("does not exist") != std::string::npos);
  spec.environments = {"nowhere"};
  CHECK(run_experiment(spec).failures() == static_cast<int>(run_experiment(spec).rows.size()));
}

TEST_CASE("reward sweep table") {
  ExperimentSpec spec;
  spec.spawns["cyclic_school"] = {30};
  spec.seeds = {1};
  spec.reward_sweep = {6, 10};
  auto r = sweep_reward(spec, "cyclic_school", Distribution::rooms_only);
  REQUIRE(r.rows.size() == 2);
  auto t = csv::parse(reward_sweep_csv(r, spec.reward_sweep));
  CHECK(t.header == std::vector<std::string>{"t", "r6.00", "r10.00"});
  CHECK(t.rows.size() == 301);
  CHECK(std::stod(t.rows.back()[1]) == r.rows[0].casualties);
}

TEST_CASE("written outputs") {
  auto spec = small_spec();
  auto dir = std::filesystem::temp_directory_path() / "ccasters_out_test";
  std::filesystem::remove_all(dir);
  write_outputs(spec, run_experiment(spec), dir.string());
  for (const char* f : {"runs.csv", "aggregates.csv", "summary.csv", "crowding_acyclic_school.csv"}) {
    CHECK(std::filesystem::exists(dir / f));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("csv helpers") {
  CHECK(csv::fmt(-0.00001) == "0.0000");
  CHECK(csv::fmt(2.5, 1) == "2.5");
  CHECK(csv::join({"a", "b"}) == "a,b");
  auto t = csv::parse("x,y\n1,2\n");
  CHECK(t.column("y") == 1);
  CHECK_THROWS(t.column("z"));
}
