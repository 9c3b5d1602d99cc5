// OpenMP kernels against their serial reference on the bundled schools.

#include <benchmark/benchmark.h>

#include "ccasters/planner.hpp"
#include "ccasters/threat.hpp"

using namespace ccasters;

namespace {

const BuildingGraph& school(int which) {
  static const BuildingGraph acyclic = load_bundled("acyclic_school");
  static const BuildingGraph cyclic = load_bundled("cyclic_school");
  return which == 0 ? acyclic : cyclic;
}

kernels::Exec exec_of(const benchmark::State& state) {
  return state.range(1) ? kernels::Exec::parallel : kernels::Exec::serial;
}

void BM_LosMax(benchmark::State& state) {
  const auto& g = school(static_cast<int>(state.range(0)));
  const int n = g.node_count();
  const int rows = kEventHorizon + 1;
  auto f = propagate_location(g, 2, kEventHorizon);
  std::vector<double> values(static_cast<size_t>(rows) * n), out(values.size());
  for (int t = 0; t < rows; ++t) {
    auto v = projected_node_values(f, g, t);
    std::copy(v.begin(), v.end(), values.begin() + static_cast<size_t>(t) * n);
  }
  std::vector<std::vector<int>> los(n);
  for (NodeId u = 1; u <= n; ++u)
    for (NodeId m : g.line_of_sight(u)) los[u - 1].push_back(m - 1);
  for (auto _ : state) {
    kernels::los_max(values.data(), out.data(), rows, n, los, exec_of(state));
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * rows * n);
}

void BM_BackwardSweep(benchmark::State& state) {
  const auto& g = school(static_cast<int>(state.range(0)));
  PlannerConfig cfg;
  cfg.exec = exec_of(state);
  auto h = threat_field(g, 2, 0, cfg);
  ValueIteration vi(g, h, 0, cfg);
  CapacityLedger ledger(g);
  for (auto _ : state) {
    vi.solve(ledger);
    benchmark::DoNotOptimize(vi.value(1));
  }
}

void BM_PlanCcasters(benchmark::State& state) {
  const auto& g = school(static_cast<int>(state.range(0)));
  PlannerConfig cfg;
  cfg.exec = exec_of(state);
  std::map<NodeId, int> occ;
  for (NodeId n = 1; n <= g.node_count(); ++n)
    if (!g.is_exit(n)) occ[n] = 10;
  for (auto _ : state) benchmark::DoNotOptimize(plan_ccasters(g, occ, 2, cfg).round_count);
}

// Args: {environment (0 acyclic, 1 cyclic), parallel flag}
BENCHMARK(BM_LosMax)->ArgsProduct({{0, 1}, {0, 1}});
BENCHMARK(BM_BackwardSweep)->ArgsProduct({{0, 1}, {0, 1}});
BENCHMARK(BM_PlanCcasters)->ArgsProduct({{0, 1}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
