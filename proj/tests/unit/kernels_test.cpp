#include <random>

#include "ccasters/kernels.hpp"
#include "doctest.h"

using namespace ccasters::kernels;

TEST_CASE("parallel LOS max equals the serial kernel") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.3);
  const int n = 40, rows = 61;
  std::vector<std::vector<int>> los(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i == j || (i / 8 == j / 8)) los[i].push_back(j);
  std::vector<double> in(rows * n);
  for (double& v : in) v = u(rng);
  std::vector<double> a(in.size()), b(in.size());
  los_max(in.data(), a.data(), rows, n, los, Exec::serial);
  los_max(in.data(), b.data(), rows, n, los, Exec::parallel);
  CHECK(a == b);
  for (double v : a) CHECK(v <= 1.0);
}

TEST_CASE("parallel backward sweep equals the serial sweep") {
  std::mt19937_64 rng(32);
  SweepProblem p;
  p.nodes = 30;
  p.layers = 40;
  p.is_exit.assign(p.nodes, 0);
  p.is_exit[0] = 1;
  p.action_begin.push_back(0);
  for (int u = 0; u < p.nodes; ++u) {
    p.action_to.push_back(u);
    p.action_s.push_back(1);
    p.action_reward.push_back(1.0);
    for (int v : {u - 1, u + 1}) {
      if (v < 0 || v >= p.nodes) continue;
      p.action_to.push_back(v);
      p.action_s.push_back(1 + (u + v) % 3);
      p.action_reward.push_back(v < u ? 1.0 : -1.0);
    }
    p.action_begin.push_back(p.actions());
  }
  std::uniform_real_distribution<double> u(0.0, 0.5);
  p.p_harm.resize(static_cast<size_t>(p.layers) * p.actions());
  for (double& v : p.p_harm) v = u(rng);
  p.feasible.assign(p.p_harm.size(), 1);
  p.exit_credit = 10.0;
  std::vector<double> va, vb;
  std::vector<int> ca, cb;
  backward_sweep(p, va, ca, Exec::serial);
  backward_sweep(p, vb, cb, Exec::parallel);
  CHECK(va == vb);
  CHECK(ca == cb);
  // Exit states hold the per-second credit for the remaining layers.
  CHECK(va[0] == doctest::Approx(10.0 * (p.layers - 1)));
}
