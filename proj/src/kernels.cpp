#include "ccasters/kernels.hpp"

#include <algorithm>

namespace ccasters::kernels {

namespace {

inline void los_row(const double* in, double* out, int n, const std::vector<std::vector<int>>& los) {
  for (int i = 0; i < n; ++i) {
    double m = 0.0;
    for (int j : los[i]) m = std::max(m, in[j]);
    out[i] = std::min(1.0, m);
  }
}

// Ties keep the earlier action, so stay beats moves and low ids beat high.
inline void solve_state(const SweepProblem& p, int k, int u, std::vector<double>& value,
                        std::vector<int>& choice) {
  const int n = p.nodes;
  const int A = p.actions();
  const size_t cell = static_cast<size_t>(k) * n + u;
  if (p.is_exit[u]) {
    value[cell] = p.exit_credit * (p.layers - 1 - k);
    choice[cell] = -1;
    return;
  }
  if (k == p.layers - 1) {
    value[cell] = 0.0;
    choice[cell] = -1;
    return;
  }
  double best = kInfeasible;
  int arg = -1;
  for (int a = p.action_begin[u]; a < p.action_begin[u + 1]; ++a) {
    const int kn = k + p.action_s[a];
    if (kn >= p.layers) continue;
    const size_t ak = static_cast<size_t>(k) * A + a;
    if (!p.feasible[ak]) continue;
    const double next = value[static_cast<size_t>(kn) * n + p.action_to[a]];
    if (next <= kInfeasible) continue;
    const double ph = p.p_harm[ak];
    const double q = ph * p.penalty + (1.0 - ph) * (p.action_reward[a] + next);
    if (arg < 0 || q > best + 1e-12) {
      best = q;
      arg = a;
    }
  }
  value[cell] = best;
  choice[cell] = arg;
}

}  // namespace

void los_max(const double* values, double* out, int rows, int n, const std::vector<std::vector<int>>& los,
             Exec exec) {
  if (exec == Exec::serial) {
    for (int k = 0; k < rows; ++k) los_row(values + static_cast<size_t>(k) * n, out + static_cast<size_t>(k) * n, n, los);
    return;
  }
#pragma omp parallel for schedule(static)
  for (int k = 0; k < rows; ++k) {
    los_row(values + static_cast<size_t>(k) * n, out + static_cast<size_t>(k) * n, n, los);
  }
}

void backward_sweep(const SweepProblem& p, std::vector<double>& value, std::vector<int>& choice, Exec exec) {
  const size_t cells = static_cast<size_t>(p.layers) * p.nodes;
  value.assign(cells, kInfeasible);
  choice.assign(cells, -1);
  for (int k = p.layers - 1; k >= 0; --k) {
    if (exec == Exec::serial) {
      for (int u = 0; u < p.nodes; ++u) solve_state(p, k, u, value, choice);
    } else {
#pragma omp parallel for schedule(static)
      for (int u = 0; u < p.nodes; ++u) solve_state(p, k, u, value, choice);
    }
  }
}

}  // namespace ccasters::kernels
