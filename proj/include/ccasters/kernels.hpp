#pragma once

#include <vector>

namespace ccasters::kernels {

enum class Exec { serial, parallel };

// out[k*n + i] = min(1, max over j in los[i] of values[k*n + j]) for k < rows.
// los holds 0-based indices.
void los_max(const double* values, double* out, int rows, int n, const std::vector<std::vector<int>>& los,
             Exec exec);

// Backward induction problem over (node, layer). Nodes are 0-based; layer k
// is absolute second t0 + k and the last layer is the horizon.
struct SweepProblem {
  int nodes = 0;
  int layers = 0;
  // Actions of node u are action_begin[u] .. action_begin[u+1]-1; the first
  // one is always the stay action.
  std::vector<int> action_begin;
  std::vector<int> action_to;
  std::vector<int> action_s;
  std::vector<double> action_reward;
  std::vector<char> is_exit;
  // Indexed [layer * actions + a].
  std::vector<double> p_harm;
  std::vector<char> feasible;
  double penalty = -10.0;
  double exit_credit = 1.0;

  int actions() const { return static_cast<int>(action_to.size()); }
};

inline constexpr double kInfeasible = -1e300;

// Fills value[layer * nodes + u] and choice[layer * nodes + u] (action index,
// -1 when the state is terminal or has no feasible action).
void backward_sweep(const SweepProblem& p, std::vector<double>& value, std::vector<int>& choice, Exec exec);

}  // namespace ccasters::kernels
