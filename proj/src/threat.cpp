#include "ccasters/threat.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "ccasters/kernels.hpp"

namespace ccasters {

LocationField::LocationField(int horizon_s, int node_count, int directed_count)
    : horizon_(horizon_s),
      nodes_(node_count),
      entities_(node_count + directed_count),
      mass_(static_cast<size_t>(horizon_s + 1) * (node_count + directed_count), 0.0) {}

double LocationField::total(int t) const {
  const double* r = row(t);
  return std::accumulate(r, r + entities_, 0.0);
}

HarmField::HarmField(int start_t, int horizon_s, int node_count)
    : start_(start_t), horizon_(horizon_s), nodes_(node_count),
      values_(static_cast<size_t>(horizon_s + 1) * node_count, 0.0) {}

LocationField propagate_location(const BuildingGraph& g, NodeId node_s, int horizon_s) {
  if (!g.has_node(node_s)) throw std::out_of_range("propagate_location: unknown node");
  if (horizon_s < 1) throw std::invalid_argument("propagate_location: horizon must be >= 1");

  const int n = g.node_count();
  const int dc = g.directed_count();
  LocationField f(horizon_s, n, dc);

  // pipe[d][k]: mass that has spent k seconds on directed edge d (k >= 1).
  std::vector<std::vector<double>> pipe(dc), next_pipe(dc);
  for (int d = 0; d < dc; ++d) {
    pipe[d].assign(g.directed_edge(d).sojourn_s, 0.0);
    next_pipe[d].assign(g.directed_edge(d).sojourn_s, 0.0);
  }
  std::vector<double> node(n + 1, 0.0), next_node(n + 1, 0.0);
  node[node_s] = 1.0;
  f.at(0, node_s - 1) = 1.0;

  for (int t = 0; t < horizon_s; ++t) {
    std::fill(next_node.begin(), next_node.end(), 0.0);
    for (auto& p : next_pipe) std::fill(p.begin(), p.end(), 0.0);

    for (int d = 0; d < dc; ++d) {
      const int s = static_cast<int>(pipe[d].size());
      for (int k = 1; k < s; ++k) {
        if (pipe[d][k] == 0.0) continue;
        if (k + 1 < s) {
          next_pipe[d][k + 1] += pipe[d][k];
        } else {
          next_node[g.directed_to(d)] += pipe[d][k];
        }
      }
    }
    for (NodeId u = 1; u <= n; ++u) {
      if (node[u] == 0.0) continue;
      auto arcs = g.neighbors(u);
      const double share = node[u] / static_cast<double>(arcs.size() + 1);
      next_node[u] += share;
      for (const Arc& a : arcs) {
        if (a.sojourn_s == 1) {
          next_node[a.to] += share;
        } else {
          next_pipe[a.directed][1] += share;
        }
      }
    }

    std::swap(node, next_node);
    std::swap(pipe, next_pipe);
    for (NodeId u = 1; u <= n; ++u) f.at(t + 1, u - 1) = node[u];
    for (int d = 0; d < dc; ++d) {
      f.at(t + 1, n + d) = std::accumulate(pipe[d].begin(), pipe[d].end(), 0.0);
    }
  }
  return f;
}

std::vector<double> projected_node_values(const LocationField& f, const BuildingGraph& g, int t) {
  std::vector<double> v(g.node_count());
  for (NodeId u = 1; u <= g.node_count(); ++u) {
    double m = f.node_mass(t, u);
    for (const Arc& a : g.neighbors(u)) m = std::max(m, f.undirected_mass(t, a.edge));
    v[u - 1] = m;
  }
  return v;
}

namespace {

std::vector<std::vector<int>> zero_based_los(const BuildingGraph& g) {
  std::vector<std::vector<int>> los(g.node_count());
  for (NodeId u = 1; u <= g.node_count(); ++u) {
    for (NodeId m : g.line_of_sight(u)) los[u - 1].push_back(m - 1);
  }
  return los;
}

}  // namespace

HarmField smear_harm(const LocationField& f, const BuildingGraph& g, int start_t, kernels::Exec exec) {
  const int n = g.node_count();
  const int rows = f.horizon_s() + 1;
  std::vector<double> projected(static_cast<size_t>(rows) * n);
  for (int t = 0; t < rows; ++t) {
    auto v = projected_node_values(f, g, t);
    std::copy(v.begin(), v.end(), projected.begin() + static_cast<size_t>(t) * n);
  }
  HarmField h(start_t, f.horizon_s(), n);
  kernels::los_max(projected.data(), h.row(0), rows, n, zero_based_los(g), exec);
  return h;
}

HarmField smear_node_values(const std::vector<std::vector<double>>& values, const BuildingGraph& g,
                            int start_t) {
  if (values.empty()) throw std::invalid_argument("smear_node_values: empty table");
  const int n = g.node_count();
  const int rows = static_cast<int>(values.size());
  std::vector<double> flat;
  flat.reserve(static_cast<size_t>(rows) * n);
  for (const auto& r : values) {
    if (static_cast<int>(r.size()) != n) throw std::invalid_argument("smear_node_values: row size mismatch");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  HarmField h(start_t, rows - 1, n);
  kernels::los_max(flat.data(), h.row(0), rows, n, zero_based_los(g), kernels::Exec::serial);
  return h;
}

double transition_harm_probability(const HarmField& h, const BuildingGraph& g, NodeId from, NodeId to,
                                   int depart_t) {
  int s = 1;
  if (from != to) {
    auto a = g.arc(from, to);
    if (!a) throw std::invalid_argument("transition_harm_probability: nodes are not adjacent");
    s = a->sojourn_s;
  }
  if (depart_t < h.start_t() || depart_t + s > h.end_t()) {
    throw std::out_of_range("transition_harm_probability: interval outside the harm horizon");
  }
  double survive = 1.0;
  for (int k = 0; k < s; ++k) {
    const int t = depart_t + k;
    double hz = h.harm(t, from);
    if (k > 0) hz = std::max(hz, h.harm(t, to));
    survive *= 1.0 - hz;
  }
  return 1.0 - survive;
}

void write_location_csv(std::ostream& out, const LocationField& f, const BuildingGraph& g) {
  char buf[64];
  out << "entity";
  for (int t = 0; t <= f.horizon_s(); ++t) out << ",t" << t;
  out << '\n';
  for (int e = 0; e < f.entity_count(); ++e) {
    if (e < f.node_count()) {
      out << 'N' << (e + 1);
    } else {
      int d = e - f.node_count();
      out << 'E' << g.directed_from(d) << "->" << g.directed_to(d);
    }
    for (int t = 0; t <= f.horizon_s(); ++t) {
      std::snprintf(buf, sizeof buf, ",%.6f", f.at(t, e));
      out << buf;
    }
    out << '\n';
  }
}

void write_harm_csv(std::ostream& out, const HarmField& h) {
  char buf[64];
  out << "node";
  for (int k = 0; k <= h.horizon_s(); ++k) out << ",t" << (h.start_t() + k);
  out << '\n';
  for (NodeId u = 1; u <= h.node_count(); ++u) {
    out << 'N' << u;
    for (int k = 0; k <= h.horizon_s(); ++k) {
      std::snprintf(buf, sizeof buf, ",%.6f", h.row(k)[u - 1]);
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace ccasters
