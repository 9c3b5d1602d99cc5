#include "ccasters/ledger.hpp"

#include <algorithm>
#include <climits>
#include <string>

namespace ccasters {

int route_duration(const BuildingGraph& g, const Route& r) {
  int secs = 0;
  for (size_t i = 1; i < r.steps.size(); ++i) {
    if (r.steps[i] == r.steps[i - 1]) {
      secs += 1;
    } else {
      auto a = g.arc(r.steps[i - 1], r.steps[i]);
      if (!a) throw std::invalid_argument("route has non-adjacent consecutive steps");
      secs += a->sojourn_s;
    }
  }
  return secs;
}

CapacityLedger::CapacityLedger(const BuildingGraph& g, int horizon_s, int uniform_capacity)
    : horizon_(horizon_s), nodes_(g.node_count()), entities_(g.node_count() + g.directed_count()) {
  cap_.resize(entities_);
  for (NodeId n = 1; n <= nodes_; ++n) cap_[n - 1] = g.node(n).max_occupancy;
  for (int d = 0; d < g.directed_count(); ++d) cap_[nodes_ + d] = g.directed_edge(d).capacity;
  if (uniform_capacity > 0) std::fill(cap_.begin(), cap_.end(), uniform_capacity);
  avail_.resize(static_cast<size_t>(horizon_ + 1) * entities_);
  for (int t = 0; t <= horizon_; ++t) {
    std::copy(cap_.begin(), cap_.end(), avail_.begin() + static_cast<size_t>(t) * entities_);
  }
}

void CapacityLedger::debit(const std::vector<Cell>& cells, int k) {
  if (k < 0) throw std::invalid_argument("negative reservation");
  if (k == 0) return;
  for (const Cell& c : cells) {
    if (c.t > horizon_) continue;
    if (avail(c.t, c.entity) < k) {
      throw OverReservation("reservation of " + std::to_string(k) + " exceeds capacity of entity " +
                            std::to_string(c.entity) + " at t=" + std::to_string(c.t));
    }
  }
  for (const Cell& c : cells) {
    if (c.t > horizon_) continue;
    avail_[static_cast<size_t>(c.t) * entities_ + c.entity] -= k;
  }
}

std::vector<Cell> footprint(const BuildingGraph& g, const Route& r) {
  std::vector<Cell> cells;
  if (r.steps.empty()) return cells;
  const int n = g.node_count();
  int t = r.depart_t;
  cells.push_back({r.steps[0] - 1, t});
  for (size_t i = 1; i < r.steps.size(); ++i) {
    const NodeId from = r.steps[i - 1], to = r.steps[i];
    if (from == to) {
      cells.push_back({to - 1, t + 1});
      t += 1;
      continue;
    }
    auto a = g.arc(from, to);
    if (!a) throw std::invalid_argument("route has non-adjacent consecutive steps");
    const int s = a->sojourn_s;
    const int last_edge_second = g.is_door(a->directed) ? t + 1 : std::max(t + 1, t + s - 1);
    for (int tau = t + 1; tau <= last_edge_second; ++tau) cells.push_back({n + a->directed, tau});
    cells.push_back({to - 1, t + s});
    t += s;
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

int compute_maxsend(const BuildingGraph& g, const Route& r, const CapacityLedger& ledger) {
  int k = INT_MAX;
  for (const Cell& c : footprint(g, r)) {
    if (c.t > ledger.horizon_s()) continue;
    k = std::min(k, ledger.avail(c.t, c.entity));
  }
  return k == INT_MAX ? 0 : k;
}

void reserve_capacity(const BuildingGraph& g, CapacityLedger& ledger, const Route& r, int k) {
  ledger.debit(footprint(g, r), k);
}

}  // namespace ccasters
