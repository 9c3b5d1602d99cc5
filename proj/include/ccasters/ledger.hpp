#pragma once

#include <stdexcept>
#include <vector>

#include "ccasters/building_graph.hpp"

namespace ccasters {

inline constexpr int kEventHorizon = 300;

// Node sequence starting at depart_t; a repeated id is a one-second wait.
struct Route {
  std::vector<NodeId> steps;
  int depart_t = 0;
  int maxsend = 0;

  NodeId start() const { return steps.front(); }
  NodeId last() const { return steps.back(); }
  bool operator==(const Route&) const = default;
};

// Seconds from depart_t until the final step is reached.
int route_duration(const BuildingGraph& g, const Route& r);

// One time-expanded capacity cell. Entities: node id - 1, then N + directed.
struct Cell {
  int entity = 0;
  int t = 0;
  auto operator<=>(const Cell&) const = default;
};

class OverReservation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CapacityLedger {
 public:
  // Cells for t in 0..horizon_s, initialised to the graph capacities or, when
  // uniform_capacity > 0, to that value for every entity.
  explicit CapacityLedger(const BuildingGraph& g, int horizon_s = kEventHorizon, int uniform_capacity = 0);

  int horizon_s() const { return horizon_; }
  int entity_count() const { return entities_; }
  int node_count() const { return nodes_; }

  int capacity(int entity) const { return cap_[entity]; }
  int avail(int t, int entity) const { return avail_[static_cast<size_t>(t) * entities_ + entity]; }
  int node_avail(int t, NodeId n) const { return avail(t, n - 1); }
  int edge_avail(int t, int directed) const { return avail(t, nodes_ + directed); }

  int node_entity(NodeId n) const { return n - 1; }
  int edge_entity(int directed) const { return nodes_ + directed; }

  // Debits k from each cell; cells past the horizon are ignored. Atomic:
  // throws OverReservation without touching anything if a cell would go negative.
  void debit(const std::vector<Cell>& cells, int k);

  bool operator==(const CapacityLedger&) const = default;

 private:
  int horizon_;
  int nodes_;
  int entities_;
  std::vector<int> cap_;
  std::vector<int> avail_;
};

// Time-expanded cells a single traveller occupies along the route: the origin
// at depart_t, each wait second, the first second of a door edge or every
// occupied second of an open edge, and each node at its arrival second.
std::vector<Cell> footprint(const BuildingGraph& g, const Route& r);

// Largest k that fits along the route's footprint (0 when infeasible).
int compute_maxsend(const BuildingGraph& g, const Route& r, const CapacityLedger& ledger);

void reserve_capacity(const BuildingGraph& g, CapacityLedger& ledger, const Route& r, int k);

}  // namespace ccasters
