#pragma once

#include <iosfwd>
#include <vector>

#include "ccasters/building_graph.hpp"
#include "ccasters/kernels.hpp"

namespace ccasters {

// Shooter presence probability per second. Entities are laid out as the N
// nodes (index id - 1) followed by the 2E directed edges (index N + directed).
class LocationField {
 public:
  LocationField(int horizon_s, int node_count, int directed_count);

  int horizon_s() const { return horizon_; }
  int node_count() const { return nodes_; }
  int entity_count() const { return entities_; }

  double node_mass(int t, NodeId n) const { return at(t, n - 1); }
  double edge_mass(int t, int directed) const { return at(t, nodes_ + directed); }
  // Both directions of an undirected edge added together.
  double undirected_mass(int t, int edge) const {
    return edge_mass(t, 2 * edge) + edge_mass(t, 2 * edge + 1);
  }
  double total(int t) const;

  double& at(int t, int entity) { return mass_[static_cast<size_t>(t) * entities_ + entity]; }
  double at(int t, int entity) const { return mass_[static_cast<size_t>(t) * entities_ + entity]; }
  const double* row(int t) const { return mass_.data() + static_cast<size_t>(t) * entities_; }

 private:
  int horizon_;
  int nodes_;
  int entities_;
  std::vector<double> mass_;
};

// Per-node harm probability for absolute seconds start_t .. start_t + horizon_s.
class HarmField {
 public:
  HarmField(int start_t, int horizon_s, int node_count);

  int start_t() const { return start_; }
  int horizon_s() const { return horizon_; }
  int end_t() const { return start_ + horizon_; }
  int node_count() const { return nodes_; }

  // Absolute time; seconds past the end read as zero harm.
  double harm(int t, NodeId n) const {
    int k = t - start_;
    if (k < 0 || k > horizon_) return 0.0;
    return values_[static_cast<size_t>(k) * nodes_ + (n - 1)];
  }
  double& local(int k, NodeId n) { return values_[static_cast<size_t>(k) * nodes_ + (n - 1)]; }
  double* row(int k) { return values_.data() + static_cast<size_t>(k) * nodes_; }
  const double* row(int k) const { return values_.data() + static_cast<size_t>(k) * nodes_; }

 private:
  int start_;
  int horizon_;
  int nodes_;
  std::vector<double> values_;
};

// Unbiased random walk with committed edge traversal, starting at node_s.
LocationField propagate_location(const BuildingGraph& g, NodeId node_s, int horizon_s);

// Per-node value before the LOS max: the node's own mass or the largest
// incident undirected edge mass, whichever is bigger.
std::vector<double> projected_node_values(const LocationField& f, const BuildingGraph& g, int t);

// Line-of-sight smearing of a location field; start_t shifts the time axis.
HarmField smear_harm(const LocationField& f, const BuildingGraph& g, int start_t = 0,
                     kernels::Exec exec = kernels::Exec::serial);

// Smearing applied directly to a node-value table (rows = seconds).
HarmField smear_node_values(const std::vector<std::vector<double>>& values, const BuildingGraph& g,
                            int start_t = 0);

// Probability of harm while moving from -> to (or staying when equal)
// departing at absolute second depart_t.
double transition_harm_probability(const HarmField& h, const BuildingGraph& g, NodeId from, NodeId to,
                                   int depart_t);

// CSV dumps: one row per entity, one column per second.
void write_location_csv(std::ostream& out, const LocationField& f, const BuildingGraph& g);
void write_harm_csv(std::ostream& out, const HarmField& h);

}  // namespace ccasters
