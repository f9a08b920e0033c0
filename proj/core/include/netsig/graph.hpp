#pragma once

#include <string>
#include <vector>

#include "netsig/pcorr.hpp"

namespace netsig {

struct EdgePolicy {
  enum class Mode { threshold, density };
  Mode mode = Mode::density;
  double tau = 0.0;      // threshold mode: minimum |rho|, in [0, 1]
  double density = 0.3;  // density mode: fraction of strongest pairs, in (0, 1]

  static EdgePolicy by_threshold(double tau);
  static EdgePolicy by_density(double d);
};

struct Edge {
  int i = 0;  // i < j
  int j = 0;
  double weight = 0.0;  // |rho_ij|, strictly positive
};

// Undirected, no self-loops, at most one edge per pair. Edges are kept
// sorted by (i, j) so equal inputs produce identical iteration order.
struct WeightedGraph {
  int node_count = 0;
  std::vector<RoiLabel> labels;
  std::vector<Edge> edges;
  std::vector<std::vector<std::pair<int, double>>> adjacency;  // per node: (neighbor, weight)

  double total_weight() const;  // m, the sum of edge weights
  std::vector<double> weighted_degrees() const;
};

struct BinaryGraph {
  int node_count = 0;
  std::vector<RoiLabel> labels;
  std::vector<std::pair<int, int>> pairs;       // i < j, sorted
  std::vector<std::vector<int>> neighbors;      // sorted per node
};

// Candidate weight is |rho_ij|. threshold mode keeps pairs with weight
// >= tau; density mode keeps the ceil(d * R(R-1)/2) largest, ties broken
// toward the lexicographically smaller (i, j). Zero-weight pairs are never
// kept (stored weights are strictly positive). Throws EmptyGraph when no
// edge survives.
WeightedGraph build_weighted_graph(const PartialCorrelationMatrix& pcm, const EdgePolicy& policy);

BinaryGraph binarize(const WeightedGraph& g);

// Edge-list dump: "# roi,<index>,<name>" label block, then "i,j,weight" rows.
std::string write_edge_list(const WeightedGraph& g);

}  // namespace netsig
