#include "netsig/graph.hpp"

#include <algorithm>
#include <cmath>

#include "netsig/error.hpp"
#include "netsig/text.hpp"

namespace netsig {

EdgePolicy EdgePolicy::by_threshold(double tau) {
  EdgePolicy p;
  p.mode = Mode::threshold;
  p.tau = tau;
  return p;
}

EdgePolicy EdgePolicy::by_density(double d) {
  EdgePolicy p;
  p.mode = Mode::density;
  p.density = d;
  return p;
}

double WeightedGraph::total_weight() const {
  double m = 0.0;
  for (const auto& e : edges) m += e.weight;
  return m;
}

std::vector<double> WeightedGraph::weighted_degrees() const {
  std::vector<double> k(static_cast<size_t>(node_count), 0.0);
  for (const auto& e : edges) {
    k[static_cast<size_t>(e.i)] += e.weight;
    k[static_cast<size_t>(e.j)] += e.weight;
  }
  return k;
}

WeightedGraph build_weighted_graph(const PartialCorrelationMatrix& pcm, const EdgePolicy& policy) {
  const int R = static_cast<int>(pcm.values.rows());
  std::vector<Edge> candidates;
  candidates.reserve(static_cast<size_t>(R) * static_cast<size_t>(R - 1) / 2);
  for (int i = 0; i < R; ++i) {
    for (int j = i + 1; j < R; ++j) {
      double w = std::abs(pcm.values(i, j));
      if (w > 0.0) candidates.push_back(Edge{i, j, w});
    }
  }

  std::vector<Edge> kept;
  if (policy.mode == EdgePolicy::Mode::threshold) {
    for (const auto& e : candidates) {
      if (e.weight >= policy.tau) kept.push_back(e);
    }
  } else {
    const auto total_pairs = static_cast<double>(R) * (R - 1) / 2.0;
    const auto quota = static_cast<size_t>(std::ceil(policy.density * total_pairs));
    // Strongest first; at equal weight the lexicographically smaller pair
    // wins, so the cutoff is deterministic.
    std::sort(candidates.begin(), candidates.end(), [](const Edge& a, const Edge& b) {
      if (a.weight != b.weight) return a.weight > b.weight;
      if (a.i != b.i) return a.i < b.i;
      return a.j < b.j;
    });
    if (candidates.size() > quota) candidates.resize(quota);
    kept = std::move(candidates);
  }

  if (kept.empty()) {
    throw Error(ErrorCode::EmptyGraph, "no edge survives the edge policy");
  }

  std::sort(kept.begin(), kept.end(), [](const Edge& a, const Edge& b) {
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });

  WeightedGraph g;
  g.node_count = R;
  g.labels = pcm.labels;
  g.edges = std::move(kept);
  g.adjacency.assign(static_cast<size_t>(R), {});
  for (const auto& e : g.edges) {
    g.adjacency[static_cast<size_t>(e.i)].emplace_back(e.j, e.weight);
    g.adjacency[static_cast<size_t>(e.j)].emplace_back(e.i, e.weight);
  }
  return g;
}

BinaryGraph binarize(const WeightedGraph& g) {
  BinaryGraph b;
  b.node_count = g.node_count;
  b.labels = g.labels;
  b.pairs.reserve(g.edges.size());
  b.neighbors.assign(static_cast<size_t>(g.node_count), {});
  for (const auto& e : g.edges) {
    b.pairs.emplace_back(e.i, e.j);
    b.neighbors[static_cast<size_t>(e.i)].push_back(e.j);
    b.neighbors[static_cast<size_t>(e.j)].push_back(e.i);
  }
  for (auto& n : b.neighbors) std::sort(n.begin(), n.end());
  return b;
}

std::string write_edge_list(const WeightedGraph& g) {
  std::string out;
  for (const auto& label : g.labels) {
    out += "# roi," + std::to_string(label.index) + "," + label.name + "\n";
  }
  out += "i,j,weight\n";
  for (const auto& e : g.edges) {
    out += std::to_string(e.i) + "," + std::to_string(e.j) + "," + format_double(e.weight) + "\n";
  }
  return out;
}

}  // namespace netsig
