#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netsig/graph.hpp"

namespace netsig {

// Disjoint, exhaustive node partition. Community ids are dense 0..C-1 and
// canonical: communities are numbered in order of their smallest member.
struct Partition {
  std::vector<int> assignment;  // node index -> community id
  int community_count = 0;
};

// Renumbers arbitrary community ids into canonical form.
Partition canonicalize(std::vector<int> raw_assignment);

// Member lists per community, each sorted ascending.
std::vector<std::vector<int>> community_members(const Partition& p);

// CPM output: node sets that may overlap. Invariants: every set has >= k
// nodes and no set is a subset of another. May be empty.
struct OverlappingCommunities {
  std::vector<std::vector<int>> communities;  // each sorted ascending
};

enum class Method { cpm = 0, louvain = 1, greedy = 2, eigen = 3 };

inline constexpr std::array<Method, 4> all_methods{Method::cpm, Method::louvain, Method::greedy,
                                                   Method::eigen};

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);

// Per subject: the largest sub-community found by each method.
struct SubjectDetectionRecord {
  std::string subject_id;
  std::array<std::vector<int>, 4> largest;  // indexed by Method, sorted node lists

  const std::vector<int>& largest_of(Method m) const {
    return largest[static_cast<size_t>(m)];
  }
};

// Weighted modularity: Q = (1/2m) sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j),
// with A the edge weights, k the weighted degrees, m the total edge weight.
// Q lies in [-1/2, 1]. Throws PartitionMismatch when p does not cover
// exactly the graph's nodes with dense ids.
double modularity(const WeightedGraph& g, const Partition& p);

// Two-phase local-move / aggregate iteration until no move improves Q.
// Deterministic: nodes are visited in natural order unless a seed is given,
// in which case the visit order is shuffled once per level. Ties between
// equal-gain target communities go to the smallest community id.
// internal_q, when non-null, receives the Q value the algorithm tracked,
// for cross-checking against modularity().
Partition louvain(const WeightedGraph& g,
                  std::optional<std::uint64_t> node_order_seed = std::nullopt,
                  double* internal_q = nullptr);

// Agglomerative merging from singletons: repeatedly merge the community
// pair with the largest positive modularity gain. Ties go to the smallest
// (community-id, community-id) pair.
Partition greedy_modularity(const WeightedGraph& g, double* internal_q = nullptr);

enum class EigenVariant { modularity_matrix, laplacian_fiedler };

std::string_view eigen_variant_name(EigenVariant v);
std::optional<EigenVariant> parse_eigen_variant(std::string_view name);

// Recursive spectral bisection. modularity_matrix splits by the sign of the
// leading eigenvector of the generalized modularity matrix of the subset;
// laplacian_fiedler splits by the sign of the second-smallest Laplacian
// eigenvector of the induced subgraph. Either way a split is kept only if
// it strictly increases Q. Eigenvector signs are fixed so the first nonzero
// entry is positive.
Partition leading_eigenvector(const WeightedGraph& g,
                              EigenVariant variant = EigenVariant::modularity_matrix);

// k-clique percolation communities, computed over maximal cliques
// (Bron-Kerbosch with pivoting): maximal cliques of size >= k are adjacent
// iff they share >= k-1 nodes; a community is the node union of a connected
// component, which equals the classic k-clique percolation result. Requires
// k >= 3. Zero communities is a valid outcome.
OverlappingCommunities clique_percolation(const BinaryGraph& g, int k = 3);

// The community with the most nodes; ties broken by larger total internal
// edge weight, then by lexicographically smallest sorted node list.
std::vector<int> largest_subcommunity(const Partition& p, const WeightedGraph& g);

// Overlapping variant; empty input yields the empty set.
std::vector<int> largest_subcommunity(const OverlappingCommunities& oc, const WeightedGraph& g);

// Brute-force oracle: enumerates every set partition (restricted growth
// strings) and returns the first one attaining the maximum Q. Throws
// TooLarge for graphs with more than 10 nodes.
Partition exhaustive_max_modularity(const WeightedGraph& g);

}  // namespace netsig
