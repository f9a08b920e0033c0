#include "netsig/community.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>

#include "netsig/error.hpp"
#include "netsig/rng.hpp"

namespace netsig {

namespace {

// Sum of edge weights with both endpoints inside the member set.
double internal_weight(const std::vector<int>& members, const WeightedGraph& g) {
  std::vector<char> in(static_cast<size_t>(g.node_count), 0);
  for (int v : members) in[static_cast<size_t>(v)] = 1;
  double w = 0.0;
  for (const auto& e : g.edges) {
    if (in[static_cast<size_t>(e.i)] && in[static_cast<size_t>(e.j)]) w += e.weight;
  }
  return w;
}

// size desc, then internal weight desc, then lexicographically smallest
// sorted node list. Shared by both largest_subcommunity overloads.
std::vector<int> pick_largest(std::vector<std::vector<int>> communities, const WeightedGraph& g) {
  if (communities.empty()) return {};
  size_t best = 0;
  double best_w = internal_weight(communities[0], g);
  for (size_t c = 1; c < communities.size(); ++c) {
    const auto& cand = communities[c];
    const auto& cur = communities[best];
    if (cand.size() != cur.size()) {
      if (cand.size() > cur.size()) {
        best = c;
        best_w = internal_weight(cand, g);
      }
      continue;
    }
    double w = internal_weight(cand, g);
    if (w > best_w || (w == best_w && cand < cur)) {
      best = c;
      best_w = w;
    }
  }
  return communities[best];
}

}  // namespace

Partition canonicalize(std::vector<int> raw) {
  const int n = static_cast<int>(raw.size());
  // Map each raw id to its smallest member, then number by that member.
  std::map<int, int> smallest;  // raw id -> smallest node
  for (int v = 0; v < n; ++v) {
    auto it = smallest.find(raw[static_cast<size_t>(v)]);
    if (it == smallest.end()) smallest.emplace(raw[static_cast<size_t>(v)], v);
  }
  std::vector<int> reps;
  reps.reserve(smallest.size());
  for (const auto& [id, rep] : smallest) reps.push_back(rep);
  std::sort(reps.begin(), reps.end());

  std::map<int, int> renumber;  // raw id -> canonical id
  for (const auto& [id, rep] : smallest) {
    renumber[id] = static_cast<int>(std::lower_bound(reps.begin(), reps.end(), rep) - reps.begin());
  }
  Partition p;
  p.assignment.resize(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) {
    p.assignment[static_cast<size_t>(v)] = renumber[raw[static_cast<size_t>(v)]];
  }
  p.community_count = static_cast<int>(reps.size());
  return p;
}

std::vector<std::vector<int>> community_members(const Partition& p) {
  std::vector<std::vector<int>> members(static_cast<size_t>(p.community_count));
  for (size_t v = 0; v < p.assignment.size(); ++v) {
    members[static_cast<size_t>(p.assignment[v])].push_back(static_cast<int>(v));
  }
  return members;
}

std::string_view method_name(Method m) {
  switch (m) {
    case Method::cpm: return "cpm";
    case Method::louvain: return "louvain";
    case Method::greedy: return "greedy";
    case Method::eigen: return "eigen";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : all_methods) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

std::string_view eigen_variant_name(EigenVariant v) {
  return v == EigenVariant::modularity_matrix ? "modularity_matrix" : "laplacian_fiedler";
}

std::optional<EigenVariant> parse_eigen_variant(std::string_view name) {
  if (name == "modularity_matrix") return EigenVariant::modularity_matrix;
  if (name == "laplacian_fiedler") return EigenVariant::laplacian_fiedler;
  return std::nullopt;
}

double modularity(const WeightedGraph& g, const Partition& p) {
  if (static_cast<int>(p.assignment.size()) != g.node_count) {
    throw Error(ErrorCode::PartitionMismatch,
                "partition covers " + std::to_string(p.assignment.size()) + " nodes, graph has " +
                    std::to_string(g.node_count));
  }
  for (int c : p.assignment) {
    if (c < 0 || c >= p.community_count) {
      throw Error(ErrorCode::PartitionMismatch, "community id " + std::to_string(c) + " out of range");
    }
  }

  const double m2 = 2.0 * g.total_weight();
  std::vector<double> in(static_cast<size_t>(p.community_count), 0.0);   // 2 * internal weight
  std::vector<double> tot(static_cast<size_t>(p.community_count), 0.0);  // sum of degrees
  for (const auto& e : g.edges) {
    int ci = p.assignment[static_cast<size_t>(e.i)];
    int cj = p.assignment[static_cast<size_t>(e.j)];
    tot[static_cast<size_t>(ci)] += e.weight;
    tot[static_cast<size_t>(cj)] += e.weight;
    if (ci == cj) in[static_cast<size_t>(ci)] += 2.0 * e.weight;
  }
  double q = 0.0;
  for (int c = 0; c < p.community_count; ++c) {
    double t = tot[static_cast<size_t>(c)] / m2;
    q += in[static_cast<size_t>(c)] / m2 - t * t;
  }
  return q;
}

// ---------------------------------------------------------------------------
// Louvain

namespace {

// Aggregated multigraph used between Louvain levels. Self-loops hold the
// weight folded inside a community; a node's degree counts its self-loop
// twice, so total degree m2 is invariant across levels.
struct AggGraph {
  int n = 0;
  std::vector<std::vector<std::pair<int, double>>> adj;  // no self entries
  std::vector<double> self_loop;
  std::vector<double> degree;
  double m2 = 0.0;
};

AggGraph from_weighted(const WeightedGraph& g) {
  AggGraph a;
  a.n = g.node_count;
  a.adj.assign(static_cast<size_t>(a.n), {});
  for (const auto& e : g.edges) {
    a.adj[static_cast<size_t>(e.i)].emplace_back(e.j, e.weight);
    a.adj[static_cast<size_t>(e.j)].emplace_back(e.i, e.weight);
  }
  a.self_loop.assign(static_cast<size_t>(a.n), 0.0);
  a.degree = g.weighted_degrees();
  a.m2 = 2.0 * g.total_weight();
  return a;
}

// One local-move phase. Returns the (non-canonical) community of each node
// and whether any node moved.
std::pair<std::vector<int>, bool> louvain_level(const AggGraph& g, const std::vector<int>& order) {
  std::vector<int> comm(static_cast<size_t>(g.n));
  std::iota(comm.begin(), comm.end(), 0);
  std::vector<double> sigma_tot = g.degree;

  bool any_move = false;
  bool moved = true;
  while (moved) {
    moved = false;
    for (int i : order) {
      const int c_old = comm[static_cast<size_t>(i)];
      const double k_i = g.degree[static_cast<size_t>(i)];

      // Ordered map: on gain ties the smallest community id wins.
      std::map<int, double> w_to;
      w_to[c_old] = 0.0;
      for (const auto& [nb, w] : g.adj[static_cast<size_t>(i)]) {
        w_to[comm[static_cast<size_t>(nb)]] += w;
      }

      sigma_tot[static_cast<size_t>(c_old)] -= k_i;

      int best = c_old;
      double best_score = w_to[c_old] - sigma_tot[static_cast<size_t>(c_old)] * k_i / g.m2;
      for (const auto& [c, w] : w_to) {
        if (c == c_old) continue;
        double score = w - sigma_tot[static_cast<size_t>(c)] * k_i / g.m2;
        if (score > best_score + 1e-12) {
          best = c;
          best_score = score;
        }
      }

      sigma_tot[static_cast<size_t>(best)] += k_i;
      if (best != c_old) {
        comm[static_cast<size_t>(i)] = best;
        moved = true;
        any_move = true;
      }
    }
  }
  return {std::move(comm), any_move};
}

AggGraph aggregate(const AggGraph& g, const std::vector<int>& comm, int community_count) {
  AggGraph a;
  a.n = community_count;
  a.adj.assign(static_cast<size_t>(a.n), {});
  a.self_loop.assign(static_cast<size_t>(a.n), 0.0);
  a.degree.assign(static_cast<size_t>(a.n), 0.0);
  a.m2 = g.m2;

  for (int i = 0; i < g.n; ++i) {
    a.self_loop[static_cast<size_t>(comm[static_cast<size_t>(i)])] +=
        g.self_loop[static_cast<size_t>(i)];
  }
  std::map<std::pair<int, int>, double> between;
  for (int i = 0; i < g.n; ++i) {
    const int ci = comm[static_cast<size_t>(i)];
    for (const auto& [j, w] : g.adj[static_cast<size_t>(i)]) {
      if (j < i) continue;  // each undirected edge once
      const int cj = comm[static_cast<size_t>(j)];
      if (ci == cj) {
        a.self_loop[static_cast<size_t>(ci)] += w;
      } else {
        between[{std::min(ci, cj), std::max(ci, cj)}] += w;
      }
    }
  }
  for (const auto& [pair, w] : between) {
    a.adj[static_cast<size_t>(pair.first)].emplace_back(pair.second, w);
    a.adj[static_cast<size_t>(pair.second)].emplace_back(pair.first, w);
  }
  for (int c = 0; c < a.n; ++c) {
    double k = 2.0 * a.self_loop[static_cast<size_t>(c)];
    for (const auto& [_, w] : a.adj[static_cast<size_t>(c)]) k += w;
    a.degree[static_cast<size_t>(c)] = k;
  }
  return a;
}

}  // namespace

Partition louvain(const WeightedGraph& g, std::optional<std::uint64_t> node_order_seed,
                  double* internal_q) {
  AggGraph agg = from_weighted(g);
  std::vector<int> node_to_comm(static_cast<size_t>(g.node_count));
  std::iota(node_to_comm.begin(), node_to_comm.end(), 0);

  while (true) {
    std::vector<int> order(static_cast<size_t>(agg.n));
    std::iota(order.begin(), order.end(), 0);
    if (node_order_seed) {
      SplitMix64 gen(*node_order_seed);
      deterministic_shuffle(order, gen);
    }

    auto [comm, moved] = louvain_level(agg, order);
    if (!moved) break;

    Partition level = canonicalize(std::move(comm));
    for (auto& c : node_to_comm) {
      c = level.assignment[static_cast<size_t>(c)];
    }
    agg = aggregate(agg, level.assignment, level.community_count);
  }

  if (internal_q) {
    // Final aggregate as singletons is exactly the returned partition.
    double q = 0.0;
    for (int c = 0; c < agg.n; ++c) {
      double t = agg.degree[static_cast<size_t>(c)] / agg.m2;
      q += 2.0 * agg.self_loop[static_cast<size_t>(c)] / agg.m2 - t * t;
    }
    *internal_q = q;
  }
  return canonicalize(std::move(node_to_comm));
}

// ---------------------------------------------------------------------------
// Greedy agglomerative merging

namespace {

struct MergeCandidate {
  double dq;
  int a, b;  // a < b
  std::uint32_t va, vb;
};

struct MergeCandidateLess {
  bool operator()(const MergeCandidate& x, const MergeCandidate& y) const {
    if (x.dq != y.dq) return x.dq < y.dq;
    if (x.a != y.a) return x.a > y.a;
    return x.b > y.b;
  }
};

}  // namespace

Partition greedy_modularity(const WeightedGraph& g, double* internal_q) {
  const int n = g.node_count;
  const double m2 = 2.0 * g.total_weight();
  std::vector<double> k = g.weighted_degrees();

  std::vector<double> sigma = k;
  std::vector<char> alive(static_cast<size_t>(n), 1);
  std::vector<std::uint32_t> version(static_cast<size_t>(n), 0);
  std::vector<std::map<int, double>> between(static_cast<size_t>(n));
  for (const auto& e : g.edges) {
    between[static_cast<size_t>(e.i)][e.j] += e.weight;
    between[static_cast<size_t>(e.j)][e.i] += e.weight;
  }

  double q = 0.0;
  for (int i = 0; i < n; ++i) {
    double t = k[static_cast<size_t>(i)] / m2;
    q -= t * t;
  }

  auto gain = [&](int a, int b, double w_ab) {
    return 2.0 * w_ab / m2 -
           2.0 * sigma[static_cast<size_t>(a)] * sigma[static_cast<size_t>(b)] / (m2 * m2);
  };

  std::priority_queue<MergeCandidate, std::vector<MergeCandidate>, MergeCandidateLess> heap;
  for (const auto& e : g.edges) {
    heap.push(MergeCandidate{gain(e.i, e.j, e.weight), e.i, e.j, 0, 0});
  }

  std::vector<int> comm(static_cast<size_t>(n));
  std::iota(comm.begin(), comm.end(), 0);
  // comm maps each original node to the id of the community that absorbed
  // it; ids are resolved through a union-find style parent array.
  std::vector<int> parent(static_cast<size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);

  while (!heap.empty()) {
    MergeCandidate top = heap.top();
    heap.pop();
    if (!alive[static_cast<size_t>(top.a)] || !alive[static_cast<size_t>(top.b)]) continue;
    if (version[static_cast<size_t>(top.a)] != top.va ||
        version[static_cast<size_t>(top.b)] != top.vb) {
      continue;
    }
    if (top.dq <= 0.0) break;

    const int a = top.a;
    const int b = top.b;
    q += top.dq;
    alive[static_cast<size_t>(b)] = 0;
    ++version[static_cast<size_t>(a)];
    ++version[static_cast<size_t>(b)];
    parent[static_cast<size_t>(b)] = a;
    sigma[static_cast<size_t>(a)] += sigma[static_cast<size_t>(b)];

    between[static_cast<size_t>(a)].erase(b);
    for (const auto& [d, w] : between[static_cast<size_t>(b)]) {
      if (d == a) continue;
      between[static_cast<size_t>(d)].erase(b);
      double& ad = between[static_cast<size_t>(a)][d];
      ad += w;
      between[static_cast<size_t>(d)][a] = ad;
    }
    between[static_cast<size_t>(b)].clear();

    for (const auto& [d, w] : between[static_cast<size_t>(a)]) {
      heap.push(MergeCandidate{gain(std::min(a, d), std::max(a, d), w), std::min(a, d),
                               std::max(a, d), version[static_cast<size_t>(std::min(a, d))],
                               version[static_cast<size_t>(std::max(a, d))]});
    }
  }

  for (int i = 0; i < n; ++i) {
    int r = i;
    while (parent[static_cast<size_t>(r)] != r) r = parent[static_cast<size_t>(r)];
    comm[static_cast<size_t>(i)] = r;
  }
  if (internal_q) *internal_q = q;
  return canonicalize(std::move(comm));
}

// ---------------------------------------------------------------------------
// Leading eigenvector

namespace {

// Sign convention shared by both spectral variants: first entry with
// magnitude above 1e-12 is made positive.
void normalize_sign(Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-12) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

}  // namespace

Partition leading_eigenvector(const WeightedGraph& g, EigenVariant variant) {
  const int n = g.node_count;
  const double m2 = 2.0 * g.total_weight();
  std::vector<double> k = g.weighted_degrees();

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges) {
    A(e.i, e.j) = e.weight;
    A(e.j, e.i) = e.weight;
  }

  std::vector<int> assignment(static_cast<size_t>(n), 0);
  int next_id = 1;

  std::vector<std::vector<int>> work;
  {
    std::vector<int> all(static_cast<size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    work.push_back(std::move(all));
  }

  while (!work.empty()) {
    std::vector<int> S = std::move(work.back());
    work.pop_back();
    const auto s = static_cast<Eigen::Index>(S.size());
    if (s < 2) continue;

    Eigen::VectorXd u;
    if (variant == EigenVariant::modularity_matrix) {
      // Generalized modularity matrix of the subset: B_xy = A_xy - k_x k_y / 2m,
      // with the subset's row sums folded onto the diagonal so that splitting
      // the subset leaves the rest of the partition's Q contribution intact.
      Eigen::MatrixXd B(s, s);
      for (Eigen::Index x = 0; x < s; ++x) {
        for (Eigen::Index y = 0; y < s; ++y) {
          B(x, y) = A(S[static_cast<size_t>(x)], S[static_cast<size_t>(y)]) -
                    k[static_cast<size_t>(S[static_cast<size_t>(x)])] *
                        k[static_cast<size_t>(S[static_cast<size_t>(y)])] / m2;
        }
      }
      Eigen::VectorXd row_sums = B.rowwise().sum();
      B.diagonal() -= row_sums;

      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(B);
      const double lead = solver.eigenvalues()[s - 1];
      if (lead <= 1e-10) continue;  // indivisible subset
      u = solver.eigenvectors().col(s - 1);
    } else {
      // Weighted Laplacian of the induced subgraph; Fiedler vector.
      Eigen::MatrixXd W(s, s);
      for (Eigen::Index x = 0; x < s; ++x) {
        for (Eigen::Index y = 0; y < s; ++y) {
          W(x, y) = A(S[static_cast<size_t>(x)], S[static_cast<size_t>(y)]);
        }
      }
      Eigen::MatrixXd L = -W;
      L.diagonal() += W.rowwise().sum();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(L);
      u = solver.eigenvectors().col(1);
    }

    normalize_sign(u);
    std::vector<int> plus, minus;
    for (Eigen::Index x = 0; x < s; ++x) {
      (u[x] >= 0.0 ? plus : minus).push_back(S[static_cast<size_t>(x)]);
    }
    if (plus.empty() || minus.empty()) continue;

    // Keep the split only if it strictly improves Q.
    Partition before = canonicalize(assignment);
    double q_before = modularity(g, before);
    std::vector<int> trial = assignment;
    for (int v : minus) trial[static_cast<size_t>(v)] = next_id;
    Partition after = canonicalize(trial);
    double q_after = modularity(g, after);
    if (q_after <= q_before + 1e-12) continue;

    assignment = std::move(trial);
    ++next_id;
    work.push_back(std::move(minus));
    work.push_back(std::move(plus));
  }

  return canonicalize(std::move(assignment));
}

// ---------------------------------------------------------------------------
// Clique percolation

namespace {

class Bits {
 public:
  explicit Bits(int n) : words_((static_cast<size_t>(n) + 63) / 64, 0), n_(n) {}

  void set(int i) { words_[static_cast<size_t>(i) >> 6] |= 1ull << (i & 63); }
  void clear(int i) { words_[static_cast<size_t>(i) >> 6] &= ~(1ull << (i & 63)); }
  bool test(int i) const { return words_[static_cast<size_t>(i) >> 6] >> (i & 63) & 1; }

  bool any() const {
    for (auto w : words_) {
      if (w) return true;
    }
    return false;
  }

  int count() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }

  Bits intersect(const Bits& o) const {
    Bits r(n_);
    for (size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & o.words_[i];
    return r;
  }

  int intersect_count(const Bits& o) const {
    int c = 0;
    for (size_t i = 0; i < words_.size(); ++i) c += std::popcount(words_[i] & o.words_[i]);
    return c;
  }

  bool subset_of(const Bits& o) const {
    for (size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & ~o.words_[i]) return false;
    }
    return true;
  }

  std::vector<int> to_vector() const {
    std::vector<int> out;
    for (int i = 0; i < n_; ++i) {
      if (test(i)) out.push_back(i);
    }
    return out;
  }

 private:
  std::vector<std::uint64_t> words_;
  int n_;
};

struct CliqueCollector {
  const std::vector<Bits>& nb;
  int n;
  int min_size;
  std::vector<Bits> cliques;

  // Bron-Kerbosch with pivoting. Candidates are visited in ascending node
  // order, so enumeration order is deterministic.
  void run(Bits& r, Bits p, Bits x, int r_size) {
    if (!p.any() && !x.any()) {
      if (r_size >= min_size) cliques.push_back(r);
      return;
    }
    int pivot = -1;
    int best = -1;
    for (int u = 0; u < n; ++u) {
      if (!p.test(u) && !x.test(u)) continue;
      int c = p.intersect_count(nb[static_cast<size_t>(u)]);
      if (c > best) {
        best = c;
        pivot = u;
      }
    }
    for (int v = 0; v < n; ++v) {
      if (!p.test(v) || nb[static_cast<size_t>(pivot)].test(v)) continue;
      r.set(v);
      Bits p2 = p.intersect(nb[static_cast<size_t>(v)]);
      Bits x2 = x.intersect(nb[static_cast<size_t>(v)]);
      run(r, std::move(p2), std::move(x2), r_size + 1);
      r.clear(v);
      p.clear(v);
      x.set(v);
    }
  }
};

}  // namespace

OverlappingCommunities clique_percolation(const BinaryGraph& g, int k) {
  if (k < 3) {
    throw Error(ErrorCode::InvalidSpec,
                "clique size must be at least 3, got " + std::to_string(k));
  }
  const int n = g.node_count;
  std::vector<Bits> nb(static_cast<size_t>(n), Bits(n));
  for (const auto& [i, j] : g.pairs) {
    nb[static_cast<size_t>(i)].set(j);
    nb[static_cast<size_t>(j)].set(i);
  }

  CliqueCollector collector{nb, n, k, {}};
  {
    Bits r(n), p(n), x(n);
    for (int v = 0; v < n; ++v) p.set(v);
    collector.run(r, std::move(p), std::move(x), 0);
  }
  const auto& cliques = collector.cliques;
  const auto c = cliques.size();

  // Two maximal cliques percolate when they share at least k-1 nodes; the
  // node unions of the resulting components are exactly the k-clique
  // percolation communities.
  std::vector<size_t> root(c);
  std::iota(root.begin(), root.end(), size_t{0});
  auto find = [&](size_t v) {
    while (root[v] != v) {
      root[v] = root[root[v]];
      v = root[v];
    }
    return v;
  };
  for (size_t a = 0; a < c; ++a) {
    for (size_t b = a + 1; b < c; ++b) {
      if (cliques[a].intersect_count(cliques[b]) >= k - 1) {
        root[find(a)] = find(b);
      }
    }
  }

  std::map<size_t, Bits> unions;
  for (size_t a = 0; a < c; ++a) {
    auto [it, inserted] = unions.try_emplace(find(a), Bits(n));
    for (int v : cliques[a].to_vector()) it->second.set(v);
  }

  std::vector<Bits> sets;
  sets.reserve(unions.size());
  for (auto& [_, bits] : unions) sets.push_back(std::move(bits));

  // A community occasionally lands inside another component's node union;
  // the type promises an antichain, so drop subsets.
  std::vector<std::vector<int>> members;
  members.reserve(sets.size());
  std::sort(sets.begin(), sets.end(), [](const Bits& a, const Bits& b) {
    int ca = a.count(), cb = b.count();
    if (ca != cb) return ca > cb;
    return a.to_vector() < b.to_vector();
  });
  std::vector<Bits> kept;
  for (const auto& s : sets) {
    bool subsumed = false;
    for (const auto& other : kept) {
      if (s.subset_of(other)) {
        subsumed = true;
        break;
      }
    }
    if (!subsumed) {
      kept.push_back(s);
      members.push_back(s.to_vector());
    }
  }
  std::sort(members.begin(), members.end());

  return OverlappingCommunities{std::move(members)};
}

// ---------------------------------------------------------------------------

std::vector<int> largest_subcommunity(const Partition& p, const WeightedGraph& g) {
  return pick_largest(community_members(p), g);
}

std::vector<int> largest_subcommunity(const OverlappingCommunities& oc, const WeightedGraph& g) {
  return pick_largest(oc.communities, g);
}

Partition exhaustive_max_modularity(const WeightedGraph& g) {
  const int n = g.node_count;
  if (n > 10) {
    throw Error(ErrorCode::TooLarge,
                "exhaustive enumeration limited to 10 nodes, got " + std::to_string(n));
  }

  // Restricted growth strings enumerate every set partition once, in an
  // order whose community numbering is already canonical.
  std::vector<int> a(static_cast<size_t>(n), 0);
  std::vector<int> best_assignment = a;
  double best_q = -std::numeric_limits<double>::infinity();

  while (true) {
    int count = *std::max_element(a.begin(), a.end()) + 1;
    double q = modularity(g, Partition{a, count});
    if (q > best_q) {
      best_q = q;
      best_assignment = a;
    }

    int i = n - 1;
    for (; i >= 1; --i) {
      int max_prefix = *std::max_element(a.begin(), a.begin() + i);
      if (a[static_cast<size_t>(i)] <= max_prefix) {
        ++a[static_cast<size_t>(i)];
        std::fill(a.begin() + i + 1, a.end(), 0);
        break;
      }
    }
    if (i == 0) break;
  }

  return canonicalize(std::move(best_assignment));
}

}  // namespace netsig
