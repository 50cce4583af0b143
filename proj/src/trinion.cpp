#include "moduli/trinion.hpp"

#include <cmath>
#include <numbers>

namespace moduli::trinion {

TrinionGraph::TrinionGraph(int vertex_count, std::vector<std::pair<int, int>> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
  if (vertex_count_ < 2 || vertex_count_ % 2 != 0)
    throw invariant_error("TrinionGraph: need an even number (2g-2) of vertices");
  if (static_cast<int>(edges_.size()) * 2 != 3 * vertex_count_)
    throw invariant_error("TrinionGraph: edge count must be 3g-3");
  std::vector<int> degree(vertex_count_, 0);
  for (const auto& [u, v] : edges_) {
    if (u < 0 || v < 0 || u >= vertex_count_ || v >= vertex_count_)
      throw invariant_error("TrinionGraph: edge endpoint out of range");
    degree[u] += 1;
    degree[v] += 1;
  }
  for (int d : degree)
    if (d != 3) throw invariant_error("TrinionGraph: every vertex must be trivalent");
}

TrinionGraph TrinionGraph::theta_chain(int g) {
  if (g < 2) throw invariant_error("theta_chain: genus must be >= 2");
  const int m = 2 * g - 2;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < m; ++i) {
    const int j = (i + 1) % m;
    if (i % 2 == 0) {
      edges.emplace_back(i, j);
      edges.emplace_back(i, j);
    } else {
      edges.emplace_back(i, j);
    }
  }
  return TrinionGraph(m, std::move(edges));
}

TrinionGraph TrinionGraph::dumbbell_chain(int g) {
  if (g < 2) throw invariant_error("dumbbell_chain: genus must be >= 2");
  const int m = 2 * g - 2;
  std::vector<std::pair<int, int>> edges;
  edges.emplace_back(0, 0);
  for (int i = 0; i + 1 < m; ++i) {
    edges.emplace_back(i, i + 1);
    if (i % 2 == 1) edges.emplace_back(i, i + 1);
  }
  edges.emplace_back(m - 1, m - 1);
  return TrinionGraph(m, std::move(edges));
}

TrinionGraph TrinionGraph::relabeled(const std::vector<int>& perm) const {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(edges_.size());
  for (const auto& [u, v] : edges_) edges.emplace_back(perm[u], perm[v]);
  return TrinionGraph(vertex_count_, std::move(edges));
}

std::vector<TrinionGraph> standard_graphs(int g) {
  return {TrinionGraph::theta_chain(g), TrinionGraph::dumbbell_chain(g)};
}

bool admissible_triple(int a, int b, int c, int k) {
  if ((a + b + c) % 2 != 0) return false;
  if (a + b + c > 2 * k) return false;
  return a <= b + c && b <= a + c && c <= a + b;
}

namespace {

struct Counter {
  const TrinionGraph& graph;
  int k;
  std::vector<std::vector<int>> incident;  // vertex -> edge indices (loop twice)
  std::vector<int> labels;
  std::vector<int> remaining;  // unassigned incidences per vertex
  long long total = 0;

  explicit Counter(const TrinionGraph& g_, int k_) : graph(g_), k(k_) {
    incident.resize(graph.vertex_count());
    const auto& edges = graph.edges();
    for (int e = 0; e < graph.edge_count(); ++e) {
      incident[edges[e].first].push_back(e);
      incident[edges[e].second].push_back(e);
    }
    labels.assign(graph.edge_count(), -1);
    remaining.resize(graph.vertex_count());
    for (int v = 0; v < graph.vertex_count(); ++v)
      remaining[v] = static_cast<int>(incident[v].size());
  }

  bool vertex_ok(int v) const {
    const auto& inc = incident[v];
    return admissible_triple(labels[inc[0]], labels[inc[1]], labels[inc[2]], k);
  }

  void recurse(int e) {
    if (e == graph.edge_count()) {
      ++total;
      return;
    }
    const auto [u, v] = graph.edges()[e];
    const int du = (u == v) ? 2 : 1;
    for (int a = 0; a <= k; ++a) {
      labels[e] = a;
      remaining[u] -= du;
      if (u != v) remaining[v] -= 1;
      bool ok = true;
      if (remaining[u] == 0 && !vertex_ok(u)) ok = false;
      if (ok && u != v && remaining[v] == 0 && !vertex_ok(v)) ok = false;
      if (ok) recurse(e + 1);
      remaining[u] += du;
      if (u != v) remaining[v] += 1;
      labels[e] = -1;
    }
  }
};

}  // namespace

long long count_lattice_points(const TrinionGraph& graph, int k) {
  if (k < 0) throw invariant_error("count_lattice_points: level must be >= 0");
  Counter counter(graph, k);
  counter.recurse(0);
  return counter.total;
}

long long verlinde_closed_form(int g, int k) {
  if (g < 2 || k < 0) throw invariant_error("verlinde_closed_form: need g >= 2, k >= 0");
  const int m = k + 2;
  double sum = 0.0;
  for (int j = 1; j <= k + 1; ++j)
    sum += std::pow(std::sin(j * std::numbers::pi / m), 2 - 2 * g);
  const double value = std::pow(m / 2.0, g - 1) * sum;
  return std::llround(value);
}

VerlindeCheck verlinde_crosscheck(int g, int k) {
  VerlindeCheck check;
  check.closed_form = verlinde_closed_form(g, k);
  bool all_equal = true;
  for (const auto& graph : standard_graphs(g)) {
    check.per_graph.push_back(count_lattice_points(graph, k));
    if (check.per_graph.back() != check.per_graph.front()) all_equal = false;
  }
  check.count = check.per_graph.front();
  check.agree = all_equal && (check.count == check.closed_form);
  return check;
}

QuotientBookkeeping quotient_dimension_bookkeeping(int g, int n) {
  if (g < 2 || n < 2)
    throw invariant_error("quotient_dimension_bookkeeping: need g >= 2, n >= 2");
  QuotientBookkeeping bk;
  bk.torus_dim = (3 * g - 3) * (n - 1);
  bk.trinion_count = 2 * g - 2;
  bk.puncture_count = 6 * g - 6;
  bk.target_dim = (2 * g - 2) * (n * n - 1);

  const long long t = bk.trinion_count;
  const long long adj = n * n - 1;
  bk.ledger = {
      {"boundary holonomy parameters, 3(n^2-1) per trinion", 3 * adj * t},
      {"one relation per trinion", -adj * t},
      {"conjugation quotient per trinion", -adj * t},
      {"framings at the punctures, (n-1) each", static_cast<long long>(n - 1) * 6 * (g - 1)},
      {"antidiagonal torus quotient, 2 dims per torus dim", -2LL * bk.torus_dim},
      {"target: representation space of the smooth curve", -static_cast<long long>(bk.target_dim)},
  };
  bk.ledger_sum = 0;
  for (const auto& entry : bk.ledger) bk.ledger_sum += entry.value;
  return bk;
}

}  // namespace moduli::trinion
