#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "moduli/types.hpp"

namespace moduli::trinion {

/// Trivalent pants-decomposition graph: 2g-2 vertices, 3g-3 edges, self-loops
/// allowed (a loop contributes twice to its vertex degree).
class TrinionGraph {
 public:
  TrinionGraph(int vertex_count, std::vector<std::pair<int, int>> edges);

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  int genus() const { return vertex_count_ / 2 + 1; }

  /// Alternating double/single edges around a cycle; the theta graph at g = 2.
  static TrinionGraph theta_chain(int g);
  /// Self-loops at the ends of an alternating single/double path; the dumbbell
  /// at g = 2.
  static TrinionGraph dumbbell_chain(int g);

  TrinionGraph relabeled(const std::vector<int>& perm) const;

 private:
  int vertex_count_;
  std::vector<std::pair<int, int>> edges_;
};

/// The standard degeneration graphs per genus (two non-isomorphic families).
std::vector<TrinionGraph> standard_graphs(int g);

/// Rank-2 fusion admissibility at a vertex with incident labels (a, b, c):
/// parity, triangle inequalities, and a + b + c <= 2k.
bool admissible_triple(int a, int b, int c, int k);

/// Exhaustive count of admissible integer edge labelings at level k.
long long count_lattice_points(const TrinionGraph& graph, int k);

/// Closed-form rank-2 Verlinde number ((k+2)/2)^{g-1} sum_j sin^{2-2g}(j pi /(k+2)).
long long verlinde_closed_form(int g, int k);

struct VerlindeCheck {
  long long count = 0;        // brute-force count (all standard graphs agree)
  long long closed_form = 0;  // independent oracle
  bool agree = false;
  std::vector<long long> per_graph;
};

/// Compares the lattice count on every standard graph of the genus against the
/// closed form, asserting graph-independence along the way.
VerlindeCheck verlinde_crosscheck(int g, int k);

/// Dimension bookkeeping of the torus quotient of the trinion product.
struct QuotientBookkeeping {
  int torus_dim;       // (3g-3)(n-1)
  int trinion_count;   // 2g-2
  int puncture_count;  // 6g-6
  int target_dim;      // (2g-2)(n^2-1)
  struct Entry {
    std::string label;
    long long value;
  };
  std::vector<Entry> ledger;  // balances to zero
  long long ledger_sum;
};

QuotientBookkeeping quotient_dimension_bookkeeping(int g, int n);

}  // namespace moduli::trinion
