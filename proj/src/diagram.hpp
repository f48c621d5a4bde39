#ifndef BV_DIAGRAM_HPP
#define BV_DIAGRAM_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"
#include "words.hpp"

namespace bv {

// Edges from one level to the next. sources[j-1] lists, in xi order
// (xi = 1..deg), the source vertex of each edge into target vertex j.
// Vertex indices are 1-based; index K+1 is the spacer vertex.
struct Stage {
  std::vector<std::vector<int>> sources;

  int targets() const { return static_cast<int>(sources.size()); }
  const std::vector<int>& into(int target_j) const {
    if (target_j < 1 || target_j > targets()) throw ContractError("target vertex out of range");
    return sources[static_cast<std::size_t>(target_j - 1)];
  }
  bool operator==(const Stage&) const = default;
};

// Ordered Bratteli diagram under the (C1)-(C3) layout: level 0 is the
// lone root, level n >= 1 has K_n non-spacer vertices plus the spacer
// vertex K_n+1. A diagram may be stationary from some level m, in which
// case every stage at depth >= m repeats stage m and all deeper levels
// share level m's vertex count.
class OrderedDiagram {
 public:
  OrderedDiagram(std::vector<int> ks, std::vector<Stage> stages, std::optional<int> stationary_from);

  // Number of explicitly stored levels beyond the root.
  int explicit_levels() const { return static_cast<int>(ks_.size()); }
  bool stationary() const { return stationary_from_.has_value(); }
  int stationary_from() const { return *stationary_from_; }

  // True when level n (and stage n) is resolvable.
  bool has_level(int n) const { return n >= 0 && (stationary() || n <= explicit_levels()); }
  bool has_stage(int n) const { return n >= 0 && (stationary() || n < explicit_levels()); }

  // K_n; K_0 = 0.
  int K(int n) const;
  int spacer(int n) const { return K(n) + 1; }
  int vertex_count(int n) const { return K(n) + 1; }

  // Stage n: edges from level n to level n+1.
  const Stage& stage(int n) const;

  // Number of root-to-v(n,j) segments, exact.
  BigInt dim(int n, int j) const;
  // dim for all vertices of level n (index j-1).
  std::vector<BigInt> dims(int n) const;

  bool operator==(const OrderedDiagram&) const = default;

 private:
  std::vector<int> ks_;       // K_n for n = 1..explicit_levels()
  std::vector<Stage> stages_; // stage n at index n, n = 0..explicit_levels()-1
  std::optional<int> stationary_from_;
};

// One (source, spacer-run) pair of the basic-block recursion.
struct RecursionPair {
  int source;
  std::int64_t spacers;
  bool operator==(const RecursionPair&) const = default;
};

// The recursion-table form: seed words D_1..D_K1 over A_1 \ {s}, and for
// each deeper stage the per-target pair sequences.
class RecursionTable {
 public:
  RecursionTable(std::vector<std::vector<Sym>> seeds,
                 std::vector<std::vector<std::vector<RecursionPair>>> stages,
                 std::optional<int> stationary_from);

  int K1() const { return static_cast<int>(seeds_.size()); }
  const std::vector<std::vector<Sym>>& seeds() const { return seeds_; }
  // Stage n for n >= 1: pairs()[n-1][target-1].
  const std::vector<std::vector<std::vector<RecursionPair>>>& stages() const { return stages_; }
  std::optional<int> stationary_from() const { return stationary_from_; }

  int explicit_levels() const { return static_cast<int>(stages_.size()) + 1; }
  bool stationary() const { return stationary_from_.has_value(); }

  bool operator==(const RecursionTable&) const = default;

 private:
  std::vector<std::vector<Sym>> seeds_;
  std::vector<std::vector<std::vector<RecursionPair>>> stages_;
  std::optional<int> stationary_from_;
};

// Per-target pair decomposition of stage n, grouping spacer-source edges
// into the runs of Eq-style recursions. Requires the stage to satisfy C3
// for its non-spacer targets.
std::vector<std::vector<RecursionPair>> stage_pairs(const OrderedDiagram& d, int n);

struct ValidationReport {
  struct Failure {
    int level = 0;
    int vertex = 0;
    std::string detail;
  };
  bool c1 = true, c2 = true, c3 = true, structural = true;
  std::vector<Failure> c1_failures, c2_failures, c3_failures, structural_failures;

  int c4_horizon = 0;
  std::vector<BigInt> c4_min_lengths;  // per level 1..horizon
  bool c4_monotone = true;             // nondecreasing min lengths
  bool c4_doubling = true;             // min(H) >= 2 * min(1)
  bool c4_stationary_edges = true;     // >= 2 incoming edges per non-spacer vertex (stationary only)
  bool c4 = true;

  bool pass() const { return c1 && c2 && c3 && structural && c4; }
};

ValidationReport validate(const OrderedDiagram& d, int horizon);

// True iff every non-spacer vertex at level n-1 connects to every
// non-spacer vertex at level n.
bool pseudo_complete(const OrderedDiagram& d, int n);

// Collapses the levels between consecutive cut points into single stages.
// cut_levels must start at 0 and strictly increase. For stationary inputs
// the cut pattern continues past the last cut with its final spacing.
OrderedDiagram telescope(const OrderedDiagram& d, std::vector<int> cut_levels);

RecursionTable to_recursion(const OrderedDiagram& d);
OrderedDiagram from_recursion(const RecursionTable& t);

}  // namespace bv

#endif
