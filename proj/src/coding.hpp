#ifndef BV_CODING_HPP
#define BV_CODING_HPP

#include <optional>
#include <variant>
#include <vector>

#include "blocks.hpp"
#include "diagram.hpp"

namespace bv {

// Finite path from the root: one (range vertex, xi) choice per stage.
// Sources are implied by the diagram. Values are immutable; successor
// returns fresh prefixes.
class PathPrefix {
 public:
  struct Edge {
    int range_j;
    int xi;
    bool operator==(const Edge&) const = default;
  };

  PathPrefix(const OrderedDiagram& d, std::vector<Edge> edges);

  int depth() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  // Vertex the prefix ends at (level == depth()).
  int terminal() const;
  // Vertex at the given level (0 = root).
  int vertex_at(int level) const;
  bool on_spacer_path() const;

  bool operator==(const PathPrefix&) const = default;

 private:
  const OrderedDiagram* d_ = nullptr;
  std::vector<Edge> edges_;
};

// The all-minimal path into v(n,j).
PathPrefix minimal_prefix(const OrderedDiagram& d, int n, int j);
// The spacer path prefix of the given depth.
PathPrefix spacer_prefix(const OrderedDiagram& d, int depth);

struct CarryOverflow {};
struct FixedPoint {};
using SuccessorResult = std::variant<PathPrefix, CarryOverflow, FixedPoint>;

// Vershik successor: increment the shallowest non-maximal edge, reset the
// shallower edges to the minimal path into the new source. The spacer
// prefix is a fixed point; an all-maximal prefix overflows.
SuccessorResult successor(const OrderedDiagram& d, const PathPrefix& p);

// Symbol alpha_k of the first k edges.
Sym symbol_at(const Alphabet& alpha, const PathPrefix& p);

enum class OrbitEnd { LengthReached, CarryExhausted, FixedPoint };

struct OrbitCoding {
  Word word;
  std::int64_t steps = 0;
  OrbitEnd reason = OrbitEnd::LengthReached;
};

// phi_k along the forward orbit: emits alpha_k, applies T, auto-deepening
// with minimal edges when a carry escapes the prefix. Spacer starts yield
// the constant word s^L. Exhausted non-stationary diagrams truncate with
// CarryExhausted.
OrbitCoding code_orbit(const OrderedDiagram& d, const PathPrefix& start, int k, std::int64_t len);

struct Census {
  bool exact = false;       // stationary diagrams get exact counts
  int horizon = 0;
  int raw_threads = 0;      // sigma-threads excluding the spacer thread
  int coding_classes = 0;   // threads up to pointwise block equality
  std::vector<int> cycle_vertices;  // stationary: non-spacer vertices on sigma-cycles
};

// Counts the infinite all-minimal paths other than the spacer path. For
// stationary diagrams the count is exact (vertices on cycles of the
// minimal-edge source map); otherwise it is a horizon-limited upper bound.
Census minimal_path_census(const OrderedDiagram& d, int horizon);

struct TransitiveReport {
  int horizon = 0;
  int semi_levels = 0;            // levels n <= horizon with level n+1 semi n-periodic
  std::vector<int> semi_hits;     // the witnessing n
  int branching_levels = 0;       // levels with spacer out-degree > 1
  bool exact = false;             // stationary: one repeating level decides
  bool spacer_branches_forever = false;  // stationary verdict for the branching clause
  bool semi_forever = false;             // stationary verdict for the semi clause
};

TransitiveReport transitive_conditions(const OrderedDiagram& d, int horizon);

}  // namespace bv

#endif
