#ifndef BV_BLOCKS_HPP
#define BV_BLOCKS_HPP

#include <map>
#include <memory>
#include <vector>

#include "diagram.hpp"

namespace bv {

// The coding alphabet A_k: one symbol per root-to-level-k segment, labeled
// in path order vertex by vertex; the all-spacer segment gets s_k.
class Alphabet {
 public:
  Alphabet(const OrderedDiagram& d, int k);

  int k() const { return k_; }
  // Total number of segments (= |A_k| counting the spacer symbol).
  std::int64_t d_k() const { return d_k_; }
  // First symbol owned by v(k,j); the block B^(k)(k,j) is the run
  // base(j), base(j)+1, ..., base(j)+dim(k,j)-1.
  std::int64_t base(int j) const;
  std::int64_t seed_len(int j) const;
  // Terminal vertex of the segment labeled by a symbol.
  int vertex_of(Sym s) const;
  // pi_{k,k'}: the symbol of the segment's initial k'-prefix.
  Sym project(Sym s, const Alphabet& shallower) const;

  const OrderedDiagram& diagram() const { return *d_; }

 private:
  const OrderedDiagram* d_;
  int k_;
  std::int64_t d_k_;
  std::vector<std::int64_t> bases_;  // per non-spacer vertex j-1
};

// Symbol-wise factor map onto a shallower coding depth.
Word factor_map(const Word& w, const Alphabet& from, const Alphabet& to);

class BlockDag;

// Names B^(k)(n,j) inside a dag without expanding it.
struct BlockHandle {
  const BlockDag* dag = nullptr;
  int n = 0;
  int j = 0;
};

// Structure-shared DAG of basic blocks for one diagram and one coding
// depth k. Nodes at level k are the seed runs; deeper nodes hold the
// per-target recursion pairs. Lengths are exact big integers, cached when
// a level is built; after build() the dag is immutable and safe to read
// concurrently.
class BlockDag {
 public:
  BlockDag(const OrderedDiagram& d, int k, int max_level);

  const OrderedDiagram& diagram() const { return *d_; }
  const Alphabet& alphabet() const { return alpha_; }
  int k() const { return k_; }
  int max_level() const { return max_level_; }

  BlockHandle block(int n, int j) const;
  const BigInt& length(int n, int j) const;

  // Exact subword of the expansion. offset/len address the flat word.
  Word expand(const BlockHandle& h, std::int64_t offset, std::int64_t len) const;
  Word expand_all(const BlockHandle& h) const;

  // Sequential symbol stream over the lazy expansion.
  class Stream {
   public:
    Sym next();
    bool done() const { return remaining_ == 0; }
    std::int64_t remaining() const { return remaining_; }

   private:
    friend class BlockDag;
    struct Frame {
      int n;
      int j;
      std::size_t item;       // index into the node's item list
      std::int64_t item_pos;  // position within the current item
    };
    const BlockDag* dag_;
    std::vector<Frame> stack_;
    std::int64_t remaining_;
    void descend(std::int64_t offset, int n, int j);
  };
  Stream stream(const BlockHandle& h, std::int64_t offset, std::int64_t len) const;

  // Positions of the explicit appearances of B^(k)(n,j) in B^(k)(m,i):
  // orbit positions p with T^p x in C(n,j), computed structurally.
  std::vector<std::int64_t> explicit_positions(int n, int j, int m, int i) const;

  // All positions where `pattern` occurs in the expansion (streaming KMP).
  std::vector<std::int64_t> occurrences_in(const BlockHandle& h,
                                           std::span<const Sym> pattern) const;

  // Level-k vertex sequence of the explicit appearances making up
  // B^(k)(n,j); spacer runs contribute one spacer vertex per symbol.
  std::vector<int> vertex_coding(int n, int j) const;

  // Exact word-equality id: two nodes are canon-equal iff their expansions
  // are equal words.
  int canon_id(int n, int j) const;

 private:
  struct Node {
    // Alternating structure: each item is either a child block or a
    // spacer run. Seed-level nodes have no items.
    struct Item {
      int child_j;           // 0 for a spacer run
      std::int64_t spacers;  // run length when child_j == 0
    };
    std::vector<Item> items;
    BigInt length;
    std::vector<BigInt> prefix;  // cumulative length before each item
    int canon = -1;
  };

  const OrderedDiagram* d_;
  int k_;
  int max_level_;
  Alphabet alpha_;
  std::vector<std::vector<Node>> levels_;  // levels_[n-k][j-1], j up to K(n)+1

  const Node& node(int n, int j) const;
};

}  // namespace bv

#endif
