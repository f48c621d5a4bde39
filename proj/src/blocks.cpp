#include "blocks.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

namespace bv {

namespace {

std::int64_t to_i64(const BigInt& v, const char* what) {
  if (v > std::numeric_limits<std::int64_t>::max())
    throw ResourceError(std::string(what) + " exceeds addressable range");
  return static_cast<std::int64_t>(v);
}

}  // namespace

Alphabet::Alphabet(const OrderedDiagram& d, int k) : d_(&d), k_(k) {
  if (k < 1) throw ContractError("coding depth k must be >= 1");
  if (!d.has_level(k)) throw ContractError("coding depth beyond available levels");
  auto dims = d.dims(k);
  BigInt total = 1;  // the spacer segment
  for (int j = 1; j <= d.K(k); ++j) total += dims[static_cast<std::size_t>(j - 1)];
  if (total > std::numeric_limits<Sym>::max())
    throw ResourceError("alphabet A_" + std::to_string(k) + " has " + total.str() +
                        " symbols; too large to label");
  d_k_ = static_cast<std::int64_t>(total);
  std::int64_t base = 0;
  for (int j = 1; j <= d.K(k); ++j) {
    bases_.push_back(base);
    base += static_cast<std::int64_t>(dims[static_cast<std::size_t>(j - 1)]);
  }
  bases_.push_back(base);  // sentinel == d_k - 1
}

std::int64_t Alphabet::base(int j) const {
  if (j < 1 || j > d_->K(k_)) throw ContractError("vertex index out of range");
  return bases_[static_cast<std::size_t>(j - 1)];
}

std::int64_t Alphabet::seed_len(int j) const {
  if (j == d_->spacer(k_)) return 1;
  return bases_[static_cast<std::size_t>(j)] - bases_[static_cast<std::size_t>(j - 1)];
}

int Alphabet::vertex_of(Sym s) const {
  if (s == kSpacer) return d_->spacer(k_);
  if (s < 0 || s >= d_k_ - 1) throw ContractError("symbol out of range");
  auto it = std::upper_bound(bases_.begin(), bases_.end(), static_cast<std::int64_t>(s));
  return static_cast<int>(it - bases_.begin());
}

Sym Alphabet::project(Sym s, const Alphabet& shallower) const {
  if (&shallower.diagram() != d_) throw ContractError("alphabets from different diagrams");
  const int kp = shallower.k();
  if (kp > k_) throw ContractError("factor map must shrink the depth");
  if (kp == k_) return s;
  if (s == kSpacer) return kSpacer;
  int vertex = vertex_of(s);
  std::int64_t ordinal = static_cast<std::int64_t>(s) - base(vertex);
  // Walk the segment shallower one level at a time: ordinal splits by the
  // xi-ordered dims of the incoming edges (deepest edge is the major key).
  for (int level = k_; level > kp; --level) {
    auto dims = d_->dims(level - 1);
    const auto& srcs = d_->stage(level - 1).into(vertex);
    std::int64_t acc = 0;
    bool found = false;
    for (int src : srcs) {
      std::int64_t block = to_i64(dims[static_cast<std::size_t>(src - 1)], "dim");
      if (ordinal < acc + block) {
        ordinal -= acc;
        vertex = src;
        found = true;
        break;
      }
      acc += block;
    }
    if (!found) throw InternalError("segment ordinal out of range");
  }
  if (vertex == d_->spacer(kp)) return kSpacer;
  return static_cast<Sym>(shallower.base(vertex) + ordinal);
}

Word factor_map(const Word& w, const Alphabet& from, const Alphabet& to) {
  Word out;
  std::unordered_map<Sym, Sym> cache;
  for (const Word::Run& r : w.runs()) {
    auto it = cache.find(r.sym);
    if (it == cache.end()) it = cache.emplace(r.sym, from.project(r.sym, to)).first;
    out.push_back(it->second, r.len);
  }
  return out;
}

BlockDag::BlockDag(const OrderedDiagram& d, int k, int max_level)
    : d_(&d), k_(k), max_level_(max_level), alpha_(d, k) {
  if (max_level < k) throw ContractError("dag depth must reach the coding level");
  if (!d.has_level(max_level)) throw ContractError("dag depth beyond available levels");
  auto dims = d.dims(k);
  // Seed level.
  {
    std::vector<Node> row(static_cast<std::size_t>(d.K(k) + 1));
    for (int j = 1; j <= d.K(k) + 1; ++j) {
      Node& nd = row[static_cast<std::size_t>(j - 1)];
      nd.length = (j == d.spacer(k)) ? BigInt(1) : dims[static_cast<std::size_t>(j - 1)];
    }
    levels_.push_back(std::move(row));
  }
  for (int n = k + 1; n <= max_level; ++n) {
    auto pairs = stage_pairs(d, n - 1);
    std::vector<Node> row(static_cast<std::size_t>(d.K(n) + 1));
    for (int j = 1; j <= d.K(n); ++j) {
      Node& nd = row[static_cast<std::size_t>(j - 1)];
      for (const auto& p : pairs[static_cast<std::size_t>(j - 1)]) {
        nd.items.push_back({p.source, 0});
        if (p.spacers > 0) nd.items.push_back({0, p.spacers});
      }
      BigInt acc = 0;
      nd.prefix.reserve(nd.items.size());
      for (const auto& item : nd.items) {
        nd.prefix.push_back(acc);
        if (item.child_j == 0)
          acc += item.spacers;
        else
          acc += levels_.back()[static_cast<std::size_t>(item.child_j - 1)].length;
      }
      nd.length = acc;
    }
    row[static_cast<std::size_t>(d.K(n))].length = 1;  // spacer block is "s"
    levels_.push_back(std::move(row));
  }

  // Canonical word-equality ids, seed level upward. Structurally equal
  // nodes share an id; a bounded content pass merges look-alikes that the
  // structural key misses.
  std::map<std::vector<std::int64_t>, int> keys;
  int next_id = 0;
  for (int n = k; n <= max_level; ++n) {
    for (int j = 1; j <= d.K(n) + 1; ++j) {
      Node& nd = levels_[static_cast<std::size_t>(n - k)][static_cast<std::size_t>(j - 1)];
      std::vector<std::int64_t> key;
      if (n == k || j == d.spacer(n)) {
        if (j == d_->spacer(n)) {
          key = {0, -1, 1};
        } else {
          key = {0, alpha_.base(j), alpha_.seed_len(j)};
        }
      } else {
        key.push_back(1);
        for (const auto& item : nd.items) {
          if (item.child_j == 0) {
            key.push_back(-1);
            key.push_back(item.spacers);
          } else {
            key.push_back(
                levels_[static_cast<std::size_t>(n - 1 - k)][static_cast<std::size_t>(item.child_j - 1)]
                    .canon);
            key.push_back(-2);
          }
        }
      }
      auto [it, inserted] = keys.try_emplace(std::move(key), next_id);
      if (inserted) ++next_id;
      nd.canon = it->second;
    }
    // Content pass: same length, different id, short enough to compare.
    auto& row = levels_[static_cast<std::size_t>(n - k)];
    for (std::size_t a = 0; a < row.size(); ++a) {
      for (std::size_t b = a + 1; b < row.size(); ++b) {
        if (row[a].canon == row[b].canon || row[a].length != row[b].length) continue;
        if (row[a].length > 4096) continue;
        auto sa = stream(block(n, static_cast<int>(a) + 1), 0, static_cast<std::int64_t>(row[a].length));
        auto sb = stream(block(n, static_cast<int>(b) + 1), 0, static_cast<std::int64_t>(row[b].length));
        bool equal = true;
        while (!sa.done()) {
          if (sa.next() != sb.next()) {
            equal = false;
            break;
          }
        }
        if (equal) row[b].canon = row[a].canon;
      }
    }
  }
}

const BlockDag::Node& BlockDag::node(int n, int j) const {
  if (n < k_ || n > max_level_) throw ContractError("level outside the dag");
  const auto& row = levels_[static_cast<std::size_t>(n - k_)];
  if (j < 1 || j > static_cast<int>(row.size())) throw ContractError("vertex index out of range");
  return row[static_cast<std::size_t>(j - 1)];
}

BlockHandle BlockDag::block(int n, int j) const {
  node(n, j);
  return {this, n, j};
}

const BigInt& BlockDag::length(int n, int j) const { return node(n, j).length; }

int BlockDag::canon_id(int n, int j) const { return node(n, j).canon; }

void BlockDag::Stream::descend(std::int64_t offset, int n, int j) {
  const Node& nd = dag_->node(n, j);
  if (nd.items.empty()) {
    stack_.push_back({n, j, 0, offset});
    return;
  }
  // Find the item containing offset.
  std::size_t lo = 0, hi = nd.items.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi + 1) / 2;
    if (nd.prefix[mid] <= offset)
      lo = mid;
    else
      hi = mid - 1;
  }
  std::int64_t local = offset - to_i64(nd.prefix[lo], "offset");
  stack_.push_back({n, j, lo, 0});
  const auto& item = nd.items[lo];
  if (item.child_j == 0) {
    stack_.back().item_pos = local;
  } else {
    descend(local, n - 1, item.child_j);
  }
}

BlockDag::Stream BlockDag::stream(const BlockHandle& h, std::int64_t offset,
                                  std::int64_t len) const {
  if (h.dag != this) throw ContractError("handle belongs to a different dag");
  const Node& nd = node(h.n, h.j);
  if (offset < 0 || len < 0 || BigInt(offset) + len > nd.length)
    throw ContractError("expansion window out of range");
  Stream s;
  s.dag_ = this;
  s.remaining_ = len;
  if (len > 0) s.descend(offset, h.n, h.j);
  return s;
}

Sym BlockDag::Stream::next() {
  if (remaining_ == 0) throw ContractError("stream exhausted");
  while (true) {
    Frame& f = stack_.back();
    const Node& nd = dag_->node(f.n, f.j);
    if (nd.items.empty()) {
      // Leaf: a seed run or a spacer block.
      Sym sym = (f.j == dag_->d_->spacer(f.n))
                    ? kSpacer
                    : static_cast<Sym>(dag_->alpha_.base(f.j) + f.item_pos);
      ++f.item_pos;
      --remaining_;
      if (remaining_ > 0 && BigInt(f.item_pos) == nd.length) {
        // Pop finished frames and advance the parent item.
        stack_.pop_back();
        while (!stack_.empty()) {
          Frame& p = stack_.back();
          const Node& pn = dag_->node(p.n, p.j);
          ++p.item;
          p.item_pos = 0;
          if (p.item < pn.items.size()) break;
          stack_.pop_back();
        }
      }
      return sym;
    }
    const Node::Item& item = nd.items[f.item];
    if (item.child_j == 0) {
      --remaining_;
      ++f.item_pos;
      bool run_done = f.item_pos == item.spacers;
      if (remaining_ > 0 && run_done) {
        ++f.item;
        f.item_pos = 0;
        if (f.item == nd.items.size()) {
          stack_.pop_back();
          while (!stack_.empty()) {
            Frame& p = stack_.back();
            const Node& pn = dag_->node(p.n, p.j);
            ++p.item;
            p.item_pos = 0;
            if (p.item < pn.items.size()) break;
            stack_.pop_back();
          }
        }
      }
      return kSpacer;
    }
    descend(0, f.n - 1, item.child_j);
  }
}

Word BlockDag::expand(const BlockHandle& h, std::int64_t offset, std::int64_t len) const {
  if (len > max_block_len())
    throw ResourceError("expansion window exceeds the ceiling; use streaming");
  Stream s = stream(h, offset, len);
  Word out;
  for (std::int64_t i = 0; i < len; ++i) out.push_back(s.next());
  return out;
}

Word BlockDag::expand_all(const BlockHandle& h) const {
  const BigInt& n = length(h.n, h.j);
  if (n > max_block_len())
    throw ResourceError("block of length " + n.str() +
                        " exceeds the expansion ceiling; telescope or stream");
  return expand(h, 0, static_cast<std::int64_t>(n));
}

std::vector<std::int64_t> BlockDag::explicit_positions(int n, int j, int m, int i) const {
  if (n < k_ || m > max_level_ || n >= m) throw ContractError("need k <= n < m within the dag");
  node(n, j);
  const bool want_spacer = j == d_->spacer(n);
  std::map<std::pair<int, int>, std::vector<std::int64_t>> memo;

  auto rec = [&](auto&& self, int mm, int ii) -> const std::vector<std::int64_t>& {
    auto key = std::make_pair(mm, ii);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<std::int64_t> out;
    if (mm == n) {
      if (ii == j) out.push_back(0);
    } else if (ii == d_->spacer(mm)) {
      // The spacer block expands to the single symbol s; its only level-n
      // explicit sub-appearance is the level-n spacer block.
      if (want_spacer) out.push_back(0);
    } else {
      const Node& nd = node(mm, ii);
      for (std::size_t t = 0; t < nd.items.size(); ++t) {
        std::int64_t off = to_i64(nd.prefix[t], "position");
        const auto& item = nd.items[t];
        if (item.child_j == 0) {
          if (want_spacer)
            for (std::int64_t u = 0; u < item.spacers; ++u) out.push_back(off + u);
        } else {
          for (std::int64_t p : self(self, mm - 1, item.child_j)) out.push_back(off + p);
        }
        if (static_cast<std::int64_t>(out.size()) > max_block_len())
          throw ResourceError("explicit-appearance set exceeds the ceiling");
      }
    }
    return memo.emplace(key, std::move(out)).first->second;
  };
  return rec(rec, m, i);
}

std::vector<std::int64_t> BlockDag::occurrences_in(const BlockHandle& h,
                                                   std::span<const Sym> pattern) const {
  if (pattern.empty()) throw ContractError("occurrences of empty pattern");
  const BigInt& total = length(h.n, h.j);
  if (total > max_block_len())
    throw ResourceError("occurrence scan over block longer than the ceiling");
  const std::int64_t len = static_cast<std::int64_t>(total);
  std::vector<std::int64_t> out;
  if (static_cast<std::int64_t>(pattern.size()) > len) return out;
  auto pi = failure_function(pattern);
  Stream s = stream(h, 0, len);
  std::int64_t kk = 0;
  const std::int64_t m = static_cast<std::int64_t>(pattern.size());
  for (std::int64_t pos = 0; pos < len; ++pos) {
    Sym c = s.next();
    while (kk > 0 && c != pattern[static_cast<std::size_t>(kk)])
      kk = pi[static_cast<std::size_t>(kk - 1)];
    if (c == pattern[static_cast<std::size_t>(kk)]) ++kk;
    if (kk == m) {
      out.push_back(pos - m + 1);
      kk = pi[static_cast<std::size_t>(kk - 1)];
    }
  }
  return out;
}

std::vector<int> BlockDag::vertex_coding(int n, int j) const {
  node(n, j);
  std::vector<int> out;
  const int spacer_k = d_->spacer(k_);
  auto rec = [&](auto&& self, int nn, int jj) -> void {
    if (static_cast<std::int64_t>(out.size()) > max_block_len())
      throw ResourceError("vertex coding exceeds the ceiling");
    if (nn == k_) {
      out.push_back(jj);
      return;
    }
    if (jj == d_->spacer(nn)) {
      out.push_back(spacer_k);
      return;
    }
    const Node& nd = node(nn, jj);
    for (const auto& item : nd.items) {
      if (item.child_j == 0)
        out.insert(out.end(), static_cast<std::size_t>(item.spacers), spacer_k);
      else
        self(self, nn - 1, item.child_j);
    }
  };
  rec(rec, n, j);
  return out;
}

}  // namespace bv
