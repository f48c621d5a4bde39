#include "coding.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "analysis.hpp"

namespace bv {

PathPrefix::PathPrefix(const OrderedDiagram& d, std::vector<Edge> edges)
    : d_(&d), edges_(std::move(edges)) {
  int below = 1;  // root
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    const int level = static_cast<int>(i) + 1;
    if (e.range_j < 1 || e.range_j > d.K(level) + 1)
      throw ContractError("prefix range vertex out of range at level " + std::to_string(level));
    const auto& srcs = d.stage(level - 1).into(e.range_j);
    if (e.xi < 1 || e.xi > static_cast<int>(srcs.size()))
      throw ContractError("prefix edge order out of range at level " + std::to_string(level));
    if (srcs[static_cast<std::size_t>(e.xi - 1)] != below)
      throw ContractError("prefix edges do not compose at level " + std::to_string(level));
    below = e.range_j;
  }
}

int PathPrefix::terminal() const { return edges_.empty() ? 1 : edges_.back().range_j; }

int PathPrefix::vertex_at(int level) const {
  if (level < 0 || level > depth()) throw ContractError("level beyond prefix depth");
  return level == 0 ? 1 : edges_[static_cast<std::size_t>(level - 1)].range_j;
}

bool PathPrefix::on_spacer_path() const {
  for (std::size_t i = 0; i < edges_.size(); ++i)
    if (edges_[i].range_j != d_->spacer(static_cast<int>(i) + 1)) return false;
  return !edges_.empty();
}

PathPrefix minimal_prefix(const OrderedDiagram& d, int n, int j) {
  if (n < 1 || !d.has_level(n)) throw ContractError("level out of range");
  if (j < 1 || j > d.K(n) + 1) throw ContractError("vertex index out of range");
  std::vector<PathPrefix::Edge> edges(static_cast<std::size_t>(n));
  int cur = j;
  for (int level = n; level >= 1; --level) {
    edges[static_cast<std::size_t>(level - 1)] = {cur, 1};
    cur = d.stage(level - 1).into(cur)[0];
  }
  return PathPrefix(d, std::move(edges));
}

PathPrefix spacer_prefix(const OrderedDiagram& d, int depth) {
  if (depth < 1) throw ContractError("depth must be >= 1");
  std::vector<PathPrefix::Edge> edges;
  for (int level = 1; level <= depth; ++level) {
    const auto& srcs = d.stage(level - 1).into(d.spacer(level));
    int xi = 0;
    for (std::size_t t = 0; t < srcs.size(); ++t)
      if (srcs[t] == d.spacer(level - 1)) xi = static_cast<int>(t) + 1;
    if (xi == 0) throw ContractError("no spacer chain edge at level " + std::to_string(level));
    edges.push_back({d.spacer(level), xi});
  }
  return PathPrefix(d, std::move(edges));
}

SuccessorResult successor(const OrderedDiagram& d, const PathPrefix& p) {
  if (p.on_spacer_path()) return FixedPoint{};
  const auto& edges = p.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const int level = static_cast<int>(i) + 1;
    const auto& srcs = d.stage(level - 1).into(edges[i].range_j);
    if (edges[i].xi < static_cast<int>(srcs.size())) {
      std::vector<PathPrefix::Edge> out(edges.begin(), edges.end());
      out[i].xi += 1;
      int src = srcs[static_cast<std::size_t>(out[i].xi - 1)];
      int cur = src;
      for (int lvl = static_cast<int>(i); lvl >= 1; --lvl) {
        out[static_cast<std::size_t>(lvl - 1)] = {cur, 1};
        cur = d.stage(lvl - 1).into(cur)[0];
      }
      return PathPrefix(d, std::move(out));
    }
  }
  return CarryOverflow{};
}

namespace {

// Cumulative segment counts by edge order, for the stages below the coding
// level: offset[j][xi-1] = number of segments through edges of smaller xi.
struct SegmentOffsets {
  std::vector<std::vector<std::vector<std::int64_t>>> per_stage;

  SegmentOffsets(const OrderedDiagram& d, int k) {
    std::vector<std::int64_t> dims{1};
    for (int level = 1; level <= k; ++level) {
      const Stage& st = d.stage(level - 1);
      std::vector<std::vector<std::int64_t>> table(static_cast<std::size_t>(st.targets()));
      std::vector<std::int64_t> next(static_cast<std::size_t>(st.targets()));
      for (int j = 1; j <= st.targets(); ++j) {
        std::int64_t acc = 0;
        auto& row = table[static_cast<std::size_t>(j - 1)];
        for (int src : st.into(j)) {
          row.push_back(acc);
          acc += dims[static_cast<std::size_t>(src - 1)];
        }
        next[static_cast<std::size_t>(j - 1)] = acc;
      }
      per_stage.push_back(std::move(table));
      dims = std::move(next);
    }
  }

  std::int64_t ordinal(const PathPrefix& p, int k) const {
    std::int64_t ord = 0;
    for (int level = 1; level <= k; ++level) {
      const auto& e = p.edges()[static_cast<std::size_t>(level - 1)];
      ord += per_stage[static_cast<std::size_t>(level - 1)][static_cast<std::size_t>(e.range_j - 1)]
                      [static_cast<std::size_t>(e.xi - 1)];
    }
    return ord;
  }
};

}  // namespace

Sym symbol_at(const Alphabet& alpha, const PathPrefix& p) {
  const int k = alpha.k();
  if (p.depth() < k) throw ContractError("prefix shallower than the coding depth");
  if (p.vertex_at(k) == alpha.diagram().spacer(k)) return kSpacer;
  SegmentOffsets offs(alpha.diagram(), k);
  return static_cast<Sym>(alpha.base(p.vertex_at(k)) + offs.ordinal(p, k));
}

OrbitCoding code_orbit(const OrderedDiagram& d, const PathPrefix& start, int k,
                       std::int64_t len) {
  if (k < 1 || k > start.depth()) throw ContractError("need 1 <= k <= prefix depth");
  if (len < 0) throw ContractError("negative orbit length");
  OrbitCoding out;
  if (len == 0) return out;

  if (start.on_spacer_path()) {
    out.word.push_back(kSpacer, len);
    out.steps = len;
    out.reason = OrbitEnd::FixedPoint;
    return out;
  }

  Alphabet alpha(d, k);
  SegmentOffsets offs(d, k);

  // Preferred deepening targets: vertices whose minimal edge sources the
  // current terminal; on stationary diagrams prefer sigma-cycle vertices so
  // the orbit follows an infinite minimal thread.
  std::vector<int> cycle_set;
  if (d.stationary()) {
    Census c = minimal_path_census(d, d.stationary_from() + 1);
    cycle_set = c.cycle_vertices;
  }

  std::vector<PathPrefix::Edge> edges = start.edges();
  auto emit = [&]() {
    if (edges[static_cast<std::size_t>(k - 1)].range_j == d.spacer(k)) {
      out.word.push_back(kSpacer);
    } else {
      std::int64_t ord = 0;
      for (int level = 1; level <= k; ++level) {
        const auto& e = edges[static_cast<std::size_t>(level - 1)];
        ord += offs.per_stage[static_cast<std::size_t>(level - 1)]
                             [static_cast<std::size_t>(e.range_j - 1)]
                             [static_cast<std::size_t>(e.xi - 1)];
      }
      out.word.push_back(static_cast<Sym>(alpha.base(edges[static_cast<std::size_t>(k - 1)].range_j) + ord));
    }
    ++out.steps;
  };

  for (std::int64_t step = 0; step < len; ++step) {
    emit();
    if (step == len - 1) break;
    // Advance: increment the shallowest non-maximal edge, deepening with
    // minimal edges when the carry escapes the prefix.
    while (true) {
      bool advanced = false;
      for (std::size_t i = 0; i < edges.size(); ++i) {
        const int level = static_cast<int>(i) + 1;
        const auto& srcs = d.stage(level - 1).into(edges[i].range_j);
        if (edges[i].xi < static_cast<int>(srcs.size())) {
          edges[i].xi += 1;
          int cur = srcs[static_cast<std::size_t>(edges[i].xi - 1)];
          for (int lvl = static_cast<int>(i); lvl >= 1; --lvl) {
            edges[static_cast<std::size_t>(lvl - 1)] = {cur, 1};
            cur = d.stage(lvl - 1).into(cur)[0];
          }
          advanced = true;
          break;
        }
      }
      if (advanced) break;
      // Deepen.
      const int depth = static_cast<int>(edges.size());
      if (!d.has_stage(depth)) {
        out.reason = OrbitEnd::CarryExhausted;
        return out;
      }
      const Stage& st = d.stage(depth);
      const int terminal = edges.back().range_j;
      int chosen = 0, chosen_xi = 0;
      for (int j : cycle_set) {
        if (j <= st.targets() && st.into(j)[0] == terminal) {
          chosen = j;
          chosen_xi = 1;
          break;
        }
      }
      if (chosen == 0) {
        for (int j = 1; j <= st.targets(); ++j) {
          if (st.into(j)[0] == terminal) {
            chosen = j;
            chosen_xi = 1;
            break;
          }
        }
      }
      if (chosen == 0) {
        int best_xi = std::numeric_limits<int>::max();
        for (int j = 1; j <= st.targets(); ++j) {
          const auto& srcs = st.into(j);
          for (std::size_t t = 0; t < srcs.size(); ++t) {
            if (srcs[t] == terminal && static_cast<int>(t) + 1 < best_xi) {
              best_xi = static_cast<int>(t) + 1;
              chosen = j;
            }
          }
        }
        chosen_xi = best_xi;
      }
      if (chosen == 0)
        throw InternalError("vertex sources no edge; diagram fails validation");
      edges.push_back({chosen, chosen_xi});
    }
  }
  out.reason = start.on_spacer_path() ? OrbitEnd::FixedPoint : OrbitEnd::LengthReached;
  return out;
}

namespace {

// sigma on a stage: target vertex -> source of its minimal edge.
std::vector<int> sigma_map(const Stage& st) {
  std::vector<int> out(static_cast<std::size_t>(st.targets()));
  for (int j = 1; j <= st.targets(); ++j) out[static_cast<std::size_t>(j - 1)] = st.into(j)[0];
  return out;
}

// Vertex-pair relation under the repeating stage: related targets must have
// identical item structure with related children. Used to decide whether
// two minimal threads carry identical basic blocks at every level.
using Relation = std::vector<std::vector<bool>>;

Relation relation_step(const OrderedDiagram& d, int stage_idx, const Relation& r) {
  auto pairs = stage_pairs(d, stage_idx);
  const int count = d.K(stage_idx + 1) + 1;
  const int spacer = d.spacer(stage_idx + 1);
  Relation out(static_cast<std::size_t>(count),
               std::vector<bool>(static_cast<std::size_t>(count), false));
  for (int a = 1; a <= count; ++a) out[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(a - 1)] = true;
  for (int a = 1; a < spacer; ++a) {
    for (int b = a + 1; b < spacer; ++b) {
      const auto& pa = pairs[static_cast<std::size_t>(a - 1)];
      const auto& pb = pairs[static_cast<std::size_t>(b - 1)];
      if (pa.size() != pb.size()) continue;
      bool ok = true;
      for (std::size_t t = 0; t < pa.size(); ++t) {
        if (pa[t].spacers != pb[t].spacers ||
            !r[static_cast<std::size_t>(pa[t].source - 1)][static_cast<std::size_t>(pb[t].source - 1)]) {
          ok = false;
          break;
        }
      }
      out[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)] = ok;
      out[static_cast<std::size_t>(b - 1)][static_cast<std::size_t>(a - 1)] = ok;
    }
  }
  return out;
}

}  // namespace

Census minimal_path_census(const OrderedDiagram& d, int horizon) {
  if (horizon < 2) throw ContractError("census horizon must be >= 2");
  Census out;
  out.horizon = horizon;
  if (d.stationary()) {
    const int m = d.stationary_from();
    auto sigma = sigma_map(d.stage(m));
    const int count = static_cast<int>(sigma.size());
    // Vertices on sigma-cycles.
    std::vector<int> on_cycle;
    for (int v = 1; v <= count; ++v) {
      // Iterate count steps; v is on a cycle iff it reappears.
      int cur = v;
      for (int t = 0; t < count; ++t) cur = sigma[static_cast<std::size_t>(cur - 1)];
      int probe = cur;
      bool cycles = false;
      for (int t = 0; t < count; ++t) {
        probe = sigma[static_cast<std::size_t>(probe - 1)];
        if (probe == cur) break;
      }
      // cur is on a cycle by construction; v is on a cycle iff walking from
      // v returns to v.
      probe = v;
      for (int t = 0; t < count; ++t) {
        probe = sigma[static_cast<std::size_t>(probe - 1)];
        if (probe == v) {
          cycles = true;
          break;
        }
      }
      if (cycles && v != d.spacer(m + 1)) on_cycle.push_back(v);
    }
    out.exact = true;
    out.cycle_vertices = on_cycle;
    out.raw_threads = static_cast<int>(on_cycle.size());

    // Coding classes: threads whose basic blocks agree at every level. The
    // per-level equality relation is seeded from canonical ids and evolved
    // by the repeating stage until it cycles; thread pairs are then walked
    // through their preimage positions across one full combined period.
    const int L0 = std::max(1, m);
    BlockDag dag(d, 1, L0 + 1);
    const int count0 = d.K(L0) + 1;
    Relation r0(static_cast<std::size_t>(count0),
                std::vector<bool>(static_cast<std::size_t>(count0), false));
    for (int a = 1; a <= count0; ++a)
      for (int b = 1; b <= count0; ++b)
        r0[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)] =
            dag.canon_id(L0, a) == dag.canon_id(L0, b);
    std::vector<Relation> rels{r0};
    int cycle_start = -1;
    while (cycle_start < 0) {
      Relation next = relation_step(d, m, rels.back());
      for (std::size_t t = 0; t < rels.size(); ++t)
        if (rels[t] == next) {
          cycle_start = static_cast<int>(t);
          break;
        }
      if (cycle_start < 0) rels.push_back(std::move(next));
      if (rels.size() > 4096) throw InternalError("relation sequence failed to cycle");
    }
    const int rel_cycle_len = static_cast<int>(rels.size()) - cycle_start;

    // Preimage step along cycles: unique cycle preimage of each on-cycle vertex.
    std::vector<int> inv(static_cast<std::size_t>(count), 0);
    for (int v : on_cycle)
      for (int w : on_cycle)
        if (sigma[static_cast<std::size_t>(w - 1)] == v) inv[static_cast<std::size_t>(v - 1)] = w;
    // Also allow the spacer cycle for completeness.
    auto inv_of = [&](int v) { return v == d.spacer(m + 1) ? v : inv[static_cast<std::size_t>(v - 1)]; };

    std::vector<int> cls(on_cycle.size());
    std::iota(cls.begin(), cls.end(), 0);
    for (std::size_t ai = 0; ai < on_cycle.size(); ++ai) {
      for (std::size_t bi = ai + 1; bi < on_cycle.size(); ++bi) {
        int a = on_cycle[ai], b = on_cycle[bi];
        // Walk until (positions, relation index) revisits a state.
        bool equal = true;
        std::vector<std::tuple<int, int, int>> seen;
        int t = 0;
        int pa = a, pb = b;
        while (true) {
          int rel_idx = t < static_cast<int>(rels.size())
                            ? t
                            : cycle_start + (t - cycle_start) % rel_cycle_len;
          if (!rels[static_cast<std::size_t>(rel_idx)][static_cast<std::size_t>(pa - 1)]
                  [static_cast<std::size_t>(pb - 1)]) {
            equal = false;
            break;
          }
          auto state = std::make_tuple(pa, pb, rel_idx);
          if (std::find(seen.begin(), seen.end(), state) != seen.end()) break;
          seen.push_back(state);
          pa = inv_of(pa);
          pb = inv_of(pb);
          ++t;
        }
        if (equal) {
          int target = cls[ai];
          int from = cls[bi];
          for (auto& c : cls)
            if (c == from) c = target;
        }
      }
    }
    std::vector<int> distinct(cls);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    out.coding_classes = static_cast<int>(distinct.size());
    return out;
  }

  // Non-stationary: horizon-limited upper bound. A vertex at level h can
  // carry a minimal thread only if minimal-edge chains extend to the
  // deepest explicit level.
  const int h = std::min(horizon, d.explicit_levels() - 1);
  const int deepest = d.explicit_levels();
  std::vector<bool> alive(static_cast<std::size_t>(d.K(deepest) + 1), true);
  for (int n = deepest; n > h; --n) {
    auto sigma = sigma_map(d.stage(n - 1));
    std::vector<bool> up(static_cast<std::size_t>(d.K(n - 1) + 1), false);
    for (int w = 1; w <= d.K(n) + 1; ++w)
      if (alive[static_cast<std::size_t>(w - 1)])
        up[static_cast<std::size_t>(sigma[static_cast<std::size_t>(w - 1)] - 1)] = true;
    alive = std::move(up);
  }
  out.exact = false;
  out.horizon = h;
  int n_alive = 0;
  for (int v = 1; v <= d.K(h); ++v)
    if (alive[static_cast<std::size_t>(v - 1)]) ++n_alive;
  out.raw_threads = n_alive;
  out.coding_classes = n_alive;
  return out;
}

TransitiveReport transitive_conditions(const OrderedDiagram& d, int horizon) {
  if (horizon < 2) throw ContractError("horizon must be >= 2");
  TransitiveReport rep;
  rep.horizon = horizon;
  const int deepest = d.stationary() ? horizon : std::min(horizon, d.explicit_levels() - 1);
  for (int n = 1; n <= deepest; ++n) {
    // (a) level n+1 semi n-periodic.
    bool semi_ok = false;
    try {
      semi_ok = std::holds_alternative<SemiCertificate>(semi_k_periodic(d, n + 1, n));
    } catch (const ResourceError&) {
      break;  // blocks past the ceiling; deeper levels are unknowable here
    }
    if (semi_ok) {
      ++rep.semi_levels;
      rep.semi_hits.push_back(n);
    }
    // (b) spacer out-degree > 1.
    const Stage& st = d.stage(n);
    int out_deg = 0;
    for (int j = 1; j <= st.targets(); ++j)
      for (int s : st.into(j))
        if (s == d.spacer(n)) ++out_deg;
    if (out_deg > 1) ++rep.branching_levels;
  }
  if (d.stationary()) {
    rep.exact = true;
    const int m = d.stationary_from();
    const Stage& st = d.stage(m);
    int out_deg = 0;
    for (int j = 1; j <= st.targets(); ++j)
      for (int s : st.into(j))
        if (s == d.spacer(m)) ++out_deg;
    rep.spacer_branches_forever = out_deg > 1;
    // Semi n-periodicity of level n+1 is alphabet-renaming invariant, so one
    // repeating level decides all of them.
    const int probe = std::max(m, 1) + 1;
    try {
      rep.semi_forever =
          std::holds_alternative<SemiCertificate>(semi_k_periodic(d, probe + 1, probe));
    } catch (const ResourceError&) {
      rep.semi_forever = false;
    }
  }
  return rep;
}

}  // namespace bv
