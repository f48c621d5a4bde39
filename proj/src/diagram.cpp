#include "diagram.hpp"

#include <algorithm>
#include <map>

namespace bv {

OrderedDiagram::OrderedDiagram(std::vector<int> ks, std::vector<Stage> stages,
                               std::optional<int> stationary_from)
    : ks_(std::move(ks)), stages_(std::move(stages)), stationary_from_(stationary_from) {
  const int L = explicit_levels();
  if (L < 1) throw ParseError("diagram needs at least one level beyond the root");
  if (static_cast<int>(stages_.size()) != L)
    throw ParseError("expected one stage per level (root stage included)");
  for (int n = 1; n <= L; ++n) {
    if (ks_[static_cast<std::size_t>(n - 1)] < 0) throw ParseError("negative K");
    const Stage& st = stages_[static_cast<std::size_t>(n - 1)];
    if (st.targets() != K(n) + 1)
      throw ParseError("stage into level " + std::to_string(n) + " must cover " +
                       std::to_string(K(n) + 1) + " vertices");
    const int prev_count = K(n - 1) + 1;
    for (int j = 1; j <= st.targets(); ++j) {
      const auto& srcs = st.into(j);
      if (srcs.empty())
        throw ParseError("vertex v(" + std::to_string(n) + "," + std::to_string(j) +
                         ") has no incoming edge");
      for (int s : srcs)
        if (s < 1 || s > prev_count)
          throw ParseError("edge into v(" + std::to_string(n) + "," + std::to_string(j) +
                           ") has out-of-range source " + std::to_string(s));
    }
  }
  if (stationary_from_) {
    int m = *stationary_from_;
    if (m < 1 || m >= L)
      throw ParseError("stationary-from level must name an explicit stage");
    if (K(m) != K(m + 1))
      throw ParseError("stationary repetition requires constant K from the repeating level");
    for (int n = m; n < L; ++n) {
      if (ks_[static_cast<std::size_t>(n - 1)] != K(m) ||
          ks_[static_cast<std::size_t>(n)] != K(m))
        throw ParseError("stationary repetition requires constant K from the repeating level");
      if (stages_[static_cast<std::size_t>(n)] != stages_[static_cast<std::size_t>(m)])
        throw ParseError("explicit stages past the stationary level must repeat it");
    }
    // Canonical marker: pull the repeating level as shallow as it goes so
    // equal diagrams compare equal.
    while (m > 1 && stages_[static_cast<std::size_t>(m - 1)] == stages_[static_cast<std::size_t>(m)] &&
           ks_[static_cast<std::size_t>(m - 2)] == ks_[static_cast<std::size_t>(m - 1)])
      --m;
    stationary_from_ = m;
  }
}

int OrderedDiagram::K(int n) const {
  if (n == 0) return 0;
  if (n < 0) throw ContractError("negative level");
  if (n <= explicit_levels()) return ks_[static_cast<std::size_t>(n - 1)];
  if (stationary()) return ks_[static_cast<std::size_t>(*stationary_from_ - 1)];
  throw ContractError("level " + std::to_string(n) + " beyond available depth");
}

const Stage& OrderedDiagram::stage(int n) const {
  if (n < 0) throw ContractError("negative stage");
  if (n < explicit_levels()) return stages_[static_cast<std::size_t>(n)];
  if (stationary()) return stages_[static_cast<std::size_t>(*stationary_from_)];
  throw ContractError("stage " + std::to_string(n) + " beyond available depth");
}

std::vector<BigInt> OrderedDiagram::dims(int n) const {
  if (!has_level(n)) throw ContractError("level " + std::to_string(n) + " beyond available depth");
  std::vector<BigInt> cur{1};  // root
  for (int lvl = 0; lvl < n; ++lvl) {
    const Stage& st = stage(lvl);
    std::vector<BigInt> next(static_cast<std::size_t>(st.targets()));
    for (int j = 1; j <= st.targets(); ++j) {
      BigInt sum = 0;
      for (int s : st.into(j)) sum += cur[static_cast<std::size_t>(s - 1)];
      next[static_cast<std::size_t>(j - 1)] = sum;
    }
    cur = std::move(next);
  }
  return cur;
}

BigInt OrderedDiagram::dim(int n, int j) const {
  auto d = dims(n);
  if (j < 1 || j > static_cast<int>(d.size())) throw ContractError("vertex index out of range");
  return d[static_cast<std::size_t>(j - 1)];
}

std::vector<std::vector<RecursionPair>> stage_pairs(const OrderedDiagram& d, int n) {
  const Stage& st = d.stage(n);
  const int spacer_src = d.spacer(n);
  std::vector<std::vector<RecursionPair>> out;
  out.reserve(static_cast<std::size_t>(d.K(n + 1)));
  for (int j = 1; j <= d.K(n + 1); ++j) {
    const auto& srcs = st.into(j);
    std::vector<RecursionPair> pairs;
    for (int s : srcs) {
      if (s == spacer_src) {
        if (pairs.empty())
          throw ContractError("minimal edge into v(" + std::to_string(n + 1) + "," +
                              std::to_string(j) + ") has spacer source (C3)");
        pairs.back().spacers += 1;
      } else {
        pairs.push_back({s, 0});
      }
    }
    out.push_back(std::move(pairs));
  }
  return out;
}

bool pseudo_complete(const OrderedDiagram& d, int n) {
  if (n < 1 || !d.has_stage(n - 1)) throw ContractError("level out of range");
  const Stage& st = d.stage(n - 1);
  for (int j = 1; j <= d.K(n); ++j) {
    const auto& srcs = st.into(j);
    for (int i = 1; i <= d.K(n - 1); ++i)
      if (std::find(srcs.begin(), srcs.end(), i) == srcs.end()) return false;
  }
  return true;
}

ValidationReport validate(const OrderedDiagram& d, int horizon) {
  if (horizon < 1) throw ContractError("horizon must be >= 1");
  ValidationReport rep;
  const int deepest = d.stationary() ? horizon : std::min(horizon, d.explicit_levels());
  rep.c4_horizon = deepest;

  // How deep the edge-structure checks must walk: for stationary diagrams
  // one pass over the explicit stages covers every level.
  const int structural_depth = std::min(deepest, d.explicit_levels());

  for (int n = 1; n <= structural_depth; ++n) {
    const Stage& st = d.stage(n - 1);
    // C1
    if (d.K(n) < 1) {
      rep.c1 = false;
      rep.c1_failures.push_back({n, 0, "K_" + std::to_string(n) + " = 0"});
    }
    // C2: the spacer vertex has exactly one incoming edge, from the
    // previous spacer vertex.
    const auto& sp_srcs = st.into(d.spacer(n));
    if (sp_srcs.size() != 1 || sp_srcs[0] != d.spacer(n - 1)) {
      rep.c2 = false;
      rep.c2_failures.push_back({n, d.spacer(n),
                                 sp_srcs.size() != 1
                                     ? "spacer vertex has " + std::to_string(sp_srcs.size()) +
                                           " incoming edges"
                                     : "spacer vertex sourced at non-spacer vertex"});
    }
    // C3: the minimal edge into every non-spacer vertex has non-spacer
    // source. Level 1 is exempt: its only source is the root.
    if (n >= 2) {
      for (int j = 1; j <= d.K(n); ++j) {
        if (st.into(j).front() == d.spacer(n - 1)) {
          rep.c3 = false;
          rep.c3_failures.push_back({n, j, "minimal edge has spacer source"});
        }
      }
    }
    // Every vertex at level n-1 must source at least one edge.
    std::vector<bool> sourced(static_cast<std::size_t>(d.K(n - 1) + 1), false);
    for (int j = 1; j <= st.targets(); ++j)
      for (int s : st.into(j)) sourced[static_cast<std::size_t>(s - 1)] = true;
    for (int v = 1; v <= d.K(n - 1) + 1; ++v) {
      if (!sourced[static_cast<std::size_t>(v - 1)]) {
        rep.structural = false;
        rep.structural_failures.push_back({n - 1, v, "vertex sources no edge"});
      }
    }
  }

  // C4 at finite horizon: nondecreasing non-spacer min block lengths plus a
  // doubling requirement, and for stationary diagrams at least two incoming
  // edges per non-spacer vertex of the repeating stage.
  std::vector<BigInt> cur{1};
  for (int n = 1; n <= deepest; ++n) {
    const Stage& st = d.stage(n - 1);
    std::vector<BigInt> next(static_cast<std::size_t>(st.targets()));
    for (int j = 1; j <= st.targets(); ++j) {
      BigInt sum = 0;
      for (int s : st.into(j)) sum += cur[static_cast<std::size_t>(s - 1)];
      next[static_cast<std::size_t>(j - 1)] = sum;
    }
    cur = std::move(next);
    BigInt mn = cur[0];
    for (int j = 2; j <= d.K(n); ++j) mn = std::min(mn, cur[static_cast<std::size_t>(j - 1)]);
    rep.c4_min_lengths.push_back(mn);
  }
  for (std::size_t i = 1; i < rep.c4_min_lengths.size(); ++i)
    if (rep.c4_min_lengths[i] < rep.c4_min_lengths[i - 1]) rep.c4_monotone = false;
  if (!rep.c4_min_lengths.empty())
    rep.c4_doubling = rep.c4_min_lengths.back() >= 2 * rep.c4_min_lengths.front();
  if (d.stationary()) {
    const Stage& st = d.stage(d.stationary_from());
    for (int j = 1; j <= d.K(d.stationary_from() + 1); ++j)
      if (st.into(j).size() < 2) rep.c4_stationary_edges = false;
  }
  rep.c4 = rep.c4_monotone && rep.c4_doubling && rep.c4_stationary_edges;
  return rep;
}

namespace {

// Segments from level `from` into v(to, target), in path order: the xi of
// the deepest edge is the major key, shallower edges recursively. Each
// segment is reported by its source vertex at level `from`.
void composite_sources(const OrderedDiagram& d, int from, int to, int target,
                       std::vector<int>& out, std::int64_t limit) {
  if (to == from) {
    out.push_back(target);
    return;
  }
  for (int s : d.stage(to - 1).into(target)) {
    composite_sources(d, from, to - 1, s, out, limit);
    if (static_cast<std::int64_t>(out.size()) > limit)
      throw ResourceError("telescoped stage exceeds the edge ceiling");
  }
}

}  // namespace

OrderedDiagram telescope(const OrderedDiagram& d, std::vector<int> cuts) {
  if (cuts.empty() || cuts.front() != 0) throw ContractError("cut list must start at 0");
  for (std::size_t i = 1; i < cuts.size(); ++i)
    if (cuts[i] <= cuts[i - 1]) throw ContractError("cut list must strictly increase");
  if (cuts.size() < 2) throw ContractError("cut list must retain at least one level");
  for (int c : cuts)
    if (!d.has_level(c)) throw ContractError("cut level beyond available depth");

  std::optional<int> new_stationary;
  if (d.stationary()) {
    // Continue the cut pattern with its final spacing, and extend the
    // explicit window until a full repeating window lies in the
    // stationary regime.
    const int spacing = cuts[cuts.size() - 1] - cuts[cuts.size() - 2];
    while (cuts[cuts.size() - 2] < d.stationary_from())
      cuts.push_back(cuts.back() + spacing);
    new_stationary = static_cast<int>(cuts.size()) - 2;
  }

  std::vector<int> ks;
  std::vector<Stage> stages;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const int a = cuts[i - 1], b = cuts[i];
    ks.push_back(d.K(b));
    Stage st;
    st.sources.resize(static_cast<std::size_t>(d.K(b) + 1));
    for (int j = 1; j <= d.K(b) + 1; ++j) {
      std::vector<int> srcs;
      composite_sources(d, a, b, j, srcs, max_block_len());
      st.sources[static_cast<std::size_t>(j - 1)] = std::move(srcs);
    }
    stages.push_back(std::move(st));
  }
  return OrderedDiagram(std::move(ks), std::move(stages), new_stationary);
}

RecursionTable::RecursionTable(std::vector<std::vector<Sym>> seeds,
                               std::vector<std::vector<std::vector<RecursionPair>>> stages,
                               std::optional<int> stationary_from)
    : seeds_(std::move(seeds)), stages_(std::move(stages)), stationary_from_(stationary_from) {
  if (seeds_.empty()) throw ParseError("recursion table needs at least one seed");
  // Canonical seed labeling: D_1 D_2 ... concatenate to 0,1,2,...; this is
  // the path-order symbol assignment, and it makes the diagram round-trip
  // the identity.
  Sym next = 0;
  for (const auto& seed : seeds_) {
    if (seed.empty()) throw ParseError("empty seed word");
    for (Sym s : seed) {
      if (s == kSpacer) throw ParseError("seed words never contain the spacer symbol");
      if (s != next)
        throw ParseError("seed words must label segments canonically (expected symbol " +
                         std::to_string(next) + ", got " + std::to_string(s) + ")");
      ++next;
    }
  }
  int prevK = K1();
  int level = 2;
  for (const auto& st : stages_) {
    if (st.empty()) throw ParseError("stage with no targets");
    for (const auto& pairs : st) {
      if (pairs.empty())
        throw ParseError("block at level " + std::to_string(level) + " has no recursion pairs");
      for (const auto& p : pairs) {
        if (p.source < 1 || p.source > prevK)
          throw ParseError("recursion source out of range at level " + std::to_string(level));
        if (p.spacers < 0) throw ParseError("negative spacer run");
      }
    }
    prevK = static_cast<int>(st.size());
    ++level;
  }
  if (stationary_from_) {
    int m = *stationary_from_;
    if (m < 1 || m >= explicit_levels())
      throw ParseError("stationary-from level must name an explicit stage");
    for (int n = m; n < explicit_levels(); ++n)
      if (stages_[static_cast<std::size_t>(n - 1)] != stages_[static_cast<std::size_t>(m - 1)])
        throw ParseError("explicit stages past the stationary level must repeat it");
    auto level_K = [this](int n) {
      return n == 1 ? K1() : static_cast<int>(stages_[static_cast<std::size_t>(n - 2)].size());
    };
    while (m > 1 && stages_[static_cast<std::size_t>(m - 2)] == stages_[static_cast<std::size_t>(m - 1)] &&
           level_K(m - 1) == level_K(m))
      --m;
    stationary_from_ = m;
  }
}

RecursionTable to_recursion(const OrderedDiagram& d) {
  // Seeds: one symbol per root segment, in path order.
  std::vector<std::vector<Sym>> seeds;
  {
    const Stage& st = d.stage(0);
    const auto& sp = st.into(d.spacer(1));
    if (sp.size() != 1) throw ContractError("C2 fails at level 1; cannot convert");
    Sym next = 0;
    for (int j = 1; j <= d.K(1); ++j) {
      std::vector<Sym> seed;
      for (int s : st.into(j)) {
        if (s != 1) throw ContractError("root stage edge with bad source");
        seed.push_back(next++);
      }
      seeds.push_back(std::move(seed));
    }
  }
  std::vector<std::vector<std::vector<RecursionPair>>> stages;
  for (int n = 1; n < d.explicit_levels(); ++n) {
    const auto& sp = d.stage(n).into(d.spacer(n + 1));
    if (sp.size() != 1 || sp[0] != d.spacer(n))
      throw ContractError("C2 fails at level " + std::to_string(n + 1) + "; cannot convert");
    stages.push_back(stage_pairs(d, n));
  }
  std::optional<int> stat;
  if (d.stationary()) stat = d.stationary_from();
  return RecursionTable(std::move(seeds), std::move(stages), stat);
}

OrderedDiagram from_recursion(const RecursionTable& t) {
  std::vector<int> ks;
  std::vector<Stage> stages;
  // Root stage: |D_j| parallel edges into v(1,j), plus the spacer edge.
  ks.push_back(t.K1());
  {
    Stage st;
    for (const auto& seed : t.seeds())
      st.sources.push_back(std::vector<int>(seed.size(), 1));
    st.sources.push_back({1});
    stages.push_back(std::move(st));
  }
  int prevK = t.K1();
  for (const auto& table_stage : t.stages()) {
    const int Kn = static_cast<int>(table_stage.size());
    ks.push_back(Kn);
    Stage st;
    const int spacer_src = prevK + 1;
    for (const auto& pairs : table_stage) {
      std::vector<int> srcs;
      for (const auto& p : pairs) {
        srcs.push_back(p.source);
        srcs.insert(srcs.end(), static_cast<std::size_t>(p.spacers), spacer_src);
      }
      st.sources.push_back(std::move(srcs));
    }
    st.sources.push_back({spacer_src});
    stages.push_back(std::move(st));
    prevK = Kn;
  }
  return OrderedDiagram(std::move(ks), std::move(stages), t.stationary_from());
}

}  // namespace bv
