#include "corpus.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "analysis.hpp"
#include "coding.hpp"

namespace bv {

namespace {

using Pairs = std::vector<RecursionPair>;
using StageTable = std::vector<Pairs>;

RecursionTable table_of(std::vector<std::vector<Sym>> seeds, std::vector<StageTable> stages,
                        std::optional<int> stationary_from) {
  return RecursionTable(std::move(seeds), std::move(stages), stationary_from);
}

Fixture make(std::string name, std::string description, RecursionTable table,
             std::vector<Fact> facts) {
  OrderedDiagram d = from_recursion(table);
  return Fixture{std::move(name), std::move(description), std::move(d), std::move(table),
                 std::move(facts)};
}

Fixture build_fixture(const std::string& name) {
  if (name == "fig1b-rank1") {
    // B(2)=B(1)s, B(3)=B(2)sB(2), B(4)=B(3)sB(3), continuing stationarily.
    return make(
        name, "rank-one system whose blocks appear explicitly and not",
        table_of({{0}}, {{{{1, 1}}}, {{{1, 1}, {1, 0}}}, {{{1, 1}, {1, 0}}}}, 2),
        {
            {"block", "3,1,1", "0ss0s", "[given]"},
            {"block", "4,1,1", "0ss0ss0ss0s", "[given]"},
            {"dim", "3,1", "5", "[given: length equals dim]"},
            {"dim", "4,1", "11", "[given]"},
            {"explicit", "3,1,4,1,1", "0,6", "[given: explicit at 0 and 6]"},
            {"occ-of-block", "3,1,4,1,1", "0,3,6", "[given: 3 is not explicit]"},
            {"min-len", "4", "11", "[derived by expansion]"},
            {"validate", "10", "pass", "[derived]"},
            {"census", "", "raw=1 classes=1", "[derived]"},
            {"period", "1", "periodic 0ss", "[derived: omega=(0ss)^inf]"},
            {"rank-one", "6", "periodic P=0ss a=1 N=2", "[derived]"},
        });
  }
  if (name == "fig1a") {
    // Edge ordering whose recursion begins B(2,1)=B(1,1)s^2 B(1,2)s and
    // B(2,2)=B(1,2)s B(1,1)s^2; continued stationarily.
    return make(name, "two-vertex ordering from the recursion-figure caption",
                table_of({{0}, {1}}, {{{{1, 2}, {2, 1}}, {{2, 1}, {1, 2}}}}, 1),
                {
                    {"to-recursion", "2,1", "1,2 2,1", "[given]"},
                    {"to-recursion", "2,2", "2,1 1,2", "[given]"},
                    {"block", "2,1,1", "0ss1s", "[derived]"},
                    {"block", "2,2,1", "1s0ss", "[derived]"},
                    {"validate", "8", "pass", "[derived]"},
                });
  }
  if (name == "sec4-U3") {
    // K2=3 example: level 3 is semi 1-periodic with U=0s1s1s0, level 2 is
    // not, and level 3 is not semi 2-periodic.
    return make(
        name, "three-level example around the semi-periodicity definition",
        table_of({{0}, {1}},
                 {{{{1, 1}, {2, 0}}, {{1, 1}, {2, 0}}, {{2, 1}, {1, 0}}},
                  {{{1, 1}, {3, 2}, {2, 1}, {3, 0}}, {{2, 1}, {3, 2}, {1, 1}, {3, 1}}}},
                 std::nullopt),
        {
            {"semi", "3,1", "U=0s1s1s0 c=2 t=1,1 l=0,1", "[given]"},
            {"semi", "2,1", "refuted", "[given: 0s1 vs 1s0]"},
            {"semi", "3,2", "refuted", "[given]"},
            {"ldc", "2,1", "fail", "[direct: level 2 not semi 1-periodic]"},
            {"block", "3,1,1", "0s1s1s0ss0s1s1s0", "[derived]"},
            {"vertex-coding", "3,1,2", "1,4,3,4,4,2,4,3", "[derived: one spacer vertex per s]"},
            {"uniform", "3,1", "none", "[direct: l(3,1)=0 differs from c=2]"},
        });
  }
  if (name == "ex-semi-k") {
    // Two-seed instantiation (0 and 1) of the semi k-periodic block shapes.
    return make(
        name, "semi k-periodic level with U=1sss0, c=4",
        table_of({{0}, {1}},
                 {{{{2, 3}, {1, 4}, {2, 3}, {1, 4}, {2, 3}, {1, 2}},
                   {{2, 3}, {1, 4}, {2, 3}, {1, 2}}}},
                 std::nullopt),
        {
            {"semi", "2,1", "U=1sss0 c=4 t=2,1 l=2,2", "[derived by factoring]"},
            {"decomp", "1", "unique parse=2,3,3,3,1 pc=true", "[derived]"},
            {"block", "2,2,1", "1sss0ssss1sss0ss", "[derived]"},
        });
  }
  if (name == "fig2a-two-minimal") {
    // Two minimal forward transitive paths; stationary after level 2.
    return make(
        name, "two sigma-fixed threads with distinct blocks",
        table_of({{0}, {1}},
                 {{{{1, 0}, {2, 2}, {1, 0}}, {{2, 2}, {1, 0}, {2, 1}}},
                  {{{1, 0}, {2, 1}, {1, 0}}, {{2, 1}, {1, 0}, {2, 0}}}},
                 2),
        {
            {"block", "2,1,1", "01ss0", "[given]"},
            {"block", "2,2,1", "1ss01s", "[given]"},
            {"census", "", "raw=2 classes=2", "[given: two minimal threads]"},
            {"period", "1", "multi-minimal", "[derived: outside the unique-thread machinery]"},
            {"spacer-branching", "", "true", "[derived]"},
            {"validate", "8", "pass", "[derived]"},
        });
  }
  if (name == "ex-someper") {
    // Periodic 1-coding with least period 01ss, aperiodic 2-coding.
    return make(
        name, "periodic 1-coding, Morse-like aperiodic 2-coding",
        table_of({{0}, {1}},
                 {{{{1, 0}, {2, 1}}, {{1, 0}, {2, 1}}},
                  {{{1, 1}, {2, 0}}, {{2, 1}, {1, 0}}}},
                 2),
        {
            {"period", "1", "periodic 01ss", "[given: least period 01ss]"},
            {"period-kind", "2", "aperiodic", "[given: the 2-coding is not periodic]"},
            {"census", "", "raw=2 classes=1", "[derived: twin threads share all blocks]"},
            {"block", "3,1,1", "01ss01s", "[derived]"},
            {"least-period-prefix", "1,10000", "4", "[given]"},
            {"validate", "10", "pass", "[derived]"},
        });
  }
  if (name == "ex-all-ldc") {
    // The every-level-deficit example, under the literal-1 reading of the
    // printed blocks: D1=0, D2=1, B(2,1)=0s1sss0s1s.
    return make(
        name, "every level satisfies the deficit condition; all codings periodic",
        table_of({{0}, {1}},
                 {{{{1, 1}, {2, 3}, {1, 1}, {2, 1}}, {{1, 1}, {2, 3}, {1, 1}, {2, 2}}},
                  {{{1, 2}, {1, 2}, {2, 1}},
                   {{1, 2}, {1, 2}, {2, 1}, {1, 2}, {1, 2}, {2, 0}}},
                  {{{1, 0}, {2, 1}, {1, 0}, {2, 1}}, {{1, 0}, {2, 1}, {1, 0}, {2, 0}}}},
                 3),
        {
            {"block", "2,1,1", "0s1sss0s1s", "[derived under the literal-1 reading]"},
            {"block", "2,2,1", "0s1sss0s1ss", "[derived]"},
            {"semi", "2,1", "U=0s1 c=3 t=1,1 l=1,2", "[derived]"},
            {"ldc", "2,1", "pass", "[derived: deficits 2,2 interior; final 1<=1]"},
            {"ldc", "3,1", "pass", "[derived]"},
            {"period", "1", "periodic 0s1sss", "[derived by expansion]"},
            {"period-kind", "2", "periodic", "[given: every coding depth stays finite]"},
            {"least-period-prefix", "1,10000", "6", "[derived by brute-force expansion]"},
            {"census", "", "raw=1 classes=1", "[derived]"},
            {"validate", "10", "pass", "[derived]"},
        });
  }
  if (name == "chacon") {
    // The Chacon adic: B(n+1)=B(n)B(n)sB(n).
    return make(name, "Chacon system as an adic",
                table_of({{0}}, {{{{1, 0}, {1, 1}, {1, 0}}}}, 1),
                {
                    {"block", "2,1,1", "00s0", "[derived]"},
                    {"block", "3,1,1", "00s000s0s00s0", "[derived]"},
                    {"validate", "10", "pass", "[given]"},
                    {"census", "", "raw=1 classes=1", "[derived]"},
                    {"period-kind", "1", "aperiodic", "[derived]"},
                    {"rank-one", "6", "refuted", "[derived: aperiodic prefix]"},
                    {"pseudo-complete", "2", "true", "[derived]"},
                    {"odometer", "8", "failed-ldc", "[derived]"},
                    {"spacer-branching", "", "true", "[derived]"},
                });
  }
  if (name == "parallel-columns") {
    // Straight columns: every k-factor finite and isomorphic; C4 fails.
    return make(name, "parallel single-edge columns; a finite system",
                table_of({{0, 1, 2}, {3, 4}}, {{{{1, 0}}, {{2, 0}}}}, 1),
                {
                    {"validate", "10", "fail c4", "[derived: columns do not grow]"},
                    {"pseudo-complete", "2", "false", "[given]"},
                    {"census", "", "raw=2 classes=2", "[derived: each column is a thread]"},
                    {"odometer", "8", "finite-system", "[given: a finite system]"},
                });
  }
  throw ContractError("unknown fixture '" + name + "'");
}

std::vector<int> parse_ints(const std::string& args) {
  std::vector<int> out;
  std::istringstream in(args);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

std::string join_i64(const std::vector<std::int64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string join_int(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {
      "fig1a",       "fig1b-rank1", "sec4-U3",           "ex-semi-k", "fig2a-two-minimal",
      "ex-someper",  "ex-all-ldc",  "chacon",            "parallel-columns"};
  return names;
}

Fixture fixture(const std::string& name) { return build_fixture(name); }

std::string run_fact(const Fixture& f, const Fact& fact) {
  const OrderedDiagram& d = f.diagram;
  auto a = parse_ints(fact.args);
  if (fact.op == "block") {
    Word w = basic_block_word(d, a[0], a[1], a[2]);
    return format_word(w, true);
  }
  if (fact.op == "dim") return d.dim(a[0], a[1]).str();
  if (fact.op == "explicit") {
    BlockDag dag(d, a[4], a[2]);
    auto pos = dag.explicit_positions(a[0], a[1], a[2], a[3]);
    return join_i64(pos);
  }
  if (fact.op == "occ-of-block") {
    BlockDag dag(d, a[4], a[2]);
    auto pattern = dag.expand_all(dag.block(a[0], a[1])).flat();
    auto pos = dag.occurrences_in(dag.block(a[2], a[3]), pattern);
    return join_i64(pos);
  }
  if (fact.op == "min-len") {
    auto dims = d.dims(a[0]);
    BigInt mn = dims[0];
    for (int j = 2; j <= d.K(a[0]); ++j) mn = std::min(mn, dims[static_cast<std::size_t>(j - 1)]);
    return mn.str();
  }
  if (fact.op == "validate") {
    auto rep = validate(d, a[0]);
    if (rep.pass()) return "pass";
    std::string out = "fail";
    if (!rep.c1) out += " c1";
    if (!rep.c2) out += " c2";
    if (!rep.c3) out += " c3";
    if (!rep.structural) out += " structural";
    if (!rep.c4) out += " c4";
    return out;
  }
  if (fact.op == "census") {
    Census c = minimal_path_census(d, 8);
    return "raw=" + std::to_string(c.raw_threads) + " classes=" + std::to_string(c.coding_classes);
  }
  if (fact.op == "period" || fact.op == "period-kind") {
    PeriodicityVerdict v = k_coding_periodicity(d, a[0], 12, 10000);
    switch (v.kind) {
      case PeriodicityVerdict::Kind::Periodic:
        return fact.op == "period" ? "periodic " + format_word(*v.period, true) : "periodic";
      case PeriodicityVerdict::Kind::Aperiodic:
        return "aperiodic";
      case PeriodicityVerdict::Kind::MultiMinimal:
        return "multi-minimal";
      case PeriodicityVerdict::Kind::PeriodicThrough:
        return "periodic-through " + std::to_string(v.witness_level);
      case PeriodicityVerdict::Kind::AperiodicEvidence:
        return "aperiodic-evidence";
    }
  }
  if (fact.op == "rank-one") {
    auto r = rank_one_structure(d, a[0]);
    if (auto* st = std::get_if<RankOneStructure>(&r)) {
      if (!st->structure_ok) return "periodic structure-missing";
      return "periodic P=" + format_word(st->period, true) + " a=" + std::to_string(st->a) +
             " N=" + std::to_string(st->N);
    }
    return "refuted";
  }
  if (fact.op == "semi") {
    auto r = semi_k_periodic(d, a[0], a[1]);
    if (auto* cert = std::get_if<SemiCertificate>(&r)) {
      return "U=" + format_word(cert->U, true) + " c=" + std::to_string(cert->c) +
             " t=" + join_i64(cert->t) + " l=" + join_i64(cert->l);
    }
    return "refuted";
  }
  if (fact.op == "ldc") return ldc(d, a[0], a[1]).pass ? "pass" : "fail";
  if (fact.op == "vertex-coding") {
    BlockDag dag(d, a[2], a[0]);
    return join_int(dag.vertex_coding(a[0], a[1]));
  }
  if (fact.op == "uniform") {
    auto w = uniformly_ordered(d, a[0], a[1]);
    return w ? "W=" + format_word(*w, true) : "none";
  }
  if (fact.op == "decomp") {
    auto rep = decomposition_unique(d, a[0]);
    if (rep.status == DecompositionStatus::NotApplicable) return "not-applicable";
    if (rep.status == DecompositionStatus::Failed) return "failed";
    return "unique parse=" + join_int(rep.parse) +
           " pc=" + std::string(rep.pseudo_complete_level ? "true" : "false");
  }
  if (fact.op == "pseudo-complete") return pseudo_complete(d, a[0]) ? "true" : "false";
  if (fact.op == "odometer") {
    auto v = odometer_verdict(d, a[0]);
    switch (v.kind) {
      case OdometerVerdict::Kind::OdometerPlusFixedPoint:
        return "odometer-plus-fixed-point";
      case OdometerVerdict::Kind::FiniteSystem:
        return "finite-system";
      case OdometerVerdict::Kind::FailedLdc:
        return "failed-ldc";
      case OdometerVerdict::Kind::FailedSpacerBranching:
        return "failed-spacer-branching";
      case OdometerVerdict::Kind::HorizonLimited:
        return "horizon-limited";
    }
  }
  if (fact.op == "spacer-branching") {
    auto rep = transitive_conditions(d, 6);
    return rep.spacer_branches_forever ? "true" : "false";
  }
  if (fact.op == "least-period-prefix") {
    PeriodicityVerdict v = k_coding_periodicity(d, a[0], 12, a[1]);
    return std::to_string(v.least_period);
  }
  if (fact.op == "to-recursion") {
    RecursionTable t = to_recursion(d);
    const auto& pairs = t.stages()[static_cast<std::size_t>(a[0] - 2)]
                                  [static_cast<std::size_t>(a[1] - 1)];
    std::string out;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(pairs[i].source) + "," + std::to_string(pairs[i].spacers);
    }
    return out;
  }
  throw ContractError("unknown fact op '" + fact.op + "'");
}

namespace {

int rand_in(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace

OrderedDiagram random_stationary(std::uint64_t seed, int K, int max_edges, SpacerPolicy policy) {
  if (K < 1 || max_edges < 2) throw ContractError("need K >= 1 and max_edges >= 2");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Sym>> seeds;
  for (int j = 0; j < K; ++j) seeds.push_back({static_cast<Sym>(j)});

  StageTable stage(static_cast<std::size_t>(K));
  std::vector<bool> covered(static_cast<std::size_t>(K), false);
  for (int j = 0; j < K; ++j) {
    int q = rand_in(rng, 2, std::max(2, std::min(max_edges, 4)));
    Pairs pairs;
    std::int64_t budget = max_edges - q;
    for (int t = 0; t < q; ++t) {
      int src = rand_in(rng, 1, K);
      covered[static_cast<std::size_t>(src - 1)] = true;
      std::int64_t run = 0;
      if (policy == SpacerPolicy::Branching && budget > 0 && rng() % 2 == 0) {
        run = rand_in(rng, 1, static_cast<int>(std::min<std::int64_t>(budget, 2)));
        budget -= run;
      }
      pairs.push_back({src, run});
    }
    stage[static_cast<std::size_t>(j)] = std::move(pairs);
  }
  // Every vertex must source at least one edge.
  for (int v = 1; v <= K; ++v) {
    if (!covered[static_cast<std::size_t>(v - 1)]) {
      int j = rand_in(rng, 0, K - 1);
      stage[static_cast<std::size_t>(j)].push_back({v, 0});
    }
  }
  if (policy == SpacerPolicy::Branching) {
    bool any = false;
    for (const auto& pairs : stage)
      for (const auto& p : pairs)
        if (p.spacers > 0) any = true;
    if (!any) stage[0].back().spacers = 1;
  }
  return from_recursion(table_of(std::move(seeds), {stage}, 1));
}

namespace {

LdcInstance ldc_instance(std::uint64_t seed, int K, bool perturb) {
  if (K < 1) throw ContractError("need K >= 1");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Sym>> seeds;
  for (int j = 0; j < K; ++j) seeds.push_back({static_cast<Sym>(j)});

  // U: starts with the unique symbol 0, visits every other seed symbol
  // once in random order, with occasional interior spacer runs.
  std::vector<int> rest;
  for (int v = 2; v <= K; ++v) rest.push_back(v);
  std::shuffle(rest.begin(), rest.end(), rng);
  std::vector<Sym> u_flat{0};
  for (std::size_t i = 0; i < rest.size(); ++i) {
    if (rng() % 2 == 0) {
      int run = rand_in(rng, 1, 2);
      for (int t = 0; t < run; ++t) u_flat.push_back(kSpacer);
    }
    u_flat.push_back(static_cast<Sym>(rest[i] - 1));
  }
  const std::int64_t c = rand_in(rng, 0, 3);
  std::vector<std::int64_t> t_vals, l_vals;
  for (int j = 0; j < K; ++j) {
    t_vals.push_back(rand_in(rng, 1, 2));
    l_vals.push_back(rand_in(rng, 0, static_cast<int>(c)));
  }
  // Ensure some vertex attains the minimum l so every target can finish
  // with a nonnegative top-up.
  l_vals[static_cast<std::size_t>(rand_in(rng, 0, K - 1))] = 0;

  // Level-2 blocks (U s^c)^t U s^l, spelled as recursion pairs.
  StageTable stage1(static_cast<std::size_t>(K));
  for (int j = 0; j < K; ++j) {
    std::vector<Sym> w;
    for (std::int64_t rep = 0; rep < t_vals[static_cast<std::size_t>(j)]; ++rep) {
      w.insert(w.end(), u_flat.begin(), u_flat.end());
      for (std::int64_t i = 0; i < c; ++i) w.push_back(kSpacer);
    }
    w.insert(w.end(), u_flat.begin(), u_flat.end());
    for (std::int64_t i = 0; i < l_vals[static_cast<std::size_t>(j)]; ++i) w.push_back(kSpacer);
    Pairs pairs;
    for (Sym s : w) {
      if (s == kSpacer)
        pairs.back().spacers += 1;
      else
        pairs.push_back({static_cast<int>(s) + 1, 0});
    }
    stage1[static_cast<std::size_t>(j)] = std::move(pairs);
  }

  // Repeating stage: exact interior top-ups, final run keeping l stationary.
  StageTable stage2(static_cast<std::size_t>(K));
  std::vector<bool> covered(static_cast<std::size_t>(K), false);
  for (int i = 0; i < K; ++i) {
    int m = rand_in(rng, 2, 3);
    Pairs pairs;
    pairs.push_back({1, c - l_vals[0]});
    covered[0] = true;
    for (int t = 1; t < m - 1; ++t) {
      int src = rand_in(rng, 1, K);
      covered[static_cast<std::size_t>(src - 1)] = true;
      pairs.push_back({src, c - l_vals[static_cast<std::size_t>(src - 1)]});
    }
    // Final source: any vertex with l <= l_i, topped up to keep l fixed.
    std::vector<int> eligible;
    for (int v = 1; v <= K; ++v)
      if (l_vals[static_cast<std::size_t>(v - 1)] <= l_vals[static_cast<std::size_t>(i)])
        eligible.push_back(v);
    int last = eligible[static_cast<std::size_t>(rng() % eligible.size())];
    covered[static_cast<std::size_t>(last - 1)] = true;
    pairs.push_back({last, l_vals[static_cast<std::size_t>(i)] -
                               l_vals[static_cast<std::size_t>(last - 1)]});
    stage2[static_cast<std::size_t>(i)] = std::move(pairs);
  }
  for (int v = 1; v <= K; ++v) {
    if (!covered[static_cast<std::size_t>(v - 1)]) {
      // Insert as an interior appearance with its exact top-up.
      int i = rand_in(rng, 0, K - 1);
      auto& pairs = stage2[static_cast<std::size_t>(i)];
      pairs.insert(pairs.begin() + 1, {v, c - l_vals[static_cast<std::size_t>(v - 1)]});
    }
  }
  if (perturb) {
    // Two interior appearances of the thread vertex with distinct
    // overshooting runs. No certificate can satisfy both junction gaps,
    // at this or any deeper level, so the coding is aperiodic outright.
    const std::int64_t base = c - l_vals[0];
    Pairs defective{{1, base + 1}, {1, base + 2}};
    for (const auto& p : stage2[0]) defective.push_back(p);
    stage2[0] = std::move(defective);
  }

  LdcInstance out{from_recursion(table_of(std::move(seeds), {stage1, stage2}, 2)),
                  Word(std::span<const Sym>(u_flat)), c, l_vals};
  return out;
}

}  // namespace

LdcInstance random_ldc_stationary(std::uint64_t seed, int K) {
  return ldc_instance(seed, K, false);
}

LdcInstance random_ldc_perturbed(std::uint64_t seed, int K) {
  return ldc_instance(seed, K, true);
}

OrderedDiagram random_rank_one(std::uint64_t seed, int levels, bool structured) {
  if (levels < 3) throw ContractError("need at least three levels");
  std::mt19937_64 rng(seed);
  std::vector<StageTable> stages;
  if (structured) {
    const int N = rand_in(rng, 1, 3);
    const std::int64_t a = rand_in(rng, 0, 2);
    for (int n = 1; n < levels; ++n) {
      int q = rand_in(rng, 2, 4);
      Pairs pairs;
      for (int t = 0; t < q - 1; ++t)
        pairs.push_back({1, n >= N ? a : rand_in(rng, 0, 2)});
      pairs.push_back({1, n >= N ? 0 : rand_in(rng, 0, 2)});
      stages.push_back({pairs});
    }
  } else {
    for (int n = 1; n < levels; ++n) {
      int q = rand_in(rng, 3, 4);
      Pairs pairs;
      for (int t = 0; t < q - 1; ++t) pairs.push_back({1, 1 + (t % 2)});
      pairs.push_back({1, 0});
      stages.push_back({pairs});
    }
  }
  return from_recursion(table_of({{0}}, std::move(stages), std::nullopt));
}

}  // namespace bv
