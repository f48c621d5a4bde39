#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "analysis.hpp"
#include "blocks.hpp"
#include "corpus.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bv;

TEST_CASE("basic blocks of the explicit-appearance example") {
  auto d = fixture("fig1b-rank1").diagram;
  CHECK(format_word(basic_block_word(d, 3, 1, 1), true) == "0ss0s");
  CHECK(format_word(basic_block_word(d, 4, 1, 1), true) == "0ss0ss0ss0s");
  // The spacer block is the single symbol s at every level.
  CHECK(format_word(basic_block_word(d, 3, 2, 1), true) == "s");
}

TEST_CASE("seed blocks are runs of distinct consecutive symbols") {
  for (const auto& name : fixture_names()) {
    auto d = fixture(name).diagram;
    for (int k = 1; k <= 3; ++k) {
      if (!d.has_level(k + 1)) break;
      BlockDag dag(d, k, k);
      Sym expect = 0;
      for (int j = 1; j <= d.K(k); ++j) {
        auto w = dag.expand_all(dag.block(k, j)).flat();
        REQUIRE(BigInt(w.size()) == d.dim(k, j));
        for (Sym s : w) REQUIRE(s == expect++);
      }
    }
  }
}

TEST_CASE("length equals dim at every depth") {
  for (const auto& name : fixture_names()) {
    auto d = fixture(name).diagram;
    const int top = d.stationary() ? 7 : d.explicit_levels();
    for (int k = 1; k <= std::min(3, top); ++k) {
      BlockDag dag(d, k, top);
      for (int n = k; n <= top; ++n)
        for (int j = 1; j <= d.K(n); ++j) REQUIRE(dag.length(n, j) == d.dim(n, j));
    }
  }
}

TEST_CASE("lazy expansion equals the naive string recursion") {
  for (const auto& name : fixture_names()) {
    auto d = fixture(name).diagram;
    const int top = d.stationary() ? 8 : d.explicit_levels();
    BlockDag dag(d, 1, top);
    for (int n = 1; n <= top; ++n) {
      for (int j = 1; j <= d.K(n); ++j) {
        if (dag.length(n, j) > 10000) continue;
        REQUIRE(dag.expand_all(dag.block(n, j)).flat() == oracle::naive_block_1(d, n, j));
      }
    }
  }
}

TEST_CASE("expansion windows") {
  auto d = fixture("fig1b-rank1").diagram;
  BlockDag dag(d, 1, 4);
  auto h = dag.block(4, 1);
  // Offsets are zero-based, like explicit-appearance positions.
  CHECK(format_word(dag.expand(h, 3, 5), true) == "0ss0s");
  CHECK(format_word(dag.expand(h, 2, 5), true) == "s0ss0");
  CHECK(dag.expand(h, 0, 0).empty());
  CHECK(format_word(dag.expand(dag.block(4, 2), 0, 1), true) == "s");
  CHECK_THROWS_AS(dag.expand(h, 8, 5), ContractError);

  // Window reads agree with suffixes of the full expansion.
  auto full = dag.expand_all(h).flat();
  for (std::int64_t off = 0; off <= 11; ++off) {
    auto w = dag.expand(h, off, 11 - off).flat();
    REQUIRE(std::equal(w.begin(), w.end(), full.begin() + off));
  }
}

TEST_CASE("streams restart mid-block and cross node boundaries") {
  auto d = fixture("ex-all-ldc").diagram;
  BlockDag dag(d, 1, 6);
  auto h = dag.block(6, 1);
  const std::int64_t len = 500;
  auto whole = dag.expand(h, 0, len).flat();
  std::mt19937_64 rng(3);
  for (int iter = 0; iter < 50; ++iter) {
    std::int64_t off = static_cast<std::int64_t>(rng() % 400);
    std::int64_t take = static_cast<std::int64_t>(rng() % 100);
    auto s = dag.stream(h, off, take);
    for (std::int64_t i = 0; i < take; ++i) REQUIRE(s.next() == whole[static_cast<std::size_t>(off + i)]);
  }
}

TEST_CASE("explicit positions: structural descent vs string occurrences") {
  auto d = fixture("fig1b-rank1").diagram;
  BlockDag dag(d, 1, 4);
  CHECK(dag.explicit_positions(3, 1, 4, 1) == std::vector<std::int64_t>{0, 6});
  // Explicit positions within the block itself come from the base case.
  CHECK(dag.explicit_positions(3, 1, 4, 2).empty());

  auto pattern = dag.expand_all(dag.block(3, 1)).flat();
  auto occ = dag.occurrences_in(dag.block(4, 1), pattern);
  CHECK(occ == std::vector<std::int64_t>{0, 3, 6});
  // The occurrence at 3 is real but not explicit.
  auto expl = dag.explicit_positions(3, 1, 4, 1);
  for (auto p : expl) REQUIRE(std::find(occ.begin(), occ.end(), p) != occ.end());

  // Explicit appearances are genuine substring matches, corpus-wide.
  for (const auto& name : fixture_names()) {
    auto dd = fixture(name).diagram;
    const int top = dd.stationary() ? 6 : dd.explicit_levels();
    BlockDag dg(dd, 1, top);
    for (int n = 1; n < top; ++n) {
      for (int j = 1; j <= dd.K(n) + 1; ++j) {
        for (int i = 1; i <= dd.K(top); ++i) {
          if (dg.length(top, i) > 100000) continue;
          auto pat = dg.expand_all(dg.block(n, j)).flat();
          auto all = dg.occurrences_in(dg.block(top, i), pat);
          for (auto p : dg.explicit_positions(n, j, top, i))
            REQUIRE(std::find(all.begin(), all.end(), p) != all.end());
        }
      }
    }
  }
}

TEST_CASE("explicit positions of spacer blocks distinguish depths") {
  auto d = fixture("chacon").diagram;
  BlockDag dag(d, 1, 3);
  // B(3,1) = 00s000s0s00s0. Every s is an explicit appearance of the
  // level-1 spacer block, but only position 8 enters the level-2 spacer
  // cylinder: the others sit inside copies of B(2,1).
  CHECK(dag.explicit_positions(1, 2, 3, 1) == std::vector<std::int64_t>{2, 6, 8, 11});
  CHECK(dag.explicit_positions(2, 2, 3, 1) == std::vector<std::int64_t>{8});
}

TEST_CASE("vertex coding of the semi-periodicity example") {
  auto d = fixture("sec4-U3").diagram;
  BlockDag dag(d, 2, 3);
  CHECK(dag.vertex_coding(3, 1) == std::vector<int>{1, 4, 3, 4, 4, 2, 4, 3});
  // The spacer block codes to the single spacer vertex.
  CHECK(dag.vertex_coding(3, 3) == std::vector<int>{4});

  // Re-expanding each vertex's block reproduces the original block.
  for (const auto& name : fixture_names()) {
    auto dd = fixture(name).diagram;
    const int top = dd.stationary() ? 6 : dd.explicit_levels();
    for (int k = 1; k <= std::min(3, top - 1); ++k) {
      BlockDag dg(dd, k, top);
      for (int n = k; n <= top; ++n) {
        for (int j = 1; j <= dd.K(n); ++j) {
          if (dg.length(n, j) > 20000) continue;
          Word rebuilt;
          for (int v : dg.vertex_coding(n, j))
            rebuilt.append(dg.expand_all(dg.block(k, v)));
          REQUIRE(rebuilt == dg.expand_all(dg.block(n, j)));
        }
      }
    }
  }
}

TEST_CASE("factor maps take deeper blocks to shallower blocks") {
  auto d = fixture("ex-someper").diagram;
  Alphabet a1(d, 1), a2(d, 2);
  BlockDag dag2(d, 2, 5);
  // pi_{2,1}(B^(2)(3,1)) = B(3,1) = 01ss01s.
  Word b2 = dag2.expand_all(dag2.block(3, 1));
  CHECK(format_word(factor_map(b2, a2, a1), true) == "01ss01s");
  // Identity at equal depth.
  CHECK(factor_map(b2, a2, a2) == b2);

  for (const auto& name : fixture_names()) {
    auto dd = fixture(name).diagram;
    const int top = dd.stationary() ? 6 : dd.explicit_levels();
    if (top < 3) continue;
    Alphabet b1(dd, 1);
    for (int k = 2; k <= std::min(3, top); ++k) {
      Alphabet bk(dd, k), bk1(dd, k - 1);
      BlockDag dag(dd, k, top);
      BlockDag dag_shallow(dd, k - 1, top);
      for (int n = k; n <= top; ++n) {
        for (int j = 1; j <= dd.K(n); ++j) {
          if (dag.length(n, j) > 20000) continue;
          Word deep = dag.expand_all(dag.block(n, j));
          REQUIRE(factor_map(deep, bk, bk1) == dag_shallow.expand_all(dag_shallow.block(n, j)));
        }
      }
    }
  }
}

TEST_CASE("factor-map naturality on random words") {
  auto d = fixture("ex-all-ldc").diagram;
  Alphabet a1(d, 1), a2(d, 2), a3(d, 3);
  std::mt19937_64 rng(5);
  const Sym d3 = static_cast<Sym>(a3.d_k());
  for (int iter = 0; iter < 1000; ++iter) {
    Word w;
    int len = 1 + static_cast<int>(rng() % 40);
    for (int i = 0; i < len; ++i) {
      Sym s = static_cast<Sym>(rng() % static_cast<std::uint64_t>(d3));
      w.push_back(s == d3 - 1 ? kSpacer : s);
    }
    REQUIRE(factor_map(factor_map(w, a3, a2), a2, a1) == factor_map(w, a3, a1));
  }
}

TEST_CASE("seed blocks at equal depth share no symbols") {
  for (const auto& name : fixture_names()) {
    auto d = fixture(name).diagram;
    for (int k = 1; k <= 3; ++k) {
      if (!d.has_level(k)) break;
      Alphabet alpha(d, k);
      if (alpha.d_k() > 100000) break;
      std::set<std::int64_t> seen;
      for (int j = 1; j <= d.K(k); ++j) {
        for (std::int64_t i = 0; i < alpha.seed_len(j); ++i)
          REQUIRE(seen.insert(alpha.base(j) + i).second);
      }
    }
  }
}

TEST_CASE("canonical ids detect equal-word twins") {
  auto d = fixture("ex-someper").diagram;
  BlockDag dag(d, 1, 6);
  for (int n = 2; n <= 6; ++n) REQUIRE(dag.canon_id(n, 1) == dag.canon_id(n, 2));
  auto d2 = fixture("fig2a-two-minimal").diagram;
  BlockDag dag2(d2, 1, 6);
  for (int n = 2; n <= 6; ++n) REQUIRE(dag2.canon_id(n, 1) != dag2.canon_id(n, 2));
}

TEST_CASE("resource ceilings guard expansion") {
  auto d = fixture("chacon").diagram;
  BlockDag dag(d, 1, 40);
  CHECK(dag.length(40, 1) > BigInt("1000000000000"));
  CHECK_THROWS_AS(dag.expand_all(dag.block(40, 1)), ResourceError);
  // Streaming a short window of an astronomically long block is fine.
  auto s = dag.stream(dag.block(40, 1), 0, 13);
  Word w;
  for (int i = 0; i < 13; ++i) w.push_back(s.next());
  CHECK(format_word(w, true) == "00s000s0s00s0");
}
