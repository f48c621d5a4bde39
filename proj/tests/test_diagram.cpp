#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "analysis.hpp"
#include "corpus.hpp"
#include "doctest.h"
#include "io.hpp"
#include "oracles.hpp"

using namespace bv;

TEST_CASE("validation of the corpus") {
  auto chacon = fixture("chacon").diagram;
  auto rep = validate(chacon, 10);
  CHECK(rep.c1);
  CHECK(rep.c2);
  CHECK(rep.c3);
  CHECK(rep.c4);
  CHECK(rep.pass());

  auto fig1b = fixture("fig1b-rank1").diagram;
  rep = validate(fig1b, 4);
  CHECK(rep.pass());
  CHECK(rep.c4_min_lengths.back() == 11);

  auto cols = fixture("parallel-columns").diagram;
  rep = validate(cols, 10);
  CHECK(rep.c1);
  CHECK(rep.c2);
  CHECK(rep.c3);
  CHECK_FALSE(rep.c4);  // single-edge columns never grow
}

TEST_CASE("C2 violation is reported at the offending level") {
  // Spacer vertex at level 2 with a second incoming edge.
  std::string text =
      "bv 1\n"
      "levels 2\n"
      "level 1 K 1\n"
      "level 2 K 1\n"
      "edge 1 1 1 1\n"
      "edge 2 1 1 1\n"
      "edge 2 1 2 1\n"
      "edge 2 2 1 2\n"
      "edge 2 2 2 1\n";
  auto d = read_diagram(text);
  auto rep = validate(d, 2);
  CHECK_FALSE(rep.c2);
  REQUIRE(rep.c2_failures.size() == 1);
  CHECK(rep.c2_failures[0].level == 2);
}

TEST_CASE("dim: recurrence, spacer path, and brute-force enumeration") {
  auto fig1b = fixture("fig1b-rank1").diagram;
  CHECK(fig1b.dim(3, 1) == 5);
  CHECK(fig1b.dim(4, 1) == 11);
  CHECK(fig1b.dim(4, 2) == 1);  // spacer vertex

  for (const auto& name : fixture_names()) {
    auto d = fixture(name).diagram;
    const int top = d.stationary() ? 6 : std::min(6, d.explicit_levels());
    for (int n = 1; n <= top; ++n) {
      auto dims = d.dims(n);
      // Additivity against the incidence sums.
      auto prev = d.dims(n - 1);
      for (int j = 1; j <= d.K(n) + 1; ++j) {
        BigInt sum = 0;
        for (int s : d.stage(n - 1).into(j)) sum += prev[static_cast<std::size_t>(s - 1)];
        REQUIRE(dims[static_cast<std::size_t>(j - 1)] == sum);
      }
      // Exhaustive enumeration where feasible.
      for (int j = 1; j <= d.K(n) + 1; ++j) {
        if (dims[static_cast<std::size_t>(j - 1)] <= 10000)
          REQUIRE(BigInt(oracle::enumerate_paths(d, n, j, 20000)) ==
                  dims[static_cast<std::size_t>(j - 1)]);
      }
    }
  }
}

TEST_CASE("pseudo-completeness") {
  CHECK(pseudo_complete(fixture("chacon").diagram, 2));
  CHECK_FALSE(pseudo_complete(fixture("parallel-columns").diagram, 2));
  CHECK(pseudo_complete(fixture("ex-someper").diagram, 3));
  CHECK(pseudo_complete(fixture("sec4-U3").diagram, 2));
}

TEST_CASE("recursion round-trip is the identity on the corpus") {
  for (const auto& name : fixture_names()) {
    auto f = fixture(name);
    RecursionTable t = to_recursion(f.diagram);
    OrderedDiagram d2 = from_recursion(t);
    REQUIRE(d2 == f.diagram);
    if (f.table) REQUIRE(t == *f.table);
  }
}

TEST_CASE("recursion round-trip on seeded random diagrams") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto d = random_stationary(seed, 1 + static_cast<int>(seed % 3), 4,
                               seed % 2 ? SpacerPolicy::Branching : SpacerPolicy::Isolated);
    REQUIRE(validate(d, 6).pass());
    RecursionTable t = to_recursion(d);
    REQUIRE(from_recursion(t) == d);
    REQUIRE(to_recursion(from_recursion(t)) == t);
  }
}

TEST_CASE("to_recursion rejects C3 violations") {
  // Minimal edge into v(2,1) sourced at the spacer vertex.
  std::string text =
      "bv 1\n"
      "levels 2\n"
      "level 1 K 1\n"
      "level 2 K 1\n"
      "edge 1 1 1 1\n"
      "edge 2 1 1 2\n"
      "edge 2 1 2 1\n";
  auto d = read_diagram(text);
  CHECK_FALSE(validate(d, 2).c3);
  CHECK_THROWS_AS(to_recursion(d), ContractError);
}

TEST_CASE("telescoping: identity cuts and path-count preservation") {
  auto fig1b = fixture("fig1b-rank1").diagram;
  std::vector<int> identity;
  for (int i = 0; i <= fig1b.explicit_levels(); ++i) identity.push_back(i);
  CHECK(telescope(fig1b, identity) == fig1b);

  auto t = telescope(fig1b, {0, 2, 4});
  CHECK(t.dim(1, 1) == 2);
  CHECK(t.dim(2, 1) == 11);
  CHECK(validate(t, 6).pass());

  CHECK_THROWS_AS(telescope(fig1b, {1, 2}), ContractError);
  CHECK_THROWS_AS(telescope(fig1b, {0, 2, 2}), ContractError);
}

TEST_CASE("telescoping past level 2 exposes the level-2 coding") {
  auto d = fixture("ex-someper").diagram;
  auto t = telescope(d, {0, 2, 3});
  // The telescoped 1-coding is the original 2-coding: canonical labeling
  // assigns the same integers to the same segments, spacer to spacer.
  CHECK(oracle::flat_of(basic_block_word(t, 1, 1, 1)) ==
        oracle::flat_of(basic_block_word(d, 2, 1, 2)));
  CHECK(oracle::flat_of(basic_block_word(t, 2, 1, 1)) ==
        oracle::flat_of(basic_block_word(d, 3, 1, 2)));
  CHECK(oracle::flat_of(basic_block_word(t, 2, 2, 1)) ==
        oracle::flat_of(basic_block_word(d, 3, 2, 2)));
  CHECK(oracle::flat_of(basic_block_word(t, 3, 1, 1)) ==
        oracle::flat_of(basic_block_word(d, 4, 1, 2)));
}

TEST_CASE("file formats: byte-exact round trips") {
  for (const auto& name : fixture_names()) {
    auto f = fixture(name);
    std::string text = write_diagram(f.diagram);
    auto back = read_diagram(text);
    REQUIRE(back == f.diagram);
    REQUIRE(write_diagram(back) == text);

    RecursionTable t = to_recursion(f.diagram);
    std::string rec = write_recursion(t);
    auto tback = read_recursion(rec);
    REQUIRE(tback == t);
    REQUIRE(write_recursion(tback) == rec);

    // Sniffing picks the right reader for both.
    REQUIRE(read_system(text).diagram == f.diagram);
    REQUIRE(read_system(rec).diagram == f.diagram);
  }
}

TEST_CASE("diagram files may omit the implied spacer edges") {
  std::string with_spacers =
      "bv 1\n"
      "levels 2\n"
      "level 1 K 1\n"
      "level 2 K 1\n"
      "edge 1 1 1 1\n"
      "edge 1 2 1 1\n"
      "edge 2 1 1 1\n"
      "edge 2 1 2 2\n"
      "edge 2 2 1 2\n";
  std::string without =
      "bv 1\n"
      "levels 2\n"
      "level 1 K 1\n"
      "level 2 K 1\n"
      "edge 1 1 1 1\n"
      "edge 2 1 1 1\n"
      "edge 2 1 2 2\n";
  CHECK(read_diagram(with_spacers) == read_diagram(without));
}

TEST_CASE("parser reports offending lines") {
  CHECK_THROWS_AS(read_diagram("bv 2\n"), ParseError);
  CHECK_THROWS_AS(read_diagram("bv 1\nlevels 1\nlevel 1 K 1\nedge 1 1 3 1\n"), ParseError);
  CHECK_THROWS_AS(read_recursion("bvrec 1\nlevels 1\n"), ParseError);
}
