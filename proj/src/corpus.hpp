#ifndef BV_CORPUS_HPP
#define BV_CORPUS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "diagram.hpp"

namespace bv {

// One executable expectation attached to a fixture. `op` and `args` are
// interpreted by run_fact; `tag` records where the expected value comes
// from.
struct Fact {
  std::string op;
  std::string args;
  std::string expected;
  std::string tag;
};

struct Fixture {
  std::string name;
  std::string description;
  OrderedDiagram diagram;
  std::optional<RecursionTable> table;
  std::vector<Fact> facts;
};

const std::vector<std::string>& fixture_names();
Fixture fixture(const std::string& name);

// Evaluates a fact against the fixture and returns the actual value in the
// fact's expected-format.
std::string run_fact(const Fixture& f, const Fact& fact);

enum class SpacerPolicy { Isolated, Branching };

// Stationary diagram generator; always satisfies C1-C3, and C4 via at
// least two non-spacer incoming edges per non-spacer vertex.
OrderedDiagram random_stationary(std::uint64_t seed, int K, int max_edges, SpacerPolicy policy);

// Deficit-exact stationary generator: level-2 blocks are (U s^c)^t U s^l by
// construction and the repeating stage tops every interior appearance up to
// the full period, so the deficit condition holds at every level >= 2.
struct LdcInstance {
  OrderedDiagram diagram;
  Word U;
  std::int64_t c = 0;
  std::vector<std::int64_t> l;
};
LdcInstance random_ldc_stationary(std::uint64_t seed, int K);
// Negative control: two interior appearances of the thread vertex carry
// distinct overshooting runs, which no period can absorb.
LdcInstance random_ldc_perturbed(std::uint64_t seed, int K);

// Rank-one recursion generator. Structured instances have zero trailing
// spacers and a constant interior run from some level on; violating
// instances break the interior constancy at every level.
OrderedDiagram random_rank_one(std::uint64_t seed, int levels, bool structured);

}  // namespace bv

#endif
