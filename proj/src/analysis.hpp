#ifndef BV_ANALYSIS_HPP
#define BV_ANALYSIS_HPP

#include <optional>
#include <variant>
#include <vector>

#include "blocks.hpp"
#include "diagram.hpp"

namespace bv {

struct Census;  // coding.hpp

// Semi k-periodicity witness at one level: every non-spacer
// block equals (U s^c)^t_j U s^l_j with t_j > 0, 0 <= l_j <= c, and U the
// shortest such block.
struct SemiCertificate {
  Word U;
  std::int64_t c = 0;
  std::vector<std::int64_t> t;  // per vertex j = 1..K_n
  std::vector<std::int64_t> l;
  bool all_l_equal_c() const {
    for (std::int64_t v : l)
      if (v != c) return false;
    return true;
  }
};

struct SemiRefutation {
  int vertex_a = 0;  // the shortest block's vertex
  int vertex_b = 0;  // first vertex that kills every remaining candidate
  std::string detail;
};

using SemiResult = std::variant<SemiCertificate, SemiRefutation>;

SemiResult semi_k_periodic(const OrderedDiagram& d, int n, int k);

struct LdcAppearance {
  int target = 0;     // i at level n+1
  int index = 0;      // appearance index within the recursion of target i
  int source = 0;     // j at level n
  std::int64_t run = 0;      // spacers following the appearance
  std::int64_t allowed = 0;  // c - l(j)
  bool interior = false;
  bool ok = false;
};

struct LdcReport {
  int n = 0;
  int k = 0;
  bool pass = false;
  std::optional<SemiCertificate> cert;
  std::optional<SemiRefutation> semi_refutation;
  std::vector<LdcAppearance> appearances;
  std::optional<LdcAppearance> first_fail;
  // Uniformly-ordered block W = U s^c, present when every l_j = c.
  std::optional<Word> uniform_block;
};

LdcReport ldc(const OrderedDiagram& d, int n, int k);

// Prop-style route: semi at n and n+1 with equal U. Asserted to agree
// with ldc(n, k).
bool ldc_via_equivalence(const OrderedDiagram& d, int n, int k);

// Witness W with every non-spacer block a positive power of W, if any.
std::optional<Word> uniformly_ordered(const OrderedDiagram& d, int n, int k);

enum class DecompositionStatus { NotApplicable, Unique, Failed };

struct DecompositionReport {
  DecompositionStatus status = DecompositionStatus::NotApplicable;
  std::vector<int> parse;  // level-k vertex sequence of U_{k+1}
  bool pseudo_complete_level = false;
  bool ok() const { return status == DecompositionStatus::Unique && pseudo_complete_level; }
};

// Parses U_{k+1} into the level-k seed blocks and checks pseudo-completeness.
DecompositionReport decomposition_unique(const OrderedDiagram& d, int k);

struct RankOneStructure {
  int N = 0;           // structure holds for levels N..horizon-1
  std::int64_t a = 0;  // common interior spacer count
  std::vector<std::int64_t> m_exponents;  // q_n - 1 for n = N..horizon-1
  Word period;         // least repeating block P of the coding prefix
  std::int64_t least_period = 0;
  std::int64_t prefix_len = 0;
  bool structure_ok = false;  // shape extracted and |B_N s^a| divisible by |P|
};

struct RankOneRefutation {
  std::int64_t prefix_len = 0;
  std::int64_t least_period = 0;               // exceeds prefix_len / 2
  std::vector<std::int64_t> first_breaks;       // per p = 1..prefix_len/2
};

using RankOneResult = std::variant<RankOneStructure, RankOneRefutation>;

// Rank-one periodicity probe: examines a phi_1 prefix of length
// min(4*|B(horizon-1)|, ceiling) and either extracts the eventual
// zero-trailing/constant-interior shape or refutes every short period.
RankOneResult rank_one_structure(const OrderedDiagram& d, int horizon);

struct PeriodicityVerdict {
  enum class Kind { Periodic, Aperiodic, MultiMinimal, PeriodicThrough, AperiodicEvidence };
  Kind kind = Kind::AperiodicEvidence;
  int k = 0;
  bool horizon_limited = false;
  std::optional<Word> period;   // U s^c
  int witness_level = 0;        // N
  std::int64_t least_period = 0;
  std::int64_t no_period_leq = 0;
  int refuted_level = 0;
  std::optional<SemiRefutation> refutation;
  Word prefix;                  // generated phi_k prefix
  bool prefix_consistent = false;
  int raw_threads = 0;
  int coding_classes = 0;
};

// Main characterization: exact for stationary diagrams with a unique
// minimal thread (up to block equality); horizon-limited otherwise.
PeriodicityVerdict k_coding_periodicity(const OrderedDiagram& d, int k, int horizon,
                                        std::int64_t prefix_len);

struct OdometerVerdict {
  enum class Kind {
    OdometerPlusFixedPoint,
    FiniteSystem,
    FailedLdc,
    FailedSpacerBranching,
    HorizonLimited
  };
  Kind kind = Kind::HorizonLimited;
  bool horizon_limited = false;
  std::vector<int> cuts;
  int failed_level = 0;
  bool spacer_eventually_isolated = false;
  std::string detail;
};

// Greedy telescoping search for the odometer-plus-fixed-path verdict.
OdometerVerdict odometer_verdict(const OrderedDiagram& d, int horizon);

struct SpacerMassReport {
  std::vector<BigRat> terms;
  std::vector<BigRat> partial_sums;
  bool converges_heuristic = false;
};

// Exact partial sums of the rank-one spacer-mass series
// sum_n (sum_i a(n,i)) / (q_n |B_n|), with a ratio-test heuristic.
SpacerMassReport spacer_mass_partial_sums(const OrderedDiagram& d, int levels);

// Convenience: the fully expanded B^(k)(n,j).
Word basic_block_word(const OrderedDiagram& d, int n, int j, int k);

}  // namespace bv

#endif
