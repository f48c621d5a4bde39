#ifndef BV_WORDS_HPP
#define BV_WORDS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "common.hpp"

namespace bv {

// A coding symbol. Non-negative values are the ordinary symbols
// 0..d_k-2 of an alphabet A_k; kSpacer stands for the spacer symbol s_k
// regardless of depth.
using Sym = std::int32_t;
constexpr Sym kSpacer = -1;

// Finite word over some A_k, stored run-length compressed. Spacer runs
// are the usual beneficiaries but the encoding is uniform.
class Word {
 public:
  struct Run {
    Sym sym;
    std::int64_t len;
    bool operator==(const Run&) const = default;
  };

  Word() = default;
  explicit Word(std::span<const Sym> flat) {
    for (Sym s : flat) push_back(s);
  }

  void push_back(Sym s, std::int64_t count = 1) {
    if (count == 0) return;
    if (count < 0) throw ContractError("negative run length");
    if (!runs_.empty() && runs_.back().sym == s) {
      runs_.back().len += count;
    } else {
      runs_.push_back({s, count});
    }
    size_ += count;
  }

  void append(const Word& other) {
    for (const Run& r : other.runs_) push_back(r.sym, r.len);
  }

  std::int64_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  const std::vector<Run>& runs() const { return runs_; }

  Sym front() const;
  Sym back() const;

  // Materializes the flat symbol sequence. Guarded by max_block_len().
  std::vector<Sym> flat() const;

  bool operator==(const Word&) const = default;

 private:
  std::vector<Run> runs_;
  std::int64_t size_ = 0;
};

// Rendering and parsing of word text. Symbols print in decimal, the
// spacer prints as "s". compact mode concatenates single characters
// (only valid when every symbol is a single digit); otherwise symbols
// are comma-separated.
std::string format_word(std::span<const Sym> flat, bool compact);
std::string format_word(const Word& w, bool compact);
std::vector<Sym> parse_word(const std::string& text);

// Failure function (longest proper border of each prefix).
std::vector<std::int64_t> failure_function(std::span<const Sym> w);

// Smallest p >= 1 with w[i] == w[i+p] for all valid i. A finite prefix
// witnesses a global period only when its length is at least 2p; callers
// enforce that margin.
std::int64_t least_period(std::span<const Sym> w);

// Z-array: z[i] = length of the longest common prefix of w and w[i..].
std::vector<std::int64_t> z_function(std::span<const Sym> w);

// First index that breaks period p, or -1 when p is a period of w.
std::int64_t first_period_break(std::span<const Sym> w,
                                const std::vector<std::int64_t>& z, std::int64_t p);

struct PrimitiveRoot {
  std::vector<Sym> word;
  std::int64_t exponent;
};

// Shortest r with w == r^e, e maximal.
PrimitiveRoot primitive_root(std::span<const Sym> w);

// uv == vu, cross-checked against the shared-primitive-root criterion.
bool commute(std::span<const Sym> u, std::span<const Sym> v);

// All start positions of pattern in text (pattern nonempty).
std::vector<std::int64_t> occurrences(std::span<const Sym> text, std::span<const Sym> pattern);

// Length of the maximal trailing run of the given symbol.
std::int64_t trailing_run(std::span<const Sym> w, Sym sym);

// Longest run of `sym` anywhere in w.
std::int64_t max_run(std::span<const Sym> w, Sym sym);

}  // namespace bv

#endif
