// Brute-force reference implementations for the test suites. These stay
// independent of the library's algorithmic paths: naive scans, direct
// string recursion, and exhaustive path enumeration.
#ifndef BV_TEST_ORACLES_HPP
#define BV_TEST_ORACLES_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "diagram.hpp"
#include "words.hpp"

namespace bv::oracle {

// Smallest p with w[i] == w[i+p], by scanning every p.
inline std::int64_t naive_least_period(std::span<const Sym> w) {
  const std::int64_t n = static_cast<std::int64_t>(w.size());
  for (std::int64_t p = 1; p < n; ++p) {
    bool ok = true;
    for (std::int64_t i = 0; i + p < n; ++i)
      if (w[static_cast<std::size_t>(i)] != w[static_cast<std::size_t>(i + p)]) {
        ok = false;
        break;
      }
    if (ok) return p;
  }
  return n;
}

// Shortest root by trying every divisor length.
inline std::pair<std::vector<Sym>, std::int64_t> naive_primitive_root(std::span<const Sym> w) {
  const std::int64_t n = static_cast<std::int64_t>(w.size());
  for (std::int64_t d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (std::int64_t i = 0; i < n && ok; ++i)
      if (w[static_cast<std::size_t>(i)] != w[static_cast<std::size_t>(i % d)]) ok = false;
    if (ok) return {std::vector<Sym>(w.begin(), w.begin() + d), n / d};
  }
  return {std::vector<Sym>(w.begin(), w.end()), 1};
}

inline bool naive_commute(std::span<const Sym> u, std::span<const Sym> v) {
  std::vector<Sym> uv(u.begin(), u.end());
  uv.insert(uv.end(), v.begin(), v.end());
  std::vector<Sym> vu(v.begin(), v.end());
  vu.insert(vu.end(), u.begin(), u.end());
  return uv == vu;
}

inline std::vector<std::int64_t> naive_occurrences(std::span<const Sym> text,
                                                   std::span<const Sym> pat) {
  std::vector<std::int64_t> out;
  if (pat.empty() || pat.size() > text.size()) return out;
  for (std::size_t i = 0; i + pat.size() <= text.size(); ++i) {
    bool ok = true;
    for (std::size_t j = 0; j < pat.size(); ++j)
      if (text[i + j] != pat[j]) {
        ok = false;
        break;
      }
    if (ok) out.push_back(static_cast<std::int64_t>(i));
  }
  return out;
}

// Exhaustive root-to-vertex path count (aborts past the cap).
inline std::int64_t enumerate_paths(const OrderedDiagram& d, int n, int j, std::int64_t cap) {
  if (n == 0) return j == 1 ? 1 : 0;
  std::int64_t total = 0;
  for (int s : d.stage(n - 1).into(j)) {
    total += enumerate_paths(d, n - 1, s, cap);
    if (total > cap) return total;
  }
  return total;
}

// Direct string recursion for 1-coded blocks: expand every level eagerly.
inline std::vector<Sym> naive_block_1(const OrderedDiagram& d, int n, int j) {
  RecursionTable t = to_recursion(d);
  std::vector<std::vector<std::vector<Sym>>> levels;
  std::vector<std::vector<Sym>> level1;
  for (const auto& seed : t.seeds()) level1.push_back(seed);
  level1.push_back({kSpacer});
  levels.push_back(level1);
  for (int lvl = 2; lvl <= n; ++lvl) {
    const auto& stage =
        t.stationary() && lvl - 2 >= static_cast<int>(t.stages().size())
            ? t.stages()[static_cast<std::size_t>(*t.stationary_from() - 1)]
            : t.stages()[static_cast<std::size_t>(lvl - 2)];
    std::vector<std::vector<Sym>> row;
    for (const auto& pairs : stage) {
      std::vector<Sym> w;
      for (const auto& p : pairs) {
        const auto& child = levels.back()[static_cast<std::size_t>(p.source - 1)];
        w.insert(w.end(), child.begin(), child.end());
        w.insert(w.end(), static_cast<std::size_t>(p.spacers), kSpacer);
      }
      row.push_back(std::move(w));
    }
    row.push_back({kSpacer});
    levels.push_back(std::move(row));
  }
  return levels[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(j - 1)];
}

inline std::vector<Sym> flat_of(const Word& w) { return w.flat(); }

}  // namespace bv::oracle

#endif
