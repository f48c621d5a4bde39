#include "words.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>

namespace bv {

std::int64_t max_block_len() {
  static const std::int64_t value = [] {
    if (const char* env = std::getenv("BV_MAX_BLOCK_LEN")) {
      char* end = nullptr;
      long long v = std::strtoll(env, &end, 10);
      if (end && *end == '\0' && v > 0) return static_cast<std::int64_t>(v);
    }
    return static_cast<std::int64_t>(1000000);
  }();
  return value;
}

Sym Word::front() const {
  if (empty()) throw ContractError("front() of empty word");
  return runs_.front().sym;
}

Sym Word::back() const {
  if (empty()) throw ContractError("back() of empty word");
  return runs_.back().sym;
}

std::vector<Sym> Word::flat() const {
  if (size_ > max_block_len())
    throw ResourceError("word of length " + std::to_string(size_) +
                        " exceeds the expansion ceiling (" + std::to_string(max_block_len()) +
                        "); telescope or raise BV_MAX_BLOCK_LEN");
  std::vector<Sym> out;
  out.reserve(static_cast<std::size_t>(size_));
  for (const Run& r : runs_) out.insert(out.end(), static_cast<std::size_t>(r.len), r.sym);
  return out;
}

std::string format_word(std::span<const Sym> flat, bool compact) {
  std::string out;
  bool first = true;
  for (Sym s : flat) {
    if (!compact && !first) out += ',';
    if (s == kSpacer)
      out += 's';
    else
      out += std::to_string(s);
    first = false;
  }
  return out;
}

std::string format_word(const Word& w, bool compact) {
  std::string out;
  bool first = true;
  for (const Word::Run& r : w.runs()) {
    for (std::int64_t i = 0; i < r.len; ++i) {
      if (!compact && !first) out += ',';
      if (r.sym == kSpacer)
        out += 's';
      else
        out += std::to_string(r.sym);
      first = false;
    }
  }
  return out;
}

std::vector<Sym> parse_word(const std::string& text) {
  std::vector<Sym> out;
  if (text.empty()) return out;
  if (text.find(',') == std::string::npos) {
    // Compact form: one character per symbol.
    for (char c : text) {
      if (c == 's') {
        out.push_back(kSpacer);
      } else if (c >= '0' && c <= '9') {
        out.push_back(static_cast<Sym>(c - '0'));
      } else {
        throw ParseError(std::string("bad symbol '") + c + "' in word");
      }
    }
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string tok = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    if (tok == "s") {
      out.push_back(kSpacer);
    } else {
      Sym v = 0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || p != tok.data() + tok.size())
        throw ParseError("bad symbol '" + tok + "' in word");
      out.push_back(v);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<std::int64_t> failure_function(std::span<const Sym> w) {
  const std::int64_t n = static_cast<std::int64_t>(w.size());
  std::vector<std::int64_t> pi(static_cast<std::size_t>(n), 0);
  for (std::int64_t i = 1; i < n; ++i) {
    std::int64_t k = pi[static_cast<std::size_t>(i - 1)];
    while (k > 0 && w[static_cast<std::size_t>(i)] != w[static_cast<std::size_t>(k)])
      k = pi[static_cast<std::size_t>(k - 1)];
    if (w[static_cast<std::size_t>(i)] == w[static_cast<std::size_t>(k)]) ++k;
    pi[static_cast<std::size_t>(i)] = k;
  }
  return pi;
}

std::int64_t least_period(std::span<const Sym> w) {
  if (w.empty()) throw ContractError("least_period of empty word");
  auto pi = failure_function(w);
  return static_cast<std::int64_t>(w.size()) - pi.back();
}

std::vector<std::int64_t> z_function(std::span<const Sym> w) {
  const std::int64_t n = static_cast<std::int64_t>(w.size());
  std::vector<std::int64_t> z(static_cast<std::size_t>(n), 0);
  if (n == 0) return z;
  z[0] = n;
  std::int64_t l = 0, r = 0;
  for (std::int64_t i = 1; i < n; ++i) {
    if (i < r) z[static_cast<std::size_t>(i)] = std::min(r - i, z[static_cast<std::size_t>(i - l)]);
    while (i + z[static_cast<std::size_t>(i)] < n &&
           w[static_cast<std::size_t>(z[static_cast<std::size_t>(i)])] ==
               w[static_cast<std::size_t>(i + z[static_cast<std::size_t>(i)])])
      ++z[static_cast<std::size_t>(i)];
    if (i + z[static_cast<std::size_t>(i)] > r) {
      l = i;
      r = i + z[static_cast<std::size_t>(i)];
    }
  }
  return z;
}

std::int64_t first_period_break(std::span<const Sym> w,
                                const std::vector<std::int64_t>& z, std::int64_t p) {
  const std::int64_t n = static_cast<std::int64_t>(w.size());
  if (p <= 0 || p >= n) throw ContractError("period out of range");
  std::int64_t agree = z[static_cast<std::size_t>(p)];
  if (p + agree >= n) return -1;
  return p + agree;
}

PrimitiveRoot primitiveRootImpl(std::span<const Sym> w) {
  const std::int64_t n = static_cast<std::int64_t>(w.size());
  std::int64_t p = least_period(w);
  if (n % p == 0) {
    return {std::vector<Sym>(w.begin(), w.begin() + p), n / p};
  }
  return {std::vector<Sym>(w.begin(), w.end()), 1};
}

PrimitiveRoot primitive_root(std::span<const Sym> w) {
  if (w.empty()) throw ContractError("primitive_root of empty word");
  return primitiveRootImpl(w);
}

bool commute(std::span<const Sym> u, std::span<const Sym> v) {
  std::vector<Sym> uv(u.begin(), u.end());
  uv.insert(uv.end(), v.begin(), v.end());
  std::vector<Sym> vu(v.begin(), v.end());
  vu.insert(vu.end(), u.begin(), u.end());
  bool direct = uv == vu;
  if (u.empty() || v.empty()) return direct;
  bool via_roots = primitive_root(u).word == primitive_root(v).word;
  if (direct != via_roots)
    throw InternalError("commuting-word criteria disagree");
  return direct;
}

std::vector<std::int64_t> occurrences(std::span<const Sym> text, std::span<const Sym> pattern) {
  if (pattern.empty()) throw ContractError("occurrences of empty pattern");
  std::vector<std::int64_t> out;
  if (pattern.size() > text.size()) return out;
  auto pi = failure_function(pattern);
  std::int64_t k = 0;
  const std::int64_t m = static_cast<std::int64_t>(pattern.size());
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(text.size()); ++i) {
    while (k > 0 && text[static_cast<std::size_t>(i)] != pattern[static_cast<std::size_t>(k)])
      k = pi[static_cast<std::size_t>(k - 1)];
    if (text[static_cast<std::size_t>(i)] == pattern[static_cast<std::size_t>(k)]) ++k;
    if (k == m) {
      out.push_back(i - m + 1);
      k = pi[static_cast<std::size_t>(k - 1)];
    }
  }
  return out;
}

std::int64_t trailing_run(std::span<const Sym> w, Sym sym) {
  std::int64_t n = 0;
  for (auto it = w.rbegin(); it != w.rend() && *it == sym; ++it) ++n;
  return n;
}

std::int64_t max_run(std::span<const Sym> w, Sym sym) {
  std::int64_t best = 0, cur = 0;
  for (Sym s : w) {
    cur = (s == sym) ? cur + 1 : 0;
    best = std::max(best, cur);
  }
  return best;
}

}  // namespace bv
