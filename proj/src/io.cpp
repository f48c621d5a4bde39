#include "io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace bv {

namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') break;
    out.push_back(tok);
  }
  return out;
}

int to_int(const std::string& tok, int line_no) {
  int v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw ParseError("expected integer, got '" + tok + "'", line_no);
  return v;
}

struct Lines {
  std::vector<std::pair<int, std::vector<std::string>>> rows;  // (line number, tokens)
};

Lines scan(const std::string& text) {
  Lines out;
  std::istringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    auto toks = tokens(line);
    if (!toks.empty()) out.rows.push_back({no, std::move(toks)});
  }
  return out;
}

}  // namespace

std::string write_diagram(const OrderedDiagram& d) {
  std::ostringstream out;
  out << "bv 1\n";
  out << "levels " << d.explicit_levels();
  if (d.stationary()) out << " stationary-from " << d.stationary_from();
  out << "\n";
  for (int n = 1; n <= d.explicit_levels(); ++n)
    out << "level " << n << " K " << d.K(n) << "\n";
  for (int n = 0; n < d.explicit_levels(); ++n) {
    const Stage& st = d.stage(n);
    for (int j = 1; j <= st.targets(); ++j) {
      if (j == d.spacer(n + 1)) continue;  // implied by C2
      const auto& srcs = st.into(j);
      for (std::size_t xi = 0; xi < srcs.size(); ++xi)
        out << "edge " << (n + 1) << " " << j << " " << (xi + 1) << " " << srcs[xi] << "\n";
    }
  }
  return out.str();
}

OrderedDiagram read_diagram(const std::string& text) {
  Lines ls = scan(text);
  if (ls.rows.empty()) throw ParseError("empty diagram file");
  std::size_t i = 0;
  {
    const auto& [no, t] = ls.rows[i++];
    if (t.size() != 2 || t[0] != "bv" || t[1] != "1")
      throw ParseError("expected 'bv 1' version line", no);
  }
  int levels = 0;
  std::optional<int> stationary;
  {
    if (i >= ls.rows.size()) throw ParseError("missing 'levels' line");
    const auto& [no, t] = ls.rows[i++];
    if (t.size() < 2 || t[0] != "levels") throw ParseError("expected 'levels' line", no);
    levels = to_int(t[1], no);
    if (t.size() == 4 && t[2] == "stationary-from")
      stationary = to_int(t[3], no);
    else if (t.size() != 2)
      throw ParseError("malformed 'levels' line", no);
    if (levels < 1) throw ParseError("need at least one level", no);
  }
  std::vector<int> ks(static_cast<std::size_t>(levels), -1);
  while (i < ls.rows.size() && ls.rows[i].second[0] == "level") {
    const auto& [no, t] = ls.rows[i++];
    if (t.size() != 4 || t[2] != "K") throw ParseError("malformed 'level' line", no);
    int n = to_int(t[1], no), K = to_int(t[3], no);
    if (n < 1 || n > levels) throw ParseError("level index out of range", no);
    if (ks[static_cast<std::size_t>(n - 1)] != -1) throw ParseError("duplicate level line", no);
    if (K < 1) throw ParseError("K must be >= 1 (C1)", no);
    ks[static_cast<std::size_t>(n - 1)] = K;
  }
  for (int n = 1; n <= levels; ++n)
    if (ks[static_cast<std::size_t>(n - 1)] == -1)
      throw ParseError("missing 'level " + std::to_string(n) + "' line");

  // edge <level> <target> <xi> <source>; xi values must tile 1..deg.
  std::vector<std::vector<std::map<int, int>>> edges(static_cast<std::size_t>(levels));
  for (int n = 1; n <= levels; ++n)
    edges[static_cast<std::size_t>(n - 1)].resize(
        static_cast<std::size_t>(ks[static_cast<std::size_t>(n - 1)] + 1));
  while (i < ls.rows.size()) {
    const auto& [no, t] = ls.rows[i++];
    if (t[0] != "edge" || t.size() != 5) throw ParseError("expected 'edge' line", no);
    int n = to_int(t[1], no), target = to_int(t[2], no), xi = to_int(t[3], no),
        src = to_int(t[4], no);
    if (n < 1 || n > levels) throw ParseError("edge level out of range", no);
    int K = ks[static_cast<std::size_t>(n - 1)];
    if (target < 1 || target > K + 1) throw ParseError("edge target out of range", no);
    if (xi < 1) throw ParseError("edge order must be >= 1", no);
    auto& slot = edges[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(target - 1)];
    if (slot.count(xi)) throw ParseError("duplicate edge order value", no);
    slot[xi] = src;
  }

  std::vector<Stage> stages;
  for (int n = 1; n <= levels; ++n) {
    int K = ks[static_cast<std::size_t>(n - 1)];
    int prev_spacer = (n == 1) ? 1 : ks[static_cast<std::size_t>(n - 2)] + 1;
    Stage st;
    st.sources.resize(static_cast<std::size_t>(K + 1));
    for (int j = 1; j <= K + 1; ++j) {
      auto& slot = edges[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(j - 1)];
      if (j == K + 1 && slot.empty()) slot[1] = prev_spacer;  // implied spacer edge
      std::vector<int> srcs;
      int expect = 1;
      for (auto& [xi, src] : slot) {
        if (xi != expect)
          throw ParseError("edge orders into v(" + std::to_string(n) + "," + std::to_string(j) +
                           ") must be 1..deg without gaps");
        srcs.push_back(src);
        ++expect;
      }
      if (srcs.empty())
        throw ParseError("vertex v(" + std::to_string(n) + "," + std::to_string(j) +
                         ") has no incoming edge");
      st.sources[static_cast<std::size_t>(j - 1)] = std::move(srcs);
    }
    stages.push_back(std::move(st));
  }
  return OrderedDiagram(std::move(ks), std::move(stages), stationary);
}

std::string write_recursion(const RecursionTable& t) {
  std::ostringstream out;
  out << "bvrec 1\n";
  out << "levels " << t.explicit_levels();
  if (t.stationary()) out << " stationary-from " << *t.stationary_from();
  out << "\n";
  for (int j = 1; j <= t.K1(); ++j)
    out << "seed " << j << " " << format_word(std::span<const Sym>(t.seeds()[static_cast<std::size_t>(j - 1)]), false)
        << "\n";
  for (std::size_t n = 0; n < t.stages().size(); ++n) {
    const auto& st = t.stages()[n];
    for (std::size_t j = 0; j < st.size(); ++j) {
      out << "block " << (n + 2) << " " << (j + 1) << " :";
      for (const auto& p : st[j]) out << " " << p.source << "," << p.spacers;
      out << "\n";
    }
  }
  return out.str();
}

RecursionTable read_recursion(const std::string& text) {
  Lines ls = scan(text);
  if (ls.rows.empty()) throw ParseError("empty recursion file");
  std::size_t i = 0;
  {
    const auto& [no, t] = ls.rows[i++];
    if (t.size() != 2 || t[0] != "bvrec" || t[1] != "1")
      throw ParseError("expected 'bvrec 1' version line", no);
  }
  int levels = 0;
  std::optional<int> stationary;
  {
    if (i >= ls.rows.size()) throw ParseError("missing 'levels' line");
    const auto& [no, t] = ls.rows[i++];
    if (t.size() < 2 || t[0] != "levels") throw ParseError("expected 'levels' line", no);
    levels = to_int(t[1], no);
    if (t.size() == 4 && t[2] == "stationary-from")
      stationary = to_int(t[3], no);
    else if (t.size() != 2)
      throw ParseError("malformed 'levels' line", no);
    if (levels < 1) throw ParseError("need at least one level", no);
  }
  std::map<int, std::vector<Sym>> seeds;
  while (i < ls.rows.size() && ls.rows[i].second[0] == "seed") {
    const auto& [no, t] = ls.rows[i++];
    if (t.size() != 3) throw ParseError("malformed 'seed' line", no);
    int j = to_int(t[1], no);
    if (seeds.count(j)) throw ParseError("duplicate seed", no);
    seeds[j] = parse_word(t[2]);
  }
  if (seeds.empty()) throw ParseError("recursion file without seeds");
  std::vector<std::vector<Sym>> seed_list;
  for (int j = 1; j <= static_cast<int>(seeds.size()); ++j) {
    auto it = seeds.find(j);
    if (it == seeds.end()) throw ParseError("seed indices must be 1..K1");
    seed_list.push_back(it->second);
  }

  std::map<std::pair<int, int>, std::vector<RecursionPair>> blocks;
  while (i < ls.rows.size()) {
    const auto& [no, t] = ls.rows[i++];
    if (t[0] != "block" || t.size() < 5 || t[3] != ":")
      throw ParseError("expected 'block <n> <j> : <g,a>...' line", no);
    int n = to_int(t[1], no), j = to_int(t[2], no);
    if (n < 2 || n > levels) throw ParseError("block level out of range", no);
    std::vector<RecursionPair> pairs;
    for (std::size_t k = 4; k < t.size(); ++k) {
      auto comma = t[k].find(',');
      if (comma == std::string::npos) throw ParseError("expected 'g,a' pair", no);
      pairs.push_back({to_int(t[k].substr(0, comma), no),
                       static_cast<std::int64_t>(to_int(t[k].substr(comma + 1), no))});
    }
    if (blocks.count({n, j})) throw ParseError("duplicate block line", no);
    blocks[{n, j}] = std::move(pairs);
  }
  std::vector<std::vector<std::vector<RecursionPair>>> stages;
  for (int n = 2; n <= levels; ++n) {
    std::vector<std::vector<RecursionPair>> st;
    for (int j = 1;; ++j) {
      auto it = blocks.find({n, j});
      if (it == blocks.end()) break;
      st.push_back(it->second);
      blocks.erase(it);
    }
    if (st.empty()) throw ParseError("missing blocks for level " + std::to_string(n));
    stages.push_back(std::move(st));
  }
  if (!blocks.empty())
    throw ParseError("block line with non-contiguous vertex index");
  return RecursionTable(std::move(seed_list), std::move(stages), stationary);
}

LoadedSystem read_system(const std::string& text) {
  std::istringstream in(text);
  std::string first;
  std::getline(in, first);
  auto toks = tokens(first);
  while (toks.empty()) {
    if (!std::getline(in, first)) throw ParseError("empty input");
    toks = tokens(first);
  }
  if (toks[0] == "bv") return {read_diagram(text), std::nullopt};
  if (toks[0] == "bvrec") {
    RecursionTable t = read_recursion(text);
    return {from_recursion(t), std::move(t)};
  }
  throw ParseError("unknown file format (expected 'bv 1' or 'bvrec 1')");
}

std::string slurp_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace bv
