#include "reports.hpp"

#include <future>
#include <sstream>
#include <thread>

#include "analysis.hpp"
#include "coding.hpp"

namespace bv::reports {

namespace {

class Sink {
 public:
  explicit Sink(Mode mode) : mode_(mode) {}
  void kv(const std::string& key, const std::string& value) {
    if (mode_ == Mode::Records)
      out_ << key << '\t' << value << '\n';
    else
      out_ << key << ' ' << value << '\n';
  }
  void raw(const std::string& line) { out_ << line << '\n'; }
  std::string str() const { return out_.str(); }

 private:
  Mode mode_;
  std::ostringstream out_;
};

std::string bool_str(bool b) { return b ? "true" : "false"; }

// Words print compactly when every symbol is a single decimal digit.
std::string word_str(const OrderedDiagram& d, int k, const Word& w) {
  Alphabet alpha(d, k);
  return format_word(w, alpha.d_k() <= 10);
}

std::string join(const std::vector<int>& v, char sep = ',') {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(v[i]);
  }
  return out;
}

std::string join64(const std::vector<std::int64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

System load_path(const std::string& path) {
  LoadedSystem ls = read_system(slurp_file(path));
  return {std::move(ls.diagram), std::move(ls.table), path};
}

System load_fixture(const std::string& name) {
  Fixture f = fixture(name);
  return {std::move(f.diagram), std::move(f.table), "fixture:" + name};
}

System load_text(const std::string& text, const std::string& origin) {
  LoadedSystem ls = read_system(text);
  return {std::move(ls.diagram), std::move(ls.table), origin};
}

Outcome run_validate(const System& s, int horizon, Mode mode) {
  ValidationReport rep = validate(s.diagram, horizon);
  Sink sink(mode);
  auto cond = [&](const std::string& name, bool ok,
                  const std::vector<ValidationReport::Failure>& failures) {
    sink.kv(name, ok ? "pass" : "fail");
    for (const auto& f : failures)
      sink.kv(name + "-failure", "level=" + std::to_string(f.level) +
                                     " vertex=" + std::to_string(f.vertex) + " " + f.detail);
  };
  cond("c1", rep.c1, rep.c1_failures);
  cond("c2", rep.c2, rep.c2_failures);
  cond("c3", rep.c3, rep.c3_failures);
  cond("structural", rep.structural, rep.structural_failures);
  sink.kv("c4", rep.c4 ? "pass" : "fail");
  sink.kv("c4-horizon", std::to_string(rep.c4_horizon));
  {
    std::string lens;
    for (std::size_t i = 0; i < rep.c4_min_lengths.size(); ++i) {
      if (i) lens += ',';
      lens += rep.c4_min_lengths[i].str();
    }
    sink.kv("c4-min-lengths", lens);
  }
  sink.kv("c4-monotone", bool_str(rep.c4_monotone));
  sink.kv("c4-doubling", bool_str(rep.c4_doubling));
  sink.kv("c4-stationary-edges", bool_str(rep.c4_stationary_edges));
  sink.kv("result", rep.pass() ? "pass" : "fail");
  return {rep.pass() ? 0 : 1, sink.str()};
}

Outcome run_blocks(const System& s, int level, int vertex, int k, std::int64_t offset,
                   std::int64_t len, std::int64_t max_len, Mode mode) {
  BlockDag dag(s.diagram, k, level);
  BlockHandle h = dag.block(level, vertex);
  const BigInt& total = dag.length(level, vertex);
  if (len < 0) {  // whole block
    if (total - offset > max_len)
      throw ResourceError("expansion of length " + (total - BigInt(offset)).str() +
                          " exceeds --max-len " + std::to_string(max_len));
    len = static_cast<std::int64_t>(total) - offset;
  }
  if (len > max_len)
    throw ResourceError("requested window exceeds --max-len " + std::to_string(max_len));
  Word w = dag.expand(h, offset, len);
  std::string rendered = word_str(s.diagram, k, w);
  if (mode == Mode::Human) return {0, rendered + "\n"};
  Sink sink(mode);
  sink.kv("level", std::to_string(level));
  sink.kv("vertex", std::to_string(vertex));
  sink.kv("k", std::to_string(k));
  sink.kv("length", total.str());
  sink.kv("offset", std::to_string(offset));
  sink.kv("word", rendered);
  return {0, sink.str()};
}

Outcome run_coding(const System& s, const std::string& start, int k, std::int64_t len,
                   Mode mode) {
  PathPrefix prefix = [&] {
    if (start == "spacer") return spacer_prefix(s.diagram, std::max(k, 1));
    if (start.rfind("min:", 0) == 0) {
      auto comma = start.find(',', 4);
      if (comma == std::string::npos)
        throw ContractError("start must be 'min:<n>,<j>' or 'spacer'");
      int n = std::stoi(start.substr(4, comma - 4));
      int j = std::stoi(start.substr(comma + 1));
      return minimal_prefix(s.diagram, n, j);
    }
    throw ContractError("start must be 'min:<n>,<j>' or 'spacer'");
  }();
  OrbitCoding orbit = code_orbit(s.diagram, prefix, k, len);
  std::string rendered = word_str(s.diagram, k, orbit.word);
  const char* reason = orbit.reason == OrbitEnd::LengthReached    ? "length-reached"
                       : orbit.reason == OrbitEnd::CarryExhausted ? "carry-exhausted"
                                                                  : "fixed-point";
  int status = orbit.reason == OrbitEnd::CarryExhausted ? 2 : 0;
  if (mode == Mode::Human) return {status, rendered + "\n"};
  Sink sink(mode);
  sink.kv("k", std::to_string(k));
  sink.kv("steps", std::to_string(orbit.steps));
  sink.kv("reason", reason);
  sink.kv("word", rendered);
  return {status, sink.str()};
}

Outcome run_period(const System& s, int k, int horizon, std::int64_t prefix_len, Mode mode) {
  PeriodicityVerdict v = k_coding_periodicity(s.diagram, k, horizon, prefix_len);
  Sink sink(mode);
  sink.kv("k", std::to_string(k));
  using Kind = PeriodicityVerdict::Kind;
  int status = 0;
  switch (v.kind) {
    case Kind::Periodic:
      sink.kv("verdict", "periodic");
      status = 0;
      break;
    case Kind::Aperiodic:
      sink.kv("verdict", "aperiodic");
      status = 1;
      break;
    case Kind::MultiMinimal:
      sink.kv("verdict", "multi-minimal");
      status = 3;
      break;
    case Kind::PeriodicThrough:
      sink.kv("verdict", "periodic-through");
      status = 3;
      break;
    case Kind::AperiodicEvidence:
      sink.kv("verdict", "aperiodic-evidence");
      status = 3;
      break;
  }
  if (v.period) sink.kv("period", word_str(s.diagram, k, *v.period));
  if (v.kind == Kind::Periodic || v.kind == Kind::PeriodicThrough)
    sink.kv("witness-level", std::to_string(v.witness_level));
  if (v.kind != Kind::MultiMinimal) {
    sink.kv("least-period", std::to_string(v.least_period));
    sink.kv("prefix-consistent", bool_str(v.prefix_consistent));
  }
  if (v.kind == Kind::Aperiodic) {
    sink.kv("no-period-leq", std::to_string(v.no_period_leq));
    sink.kv("refuted-level", std::to_string(v.refuted_level));
  }
  sink.kv("threads", std::to_string(v.raw_threads));
  sink.kv("classes", std::to_string(v.coding_classes));
  sink.kv("horizon-limited", bool_str(v.horizon_limited));
  if (v.horizon_limited && status == 1) status = 3;
  return {status, sink.str()};
}

namespace {

void emit_semi(Sink& sink, const OrderedDiagram& d, int k, const SemiResult& res) {
  if (auto* cert = std::get_if<SemiCertificate>(&res)) {
    sink.kv("semi", "true");
    sink.kv("U", word_str(d, k, cert->U));
    sink.kv("c", std::to_string(cert->c));
    sink.kv("t", join64(cert->t));
    sink.kv("l", join64(cert->l));
  } else {
    const auto& ref = std::get<SemiRefutation>(res);
    sink.kv("semi", "false");
    sink.kv("refuting-pair",
            std::to_string(ref.vertex_a) + "," + std::to_string(ref.vertex_b));
    sink.kv("detail", ref.detail);
  }
}

}  // namespace

Outcome run_semi(const System& s, int level, int k, Mode mode) {
  SemiResult res = semi_k_periodic(s.diagram, level, k);
  Sink sink(mode);
  sink.kv("level", std::to_string(level));
  sink.kv("k", std::to_string(k));
  emit_semi(sink, s.diagram, k, res);
  return {std::holds_alternative<SemiCertificate>(res) ? 0 : 1, sink.str()};
}

Outcome run_ldc(const System& s, int level, int k, Mode mode) {
  LdcReport rep = ldc(s.diagram, level, k);
  Sink sink(mode);
  sink.kv("level", std::to_string(level));
  sink.kv("k", std::to_string(k));
  sink.kv("ldc", rep.pass ? "pass" : "fail");
  if (rep.cert) {
    sink.kv("U", word_str(s.diagram, k, rep.cert->U));
    sink.kv("c", std::to_string(rep.cert->c));
    sink.kv("l", join64(rep.cert->l));
    for (const auto& app : rep.appearances) {
      sink.kv("appearance", "target=" + std::to_string(app.target) +
                                " index=" + std::to_string(app.index) +
                                " source=" + std::to_string(app.source) +
                                " run=" + std::to_string(app.run) +
                                " allowed=" + std::to_string(app.allowed) +
                                (app.interior ? " interior" : " final") +
                                (app.ok ? " ok" : " violation"));
    }
    if (rep.first_fail)
      sink.kv("first-fail", "target=" + std::to_string(rep.first_fail->target) +
                                " index=" + std::to_string(rep.first_fail->index));
    if (rep.uniform_block) sink.kv("uniform-block", word_str(s.diagram, k, *rep.uniform_block));
  } else if (rep.semi_refutation) {
    sink.kv("semi", "false");
    sink.kv("refuting-pair", std::to_string(rep.semi_refutation->vertex_a) + "," +
                                 std::to_string(rep.semi_refutation->vertex_b));
  }
  return {rep.pass ? 0 : 1, sink.str()};
}

Outcome run_verdict(const System& s, int horizon, bool sweep, int sweep_kmax, Mode mode) {
  Sink sink(mode);
  if (sweep) {
    // Independent (n,k) deficit checks fanned across workers, merged in
    // deterministic order.
    struct Task {
      int n, k;
    };
    std::vector<Task> tasks;
    const int deepest =
        s.diagram.stationary() ? horizon : std::min(horizon, s.diagram.explicit_levels() - 1);
    for (int n = 2; n <= deepest; ++n)
      for (int k = 1; k <= std::min(n, sweep_kmax); ++k) tasks.push_back({n, k});
    std::vector<std::future<std::string>> results;
    for (const auto& task : tasks) {
      results.push_back(std::async(std::launch::async, [&s, task] {
        try {
          return ldc(s.diagram, task.n, task.k).pass ? std::string("pass")
                                                     : std::string("fail");
        } catch (const ResourceError&) {
          return std::string("skipped");
        }
      }));
    }
    for (std::size_t i = 0; i < tasks.size(); ++i)
      sink.kv("ldc." + std::to_string(tasks[i].n) + "." + std::to_string(tasks[i].k),
              results[i].get());
  }
  OdometerVerdict v = odometer_verdict(s.diagram, horizon);
  int status = 0;
  using Kind = OdometerVerdict::Kind;
  switch (v.kind) {
    case Kind::OdometerPlusFixedPoint:
      sink.kv("verdict", "odometer-plus-fixed-point");
      status = 0;
      break;
    case Kind::FiniteSystem:
      sink.kv("verdict", "finite-system");
      status = 0;
      break;
    case Kind::FailedLdc:
      sink.kv("verdict", "failed-ldc");
      status = 1;
      break;
    case Kind::FailedSpacerBranching:
      sink.kv("verdict", "failed-spacer-branching");
      status = 1;
      break;
    case Kind::HorizonLimited:
      sink.kv("verdict", "horizon-limited");
      status = 3;
      break;
  }
  if (!v.cuts.empty()) sink.kv("cuts", join(v.cuts));
  sink.kv("spacer-eventually-isolated", bool_str(v.spacer_eventually_isolated));
  if (!v.detail.empty()) sink.kv("detail", v.detail);
  return {status, sink.str()};
}

Outcome run_telescope(const System& s, const std::vector<int>& cuts, Mode) {
  OrderedDiagram t = telescope(s.diagram, cuts);
  return {0, write_diagram(t)};
}

Outcome run_dot(const System& s, int depth) {
  if (depth < 1) throw ContractError("depth must be >= 1");
  if (!s.diagram.has_level(depth)) throw ContractError("depth beyond available levels");
  const OrderedDiagram& d = s.diagram;
  std::ostringstream out;
  out << "digraph bv {\n";
  out << "  rankdir=TB;\n";
  out << "  node [shape=circle];\n";
  out << "  v_0_1;\n";
  for (int n = 1; n <= depth; ++n) {
    out << "  { rank=same;";
    for (int j = 1; j <= d.K(n) + 1; ++j) out << " v_" << n << "_" << j << ";";
    out << " }\n";
    out << "  v_" << n << "_" << d.spacer(n) << " [shape=box];\n";
  }
  for (int n = 0; n < depth; ++n) {
    const Stage& st = d.stage(n);
    for (int j = 1; j <= st.targets(); ++j) {
      const auto& srcs = st.into(j);
      for (std::size_t xi = 0; xi < srcs.size(); ++xi)
        out << "  v_" << n << "_" << srcs[xi] << " -> v_" << (n + 1) << "_" << j << " [label=\""
            << (xi + 1) << "\"];\n";
    }
  }
  out << "}\n";
  return {0, out.str()};
}

Outcome run_fixtures_list(Mode mode) {
  Sink sink(mode);
  for (const auto& name : fixture_names()) sink.kv(name, fixture(name).description);
  return {0, sink.str()};
}

Outcome run_fixture_emit(const std::string& name, bool as_recursion) {
  Fixture f = fixture(name);
  if (as_recursion) {
    RecursionTable t = f.table ? *f.table : to_recursion(f.diagram);
    return {0, write_recursion(t)};
  }
  return {0, write_diagram(f.diagram)};
}

}  // namespace bv::reports
