// bv: ordered Bratteli-Vershik diagrams from the command line.
// Thin front end over the libbv C API; all computation lives behind it.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bv.h"

namespace {

int emit(bv_status status, bv_text* text) {
  if (text) {
    std::fwrite(bv_text_data(text), 1, bv_text_size(text), status <= BV_HORIZON ? stdout : stderr);
    bv_text_free(text);
  }
  return static_cast<int>(status);
}

struct Input {
  std::string file;
  std::string fixture;

  void attach(CLI::App* cmd) {
    auto* f = cmd->add_option("--file", file, "diagram or recursion file");
    auto* x = cmd->add_option("--fixture", fixture, "built-in fixture name");
    f->excludes(x);
  }

  bv_system* open(bv_text** err) const {
    bv_system* sys = nullptr;
    bv_status st;
    if (!fixture.empty())
      st = bv_open_fixture(fixture.c_str(), &sys, err);
    else if (!file.empty())
      st = bv_open_path(file.c_str(), &sys, err);
    else {
      std::fprintf(stderr, "exactly one of --file or --fixture is required\n");
      return nullptr;
    }
    if (st != BV_OK) return nullptr;
    return sys;
  }
};

int fail_open(bv_text* err) {
  if (err) {
    std::fwrite(bv_text_data(err), 1, bv_text_size(err), stderr);
    bv_text_free(err);
    return static_cast<int>(BV_EIO);
  }
  return static_cast<int>(BV_EUSAGE);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ordered Bratteli-Vershik diagram toolkit"};
  app.require_subcommand(1);
  bool records = false;
  app.add_flag("--records", records, "machine-readable key<TAB>value output");

  Input in_validate, in_blocks, in_coding, in_period, in_semi, in_ldc, in_verdict, in_tele,
      in_dot;

  auto* c_validate = app.add_subcommand("validate", "check conditions C1-C4");
  int horizon = 10;
  in_validate.attach(c_validate);
  c_validate->add_option("--horizon", horizon, "levels to check (default 10)");

  auto* c_blocks = app.add_subcommand("blocks", "expand a basic block");
  int b_level = 1, b_vertex = 1, b_k = 1;
  long long b_offset = 0, b_len = -1, b_maxlen = 4096;
  in_blocks.attach(c_blocks);
  c_blocks->add_option("--level", b_level)->required();
  c_blocks->add_option("--vertex", b_vertex)->required();
  c_blocks->add_option("--k", b_k, "coding depth (default 1)");
  c_blocks->add_option("--offset", b_offset, "window start (default 0)");
  c_blocks->add_option("--len", b_len, "window length (default: whole block)");
  c_blocks->add_option("--max-len", b_maxlen, "refuse longer expansions (default 4096)");

  auto* c_coding = app.add_subcommand("coding", "code an orbit under the successor map");
  std::string start = "min:1,1";
  int o_k = 1;
  long long o_len = 32;
  in_coding.attach(c_coding);
  c_coding->add_option("--start", start, "min:<n>,<j> or spacer");
  c_coding->add_option("--k", o_k, "coding depth (default 1)");
  c_coding->add_option("--len", o_len, "orbit length (default 32)");

  auto* c_period = app.add_subcommand("period", "k-coding periodicity verdict");
  int p_k = 1, p_horizon = 12;
  long long p_prefix = 10000;
  in_period.attach(c_period);
  c_period->add_option("--k", p_k, "coding depth (default 1)");
  c_period->add_option("--horizon", p_horizon, "scan depth for non-stationary diagrams");
  c_period->add_option("--prefix-len", p_prefix, "cross-check prefix length (default 10000)");

  auto* c_semi = app.add_subcommand("semi", "semi k-periodicity at one level");
  int s_level = 2, s_k = 1;
  in_semi.attach(c_semi);
  c_semi->add_option("--level", s_level)->required();
  c_semi->add_option("--k", s_k, "coding depth (default 1)");

  auto* c_ldc = app.add_subcommand("ldc", "local deficit condition at one level");
  int l_level = 2, l_k = 1;
  in_ldc.attach(c_ldc);
  c_ldc->add_option("--level", l_level)->required();
  c_ldc->add_option("--k", l_k, "coding depth (default 1)");

  auto* c_verdict = app.add_subcommand("verdict", "odometer-plus-fixed-path verdict");
  int v_horizon = 10, v_kmax = 3;
  bool v_sweep = false;
  in_verdict.attach(c_verdict);
  c_verdict->add_option("--horizon", v_horizon, "telescoping search horizon (default 10)");
  c_verdict->add_flag("--sweep", v_sweep, "add per-(n,k) deficit records");
  c_verdict->add_option("--sweep-kmax", v_kmax, "sweep depth bound (default 3)");

  auto* c_tele = app.add_subcommand("telescope", "collapse levels between cut points");
  std::vector<int> cuts;
  in_tele.attach(c_tele);
  c_tele->add_option("--cuts", cuts, "cut levels, starting at 0")->required()->delimiter(',');

  auto* c_fixtures = app.add_subcommand("fixtures", "list or emit built-in fixtures");
  std::string emit_name;
  bool as_recursion = false;
  c_fixtures->add_option("--emit", emit_name, "write the named fixture");
  c_fixtures->add_flag("--as-recursion", as_recursion, "emit the recursion form");

  auto* c_dot = app.add_subcommand("dot", "layered DOT rendering");
  int depth = 3;
  in_dot.attach(c_dot);
  c_dot->add_option("--depth", depth, "levels to render (default 3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 64;
  }

  const bv_mode mode = records ? BV_MODE_RECORDS : BV_MODE_HUMAN;
  bv_text* out = nullptr;
  bv_text* err = nullptr;

  if (c_fixtures->parsed()) {
    bv_status st = emit_name.empty() ? bv_fixtures(mode, &out)
                                     : bv_fixture_emit(emit_name.c_str(), as_recursion, &out);
    return emit(st, out);
  }

  auto with_system = [&](const Input& in, auto&& fn) -> int {
    bv_system* sys = in.open(&err);
    if (!sys) return fail_open(err);
    bv_status st = fn(sys);
    bv_system_free(sys);
    return emit(st, out);
  };

  if (c_validate->parsed())
    return with_system(in_validate,
                       [&](bv_system* s) { return bv_validate(s, horizon, mode, &out); });
  if (c_blocks->parsed())
    return with_system(in_blocks, [&](bv_system* s) {
      return bv_blocks(s, b_level, b_vertex, b_k, b_offset, b_len, b_maxlen, mode, &out);
    });
  if (c_coding->parsed())
    return with_system(in_coding, [&](bv_system* s) {
      return bv_coding(s, start.c_str(), o_k, o_len, mode, &out);
    });
  if (c_period->parsed())
    return with_system(in_period, [&](bv_system* s) {
      return bv_period(s, p_k, p_horizon, p_prefix, mode, &out);
    });
  if (c_semi->parsed())
    return with_system(in_semi,
                       [&](bv_system* s) { return bv_semi(s, s_level, s_k, mode, &out); });
  if (c_ldc->parsed())
    return with_system(in_ldc, [&](bv_system* s) { return bv_ldc(s, l_level, l_k, mode, &out); });
  if (c_verdict->parsed())
    return with_system(in_verdict, [&](bv_system* s) {
      return bv_verdict(s, v_horizon, v_sweep ? 1 : 0, v_kmax, mode, &out);
    });
  if (c_tele->parsed())
    return with_system(in_tele, [&](bv_system* s) {
      return bv_telescope(s, cuts.data(), cuts.size(), mode, &out);
    });
  if (c_dot->parsed())
    return with_system(in_dot, [&](bv_system* s) { return bv_dot(s, depth, &out); });

  return 64;
}
