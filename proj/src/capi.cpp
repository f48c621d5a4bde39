#include "bv.h"

#include <new>
#include <string>

#include "reports.hpp"

struct bv_text {
  std::string data;
};

struct bv_system {
  bv::reports::System sys;
};

namespace {

bv_text* make_text(std::string s) { return new bv_text{std::move(s)}; }

bv_status to_status(int outcome_status) { return static_cast<bv_status>(outcome_status); }

// Runs a report producer, translating exceptions into statuses + messages.
template <typename Fn>
bv_status guarded(bv_text** out, Fn&& fn) {
  if (out) *out = nullptr;
  try {
    bv::reports::Outcome o = fn();
    if (out) *out = make_text(std::move(o.text));
    return to_status(o.status);
  } catch (const bv::ParseError& e) {
    if (out) *out = make_text(std::string(e.what()) + "\n");
    return BV_EIO;
  } catch (const bv::ResourceError& e) {
    if (out) *out = make_text(std::string(e.what()) + "\n");
    return BV_ELIMIT;
  } catch (const bv::ContractError& e) {
    if (out) *out = make_text(std::string(e.what()) + "\n");
    return BV_EUSAGE;
  } catch (const std::exception& e) {
    if (out) *out = make_text(std::string(e.what()) + "\n");
    return BV_EINTERNAL;
  }
}

template <typename Fn>
bv_status guarded_open(bv_system** out_sys, bv_text** out_err, Fn&& fn) {
  if (out_sys) *out_sys = nullptr;
  if (out_err) *out_err = nullptr;
  if (!out_sys) return BV_EUSAGE;
  try {
    *out_sys = new bv_system{fn()};
    return BV_OK;
  } catch (const bv::ParseError& e) {
    if (out_err) *out_err = make_text(std::string(e.what()) + "\n");
    return BV_EIO;
  } catch (const bv::ContractError& e) {
    if (out_err) *out_err = make_text(std::string(e.what()) + "\n");
    return BV_EUSAGE;
  } catch (const std::exception& e) {
    if (out_err) *out_err = make_text(std::string(e.what()) + "\n");
    return BV_EINTERNAL;
  }
}

bv::reports::Mode mode_of(bv_mode m) {
  return m == BV_MODE_RECORDS ? bv::reports::Mode::Records : bv::reports::Mode::Human;
}

}  // namespace

extern "C" {

unsigned bv_abi_version(void) { return 1; }

const char* bv_text_data(const bv_text* t) { return t ? t->data.c_str() : ""; }
size_t bv_text_size(const bv_text* t) { return t ? t->data.size() : 0; }
void bv_text_free(bv_text* t) { delete t; }

bv_status bv_open_path(const char* path, bv_system** out_sys, bv_text** out_err) {
  if (!path) return BV_EUSAGE;
  return guarded_open(out_sys, out_err, [&] { return bv::reports::load_path(path); });
}

bv_status bv_open_fixture(const char* name, bv_system** out_sys, bv_text** out_err) {
  if (!name) return BV_EUSAGE;
  return guarded_open(out_sys, out_err, [&] { return bv::reports::load_fixture(name); });
}

bv_status bv_open_string(const char* text, bv_system** out_sys, bv_text** out_err) {
  if (!text) return BV_EUSAGE;
  return guarded_open(out_sys, out_err,
                      [&] { return bv::reports::load_text(text, "string"); });
}

void bv_system_free(bv_system* sys) { delete sys; }

bv_status bv_validate(const bv_system* sys, int horizon, bv_mode mode, bv_text** out) {
  if (!sys) return BV_EUSAGE;
  return guarded(out, [&] { return bv::reports::run_validate(sys->sys, horizon, mode_of(mode)); });
}

bv_status bv_blocks(const bv_system* sys, int level, int vertex, int k, long long offset,
                    long long len, long long max_len, bv_mode mode, bv_text** out) {
  if (!sys) return BV_EUSAGE;
  return guarded(out, [&] {
    return bv::reports::run_blocks(sys->sys, level, vertex, k, offset, len, max_len,
                                   mode_of(mode));
  });
}

bv_status bv_coding(const bv_system* sys, const char* start, int k, long long len, bv_mode mode,
                    bv_text** out) {
  if (!sys || !start) return BV_EUSAGE;
  return guarded(out, [&] {
    return bv::reports::run_coding(sys->sys, start, k, len, mode_of(mode));
  });
}

bv_status bv_period(const bv_system* sys, int k, int horizon, long long prefix_len, bv_mode mode,
                    bv_text** out) {
  if (!sys) return BV_EUSAGE;
  return guarded(out, [&] {
    return bv::reports::run_period(sys->sys, k, horizon, prefix_len, mode_of(mode));
  });
}

bv_status bv_semi(const bv_system* sys, int level, int k, bv_mode mode, bv_text** out) {
  if (!sys) return BV_EUSAGE;
  return guarded(out, [&] { return bv::reports::run_semi(sys->sys, level, k, mode_of(mode)); });
}

bv_status bv_ldc(const bv_system* sys, int level, int k, bv_mode mode, bv_text** out) {
  if (!sys) return BV_EUSAGE;
  return guarded(out, [&] { return bv::reports::run_ldc(sys->sys, level, k, mode_of(mode)); });
}

bv_status bv_verdict(const bv_system* sys, int horizon, int sweep, int sweep_kmax, bv_mode mode,
                     bv_text** out) {
  if (!sys) return BV_EUSAGE;
  return guarded(out, [&] {
    return bv::reports::run_verdict(sys->sys, horizon, sweep != 0, sweep_kmax, mode_of(mode));
  });
}

bv_status bv_telescope(const bv_system* sys, const int* cuts, size_t n_cuts, bv_mode mode,
                       bv_text** out) {
  if (!sys || (!cuts && n_cuts > 0)) return BV_EUSAGE;
  return guarded(out, [&] {
    std::vector<int> c(cuts, cuts + n_cuts);
    return bv::reports::run_telescope(sys->sys, c, mode_of(mode));
  });
}

bv_status bv_dot(const bv_system* sys, int depth, bv_text** out) {
  if (!sys) return BV_EUSAGE;
  return guarded(out, [&] { return bv::reports::run_dot(sys->sys, depth); });
}

bv_status bv_fixtures(bv_mode mode, bv_text** out) {
  return guarded(out, [&] { return bv::reports::run_fixtures_list(mode_of(mode)); });
}

bv_status bv_fixture_emit(const char* name, int as_recursion, bv_text** out) {
  if (!name) return BV_EUSAGE;
  return guarded(out, [&] {
    return bv::reports::run_fixture_emit(name, as_recursion != 0);
  });
}

}  // extern "C"
