/* Ordered Bratteli-Vershik diagrams: validation, lazy basic blocks,
 * orbit codings, and periodicity verdicts, behind a flat C surface.
 *
 * All functions return a bv_status. Statuses mirror the CLI exit codes:
 * analysis results (OK / FAIL / HORIZON) are ordinary outcomes, the rest
 * are errors. Every call that produces text fills *out with a bv_text the
 * caller owns; on error *out carries the message instead.
 */
#ifndef BV_H
#define BV_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct bv_system bv_system; /* an immutable loaded diagram or recursion */
typedef struct bv_text bv_text;     /* an owned text buffer */

typedef enum {
  BV_OK = 0,       /* pass / periodic / valid */
  BV_FAIL = 1,     /* fail / aperiodic / invalid */
  BV_CARRY = 2,    /* orbit truncated by carry exhaustion */
  BV_HORIZON = 3,  /* horizon-limited or not-analyzable verdict */
  BV_EUSAGE = 64,  /* bad arguments */
  BV_EIO = 66,     /* unreadable or unparsable input */
  BV_ELIMIT = 70,  /* desk-scale resource ceiling hit */
  BV_EINTERNAL = 71
} bv_status;

typedef enum { BV_MODE_HUMAN = 0, BV_MODE_RECORDS = 1 } bv_mode;

unsigned bv_abi_version(void);

const char* bv_text_data(const bv_text* t);
size_t bv_text_size(const bv_text* t);
void bv_text_free(bv_text* t);

bv_status bv_open_path(const char* path, bv_system** out_sys, bv_text** out_err);
bv_status bv_open_fixture(const char* name, bv_system** out_sys, bv_text** out_err);
bv_status bv_open_string(const char* text, bv_system** out_sys, bv_text** out_err);
void bv_system_free(bv_system* sys);

/* Conditions (C1)-(C4) and structural checks up to the horizon. */
bv_status bv_validate(const bv_system* sys, int horizon, bv_mode mode, bv_text** out);

/* Window of the basic block B^(k)(level, vertex). len < 0 means the whole
 * block; windows larger than max_len are refused. */
bv_status bv_blocks(const bv_system* sys, int level, int vertex, int k, long long offset,
                    long long len, long long max_len, bv_mode mode, bv_text** out);

/* Orbit coding from "min:<n>,<j>" or "spacer". */
bv_status bv_coding(const bv_system* sys, const char* start, int k, long long len, bv_mode mode,
                    bv_text** out);

/* k-coding periodicity verdict. */
bv_status bv_period(const bv_system* sys, int k, int horizon, long long prefix_len, bv_mode mode,
                    bv_text** out);

/* Semi k-periodicity certificate or refutation at one level. */
bv_status bv_semi(const bv_system* sys, int level, int k, bv_mode mode, bv_text** out);

/* Local deficit condition at one level. */
bv_status bv_ldc(const bv_system* sys, int level, int k, bv_mode mode, bv_text** out);

/* Odometer-plus-fixed-path verdict; sweep adds per-(n,k) deficit records. */
bv_status bv_verdict(const bv_system* sys, int horizon, int sweep, int sweep_kmax, bv_mode mode,
                     bv_text** out);

/* Telescoped diagram in the bv file format. */
bv_status bv_telescope(const bv_system* sys, const int* cuts, size_t n_cuts, bv_mode mode,
                       bv_text** out);

/* Layered DOT rendering down to the given depth. */
bv_status bv_dot(const bv_system* sys, int depth, bv_text** out);

/* Built-in fixture list, and a fixture serialized as a diagram or
 * recursion file. */
bv_status bv_fixtures(bv_mode mode, bv_text** out);
bv_status bv_fixture_emit(const char* name, int as_recursion, bv_text** out);

#ifdef __cplusplus
}
#endif

#endif /* BV_H */
