// C API surface checks: statuses, text ownership, byte-stable records.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>

#include "bv.h"
#include "doctest.h"

namespace {

std::string take(bv_text* t) {
  std::string s(bv_text_data(t), bv_text_size(t));
  bv_text_free(t);
  return s;
}

struct Sys {
  bv_system* p = nullptr;
  ~Sys() { bv_system_free(p); }
};

}  // namespace

TEST_CASE("open by fixture, path errors, and string round trip") {
  Sys sys;
  bv_text* err = nullptr;
  CHECK(bv_open_fixture("ex-someper", &sys.p, &err) == BV_OK);
  CHECK(err == nullptr);

  bv_system* bad = nullptr;
  CHECK(bv_open_fixture("nope", &bad, &err) == BV_EUSAGE);
  CHECK(bad == nullptr);
  CHECK(take(err).find("unknown fixture") != std::string::npos);

  err = nullptr;
  CHECK(bv_open_path("/does/not/exist.bv", &bad, &err) == BV_EIO);
  take(err);

  bv_text* file = nullptr;
  CHECK(bv_fixture_emit("chacon", 0, &file) == BV_OK);
  std::string text = take(file);
  bv_system* from_string = nullptr;
  CHECK(bv_open_string(text.c_str(), &from_string, &err) == BV_OK);
  bv_system_free(from_string);
}

TEST_CASE("statuses mirror verdicts") {
  Sys sys;
  REQUIRE(bv_open_fixture("ex-someper", &sys.p, nullptr) == BV_OK);

  bv_text* out = nullptr;
  CHECK(bv_period(sys.p, 1, 12, 10000, BV_MODE_RECORDS, &out) == BV_OK);
  std::string rec = take(out);
  CHECK(rec.find("verdict\tperiodic\n") != std::string::npos);
  CHECK(rec.find("period\t01ss\n") != std::string::npos);

  CHECK(bv_period(sys.p, 2, 12, 10000, BV_MODE_RECORDS, &out) == BV_FAIL);
  rec = take(out);
  CHECK(rec.find("verdict\taperiodic\n") != std::string::npos);

  CHECK(bv_validate(sys.p, 10, BV_MODE_RECORDS, &out) == BV_OK);
  CHECK(take(out).find("result\tpass") != std::string::npos);

  CHECK(bv_semi(sys.p, 3, 1, BV_MODE_RECORDS, &out) == BV_OK);
  rec = take(out);
  CHECK(rec.find("U\t01\n") != std::string::npos);
  CHECK(rec.find("c\t2\n") != std::string::npos);

  CHECK(bv_semi(sys.p, 2, 1, BV_MODE_RECORDS, &out) == BV_FAIL);
  take(out);

  CHECK(bv_ldc(sys.p, 3, 1, BV_MODE_RECORDS, &out) == BV_OK);
  take(out);
}

TEST_CASE("blocks and coding surfaces") {
  Sys sys;
  REQUIRE(bv_open_fixture("fig1b-rank1", &sys.p, nullptr) == BV_OK);
  bv_text* out = nullptr;
  CHECK(bv_blocks(sys.p, 4, 1, 1, 0, -1, 4096, BV_MODE_HUMAN, &out) == BV_OK);
  CHECK(take(out) == "0ss0ss0ss0s\n");

  // A window past --max-len is a resource error.
  CHECK(bv_blocks(sys.p, 4, 1, 1, 0, -1, 4, BV_MODE_HUMAN, &out) == BV_ELIMIT);
  take(out);

  CHECK(bv_coding(sys.p, "min:4,1", 1, 11, BV_MODE_HUMAN, &out) == BV_OK);
  CHECK(take(out) == "0ss0ss0ss0s\n");
  CHECK(bv_coding(sys.p, "spacer", 1, 5, BV_MODE_HUMAN, &out) == BV_OK);
  CHECK(take(out) == "sssss\n");
  CHECK(bv_coding(sys.p, "bogus", 1, 5, BV_MODE_HUMAN, &out) == BV_EUSAGE);
  take(out);

  // Carry exhaustion on a finite diagram maps to BV_CARRY.
  Sys finite;
  REQUIRE(bv_open_fixture("sec4-U3", &finite.p, nullptr) == BV_OK);
  CHECK(bv_coding(finite.p, "min:1,1", 1, 500, BV_MODE_RECORDS, &out) == BV_CARRY);
  CHECK(take(out).find("reason\tcarry-exhausted") != std::string::npos);
}

TEST_CASE("telescope and dot emit text") {
  Sys sys;
  REQUIRE(bv_open_fixture("fig1b-rank1", &sys.p, nullptr) == BV_OK);
  bv_text* out = nullptr;
  int cuts[] = {0, 2, 4};
  CHECK(bv_telescope(sys.p, cuts, 3, BV_MODE_HUMAN, &out) == BV_OK);
  std::string text = take(out);
  CHECK(text.rfind("bv 1\n", 0) == 0);

  CHECK(bv_dot(sys.p, 3, &out) == BV_OK);
  std::string dot = take(out);
  CHECK(dot.find("v_1_1 -> v_2_1 [label=\"1\"]") != std::string::npos);
  CHECK(dot.find("digraph") != std::string::npos);
}

TEST_CASE("records are byte-identical across runs") {
  for (const char* name : {"ex-someper", "chacon", "ex-all-ldc"}) {
    Sys a, b;
    REQUIRE(bv_open_fixture(name, &a.p, nullptr) == BV_OK);
    REQUIRE(bv_open_fixture(name, &b.p, nullptr) == BV_OK);
    bv_text *t1 = nullptr, *t2 = nullptr;
    bv_period(a.p, 1, 12, 10000, BV_MODE_RECORDS, &t1);
    bv_period(b.p, 1, 12, 10000, BV_MODE_RECORDS, &t2);
    CHECK(take(t1) == take(t2));
    bv_verdict(a.p, 8, 1, 2, BV_MODE_RECORDS, &t1);
    bv_verdict(b.p, 8, 1, 2, BV_MODE_RECORDS, &t2);
    CHECK(take(t1) == take(t2));
  }
}

TEST_CASE("fixtures list covers the corpus") {
  bv_text* out = nullptr;
  CHECK(bv_fixtures(BV_MODE_RECORDS, &out) == BV_OK);
  std::string names = take(out);
  for (const char* name : {"fig1a", "fig1b-rank1", "sec4-U3", "ex-semi-k", "fig2a-two-minimal",
                           "ex-someper", "ex-all-ldc", "chacon", "parallel-columns"})
    CHECK(names.find(name) != std::string::npos);
}
