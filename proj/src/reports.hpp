#ifndef BV_REPORTS_HPP
#define BV_REPORTS_HPP

#include <string>
#include <vector>

#include "corpus.hpp"
#include "io.hpp"

namespace bv::reports {

enum class Mode { Human, Records };

// Text report plus the process-level status contract:
// 0 pass/periodic, 1 fail/aperiodic, 2 carry exhaustion, 3 horizon-limited.
struct Outcome {
  int status = 0;
  std::string text;
};

struct System {
  OrderedDiagram diagram;
  std::optional<RecursionTable> table;
  std::string origin;
};

System load_path(const std::string& path);
System load_fixture(const std::string& name);
System load_text(const std::string& text, const std::string& origin);

Outcome run_validate(const System& s, int horizon, Mode mode);
Outcome run_blocks(const System& s, int level, int vertex, int k, std::int64_t offset,
                   std::int64_t len, std::int64_t max_len, Mode mode);
Outcome run_coding(const System& s, const std::string& start, int k, std::int64_t len, Mode mode);
Outcome run_period(const System& s, int k, int horizon, std::int64_t prefix_len, Mode mode);
Outcome run_semi(const System& s, int level, int k, Mode mode);
Outcome run_ldc(const System& s, int level, int k, Mode mode);
Outcome run_verdict(const System& s, int horizon, bool sweep, int sweep_kmax, Mode mode);
Outcome run_telescope(const System& s, const std::vector<int>& cuts, Mode mode);
Outcome run_dot(const System& s, int depth);
Outcome run_fixtures_list(Mode mode);
Outcome run_fixture_emit(const std::string& name, bool as_recursion);

}  // namespace bv::reports

#endif
