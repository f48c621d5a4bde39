#ifndef BV_IO_HPP
#define BV_IO_HPP

#include <string>
#include <variant>

#include "diagram.hpp"

namespace bv {

// Line-oriented diagram format ("bv 1") and recursion format ("bvrec 1").
// Writers are bit-exact: fixed key order, one datum per line, '\n'
// terminators. '#' starts a comment.

std::string write_diagram(const OrderedDiagram& d);
std::string write_recursion(const RecursionTable& t);

OrderedDiagram read_diagram(const std::string& text);
RecursionTable read_recursion(const std::string& text);

// Sniffs the version line and parses either format; recursion inputs are
// returned alongside their diagram form.
struct LoadedSystem {
  OrderedDiagram diagram;
  std::optional<RecursionTable> table;  // present when the input was a recursion
};
LoadedSystem read_system(const std::string& text);

std::string slurp_file(const std::string& path);  // throws ParseError on I/O failure

}  // namespace bv

#endif
