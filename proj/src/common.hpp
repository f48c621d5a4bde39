#ifndef BV_COMMON_HPP
#define BV_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace bv {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Arguments that violate an operation's contract (bad indices, bad windows).
class ContractError : public std::invalid_argument {
 public:
  explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

// Inputs that are syntactically or structurally malformed (files, tables).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Desk-scale guards: a computation would materialize more than the
// configured ceiling allows.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Cross-checked internal assertions (e.g. the two LDC routes disagreeing).
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

// Expansion ceiling for flat words; overridable via BV_MAX_BLOCK_LEN.
std::int64_t max_block_len();

}  // namespace bv

#endif
