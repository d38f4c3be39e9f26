#pragma once

#include <stdexcept>
#include <string>

namespace sbf {

// Input: malformed data. Precondition: mathematical precondition violated.
// Budget: a search or enumeration cap was hit. Unsupported: outside the
// implemented ring/oracle combinations.
enum class ErrorKind { Input, Precondition, Budget, Unsupported, Internal };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

inline void require(bool cond, ErrorKind k, const std::string& msg) {
  if (!cond) fail(k, msg);
}

}  // namespace sbf
