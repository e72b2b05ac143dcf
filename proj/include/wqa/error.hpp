#pragma once

#include <stdexcept>
#include <string>

namespace wqa {

enum class ErrorKind {
  InvalidArgument,
  Io,
  Parse,
  Domain,
};

// Every failure raised by the library carries a kind so the C boundary can
// translate it into a status code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorKind::InvalidArgument, what);
}

}  // namespace wqa
