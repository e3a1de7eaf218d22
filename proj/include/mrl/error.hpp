#pragma once

#include <stdexcept>
#include <string>

namespace mrl {

enum class ErrorCode
{
  invalid_argument,
  domain,
  data,
  numeric,
  selection,
  config,
  io
};

//! Single exception type for the library; the code drives C API status
//! mapping and CLI exit codes.
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string& what)
    : std::runtime_error(what)
    , code_(code)
  {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void
fail(ErrorCode code, const std::string& what)
{
  throw Error(code, what);
}

} // namespace mrl
