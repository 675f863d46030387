#pragma once

#include <stdexcept>
#include <string>

namespace statbundle {

enum class ErrorKind {
  InvalidSpace,     // bad reference weights
  Boundary,         // density would leave the open simplex
  Normalization,    // total mass too far from 1
  SizeMismatch,     // vector lengths disagree
  SpaceMismatch,    // objects live on different sample spaces
  BaseMismatch,     // fiber vector attached to a different density
  NotInFiber,       // nonzero expectation under the base density
  IndexOutOfRange,
  Domain,           // curve queried outside its time interval
  NonFinite,
  Identifiability,  // linearly dependent sufficient statistics
  Config,
  Io,
  Parse,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace statbundle
