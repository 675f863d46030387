#include "statbundle/error.hpp"

namespace statbundle {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidSpace: return "invalid sample space";
    case ErrorKind::Boundary: return "boundary density";
    case ErrorKind::Normalization: return "normalization";
    case ErrorKind::SizeMismatch: return "size mismatch";
    case ErrorKind::SpaceMismatch: return "space mismatch";
    case ErrorKind::BaseMismatch: return "base mismatch";
    case ErrorKind::NotInFiber: return "not in fiber";
    case ErrorKind::IndexOutOfRange: return "index out of range";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::NonFinite: return "non-finite value";
    case ErrorKind::Identifiability: return "identifiability";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "i/o";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

}  // namespace statbundle
