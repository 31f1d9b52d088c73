#include "coedit/error.hpp"

namespace coedit {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::UnterminatedLiteral: return "UnterminatedLiteral";
    case ErrorCode::MalformedScript: return "MalformedScript";
    case ErrorCode::AnchorNotFound: return "AnchorNotFound";
    case ErrorCode::AmbiguousAnchor: return "AmbiguousAnchor";
    case ErrorCode::OverlappingEdits: return "OverlappingEdits";
    case ErrorCode::NoUniqueAnchor: return "NoUniqueAnchor";
    case ErrorCode::RepoUnreadable: return "RepoUnreadable";
    case ErrorCode::EmptyProject: return "EmptyProject";
    case ErrorCode::EmptyValidation: return "EmptyValidation";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::BackendError: return "BackendError";
    case ErrorCode::BackendUnreachable: return "BackendUnreachable";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> position)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      position_(position) {}

}  // namespace coedit
