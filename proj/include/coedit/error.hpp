#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace coedit {

enum class ErrorCode {
  InvalidArgument,
  Io,
  UnterminatedLiteral,
  MalformedScript,
  AnchorNotFound,
  AmbiguousAnchor,
  OverlappingEdits,
  NoUniqueAnchor,
  RepoUnreadable,
  EmptyProject,
  EmptyValidation,
  LengthMismatch,
  BackendError,
  BackendUnreachable,
};

const char* to_string(ErrorCode code) noexcept;

// All failures raised by the library carry one of the codes above. The C API
// maps them one-to-one onto coedit_status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> position = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  // Byte offset into the offending input, when the error has one.
  std::optional<std::size_t> position() const noexcept { return position_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> position_;
};

}  // namespace coedit
