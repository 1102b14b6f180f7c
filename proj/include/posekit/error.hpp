#pragma once

#include <stdexcept>
#include <string>

namespace posekit {

/// Base class for every error raised by this library.
class PoseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unsupported bytes/JSON while decoding external data.
class FormatError : public PoseError {
public:
  using PoseError::PoseError;
};

/// Invalid argument or state for an operation (bad extents, unknown point
/// names, out-of-range parameters, ...).
class ValueError : public PoseError {
public:
  using PoseError::PoseError;
};

/// Filesystem-level failure (unreadable input, unwritable output).
class IoError : public PoseError {
public:
  using PoseError::PoseError;
};

} // namespace posekit
