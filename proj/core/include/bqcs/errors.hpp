#pragma once

#include <stdexcept>
#include <string>

namespace bqcs {

/// Base class for every error thrown by this library.
struct error : std::runtime_error {
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid or mismatched tensor/code dimensions.
struct shape_error : error {
  explicit shape_error(const std::string& msg) : error(msg) {}
};

/// A value outside the operation's domain (NaN input, sign not in {-1,+1}, ...).
struct domain_error : error {
  explicit domain_error(const std::string& msg) : error(msg) {}
};

/// Filesystem-level failure (open, read, write).
struct io_error : error {
  explicit io_error(const std::string& msg) : error(msg) {}
};

/// A file that opened fine but does not parse: bad magic, truncated payload,
/// non-canonical code words, malformed JSON.
struct format_error : error {
  explicit format_error(const std::string& msg) : error(msg) {}
};

/// Invalid experiment configuration; the message carries the field path.
struct config_error : error {
  explicit config_error(const std::string& msg) : error(msg) {}
};

}  // namespace bqcs
