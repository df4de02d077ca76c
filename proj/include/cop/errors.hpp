#pragma once

#include <stdexcept>
#include <string>

namespace cop {

struct CostingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EstimationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingCellError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// HTTP-level failure (connect error, non-2xx after retries).
struct TransportError : std::runtime_error {
  explicit TransportError(const std::string& what, int status = 0)
      : std::runtime_error(what), http_status(status) {}
  int http_status;
};

/// Well-formed transport, malformed payload (e.g. missing usage fields).
struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cop
