#pragma once

#include <stdexcept>

namespace inspectfdi {

/// Bad scenario file or override; the message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Observer coincides with a POI: zero sensing distance would mean
/// infinite information and break the fusion.
class SingularGeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite state produced while propagating dynamics.
class PropagationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Report files could not be written; the message names the path.
class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace inspectfdi
