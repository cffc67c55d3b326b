#pragma once

#include <stdexcept>
#include <string>

namespace gpc {

/// Malformed or unreadable input data (calibration, points, records files).
class DataError : public std::runtime_error {
  public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gpc
