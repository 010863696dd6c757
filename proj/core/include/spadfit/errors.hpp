#pragma once

#include <stdexcept>
#include <string>

namespace spadfit {

// Base class for everything this library throws, so the CLI boundary can
// catch one family and turn it into an exit status.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error { using Error::Error; };
struct FrameError : Error { using Error::Error; };
struct OrderingError : Error { using Error::Error; };
struct BinningError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct EstimationError : Error { using Error::Error; };
struct ShapeError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace spadfit
