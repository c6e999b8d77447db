#pragma once

#include <stdexcept>

namespace torent {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct InvalidCoordinate : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };
struct InsufficientPoints : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };
struct DuplicatePoints : Error { using Error::Error; };
struct DegenerateQuery : Error { using Error::Error; };
struct QuadratureError : Error { using Error::Error; };
struct Unsupported : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace torent
