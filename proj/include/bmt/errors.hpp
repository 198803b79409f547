#pragma once

#include <stdexcept>

namespace bmt {

// Base class for all library errors. The CLI maps these to exit code 2.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct RankDeficient : Error { using Error::Error; };
struct DegenerateRegressor : Error { using Error::Error; };
struct InsufficientColumns : Error { using Error::Error; };
struct InsufficientRows : Error { using Error::Error; };
struct InvalidArgument : Error { using Error::Error; };
struct NonFinite : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct EmptyAfterFiltering : Error { using Error::Error; };

}  // namespace bmt
