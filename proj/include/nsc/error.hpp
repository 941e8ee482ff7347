#ifndef NSC_ERROR_HPP_
#define NSC_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace nsc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text; the message carries the row/column location.
class ParseError : public Error {
  public:
    using Error::Error;
};

/// Input parsed but violates a data invariant (missing label, duplicate name, ...).
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// A caller-supplied parameter is out of range.
class ArgumentError : public Error {
  public:
    using Error::Error;
};

/// The design cannot support the requested fit (n <= K, zero variance, empty class in a fold).
class DegenerateError : public Error {
  public:
    using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace nsc

#endif  // NSC_ERROR_HPP_
