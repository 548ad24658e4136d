#pragma once
#include <stdexcept>
#include <string>

namespace mflab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// wrong matrix dimension, mismatched variable counts
struct DimensionError : Error {
  using Error::Error;
};

// a matrix that is not a valid density matrix (non-PSD, wrong trace)
struct InvalidStateError : Error {
  using Error::Error;
};

// coordinates outside the state body
struct OutOfBodyError : InvalidStateError {
  using InvalidStateError::InvalidStateError;
};

// operator size exceeds the configured budget
struct SizeError : Error {
  using Error::Error;
};

struct UnsupportedBackendError : Error {
  using Error::Error;
};

// requested tail/coefficient beyond the computed table
struct TableRangeError : Error {
  using Error::Error;
};

// 2*M*alpha >= delta_est: majorant bounds do not apply
struct ConvergenceDomainError : Error {
  using Error::Error;
};

struct SectorError : Error {
  using Error::Error;
};

// polynomial text error; pos is a byte offset into the input
struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t pos_) : Error(msg), pos(pos_) {}
  std::size_t pos = 0;
};

// scenario config error with location
struct ConfigError : Error {
  ConfigError(const std::string& msg, int line_, int col_) : Error(msg), line(line_), col(col_) {}
  int line = 0;
  int col = 0;
};

// --certify was requested but a result is outside the certified window
struct CertificationError : Error {
  using Error::Error;
};

}  // namespace mflab
