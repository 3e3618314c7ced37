#pragma once

#include <stdexcept>
#include <string>

namespace maskfill {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid corpus data. `line()` is 1-based, 0 when not tied to a line.
class CorpusError : public Error {
 public:
  CorpusError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class NoEligibleFragment : public Error {
 public:
  using Error::Error;
};

class NoCandidate : public Error {
 public:
  using Error::Error;
};

/// Remote service unreachable, returned non-2xx, or sent a malformed body.
class BackendUnavailable : public Error {
 public:
  using Error::Error;
};

class SpanIntersectsMask : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class SizeExceedsCorpus : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure; the message carries the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace maskfill
