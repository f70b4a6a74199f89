#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace symdyn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A finite universe was asked for a vertex it does not contain.
class UniverseExhausted : public Error {
 public:
  using Error::Error;
};

// An operation needs out-neighbours but the digraph only enumerates in-neighbours.
class MissingOutNeighbors : public Error {
 public:
  using Error::Error;
};

// A configuration does not cover the cells an evaluation needs.
class InsufficientDomain : public Error {
 public:
  using Error::Error;
};

// An exhaustive enumeration would exceed the configured cap.
class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, double required_log2)
      : Error(what), required_log2_(required_log2) {}
  double required_log2() const { return required_log2_; }

 private:
  double required_log2_;
};

class NotEquicontinuous : public Error {
 public:
  using Error::Error;
};

class HorizonTooShort : public Error {
 public:
  using Error::Error;
};

class DomainMismatch : public Error {
 public:
  using Error::Error;
};

class ToleranceUnreachable : public Error {
 public:
  using Error::Error;
};

class NonDisjointBalls : public Error {
 public:
  using Error::Error;
};

// Malformed descriptor or rule table.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace symdyn
