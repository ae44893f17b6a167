#pragma once

#include <stdexcept>
#include <string>

namespace numphase {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the domain of the operation (negative N,
/// transmissivity outside [0,1], D² = 0 on a boundary grid, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The requested truncation cannot meet the tail tolerance.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, int required_cutoff)
      : Error(what), required_cutoff_(required_cutoff) {}

  int required_cutoff() const noexcept { return required_cutoff_; }

 private:
  int required_cutoff_;
};

/// A sector builder returned a state with support outside total number N.
class SectorError : public Error {
 public:
  SectorError(const std::string& what, int total_number)
      : Error(what), total_number_(total_number) {}

  int total_number() const noexcept { return total_number_; }

 private:
  int total_number_;
};

/// Phase grid too coarse to integrate the state's trigonometric polynomial exactly.
class GridError : public Error {
 public:
  GridError(const std::string& what, int required_minimum)
      : Error(what), required_minimum_(required_minimum) {}

  int required_minimum() const noexcept { return required_minimum_; }

 private:
  int required_minimum_;
};

/// Malformed state-spec document.
class SpecError : public Error {
 public:
  using Error::Error;
};

}  // namespace numphase
