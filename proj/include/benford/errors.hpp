#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace benford {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The CRT capacity of an NTT plan, or the 128-bit coefficient storage, is
/// too small for a product.
class CapacityExceeded : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

/// p divides the discriminant of the curve.
class BadReduction : public Error {
 public:
  BadReduction(std::uint64_t p)
      : Error("bad reduction at p = " + std::to_string(p)), prime(p) {}
  std::uint64_t prime;
};

/// |lambda(p)| exceeds 2 p^{(k-1)/2} beyond conversion slack.
class DeligneViolation : public Error {
 public:
  DeligneViolation(std::uint64_t p)
      : Error("Deligne bound violated at p = " + std::to_string(p)), prime(p) {}
  std::uint64_t prime;
};

}  // namespace benford
