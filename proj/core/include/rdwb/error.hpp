#pragma once

#include <stdexcept>
#include <string>

namespace rdwb {

// Every failure the library reports derives from Error; the CLI maps the
// subclasses onto its exit-code contract.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A letter or generator name that is not part of the model's alphabet.
class AlphabetError : public Error {
 public:
  using Error::Error;
};

// Caller broke a precondition: mismatched models, wrong family, bad sizes.
class UsageError : public Error {
 public:
  using Error::Error;
};

// An element was requested from a ball that does not contain it.
class RangeError : public Error {
 public:
  using Error::Error;
};

// A computation needs more elements than the configured budget allows,
// or the enumerated ball is too small to certify an answer.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// A cache file is corrupt, truncated, or was written for another model.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// The group fails a structural hypothesis at a concrete witness (for
// example a triangle with no central decomposition).
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A report or cache file could not be written or read.
class IoError : public Error {
 public:
  using Error::Error;
};

// Invalid experiment configuration; `field` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace rdwb
