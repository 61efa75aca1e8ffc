#pragma once

#include <stdexcept>
#include <string>

namespace pwb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input to a model constructor (wrong domain, dangling id, ...).
class ModelError : public Error {
 public:
  using Error::Error;
};

// A finite object would exceed the configured size limit.
class SizeExceeded : public Error {
 public:
  using Error::Error;
};

// A type application needs an object the probe universe does not contain.
class ClosureError : public Error {
 public:
  using Error::Error;
};

class FuelExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace pwb
