// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace sabf {

/// Base of every error raised by the library. The CLI maps the concrete
/// subclasses to process exit codes (validation 1, I/O 2, numerical 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates a documented precondition or invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A computation produced (or would produce) a non-finite or undefined result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace sabf
