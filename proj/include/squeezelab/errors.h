// Copyright 2026 The squeezelab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SQUEEZELAB_ERRORS_H_
#define SQUEEZELAB_ERRORS_H_

#include <stdexcept>
#include <string>

namespace squeezelab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (index out of range, bad shape,
/// negative duration, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Operands live on different Hilbert-space layouts.
class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// The Fock cutoff cannot represent the requested state to the configured
/// tail tolerance.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical procedure failed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace squeezelab

#endif  // SQUEEZELAB_ERRORS_H_
