// Copyright 2026-present the promptfuse project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace promptfuse {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
    using Error::Error;
};

/// Zero or near-zero vectors where a direction is required, and other
/// inputs that make an operation undefined (empty softmax, k == 0, ...).
class DegenerateInput : public Error {
 public:
    using Error::Error;
};

/// A manifest or blob on disk does not match its declared layout.
class FormatError : public Error {
 public:
    using Error::Error;
};

class IoError : public Error {
 public:
    using Error::Error;
};

/// Data is structurally readable but violates a domain invariant.
class ValidationError : public Error {
 public:
    using Error::Error;
};

/// Non-finite loss, divergence, or a fusion that cancels to zero.
class NumericalError : public Error {
 public:
    using Error::Error;
};

}  // namespace promptfuse
