//
// Copyright 2026 The ctxmark Authors
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
//

#ifndef CTXMARK_ERRORS_HPP_
#define CTXMARK_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ctxmark {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition (bad index, missing mask, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Transport-level failure talking to a model backend. Safe to retry.
class BackendError : public Error {
 public:
  using Error::Error;
};

// The backend answered, but with the wrong identity or a malformed body.
class ProtocolMismatch : public Error {
 public:
  using Error::Error;
};

// Input file does not follow its documented schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Extraction located a carrier whose word is outside its candidate pair.
// Signals tampering or a backend/config mismatch between the two sides.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

}  // namespace ctxmark

#endif  // CTXMARK_ERRORS_HPP_
