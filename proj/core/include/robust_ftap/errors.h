// Copyright 2026 The robust_ftap Authors
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

#ifndef ROBUST_FTAP_ERRORS_H_
#define ROBUST_FTAP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace robust_ftap {

// Every failure raised by the library derives from Error. The kind is used by
// the command line front-end to choose an exit code.
enum class ErrorKind {
  kInvalidInput,
  kDimensionMismatch,
  kEmptyPolytope,
  kEnumerationCapExceeded,
  kHypothesisViolated,
  kNaViolated,
  kEmptyMartingalePolytope,
  kBoundViolated,
  kInternal,
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& m)
      : Error(ErrorKind::kInvalidInput, m) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& m)
      : Error(ErrorKind::kDimensionMismatch, m) {}
};

class EmptyPolytope : public Error {
 public:
  explicit EmptyPolytope(const std::string& m)
      : Error(ErrorKind::kEmptyPolytope, m) {}
};

class EnumerationCapExceeded : public Error {
 public:
  explicit EnumerationCapExceeded(const std::string& m)
      : Error(ErrorKind::kEnumerationCapExceeded, m) {}
};

class HypothesisViolated : public Error {
 public:
  explicit HypothesisViolated(const std::string& m)
      : Error(ErrorKind::kHypothesisViolated, m) {}
};

class NaViolated : public Error {
 public:
  explicit NaViolated(const std::string& m)
      : Error(ErrorKind::kNaViolated, m) {}
};

class EmptyMartingalePolytope : public Error {
 public:
  explicit EmptyMartingalePolytope(const std::string& m)
      : Error(ErrorKind::kEmptyMartingalePolytope, m) {}
};

// A guaranteed inequality failed to hold. Signals a bug, never bad input.
class BoundViolated : public Error {
 public:
  explicit BoundViolated(const std::string& m)
      : Error(ErrorKind::kBoundViolated, m) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& m)
      : Error(ErrorKind::kInternal, m) {}
};

}  // namespace robust_ftap

#endif  // ROBUST_FTAP_ERRORS_H_
