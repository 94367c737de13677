//
// Copyright 2026 The Greybox Authors
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

#ifndef GREYBOX_ERRORS_H_
#define GREYBOX_ERRORS_H_

#include <stdexcept>
#include <string>

namespace greybox {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

// A perturbation mask whose length does not match the sentence word count.
class LengthMismatchError : public InvalidArgumentError {
 public:
  using InvalidArgumentError::InvalidArgumentError;
};

class IndexOutOfRangeError : public InvalidArgumentError {
 public:
  using InvalidArgumentError::InvalidArgumentError;
};

// Malformed input file. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message
                       : message),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

// Success rate or average confidence over an empty population.
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// A model could not answer a query. Callers must treat this as "model
// unavailable" and never as "not fooled".
class QueryFailure : public Error {
 public:
  QueryFailure(const std::string& endpoint, const std::string& message,
               int status = 0)
      : Error(endpoint + ": " + message),
        endpoint_(endpoint),
        status_(status) {}

  const std::string& endpoint() const { return endpoint_; }
  // HTTP status when one was received, else 0.
  int status() const { return status_; }

 private:
  std::string endpoint_;
  int status_;
};

// Connection refused, reset, DNS failure and similar transport problems.
class TransportError : public QueryFailure {
 public:
  using QueryFailure::QueryFailure;
};

class TimeoutError : public QueryFailure {
 public:
  using QueryFailure::QueryFailure;
};

// Non-2xx HTTP status.
class HttpStatusError : public QueryFailure {
 public:
  using QueryFailure::QueryFailure;
};

// Body is not JSON or lacks the expected fields.
class MalformedResponseError : public QueryFailure {
 public:
  using QueryFailure::QueryFailure;
};

// Well-formed response that is not a valid label distribution.
class InvariantViolationError : public QueryFailure {
 public:
  using QueryFailure::QueryFailure;
};

}  // namespace greybox

#endif  // GREYBOX_ERRORS_H_
