// Copyright 2026 The qst Authors
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

#ifndef QST_ERRORS_HPP_
#define QST_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <utility>

namespace qst {

/// Base of every error thrown by the library. `exit_code()` is the process
/// exit status the CLI reports for this category.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 1; }
};

/// Invalid argument. `field()` names the offending parameter.
class ParameterError : public Error {
 public:
  ParameterError(std::string field, const std::string &what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string &field() const noexcept { return field_; }
  int exit_code() const noexcept override { return 2; }

 private:
  std::string field_;
};

/// A root or optimum that the caller asked for does not exist in the bracket.
class RangeError : public Error {
 public:
  RangeError(const std::string &what, double peak)
      : Error(what), peak_(peak) {}
  /// Best value of the objective seen while searching.
  double peak() const noexcept { return peak_; }
  int exit_code() const noexcept override { return 3; }

 private:
  double peak_;
};

/// Certification checks failed.
class CertificationError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

/// A numerical contract (convergence, orthogonality, fit quality) was violated.
class NumericError : public Error {
 public:
  NumericError(const std::string &what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }
  int exit_code() const noexcept override { return 5; }

 private:
  double residual_;
};

/// The quadratic-in-cos(theta) fidelity model did not fit the channel.
class ModelError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Problem size exceeds what the brute-force oracle accepts.
class CapacityError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

}  // namespace qst

#endif  // QST_ERRORS_HPP_
