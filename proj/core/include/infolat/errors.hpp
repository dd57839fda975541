// Copyright 2026 The infolat Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace infolat {

// Raised when a numerical result falls outside what a valid quantum state
// allows. The CLI maps this family to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Local information below -kSsaTolerance: the entropy source violates strong
// subadditivity (broken backend or a truncated MPS).
class SsaViolation : public NumericalError {
 public:
  SsaViolation(int ell, int m, double value);

  int ell() const { return ell_; }
  int m() const { return m_; }
  double value() const { return value_; }

 private:
  int ell_;
  int m_;
  double value_;
};

class InvalidDensityMatrix : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InvalidCovariance : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace infolat
