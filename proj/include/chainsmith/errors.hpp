// Copyright 2026 The chainsmith Authors
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

#ifndef CHAINSMITH_ERRORS_HPP
#define CHAINSMITH_ERRORS_HPP

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace chainsmith {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidChain : public Error {
 public:
  using Error::Error;
};

class InvalidTarget : public Error {
 public:
  using Error::Error;
};

class InvalidSpectrum : public Error {
 public:
  using Error::Error;
};

class SpectrumMismatch : public Error {
 public:
  using Error::Error;
};

class NumericalBreakdown : public Error {
 public:
  using Error::Error;
};

class InvalidWeights : public Error {
 public:
  using Error::Error;
};

class NoValidRoot : public Error {
 public:
  using Error::Error;
};

class PatternMismatch : public Error {
 public:
  using Error::Error;
};

class RootNotBracketed : public Error {
 public:
  using Error::Error;
};

class DegenerateMoment : public Error {
 public:
  using Error::Error;
};

class UnsupportedTarget : public Error {
 public:
  using Error::Error;
};

/// Raised when an iterative designer stops without meeting its tolerance.
/// Carries the best weights seen so callers can inspect or restart from them.
class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string &what, double residual, Eigen::VectorXd best_weights, int iterations)
      : Error(what), residual(residual), best_weights(std::move(best_weights)), iterations(iterations) {}

  double residual;
  Eigen::VectorXd best_weights;
  int iterations;
};

}  // namespace chainsmith

#endif
