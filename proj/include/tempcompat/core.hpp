// Copyright 2026 The tempcompat Authors
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

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace tempcompat {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Tensor factor of a bipartite system A ⊗ B.
enum class Side { A, B };

inline constexpr Side other(Side s) { return s == Side::A ? Side::B : Side::A; }

inline constexpr std::string_view to_string(Side s) { return s == Side::A ? "A" : "B"; }

/// Every numerical threshold used by the library. Relative thresholds are
/// scaled by max(1, magnitude) of the quantity being tested.
struct Tolerances {
  double hermiticity = 1e-10;  // max-norm of M - M^dagger, relative
  double psd = 1e-9;           // lambda_min >= -psd * max(1, lambda_max)
  double trace = 1e-9;         // |Tr rho - 1|
  double cluster = 1e-8;       // eigenvalue gap, relative to max(1, spectral radius)
  double rank = 1e-12;         // p counts as zero when p <= rank * p_max
  double verdict = 1e-9;       // positivity threshold for compatibility verdicts
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes or factor dimensions do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A value violates a type invariant (hermiticity, trace, positivity, ...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// Two independent computations of the same verdict disagree.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_diff: shape mismatch");
  }
  return max_abs(a - b);
}

}  // namespace tempcompat
