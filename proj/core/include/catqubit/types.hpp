// Copyright 2026 The catqubit Authors
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
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace catqubit {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

/// Mode sizes of a (possibly multi-mode) Hilbert space, slowest index first.
using Dims = std::vector<int>;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Base of every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI error records.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define CATQUBIT_DEFINE_ERROR(Name)                                         \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(#Name, what) {}          \
  }

CATQUBIT_DEFINE_ERROR(TruncationTooSmall);
CATQUBIT_DEFINE_ERROR(DimensionMismatch);
CATQUBIT_DEFINE_ERROR(InvalidArgument);
CATQUBIT_DEFINE_ERROR(StiffnessFailure);
CATQUBIT_DEFINE_ERROR(NoConvergence);
CATQUBIT_DEFINE_ERROR(QuadratureNoConvergence);
CATQUBIT_DEFINE_ERROR(NonExponentialDecay);
CATQUBIT_DEFINE_ERROR(NonOrthonormalBasis);

#undef CATQUBIT_DEFINE_ERROR

inline int total_size(const Dims& dims) {
  int n = 1;
  for (int d : dims) n *= d;
  return n;
}

}  // namespace catqubit
