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

#include <iosfwd>

#include "catqubit/lindblad.hpp"

/// Wigner quasi-probability W(beta) = (2/pi) Tr[D(beta) P D(beta)^dag rho] on
/// a rectangular grid, beta = x + i p. Normalised so that the integral over
/// dx dp is one.
namespace catqubit::wigner {

struct GridSpec {
  double x_min = -4.0, x_max = 4.0;
  double p_min = -4.0, p_max = 4.0;
  int resolution = 121;  // points per axis

  void validate() const;
};

struct PhaseSpaceGrid {
  std::vector<double> x, p;
  Eigen::MatrixXd values;  // values(i, j) = W(x[i] + i p[j])

  /// Trapezoidal integral over the grid.
  double integral() const;
};

/// W at a single point.
double wigner_at(const Matrix& rho, cplx beta);

/// Throws TruncationTooSmall if rho has weight above 1e-6 on its two highest
/// Fock levels. Rows of the grid are split over `jobs` threads.
PhaseSpaceGrid wigner(const DensityMatrix& rho, const GridSpec& spec = {}, int jobs = 1);

/// Header `x,p,w`, one line per point, x slowest, 9 significant digits.
void write_csv(const PhaseSpaceGrid& grid, std::ostream& out);

}  // namespace catqubit::wigner
