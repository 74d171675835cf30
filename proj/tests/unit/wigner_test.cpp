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

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "catqubit/wigner.hpp"

namespace catqubit::wigner {
namespace {

TEST(Wigner, CoherentStateGaussian) {
  const FockDim d(40);
  const cplx alpha(1.0, -0.5);
  const Matrix rho = DensityMatrix::pure(coherent(alpha, d)).matrix();
  for (cplx beta : {cplx(0.0), cplx(1.0, -0.5), cplx(0.3, 0.7), cplx(-1.2, -0.4)}) {
    const double ref = 2.0 / kPi * std::exp(-2.0 * std::norm(beta - alpha));
    EXPECT_NEAR(wigner_at(rho, beta), ref, 1e-10) << beta;
  }
}

TEST(Wigner, ParityAtTheOrigin) {
  const FockDim d(40);
  EXPECT_NEAR(wigner_at(DensityMatrix::pure(fock(1, d)).matrix(), 0.0), -2.0 / kPi, 1e-12);
  EXPECT_NEAR(wigner_at(DensityMatrix::pure(cat(CatSpec::even(2.0), d)).matrix(), 0.0), 2.0 / kPi,
              1e-10);
  EXPECT_NEAR(wigner_at(DensityMatrix::pure(cat(CatSpec::odd(2.0), d)).matrix(), 0.0), -2.0 / kPi,
              1e-10);
}

TEST(Wigner, FockStateLaguerreForm) {
  // W_n(beta) = 2/pi (-1)^n L_n(4|beta|^2) exp(-2|beta|^2)
  const FockDim d(20);
  const cplx beta(0.6, 0.3);
  const double x = 4.0 * std::norm(beta);
  for (int n : {0, 2, 5}) {
    const double ref = 2.0 / kPi * (n % 2 ? -1.0 : 1.0) * std::laguerre(n, x) * std::exp(-0.5 * x);
    EXPECT_NEAR(wigner_at(DensityMatrix::pure(fock(n, d)).matrix(), beta), ref, 1e-12) << n;
  }
}

TEST(Wigner, GridIntegratesToOneAndIsThreadIndependent) {
  const FockDim d(40);
  const DensityMatrix rho = DensityMatrix::pure(cat(CatSpec::odd(1.5), d));
  const GridSpec spec{-4.5, 4.5, -4.5, 4.5, 91};
  const PhaseSpaceGrid one = wigner(rho, spec, 1);
  const PhaseSpaceGrid many = wigner(rho, spec, 3);
  EXPECT_NEAR(one.integral(), 1.0, 1e-4);
  EXPECT_EQ((one.values - many.values).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_NEAR(one.values(45, 45), -2.0 / kPi, 1e-10);
  std::ostringstream os;
  write_csv(one, os);
  EXPECT_EQ(os.str().substr(0, 6), "x,p,w\n");
}

TEST(Wigner, RejectsBadGridsAndTruncatedStates) {
  EXPECT_THROW((GridSpec{0, 1, 0, 1, 1}.validate()), InvalidArgument);
  EXPECT_THROW((GridSpec{1, 0, 0, 1, 10}.validate()), InvalidArgument);
  Matrix top = Matrix::Zero(8, 8);
  top(7, 7) = 1.0;
  EXPECT_THROW(wigner(DensityMatrix({8}, top)), TruncationTooSmall);
}

}  // namespace
}  // namespace catqubit::wigner
