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

#include <gtest/gtest.h>

#include "catqubit/models.hpp"
#include "catqubit/reduction.hpp"

namespace catqubit {
namespace {

TEST(Models, StabilizedAmplitude) {
  EXPECT_NEAR(std::abs(models::stabilized_alpha(2, 2.0, 1.0) - 2.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(models::stabilized_alpha(4, 8.0, 1.0) - 2.0), 0.0, 1e-14);
  for (int k : {2, 4}) {
    const cplx a(1.3, 0.2);
    EXPECT_NEAR(std::abs(models::stabilized_alpha(k, models::drive_for_alpha(k, a, 0.7), 0.7) - a),
                0.0, 1e-14);
  }
  EXPECT_THROW(models::stabilized_alpha(2, 1.0, 0.0), InvalidArgument);
  EXPECT_THROW(models::k_photon({3, 1.0, 1.0}, FockDim(10)), InvalidArgument);
}

TEST(Models, CatsAreDarkStates) {
  // For the pure k-photon model, L(|C><C|) = 0 for any cat in the manifold.
  const FockDim d(40);
  for (int k : {2, 4}) {
    const cplx alpha = 1.8;
    const LindbladModel m = models::k_photon({k, models::drive_for_alpha(k, alpha, 1.0), 1.0}, d);
    for (int mu = 0; mu < k; ++mu) {
      const Ket c = cat({alpha, k, mu}, d);
      const Matrix rho = c.vector() * c.vector().adjoint();
      EXPECT_LT(rhs(m, rho).cwiseAbs().maxCoeff(), 1e-9) << k << " " << mu;
    }
  }
}

TEST(Models, EntanglingCouplingPreservesTotalParity) {
  const FockDim d(8);
  const LindbladModel m = models::entangling({2, 1.0, 1.0}, 0.05, d);
  EXPECT_EQ(m.dims(), (Dims{8, 8}));
  EXPECT_NO_THROW(m.restricted(total_parity_sector(m.dims(), 0)));
}

TEST(Reduction, AdiabaticParameters) {
  reduction::CircuitParams p;
  const auto r = reduction::adiabatic_params(p);
  EXPECT_NEAR(r.eps_2ph, 2.0 * 0.2 * 0.05, 1e-15);
  EXPECT_NEAR(r.kappa_2ph, 4.0 * 0.05 * 0.05, 1e-15);
  EXPECT_NEAR(r.alpha, 2.0, 1e-15);
  // The reduced model stabilizes the same amplitude.
  EXPECT_NEAR(std::abs(models::stabilized_alpha(2, r.eps_2ph, r.kappa_2ph)), 2.0, 1e-14);
  p.g = -1.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(Reduction, ModelsAndSectors) {
  reduction::CircuitParams p;
  const auto full = reduction::build_full_model(p, FockDim(24), FockDim(4));
  EXPECT_EQ(full.dims(), (Dims{24, 4}));
  const Sector s = reduction::mode_parity_sector(full.dims(), 0, 0);
  EXPECT_EQ(s.size(), 48u);
  EXPECT_THROW(reduction::build_reduced_model(p, FockDim(8)), TruncationTooSmall);
  const auto red = reduction::build_reduced_model(p, FockDim(24));
  EXPECT_NEAR(red.collapses().front().rate, 0.01, 1e-15);
}

}  // namespace
}  // namespace catqubit
