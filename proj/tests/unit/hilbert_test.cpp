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

#include "catqubit/hilbert.hpp"

namespace catqubit {
namespace {

double lgamma_poisson(int n, double mean) {
  return std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
}

TEST(FockDim, RejectsTinySpaces) {
  EXPECT_THROW(FockDim(1), InvalidArgument);
  EXPECT_EQ(FockDim(7).size(), 7);
}

TEST(Ladder, CommutatorIsIdentityAwayFromTheEdge) {
  const FockDim d(12);
  const Matrix a = annihilation(d).matrix();
  const Matrix c = a * a.adjoint() - a.adjoint() * a;
  for (int n = 0; n < 11; ++n) {
    for (int m = 0; m < 11; ++m) {
      EXPECT_NEAR(std::abs(c(n, m) - (n == m ? 1.0 : 0.0)), 0.0, 1e-14);
    }
  }
  EXPECT_NEAR((creation(d).matrix() - a.adjoint()).norm(), 0.0, 1e-15);
  EXPECT_NEAR((number(d).matrix() - a.adjoint() * a).norm(), 0.0, 1e-13);
}

TEST(Ladder, ParityIsDiagonalSigns) {
  const Matrix p = parity(FockDim(6)).matrix();
  for (int n = 0; n < 6; ++n) EXPECT_DOUBLE_EQ(p(n, n).real(), n % 2 ? -1.0 : 1.0);
}

TEST(Coherent, PoissonStatisticsAndEigenvalue) {
  const cplx alpha(1.2, -0.7);
  const FockDim d(40);
  const Ket k = coherent(alpha, d);
  EXPECT_NEAR(k.norm(), 1.0, 1e-12);
  const double mean = std::norm(alpha);
  for (int n = 0; n < 15; ++n) {
    EXPECT_NEAR(std::norm(k.vector()(n)), lgamma_poisson(n, mean), 1e-13) << n;
  }
  const Ket ak = annihilation(d) * k;
  EXPECT_NEAR(std::abs(k.inner(ak) - alpha), 0.0, 1e-10);
}

TEST(Coherent, DisplacementOfVacuum) {
  const FockDim d(40);
  const cplx beta(0.8, 0.4);
  const Ket viaD = displacement(beta, d) * fock(0, d);
  EXPECT_NEAR(std::abs(viaD.inner(coherent(beta, d))), 1.0, 1e-10);
}

TEST(Cat, ParityEigenstates) {
  const FockDim d(40);
  const Operator par = parity(d);
  const Ket even = cat(CatSpec::even(2.0), d);
  const Ket odd = cat(CatSpec::odd(2.0), d);
  EXPECT_NEAR(std::abs(even.inner(par * even) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(odd.inner(par * odd) + 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(even.inner(odd)), 0.0, 1e-14);
}

TEST(Cat, FourComponentSupportIsModFour) {
  const FockDim d(40);
  for (int mu = 0; mu < 4; ++mu) {
    const Ket k = cat(CatSpec::four(1.5, mu), d);
    EXPECT_NEAR(k.norm(), 1.0, 1e-12);
    for (int n = 0; n < 40; ++n) {
      if (n % 4 != mu) EXPECT_LT(std::abs(k.vector()(n)), 1e-14) << mu << " " << n;
    }
  }
}

TEST(Cat, OddSectorOfVacuumIsRejected) {
  EXPECT_THROW(cat(CatSpec::odd(0.0), FockDim(10)), InvalidArgument);
  EXPECT_THROW(cat({1.0, 3, 0}, FockDim(10)), InvalidArgument);
}

TEST(Truncation, AdequacyRule) {
  for (double a : {0.5, 1.0, 2.0, 3.0}) {
    const int n = minimum_dim(a);
    EXPECT_LT(coherent_tail_weight(a, n), kTailTolerance);
    EXPECT_GE(coherent_tail_weight(a, n - 1), kTailTolerance);
    EXPECT_GE(default_dim(a), n);
    EXPECT_NO_THROW(check_truncation(a, FockDim(n)));
    EXPECT_THROW(check_truncation(a, FockDim(n - 1)), TruncationTooSmall);
  }
}

TEST(Tensor, EmbedMatchesKronecker) {
  const FockDim d(4);
  const Dims dims{4, 4};
  const Operator a1 = embed(annihilation(d), 0, dims);
  const Operator a2 = embed(annihilation(d), 1, dims);
  EXPECT_NEAR((a1.matrix() - tensor(annihilation(d), identity(d)).matrix()).norm(), 0.0, 1e-15);
  EXPECT_NEAR((a2.matrix() - tensor(identity(d), annihilation(d)).matrix()).norm(), 0.0, 1e-15);
  // modes commute
  EXPECT_NEAR((a1 * a2 - a2 * a1).matrix().norm(), 0.0, 1e-14);
  const Ket k = tensor(fock(1, d), fock(2, d));
  EXPECT_DOUBLE_EQ(std::abs(k.vector()(1 * 4 + 2)), 1.0);
}

TEST(Tensor, MismatchedOperandsThrow) {
  EXPECT_THROW(annihilation(FockDim(4)) + annihilation(FockDim(5)), DimensionMismatch);
  EXPECT_THROW(embed(annihilation(FockDim(4)), 2, {4, 4}), InvalidArgument);
}

TEST(Sector, ParityRestrictionRoundTrip) {
  const FockDim d(16);
  const Sector even = parity_sector({16}, 0);
  ASSERT_EQ(even.size(), 8u);
  const Ket k = cat(CatSpec::even(1.0), d);
  const Ket small = restrict_to(k, even);
  const Ket back = embed_from(small, even, {16});
  EXPECT_NEAR((back.vector() - k.vector()).norm(), 0.0, 1e-15);

  const Sector both = total_parity_sector({4, 4}, 0);
  EXPECT_EQ(both.size(), 8u);
  const Sector custom =
      sector_where({4, 4}, [](std::span<const int> lv) { return lv[0] == lv[1]; });
  EXPECT_EQ(custom, (Sector{0, 5, 10, 15}));
}

TEST(Rotation, ActsAsPhaseOnCoherentStates) {
  const FockDim d(40);
  const Ket r = rotation(0.3, d) * coherent(1.0, d);
  EXPECT_NEAR(std::abs(r.inner(coherent(std::polar(1.0, 0.3), d))), 1.0, 1e-10);
}

}  // namespace
}  // namespace catqubit
