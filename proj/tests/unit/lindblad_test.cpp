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
#include <unsupported/Eigen/KroneckerProduct>

#include "catqubit/integrator.hpp"
#include "catqubit/lindblad.hpp"
#include "catqubit/models.hpp"

namespace catqubit {
namespace {

// Column-stacking superoperator built from the textbook vec identity
// vec(A X B) = (B^T kron A) vec(X), independent of the kernel.
Matrix reference_liouvillian(const LindbladModel& m) {
  const Eigen::Index n = m.size();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix& h = m.hamiltonian().matrix();
  Matrix l = -kI * (Matrix(Eigen::kroneckerProduct(id, h)) -
                    Matrix(Eigen::kroneckerProduct(h.transpose(), id)));
  for (const auto& c : m.collapses()) {
    const Matrix& a = c.op.matrix();
    const Matrix ada = a.adjoint() * a;
    l += c.rate * (Matrix(Eigen::kroneckerProduct(a.conjugate(), a)) -
                   0.5 * Matrix(Eigen::kroneckerProduct(id, ada)) -
                   0.5 * Matrix(Eigen::kroneckerProduct(ada.transpose(), id)));
  }
  return l;
}

Matrix random_state(Eigen::Index n, unsigned seed) {
  std::srand(seed);
  const Matrix g = Matrix::Random(n, n);
  Matrix rho = g * g.adjoint();
  return rho / rho.trace();
}

LindbladModel test_model(FockDim d) {
  return models::k_photon({2, cplx(0.7, 0.2), 1.0}, d, 0.05, 0.1);
}

TEST(Rhs, MatchesKroneckerLiouvillian) {
  const FockDim d(7);
  const LindbladModel m = test_model(d);
  const Matrix rho = random_state(7, 3);
  const Matrix ref = reference_liouvillian(m) * rho.reshaped();
  const Matrix got = rhs(m, rho);
  EXPECT_LT((got.reshaped() - ref.reshaped()).cwiseAbs().maxCoeff(), 1e-12);

  const LindbladKernel k(m);
  EXPECT_LT((k.liouvillian() - reference_liouvillian(m)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Rhs, NonHermitianInputThroughApply) {
  const FockDim d(6);
  const LindbladModel m = test_model(d);
  std::srand(11);
  const Matrix x = Matrix::Random(6, 6);
  const LindbladKernel k(m);
  Matrix out;
  k.apply(x, out);
  const Matrix ref = reference_liouvillian(m) * x.reshaped();
  EXPECT_LT((out.reshaped() - ref.reshaped()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Rhs, TracePreservingAndAdjointDual) {
  const FockDim d(8);
  const LindbladModel m = test_model(d);
  const Matrix rho = random_state(8, 5);
  std::srand(9);
  Matrix obs = Matrix::Random(8, 8);
  obs = obs + obs.adjoint();
  EXPECT_LT(std::abs(rhs(m, rho).trace()), 1e-12);
  // Tr[A L(rho)] = Tr[L^dag(A) rho]
  const cplx lhs = (obs * rhs(m, rho)).trace();
  const cplx rhs_dual = (adjoint_rhs(m, obs) * rho).trace();
  EXPECT_LT(std::abs(lhs - rhs_dual), 1e-11);
  // L^dag(1) = 0
  EXPECT_LT(adjoint_rhs(m, Matrix::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Model, RejectsBadInputs) {
  const FockDim d(5);
  EXPECT_THROW(LindbladModel(annihilation(d)), InvalidArgument);
  EXPECT_THROW(LindbladModel(number(d), {{-1.0, annihilation(d)}}), InvalidArgument);
  EXPECT_THROW(LindbladModel(number(d), {{1.0, annihilation(FockDim(6))}}), DimensionMismatch);
}

TEST(DensityMatrix, Validation) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 0.5;
  EXPECT_THROW(DensityMatrix({3}, m), InvalidArgument);
  m(1, 1) = 0.5;
  m(0, 1) = 0.2;
  EXPECT_THROW(DensityMatrix({3}, m), InvalidArgument);
  m(1, 0) = 0.2;
  EXPECT_NO_THROW(DensityMatrix({3}, m));
  m(0, 0) = 1.2;
  m(1, 1) = -0.2;
  EXPECT_THROW(DensityMatrix({3}, m), InvalidArgument);
}

TEST(Measures, PurityFidelityTraceDistance) {
  const FockDim d(4);
  const DensityMatrix mixed = DensityMatrix::maximally_mixed({4});
  EXPECT_NEAR(purity(mixed), 0.25, 1e-15);
  EXPECT_NEAR(fidelity(mixed, fock(2, d)), 0.25, 1e-15);
  const DensityMatrix p0 = DensityMatrix::pure(fock(0, d));
  const DensityMatrix p1 = DensityMatrix::pure(fock(1, d));
  EXPECT_NEAR(trace_distance(p0.matrix(), p1.matrix()), 1.0, 1e-14);
  EXPECT_NEAR(trace_distance(p0.matrix(), mixed.matrix()), 0.75, 1e-14);
  EXPECT_NEAR(expect(p1, number(d)).real(), 1.0, 1e-15);
}

TEST(Integrate, AmplitudeDampingFromFockState) {
  const FockDim d(10);
  const double kappa = 0.7;
  const LindbladModel m(Operator({10}, Matrix::Zero(10, 10)), {{kappa, annihilation(d)}});
  const auto tr = integrate(m, DensityMatrix::pure(fock(6, d)), 3.0,
                            {expectation_observable("n", number(d))}, {.output_points = 30});
  const auto n = tr.real("n");
  ASSERT_EQ(tr.times.size(), n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    EXPECT_NEAR(n[i], 6.0 * std::exp(-kappa * tr.times[i]), 1e-7) << tr.times[i];
  }
  EXPECT_LT(tr.stats.max_trace_error, 1e-10);
  EXPECT_GT(tr.stats.min_eigenvalue, -1e-9);
}

TEST(Integrate, PropagatorAgreesWithDormandPrince) {
  const FockDim d(12);
  const LindbladModel m = test_model(d);
  const DensityMatrix rho0 = DensityMatrix::pure(coherent(cplx(0.5, -0.3), d));
  IntegrationOptions dp{.rtol = 1e-10, .atol = 1e-12, .output_points = 5};
  IntegrationOptions pr = dp;
  pr.method = Method::kPropagator;
  const auto a = integrate(m, rho0, 2.5, {}, dp);
  const auto b = integrate(m, rho0, 2.5, {}, pr);
  EXPECT_LT((a.final_state->matrix() - b.final_state->matrix()).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Integrate, PropagatorRefusesLargeSpaces) {
  const FockDim d(static_cast<int>(kMaxPropagatorDim) + 1);
  const LindbladModel m(number(d));
  IntegrationOptions o{.method = Method::kPropagator};
  EXPECT_THROW(integrate(m, DensityMatrix::pure(fock(0, d)), 1.0, {}, o), InvalidArgument);
}

TEST(Integrate, StepFloorRaisesStiffnessFailure) {
  const FockDim d(20);
  const LindbladModel m(number(d), {{1e6, Operator({20}, annihilation(d).matrix() *
                                                           annihilation(d).matrix())}});
  IntegrationOptions o{.h_min = 1e-3};
  EXPECT_THROW(integrate(m, DensityMatrix::pure(fock(19, d)), 1.0, {}, o), StiffnessFailure);
}

TEST(SteadyState, DrivenDampedOscillatorIsCoherent) {
  // H = F (a + a^dag), L = sqrt(k) a: <a> obeys da/dt = -iF - k a / 2.
  const double f = 0.4, kappa = 1.0;
  const FockDim d(20);
  const Operator a = annihilation(d);
  const LindbladModel m(f * (a + a.adjoint()), {{kappa, a}});
  const auto ss = steady_state(m, DensityMatrix::pure(fock(0, d)));
  const cplx beta(0.0, -2.0 * f / kappa);
  EXPECT_GT(fidelity(ss.rho, coherent(beta, d)), 1.0 - 1e-8);
  EXPECT_LT(ss.residual, 1e-9);
}

TEST(SteadyState, BudgetExhaustionRaisesNoConvergence) {
  const FockDim d(8);
  const LindbladModel m(number(d), {{1e-3, annihilation(d)}});
  EXPECT_THROW(steady_state(m, DensityMatrix::pure(fock(7, d)), {.max_time = 1.0}),
               NoConvergence);
}

TEST(Sector, RestrictedDynamicsMatchFullDynamics) {
  const FockDim d(16);
  const LindbladModel m = models::k_photon({2, 1.0, 1.0}, d);
  const Sector even = parity_sector({16}, 0);
  const DensityMatrix rho0 = DensityMatrix::pure(fock(0, d));
  const auto full = integrate(m, rho0, 1.0, {}, {.output_points = 2});
  const auto part = integrate(m.restricted(even), rho0.restricted(even), 1.0, {}, {.output_points = 2});
  const Matrix back = embed_from(part.final_state->matrix(), even, 16);
  EXPECT_LT((back - full.final_state->matrix()).cwiseAbs().maxCoeff(), 1e-8);
  const LindbladModel lossy = models::k_photon({2, 1.0, 1.0}, d, 0.0, 0.1);
  EXPECT_THROW(lossy.restricted(even), InvalidArgument);
}

}  // namespace
}  // namespace catqubit
