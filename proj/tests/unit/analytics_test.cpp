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

#include "catqubit/analytics.hpp"
#include "catqubit/models.hpp"

namespace catqubit::analytics {
namespace {

// Composite Simpson rule, used as an independent quadrature oracle.
template <class F>
double simpson(F f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

TEST(Bessel, MatchesStandardLibrary) {
  for (double x : {0.0, 0.3, 1.0, 4.0, 9.0, 25.0}) {
    for (int q : {0, 1, 2, 5, 10, 30}) {
      const double ref = std::cyl_bessel_i(static_cast<double>(q), x);
      EXPECT_NEAR(bessel_i(q, x), ref, 1e-13 * std::max(1.0, ref)) << q << " " << x;
      EXPECT_NEAR(bessel_i_scaled(q, x), std::exp(-x) * ref, 1e-14) << q << " " << x;
    }
  }
}

TEST(Bessel, ScaledSequenceIsConsistent) {
  const auto seq = bessel_i_scaled_sequence(40, 9.0);
  ASSERT_EQ(seq.size(), 41u);
  for (int q = 0; q <= 40; ++q) EXPECT_NEAR(seq[q], bessel_i_scaled(q, 9.0), 1e-15);
}

TEST(Bessel, RejectsBadArguments) {
  EXPECT_THROW(bessel_i(201, 1.0), InvalidArgument);
  EXPECT_THROW(bessel_i(2, -1.0), InvalidArgument);
  EXPECT_THROW(bessel_i(2, std::nan("")), InvalidArgument);
}

TEST(Bessel, AlternatingIdentityAgainstStdOracle) {
  for (double x : {1.0, 4.0, 9.0}) {
    // The sum runs over all integers q, with I_{-q} = I_q.
    double sum = 0.0;
    for (int q = -80; q < 80; ++q) {
      const double iq = std::cyl_bessel_i(static_cast<double>(std::abs(q)), x);
      sum += (q % 2 ? -1.0 : 1.0) / (2 * q + 1) * iq * iq;
    }
    const double oracle = std::exp(-2.0 * x) * sum;
    const double closed = -std::expm1(-4.0 * x) / (4.0 * x);
    EXPECT_NEAR(oracle, closed, 1e-13);
    EXPECT_NEAR(bessel_identity_scaled(x, 120), closed, 1e-13) << x;
  }
}

TEST(Bessel, TextbookRecurrence) {
  // I_{q-1} - I_{q+1} = (2q/x) I_q for the unsigned functions.
  for (double x : {0.5, 3.0, 12.0}) {
    for (int q = 1; q < 12; ++q) {
      const double lhs = bessel_i_scaled(q - 1, x) - bessel_i_scaled(q + 1, x);
      EXPECT_NEAR(lhs, 2.0 * q / x * bessel_i_scaled(q, x), 1e-14) << q << " " << x;
    }
    for (int q = 1; q < 12; ++q) EXPECT_LT(std::abs(bessel_recurrence_residual(q, x)), 1e-12);
  }
}

TEST(Erfi, AgainstQuadrature) {
  for (double x : {0.1, 0.5, 1.0, 2.0, 3.0}) {
    const double ref = 2.0 / std::sqrt(kPi) * simpson([](double t) { return std::exp(t * t); }, 0, x);
    EXPECT_NEAR(erfi(x) / ref, 1.0, 1e-11) << x;
  }
  EXPECT_DOUBLE_EQ(erfi(-1.0), -erfi(1.0));
}

TEST(Asymptotic, EvenWeightOfCoherentState) {
  const FockDim d(40);
  for (cplx beta : {cplx(0.0), cplx(0.4, 0.1), cplx(-1.2, 0.9)}) {
    const Vector v = coherent(beta, d).vector();
    double even = 0.0;
    for (int n = 0; n < 40; n += 2) even += std::norm(v(n));
    EXPECT_NEAR(c_pp_coherent(beta), even, 1e-13);
  }
}

TEST(Asymptotic, SeriesIntegralAndConservedQuantityAgree) {
  const FockDim d(36);
  for (cplx alpha : {cplx(1.0), cplx(2.0), cplx(0.0, 1.5)}) {
    for (cplx beta : {cplx(0.0), cplx(1.0, 0.5), cplx(-1.5, -1.0), cplx(0.2, 1.4)}) {
      const cplx s = c_pm_series(alpha, beta);
      const cplx q = c_pm_integral(alpha, beta);
      EXPECT_LT(std::abs(s - q), 1e-9) << alpha << " " << beta;
      const AsymptoticState st = asymptotic_from_state(alpha, DensityMatrix::pure(coherent(beta, d)));
      EXPECT_LT(std::abs(st.c_pm - s), 1e-9) << alpha << " " << beta;
      EXPECT_NEAR(st.c_pp, c_pp_coherent(beta), 1e-12);
    }
  }
}

TEST(Asymptotic, FarFieldLimitsOnTheAxes) {
  // The approach is algebraic in 1/|beta|, so check a shrinking gap.
  for (double a : {0.5, 1.0, 2.0}) {
    double prev_re = 1.0, prev_im = 1.0;
    for (double b : {4.0, 6.0, 9.0, 15.0}) {
      const double re = std::abs(c_pm_series(a, b).real() - c_pm_limit_real_axis(a));
      const double im = std::abs(c_pm_series(a, cplx(0.0, b)) - c_pm_limit_imaginary_axis(a));
      EXPECT_LT(re, prev_re) << a << " " << b;
      EXPECT_LT(im, prev_im) << a << " " << b;
      prev_re = re;
      prev_im = im;
    }
    EXPECT_LT(prev_re, 2e-4);
    EXPECT_LT(prev_im, 1e-3);
  }
}

TEST(Conserved, JOperatorsSelectTheLogicalElements) {
  const FockDim d(32);
  const cplx alpha = 2.0;
  const auto jpm = build_j_plus_minus(alpha, d);
  const auto jpp = build_j_plus_plus(d);
  const Vector p = cat(CatSpec::even(alpha), d).vector();
  const Vector m = cat(CatSpec::odd(alpha), d).vector();
  auto pairing = [](const Matrix& j, const Matrix& x) { return j.conjugate().cwiseProduct(x).sum(); };
  EXPECT_NEAR(std::abs(pairing(jpm.op.matrix(), p * m.adjoint()) - 1.0), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(pairing(jpm.op.matrix(), p * p.adjoint())), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(pairing(jpm.op.matrix(), m * p.adjoint())), 0.0, 1e-12);
  EXPECT_NEAR(pairing(jpp.op.matrix(), p * p.adjoint()).real(), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(pairing(jpp.op.matrix(), m * m.adjoint())), 0.0, 1e-12);
}

TEST(Conserved, StationaryUnderTheAdjointGenerator) {
  const FockDim d(32);
  const cplx alpha = 2.0;
  const LindbladModel m = models::k_photon({2, models::drive_for_alpha(2, alpha, 1.0), 1.0}, d);
  const Matrix jpp = adjoint_rhs(m, build_j_plus_plus(d).op.matrix());
  EXPECT_LT(jpp.cwiseAbs().maxCoeff(), 1e-12);
  // The J+- series is cut by the truncation; check away from the edge.
  const Matrix jpm = adjoint_rhs(m, build_j_plus_minus(alpha, d).op.matrix());
  EXPECT_LT(jpm.topLeftCorner(26, 26).cwiseAbs().maxCoeff(), 1e-9);

  const LindbladModel m4 = models::k_photon({4, models::drive_for_alpha(4, 1.5, 1.0), 1.0}, d);
  EXPECT_LT(adjoint_rhs(m4, build_j00_four_cat(d).op.matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Asymptotic, ReconstructionIsAState) {
  const AsymptoticState s = asymptotic_from_coherent(2.0, cplx(0.3, -0.8));
  const DensityMatrix rho = reconstruct_rho_infinity(s, FockDim(32));
  EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-12);
  EXPECT_GT(min_eigenvalue(rho.matrix()), -1e-12);
  const auto b = s.bloch();
  EXPECT_LE(b[0] * b[0] + b[1] * b[1] + b[2] * b[2], 1.0 + 1e-12);
}

TEST(PhaseFlip, RateLimitsAndMonotonicity) {
  const double kphi = 0.01;
  EXPECT_NEAR(phase_flip_rate(1e-4, kphi), 0.5 * kphi, 1e-10);
  EXPECT_DOUBLE_EQ(phase_flip_rate(0.0, kphi), 0.5 * kphi);
  double prev = phase_flip_rate(0.1, kphi);
  for (double a = 0.2; a < 4.0; a += 0.1) {
    const double r = phase_flip_rate(a, kphi);
    EXPECT_LT(r, prev);
    prev = r;
  }
  EXPECT_EQ(phase_flip_rate(30.0, kphi), 0.0);
}

TEST(DecayFit, RecoversSyntheticExponential) {
  std::vector<double> t, s;
  for (int i = 0; i <= 200; ++i) {
    t.push_back(0.1 * i);
    s.push_back(3.0 * std::exp(-0.25 * t.back()));
  }
  const DecayFit f = fit_decay_rate(t, s, 2.0, 18.0);
  EXPECT_NEAR(f.rate, 0.25, 1e-12);
  EXPECT_NEAR(f.intercept, std::log(3.0), 1e-10);
  EXPECT_GT(f.points, 100);
}

TEST(DecayFit, RejectsNonExponentialSignals) {
  std::vector<double> t, s;
  for (int i = 0; i <= 200; ++i) {
    t.push_back(0.1 * i);
    s.push_back(1.0 / (1.0 + t.back() * t.back()));
  }
  EXPECT_THROW(fit_decay_rate(t, s, 0.0, 20.0), NonExponentialDecay);
  EXPECT_THROW(fit_decay_rate(t, s, 30.0, 40.0), NonExponentialDecay);
  s[150] = 0.0;
  EXPECT_THROW(fit_decay_rate(t, s, 10.0, 20.0, 1.0), NonExponentialDecay);
}

}  // namespace
}  // namespace catqubit::analytics
