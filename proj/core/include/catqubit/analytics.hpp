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

#include <array>
#include <optional>
#include <utility>

#include "catqubit/lindblad.hpp"

/// Closed forms for the asymptotic states of the two-photon process and the
/// dephasing-induced decay of the logical coherence.
namespace catqubit::analytics {

/// Modified Bessel function of the first kind I_q(x), x >= 0. I_{-q} = I_q.
double bessel_i(int q, double x);

/// exp(-x) I_q(x); finite for every x >= 0.
double bessel_i_scaled(int q, double x);

/// exp(-x) I_k(x) for k = 0..q_max, by normalised downward recurrence.
std::vector<double> bessel_i_scaled_sequence(int q_max, double x);

/// sum_{q=-Q..Q} (-1)^q / (2q+1) I_q(x)^2, returned divided by e^{2x}.
/// Equals (1 - e^{-4x}) / (4x) when the sum has converged.
double bessel_identity_scaled(double x, int q_cap);

/// e^{-x} (x [f_{q-1} - f_{q+1}] + 2q f_q) with f_q = (-1)^q I_q(x), the
/// alternating coefficients of J+-. Zero analytically.
double bessel_recurrence_residual(int q, double x);

enum class ConservedLabel { kJpp, kJpm, kJ00FourCat };

struct ConservedQuantity {
  ConservedLabel label;
  Operator op;
  cplx alpha = 0.0;
  int q_max = 0;  // largest |q| kept in the J+- sum
};

/// Even-parity projector sum_n |2n><2n|.
ConservedQuantity build_j_plus_plus(FockDim dim);

/// The q-th term of J+-: matrix elements |2k><2k+2q+1| only.
Operator build_j_plus_minus_term(int q, FockDim dim);

/// J+- for the two-photon process with amplitude alpha. `q_cap` bounds |q|;
/// the sum stops earlier once terms fall below 1e-12 of the leading one.
ConservedQuantity build_j_plus_minus(cplx alpha, FockDim dim, int q_cap = 200);

/// sum_n |4n><4n|, conserved by the four-photon process.
ConservedQuantity build_j00_four_cat(FockDim dim);

/// Coefficients of the asymptotic state
/// rho_inf = c_pp |C+><C+| + c_mm |C-><C-| + c_pm |C+><C-| + c_pm^* |C-><C+|.
struct AsymptoticState {
  double c_pp = 1.0;
  double c_mm = 0.0;
  cplx c_pm = 0.0;
  cplx alpha = 0.0;

  /// Logical Bloch vector (X, Y, Z) in the {|C+>, |C->} basis.
  std::array<double, 3> bloch() const;
};

/// c_pp = (1 + e^{-2|beta|^2}) / 2 for an initial coherent state |beta>.
double c_pp_coherent(cplx beta);

/// Coherence from the Bessel-product series.
cplx c_pm_series(cplx alpha, cplx beta);

/// Coherence from the phi-integral, by adaptive Simpson with absolute tolerance `tol`
/// on the scaled integrand. Throws QuadratureNoConvergence.
cplx c_pm_integral(cplx alpha, cplx beta, double tol = 1e-10);

/// Asymptotic state reached from |beta> (integral form for c_pm).
AsymptoticState asymptotic_from_coherent(cplx alpha, cplx beta);

/// Asymptotic state from an arbitrary initial density matrix via Tr[J^dag rho0].
AsymptoticState asymptotic_from_state(cplx alpha, const DensityMatrix& rho0);

DensityMatrix reconstruct_rho_infinity(const AsymptoticState& s, FockDim dim);

/// Imaginary error function erfi(x) = -i erf(ix).
double erfi(double x);

/// Limit of c_pm for real alpha as beta -> +infinity along the real axis.
double c_pm_limit_real_axis(double abs_alpha);

/// Limit of c_pm for real alpha as beta -> +i infinity (purely imaginary).
cplx c_pm_limit_imaginary_axis(double abs_alpha);

/// First-order phase-flip rate kappa_phi |alpha|^2 / sinh(2|alpha|^2) (a magnitude).
double phase_flip_rate(cplx alpha, double kappa_phi);

struct DecayFit {
  double rate;       // -d log|s| / dt
  double intercept;  // log|s| at t = 0 of the fitted line
  double residual;   // RMS deviation of log|s| from the line
  int points;
};

/// Least-squares fit of log|s(t)| over t in [t_begin, t_end]. Throws
/// NonExponentialDecay if fewer than three samples are usable, if |s|
/// vanishes, or if the RMS residual exceeds `max_residual`.
DecayFit fit_decay_rate(const Trajectory& traj, const std::string& name, double t_begin,
                        double t_end, double max_residual = 1e-3);

DecayFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& s,
                        double t_begin, double t_end, double max_residual = 1e-3);

struct PhaseFlipOptions {
  double kappa = 1.0;          // pump loss rate
  double kappa_phi_ratio = 0.01;
  int n_max = 0;               // zero: minimum adequate for alpha
  double horizon_cap = 1e7;    // in units of 1/kappa
  double transient = 30.0;     // skipped before the fit window, in 1/kappa
  int output_points = 200;
};

struct PhaseFlipMeasurement {
  double alpha;
  double analytic;    // phase_flip_rate (two-photon) or 2 kappa_phi (four-photon scale)
  DecayFit fit;
  double horizon;
};

/// Decay rate of Tr[J+-^dag rho(t)] under the two-photon process with dephasing,
/// starting from (|C+> + |C->)/sqrt 2.
PhaseFlipMeasurement measure_phase_flip_two_photon(double alpha, const PhaseFlipOptions& o);

/// Decay rate of <C^(0 mod 4)| rho(t) |C^(2 mod 4)> under the four-photon process
/// with dephasing, starting from the equal superposition of the two cats.
PhaseFlipMeasurement measure_phase_flip_four_photon(double alpha, const PhaseFlipOptions& o);

}  // namespace catqubit::analytics
