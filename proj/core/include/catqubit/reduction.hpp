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

#include "catqubit/lindblad.hpp"

/// Two-mode circuit model of the two-photon process (storage mode a, lossy
/// buffer mode b) and its adiabatic reduction to a single mode.
namespace catqubit::reduction {

struct CircuitParams {
  double g = 0.05;       // two-photon exchange rate g_2ph
  double eps_b = 0.2;    // buffer drive
  double kappa_b = 1.0;  // buffer loss
  double chi_aa = 0.0015;
  double chi_bb = 0.185;
  double chi_ab = 0.033;

  /// g and eps_b below kappa_b / 10.
  bool adiabatic() const { return g < 0.1 * kappa_b && eps_b < 0.1 * kappa_b; }
  void validate() const;
};

/// g_2ph from the pump ratio eps_p / (omega_b - omega_p) and chi_ab (magnitude;
/// the sign of the detuning only sets the phase of g).
double g_from_pump_ratio(double pump_ratio, double chi_ab);

struct ReducedParams {
  double eps_2ph;
  double kappa_2ph;
  double alpha;
};

/// eps_2ph = 2 eps_b g / kappa_b, kappa_2ph = 4 g^2 / kappa_b, alpha = sqrt(eps_b / g).
ReducedParams adiabatic_params(const CircuitParams& p);

/// H = g(a^2 b^dag + a^dag^2 b) - eps_b (b + b^dag) + chi_aa/2 n_a^2
///     + chi_bb/2 n_b^2 + chi_ab n_a n_b, with loss kappa_b D[b]. Mode a first.
LindbladModel build_full_model(const CircuitParams& p, FockDim n_a, FockDim n_b);

/// Two-photon model with the reduced parameters.
LindbladModel build_reduced_model(const CircuitParams& p, FockDim n_a);

/// Basis states of a two-mode space whose mode-`mode` photon number has the given parity.
Sector mode_parity_sector(const Dims& dims, int mode, int parity);

struct ComparisonOptions {
  int n_a = 24;
  int n_b = 12;
  double steady_tol = 1e-9;
  double max_time = 1e5;
  int output_points = 400;
};

struct ComparisonResult {
  Trajectory full;     // "fidelity", "n_b"
  Trajectory reduced;  // "fidelity"
  double horizon;
  double full_settle_time;
  double reduced_settle_time;
  double full_terminal;
  double reduced_terminal;
  double gap;      // |full_terminal - reduced_terminal|
  double max_gap;  // largest fidelity difference along the two curves
  double max_n_b;
};

/// Fidelity to |C_alpha^+> from vacuum for both models, integrated to the
/// later of the two steady-state detection times.
ComparisonResult compare_full_vs_reduced(const CircuitParams& p, const ComparisonOptions& o = {});

}  // namespace catqubit::reduction
