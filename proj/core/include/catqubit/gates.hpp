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
#include <cmath>
#include <string>

#include "catqubit/lindblad.hpp"
#include "catqubit/models.hpp"

/// Gate protocols on cat qubits: Zeno X rotations, Zeno entangling gates,
/// Kerr Z rotations and single-photon loss during a rotation.
namespace catqubit::gates {

enum class GateKind { kXRotation2Cat, kXRotation4Cat, kEntangle2Cat, kEntangle4Cat, kKerrZ };

std::string to_string(GateKind kind);
GateKind parse_gate_kind(const std::string& s);

struct GateProtocol {
  GateKind kind = GateKind::kXRotation2Cat;
  double drive = 0.05;  // eps_X or eps_XX
  double n_bar = 4.0;   // alpha = sqrt(n_bar), real
  double kappa = 1.0;   // pump loss rate kappa_kph
  double chi_kerr = 0.0;
  double theta = kPi;   // target rotation angle

  int photons() const;  // 2 or 4
  double alpha() const { return std::sqrt(n_bar); }
  models::Pump pump() const;
  /// Drive-to-pump separation eps / kappa <= 1/10.
  bool separated() const { return drive <= 0.1 * kappa; }
  /// Rate of the projected Hamiltonian (Omega_X or Omega_XX).
  double omega() const;
  /// theta / (2 Omega): the projected Hamiltonian Omega sigma_x rotates the
  /// Bloch vector at angular rate 2 Omega.
  double nominal_time() const { return theta / (2.0 * omega()); }
};

/// 2 eps sqrt(n) and 2 eps n for single-qubit rotations; 2 n eps and
/// 2 n^2 eps for the entangling gates.
double effective_rabi(GateKind kind, double eps, double n_bar);

/// <b_i| H |b_j>. Throws NonOrthonormalBasis if the basis Gram matrix
/// differs from the identity by more than 1e-8.
Matrix projected_hamiltonian(const Operator& h, const std::vector<Ket>& basis);

/// {|C+>, |C->} for two-photon kinds, {|C^(0 mod 4)>, |C^(2 mod 4)>} otherwise.
std::array<Ket, 2> logical_basis(int photons, cplx alpha, FockDim dim);

struct LogicalTomography {
  std::vector<double> times;
  std::vector<double> p0, p1;       // logical populations
  std::vector<cplx> coherence;      // <b0| rho |b1>

  std::array<double, 3> bloch(std::size_t i) const;
  double max_bloch_norm() const;
};

struct RunOptions {
  int n_max = 0;  // zero: default truncation for the amplitude
  IntegrationOptions integration{.method = Method::kAuto};
  /// Restrict to a parity sector when the dynamics and the initial state allow it.
  bool use_sectors = true;
};

struct RotationResult {
  Trajectory trajectory;  // series "p0", "p1", "coherence", "parity"
  LogicalTomography tomography;
  int n_max;
  bool restricted;
};

/// Zeno X rotation from the logical state `initial` (0 or 1) of the protocol's basis.
RotationResult run_x_rotation(const GateProtocol& p, int initial, double t_final,
                              const RunOptions& o = {});

/// Zeno X rotation from an arbitrary single-mode density matrix of size n_max.
RotationResult run_x_rotation(const GateProtocol& p, const DensityMatrix& rho0, double t_final,
                              const RunOptions& o = {});

/// Angular frequency Omega of P0(t) = cos^2(Omega t), from zero crossings of
/// p0 - p1 with linear interpolation. Throws NonExponentialDecay (no
/// oscillation) if fewer than two crossings are found.
/// Average fidelity of the logical channel after p.nominal_time(), against
/// the unitary generated by the projected drive. Uses the six axis states.
double average_gate_fidelity(const GateProtocol& p, const RunOptions& o = {});

double fit_rabi_frequency(const LogicalTomography& tomo);

/// Time in [t_lo, t_hi] maximising a series on the output grid, refined by
/// a parabola through the best sample and its neighbours.
std::pair<double, double> locate_maximum(const std::vector<double>& t,
                                         const std::vector<double>& y, double t_lo, double t_hi);

struct EntanglingResult {
  Trajectory trajectory;  // series "bell_plus", "bell_minus"
  int n_max;
};

/// B+- = (|b0 b0> +- i |b1 b1>) / sqrt 2.
std::pair<Ket, Ket> bell_states(int photons, cplx alpha, FockDim dim);
std::pair<Ket, Ket> bell_states(const std::array<Ket, 2>& basis);

/// Two-mode Zeno entangling gate from |b0, b0>.
EntanglingResult run_entangling(const GateProtocol& p, double t_final, const RunOptions& o = {});

/// exp(i chi t n^2) psi0.
Ket kerr_evolve(double chi, double t, const Ket& psi0);

/// (1/2q) sum_{p,k=0}^{2q-1} exp(i k (k - p) pi / q) |beta e^{i p pi / q}>.
Ket kerr_superposition_formula(int q, cplx beta, FockDim dim);

/// || a U psi - e^{i chi t} R(2 chi t) U a psi || with U = exp(i chi t n^2) and
/// R(theta) = exp(i theta n). The scalar e^{i chi t} comes from
/// (n+1)^2 = n^2 + 2n + 1.
double kerr_jump_commutation_check(double chi, double t, const Ket& psi0);

/// min over phi of || a - e^{i phi} b || for unit vectors.
double phase_insensitive_distance(const Ket& a, const Ket& b);

struct LossResult {
  Trajectory trajectory;  // series "sector0" .. "sector3", "total"
  double omega;           // rotation rate used for the ideal state
  int n_max;
};

/// cos(omega t) |C^(0)> - i sin(omega t) |C^(2)>.
Ket rotating_state(cplx alpha, double omega, double t, FockDim dim);

/// Four-photon X rotation with single-photon loss kappa_1ph D[a], starting
/// from |C^(0 mod 4)>. Reports the populations of a^k psi(t) / ||.||, k = 0..3.
/// `omega` <= 0 selects the projected rate Omega_X.
LossResult run_loss_during_gate(const GateProtocol& p, double kappa_1ph, double t_final,
                                double omega = 0.0, const RunOptions& o = {});

}  // namespace catqubit::gates
