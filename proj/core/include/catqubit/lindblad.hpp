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

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "catqubit/hilbert.hpp"

namespace catqubit {

/// One dissipation channel rate * D[op], with D[A]rho = A rho A^dag - {A^dag A, rho}/2.
struct Collapse {
  double rate;
  Operator op;
};

/// d rho/dt = -i[H, rho] + sum_k rate_k D[L_k] rho, with hbar = 1.
class LindbladModel {
 public:
  LindbladModel(Operator hamiltonian, std::vector<Collapse> collapses = {});

  const Operator& hamiltonian() const noexcept { return h_; }
  const std::vector<Collapse>& collapses() const noexcept { return c_; }
  const Dims& dims() const noexcept { return h_.dims(); }
  Eigen::Index size() const noexcept { return h_.size(); }

  /// Largest dissipation rate, used for step-size floors and time units.
  double max_rate() const;

  /// Same model on a sub-space left invariant by every term.
  LindbladModel restricted(const Sector& sector) const;

 private:
  Operator h_;
  std::vector<Collapse> c_;
};

/// Hermitian, positive, unit-trace matrix.
class DensityMatrix {
 public:
  /// Validates the invariants (Hermitian 1e-10, trace 1e-8, eigenvalues >= -1e-8).
  DensityMatrix(Dims dims, Matrix m);

  static DensityMatrix pure(const Ket& psi);
  static DensityMatrix maximally_mixed(const Dims& dims);
  /// Skips validation; for integrator output that is checked separately.
  static DensityMatrix unchecked(Dims dims, Matrix m);

  const Dims& dims() const noexcept { return dims_; }
  Eigen::Index size() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }

  DensityMatrix restricted(const Sector& sector) const;

 private:
  DensityMatrix(Dims dims, Matrix m, bool validate);
  Dims dims_;
  Matrix m_;
};

/// Lindblad generator applied to an arbitrary (not necessarily Hermitian) matrix.
Matrix rhs(const LindbladModel& model, const Matrix& rho);

/// Heisenberg-picture (adjoint) generator applied to an operator.
Matrix adjoint_rhs(const LindbladModel& model, const Matrix& op);

double fidelity(const DensityMatrix& rho, const Ket& psi);
double purity(const DensityMatrix& rho);
cplx expect(const DensityMatrix& rho, const Operator& op);
double trace_distance(const Matrix& a, const Matrix& b);
double min_eigenvalue(const Matrix& rho);

/// A named scalar evaluated on the density matrix at every output time.
struct Observable {
  std::string name;
  std::function<cplx(const Matrix&)> eval;
};

Observable expectation_observable(std::string name, const Operator& op);
Observable fidelity_observable(std::string name, const Ket& psi);
/// <bra| rho |ket>.
Observable element_observable(std::string name, const Ket& bra, const Ket& ket);
/// Tr[J^dag rho].
Observable conserved_observable(std::string name, const Matrix& j);

class Trajectory {
 public:
  std::vector<double> times;
  std::vector<std::pair<std::string, std::vector<cplx>>> series;
  std::vector<std::pair<double, DensityMatrix>> snapshots;

  struct Stats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evaluations = 0;
    double min_step = 0.0;
    double max_trace_error = 0.0;
    double min_eigenvalue = 0.0;  // smallest over snapshots and the final state
  } stats;

  /// Final state of the run.
  std::optional<DensityMatrix> final_state;

  bool has(const std::string& name) const;
  const std::vector<cplx>& operator[](const std::string& name) const;
  std::vector<double> real(const std::string& name) const;
  std::vector<double> abs(const std::string& name) const;
};

enum class Method {
  /// Adaptive Dormand-Prince 5(4) on the density matrix.
  kDormandPrince,
  /// Dense Liouvillian exponential over one output interval, applied
  /// repeatedly. Exact for time-independent models; limited to small spaces.
  kPropagator,
  /// Propagator when the Liouvillian fits kMaxPropagatorDim, else Dormand-Prince.
  kAuto,
};

/// Largest Hilbert-space size for which the dense propagator is allowed.
inline constexpr Eigen::Index kMaxPropagatorDim = 30;

struct IntegrationOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  int output_points = 400;
  Method method = Method::kDormandPrince;
  /// Step floor; zero selects 1e-6 / (max_rate * n_max^2).
  double h_min = 0.0;
  long max_steps = 50'000'000;
  /// Times at which density-matrix snapshots are stored (matched to the
  /// nearest output time).
  std::vector<double> snapshot_times{};
};

Trajectory integrate(const LindbladModel& model, const DensityMatrix& rho0, double t_final,
                     const std::vector<Observable>& observables,
                     const IntegrationOptions& options = {});

struct SteadyStateOptions {
  double tol = 1e-9;  // max-norm of the generator output
  double max_time = 1e4;
  double rtol = 1e-9;
  double atol = 1e-12;
};

struct SteadyStateResult {
  DensityMatrix rho;
  double elapsed;   // model time integrated
  double residual;  // max |L(rho)|
  long steps;
};

SteadyStateResult steady_state(const LindbladModel& model, const DensityMatrix& rho0,
                               const SteadyStateOptions& options = {});

}  // namespace catqubit
