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

#include "catqubit/lindblad.hpp"

/// Low-level time steppers behind `integrate` and `steady_state`.
namespace catqubit {

/// Sparse evaluation of the Lindblad generator using the non-Hermitian
/// effective Hamiltonian H_eff = H - (i/2) sum_k rate_k L_k^dag L_k.
class LindbladKernel {
 public:
  explicit LindbladKernel(const LindbladModel& model);

  Eigen::Index size() const noexcept { return n_; }

  /// out = L(rho) for Hermitian rho (uses rho = rho^dag to halve the work).
  void apply_hermitian(const Matrix& rho, Matrix& out) const;

  /// out = L(x) for arbitrary x.
  void apply(const Matrix& x, Matrix& out) const;

  /// out = L^dag(x), the Heisenberg-picture generator.
  void apply_adjoint(const Matrix& x, Matrix& out) const;

  /// Dense column-major superoperator acting on vec(rho).
  Matrix liouvillian() const;

 private:
  Eigen::Index n_;
  SparseMatrix heff_;
  std::vector<SparseMatrix> jumps_;  // sqrt(rate) * L_k
  mutable Matrix work_, work2_;
};

/// Adaptive Dormand-Prince 5(4) stepper with first-same-as-last reuse.
/// The state is kept Hermitian by symmetrising after each accepted step.
class Dopri5 {
 public:
  Dopri5(const LindbladKernel& kernel, Matrix rho0, double rtol, double atol, double h_min,
         long max_steps);

  /// One accepted step, never stepping past `t_stop`.
  void step(double t_stop);
  /// Accepted steps until time `t_stop` is reached exactly.
  void advance_to(double t_stop);

  double time() const noexcept { return t_; }
  const Matrix& state() const noexcept { return y_; }
  /// Generator evaluated at the current state.
  const Matrix& derivative() const noexcept { return k_[0]; }

  long accepted() const noexcept { return accepted_; }
  long rejected() const noexcept { return rejected_; }
  long evaluations() const noexcept { return evals_; }
  double min_step() const noexcept { return min_step_; }

 private:
  double error_norm(const Matrix& err, const Matrix& y_new) const;
  void initial_step();

  const LindbladKernel& kernel_;
  double rtol_, atol_, h_min_;
  long max_steps_;
  double t_ = 0.0, h_ = 0.0;
  Matrix y_, y_new_, stage_, err_;
  std::array<Matrix, 7> k_;
  long accepted_ = 0, rejected_ = 0, evals_ = 0;
  double min_step_ = 0.0;
  bool last_rejected_ = false;
};

/// exp(L dt) applied to vec(rho); dense, for small Hilbert spaces.
class Propagator {
 public:
  Propagator(const LindbladKernel& kernel, double dt);
  Matrix apply(const Matrix& rho) const;
  double dt() const noexcept { return dt_; }

 private:
  Eigen::Index n_;
  double dt_;
  Matrix p_;
};

/// Exact evolution of one block rho_RC of the density matrix, for models
/// whose operators are block diagonal with respect to both sectors (for
/// example parity- or modulus-preserving dynamics). Dense; the block must
/// satisfy |R| * |C| <= kMaxBlockSize.
class BlockPropagator {
 public:
  static constexpr Eigen::Index kMaxBlockSize = 1600;

  BlockPropagator(const LindbladModel& model, const Sector& rows, const Sector& cols, double dt);

  /// x(t + dt) from x(t), both |R| x |C|.
  Matrix apply(const Matrix& x) const;
  /// Generator acting on the column-major vec of the block.
  const Matrix& generator() const noexcept { return s_; }

 private:
  Eigen::Index nr_, nc_;
  Matrix s_, p_;
};

}  // namespace catqubit
