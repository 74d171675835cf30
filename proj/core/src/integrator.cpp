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

#include "catqubit/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace catqubit {
namespace {

SparseMatrix to_sparse(const Matrix& m) {
  return m.sparseView(cplx(1.0), 1e-300);
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

LindbladKernel::LindbladKernel(const LindbladModel& model) : n_(model.size()) {
  Matrix heff = model.hamiltonian().matrix();
  for (const auto& c : model.collapses()) {
    const Matrix& l = c.op.matrix();
    heff -= cplx(0.0, 0.5 * c.rate) * (l.adjoint() * l);
    jumps_.push_back(to_sparse(std::sqrt(c.rate) * l));
  }
  heff_ = to_sparse(heff);
  work_.resize(n_, n_);
  work2_.resize(n_, n_);
}

void LindbladKernel::apply_hermitian(const Matrix& rho, Matrix& out) const {
  work_.noalias() = heff_ * rho;
  out = cplx(0.0, -1.0) * work_;
  out += cplx(0.0, 1.0) * work_.adjoint();
  for (const auto& l : jumps_) {
    work_.noalias() = l * rho;
    work2_ = work_.adjoint();
    out.noalias() += l * work2_;
  }
}

void LindbladKernel::apply(const Matrix& x, Matrix& out) const {
  // -i H_eff x + i x H_eff^dag + sum L x L^dag
  out.noalias() = cplx(0.0, -1.0) * (heff_ * x);
  // x H_eff^dag = (H_eff x^dag)^dag
  work2_ = x.adjoint();
  work_.noalias() = heff_ * work2_;
  out += cplx(0.0, 1.0) * work_.adjoint();
  for (const auto& l : jumps_) {
    work_.noalias() = l * work2_;  // L x^dag
    work2_ = work_.adjoint();      // x L^dag
    work_.noalias() = l * work2_;  // L x L^dag
    out += work_;
    work2_ = x.adjoint();
  }
}

void LindbladKernel::apply_adjoint(const Matrix& x, Matrix& out) const {
  // i H_eff^dag x - i x H_eff + sum L^dag x L
  const SparseMatrix hd = heff_.adjoint();
  out.noalias() = cplx(0.0, 1.0) * (hd * x);
  work2_ = x.adjoint();
  work_.noalias() = hd * work2_;  // H_eff^dag x^dag = (x H_eff)^dag
  out += cplx(0.0, -1.0) * work_.adjoint();
  for (const auto& l : jumps_) {
    const SparseMatrix ld = l.adjoint();
    work_.noalias() = ld * work2_;  // L^dag x^dag = (x L)^dag
    Matrix xl = work_.adjoint();
    out.noalias() += ld * xl;
  }
}

Matrix LindbladKernel::liouvillian() const {
  // Column-major vec: vec(A X B) = (B^T kron A) vec(X).
  const Matrix id = Matrix::Identity(n_, n_);
  const Matrix heff = Matrix(heff_);
  Matrix l = cplx(0.0, -1.0) * Matrix(Eigen::kroneckerProduct(id, heff));
  l += cplx(0.0, 1.0) * Matrix(Eigen::kroneckerProduct(heff.conjugate(), id));
  for (const auto& j : jumps_) {
    const Matrix jd = Matrix(j);
    l += Matrix(Eigen::kroneckerProduct(jd.conjugate(), jd));
  }
  return l;
}

Dopri5::Dopri5(const LindbladKernel& kernel, Matrix rho0, double rtol, double atol,
               double h_min, long max_steps)
    : kernel_(kernel), rtol_(rtol), atol_(atol), h_min_(h_min), max_steps_(max_steps),
      y_(std::move(rho0)) {
  const Eigen::Index n = kernel.size();
  if (y_.rows() != n || y_.cols() != n) {
    throw DimensionMismatch("Dopri5: initial state does not match the model");
  }
  for (auto& k : k_) k.resize(n, n);
  y_new_.resize(n, n);
  stage_.resize(n, n);
  err_.resize(n, n);
  kernel_.apply_hermitian(y_, k_[0]);
  ++evals_;
  initial_step();
  min_step_ = std::numeric_limits<double>::infinity();
}

double Dopri5::error_norm(const Matrix& err, const Matrix& y_new) const {
  double sum = 0.0;
  const Eigen::Index n = err.size();
  const cplx* e = err.data();
  const cplx* a = y_.data();
  const cplx* b = y_new.data();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sc = atol_ + rtol_ * std::max(std::abs(a[i]), std::abs(b[i]));
    sum += std::norm(e[i]) / (sc * sc);
  }
  return std::sqrt(sum / static_cast<double>(n));
}

void Dopri5::initial_step() {
  auto scaled = [&](const Matrix& m) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      const double sc = atol_ + rtol_ * std::abs(y_.data()[i]);
      s += std::norm(m.data()[i]) / (sc * sc);
    }
    return std::sqrt(s / static_cast<double>(m.size()));
  };
  const double d0 = scaled(y_);
  const double d1 = scaled(k_[0]);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  stage_ = y_ + h0 * k_[0];
  kernel_.apply_hermitian(stage_, k_[1]);
  ++evals_;
  const double d2 = scaled(k_[1] - k_[0]) / h0;
  const double dm = std::max(d1, d2);
  const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
  h_ = std::min(100.0 * h0, h1);
}

void Dopri5::step(double t_stop) {
  for (;;) {
    if (accepted_ + rejected_ >= max_steps_) {
      throw NoConvergence("integrator exceeded the step budget");
    }
    const bool clamp = t_ + h_ >= t_stop;
    const double h = clamp ? t_stop - t_ : h_;
    if (h < h_min_ && !clamp) {
      throw StiffnessFailure("step size fell below the floor at t = " + std::to_string(t_) +
                             " (h = " + std::to_string(h) + ")");
    }
    stage_ = y_ + (h * a21) * k_[0];
    kernel_.apply_hermitian(stage_, k_[1]);
    stage_ = y_ + h * (a31 * k_[0] + a32 * k_[1]);
    kernel_.apply_hermitian(stage_, k_[2]);
    stage_ = y_ + h * (a41 * k_[0] + a42 * k_[1] + a43 * k_[2]);
    kernel_.apply_hermitian(stage_, k_[3]);
    stage_ = y_ + h * (a51 * k_[0] + a52 * k_[1] + a53 * k_[2] + a54 * k_[3]);
    kernel_.apply_hermitian(stage_, k_[4]);
    stage_ = y_ + h * (a61 * k_[0] + a62 * k_[1] + a63 * k_[2] + a64 * k_[3] + a65 * k_[4]);
    kernel_.apply_hermitian(stage_, k_[5]);
    y_new_ = y_ + h * (a71 * k_[0] + a73 * k_[2] + a74 * k_[3] + a75 * k_[4] + a76 * k_[5]);
    kernel_.apply_hermitian(y_new_, k_[6]);
    evals_ += 6;
    err_ = h * (e1 * k_[0] + e3 * k_[2] + e4 * k_[3] + e5 * k_[4] + e6 * k_[5] + e7 * k_[6]);
    const double err = error_norm(err_, y_new_);
    if (!std::isfinite(err)) {
      ++rejected_;
      h_ = 0.1 * h;
      last_rejected_ = true;
      continue;
    }
    if (err <= 1.0) {
      const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      t_ = clamp ? t_stop : t_ + h;
      y_.swap(y_new_);
      // Keep the state exactly Hermitian.
      stage_ = 0.5 * (y_ + y_.adjoint());
      y_.swap(stage_);
      kernel_.apply_hermitian(y_, k_[0]);
      ++evals_;
      ++accepted_;
      min_step_ = std::min(min_step_, h);
      // A clamped step says nothing about the natural step size.
      if (!clamp) h_ = last_rejected_ ? std::min(h, h * fac) : h * fac;
      last_rejected_ = false;
      return;
    }
    ++rejected_;
    last_rejected_ = true;
    h_ = h * std::max(0.2, 0.9 * std::pow(err, -0.2));
  }
}

void Dopri5::advance_to(double t_stop) {
  while (t_ < t_stop) step(t_stop);
}

Propagator::Propagator(const LindbladKernel& kernel, double dt)
    : n_(kernel.size()), dt_(dt) {
  if (n_ > kMaxPropagatorDim) {
    throw InvalidArgument("Propagator: Hilbert space of size " + std::to_string(n_) +
                          " exceeds the dense limit");
  }
  const Matrix l = dt * kernel.liouvillian();
  p_ = l.exp();
}

Matrix Propagator::apply(const Matrix& rho) const {
  Vector v = p_ * Eigen::Map<const Vector>(rho.data(), rho.size());
  Matrix out = Eigen::Map<Matrix>(v.data(), n_, n_);
  return 0.5 * (out + out.adjoint());
}

namespace {

// Throws unless `m` maps span(sector) into itself and its complement into
// the complement.
void require_block_diagonal(const Matrix& m, const Sector& sector) {
  std::vector<char> inside(static_cast<std::size_t>(m.rows()), 0);
  for (int s : sector) inside[static_cast<std::size_t>(s)] = 1;
  const double tol = 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (inside[static_cast<std::size_t>(i)] != inside[static_cast<std::size_t>(j)] &&
          std::abs(m(i, j)) > tol) {
        throw InvalidArgument("BlockPropagator: model couples the sector to its complement");
      }
}

Matrix block(const Matrix& m, const Sector& s) {
  const auto k = static_cast<Eigen::Index>(s.size());
  Matrix out(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) out(i, j) = m(s[i], s[j]);
  return out;
}

}  // namespace

BlockPropagator::BlockPropagator(const LindbladModel& model, const Sector& rows,
                                 const Sector& cols, double dt)
    : nr_(static_cast<Eigen::Index>(rows.size())), nc_(static_cast<Eigen::Index>(cols.size())) {
  if (nr_ * nc_ > kMaxBlockSize) throw InvalidArgument("BlockPropagator: block too large");
  if (nr_ == 0 || nc_ == 0) throw InvalidArgument("BlockPropagator: empty sector");
  Matrix heff = model.hamiltonian().matrix();
  for (const auto& c : model.collapses())
    heff -= cplx(0.0, 0.5 * c.rate) * (c.op.matrix().adjoint() * c.op.matrix());
  require_block_diagonal(heff, rows);
  require_block_diagonal(heff, cols);
  const Matrix ir = Matrix::Identity(nr_, nr_), ic = Matrix::Identity(nc_, nc_);
  s_ = cplx(0.0, -1.0) * Matrix(Eigen::kroneckerProduct(ic, block(heff, rows)));
  s_ += cplx(0.0, 1.0) * Matrix(Eigen::kroneckerProduct(block(heff, cols).conjugate(), ir));
  for (const auto& c : model.collapses()) {
    require_block_diagonal(c.op.matrix(), rows);
    require_block_diagonal(c.op.matrix(), cols);
    s_ += c.rate * Matrix(Eigen::kroneckerProduct(block(c.op.matrix(), cols).conjugate(),
                                                  block(c.op.matrix(), rows)));
  }
  p_ = (dt * s_).exp();
}

Matrix BlockPropagator::apply(const Matrix& x) const {
  if (x.rows() != nr_ || x.cols() != nc_) throw DimensionMismatch("BlockPropagator: block size");
  Vector v = p_ * Eigen::Map<const Vector>(x.data(), x.size());
  return Eigen::Map<Matrix>(v.data(), nr_, nc_);
}

}  // namespace catqubit
