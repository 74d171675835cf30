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

#include "catqubit/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>

#include "catqubit/integrator.hpp"

namespace catqubit {
namespace {

using ColSparse = Eigen::SparseMatrix<cplx>;

// Largest Hilbert space for which the steady-state search may factor the
// sparse superoperator.
constexpr Eigen::Index kMaxPolishDim = 100;
constexpr int kMaxPolishSteps = 200;
constexpr double kMaxPolishStep = 1e3;

void require_square(const Dims& dims, const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() != total_size(dims)) {
    throw DimensionMismatch(std::string(what) + ": matrix does not match dims");
  }
}

// True if `m` maps span(sector) into itself.
bool leaves_invariant(const Matrix& m, const Sector& sector) {
  std::vector<char> inside(static_cast<std::size_t>(m.rows()), 0);
  for (int s : sector) inside[static_cast<std::size_t>(s)] = 1;
  const double tol = 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff());
  for (int j : sector)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!inside[static_cast<std::size_t>(i)] && std::abs(m(i, j)) > tol) return false;
  return true;
}

}  // namespace

LindbladModel::LindbladModel(Operator hamiltonian, std::vector<Collapse> collapses)
    : h_(std::move(hamiltonian)), c_(std::move(collapses)) {
  const Matrix& h = h_.matrix();
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff())) {
    throw InvalidArgument("LindbladModel: Hamiltonian is not Hermitian");
  }
  for (const auto& c : c_) {
    if (c.op.dims() != h_.dims()) {
      throw DimensionMismatch("LindbladModel: collapse operator dims differ from H");
    }
    if (!(c.rate >= 0.0) || !std::isfinite(c.rate)) {
      throw InvalidArgument("LindbladModel: rates must be finite and non-negative");
    }
  }
}

double LindbladModel::max_rate() const {
  double r = 0.0;
  for (const auto& c : c_) r = std::max(r, c.rate);
  return r;
}

LindbladModel LindbladModel::restricted(const Sector& sector) const {
  if (!leaves_invariant(h_.matrix(), sector)) {
    throw InvalidArgument("restricted: Hamiltonian does not preserve the sector");
  }
  std::vector<Collapse> cs;
  for (const auto& c : c_) {
    if (!leaves_invariant(c.op.matrix(), sector)) {
      throw InvalidArgument("restricted: collapse operator does not preserve the sector");
    }
    cs.push_back({c.rate, restrict_to(c.op, sector)});
  }
  return {restrict_to(h_, sector), std::move(cs)};
}

DensityMatrix::DensityMatrix(Dims dims, Matrix m) : DensityMatrix(std::move(dims), std::move(m), true) {}

DensityMatrix::DensityMatrix(Dims dims, Matrix m, bool validate)
    : dims_(std::move(dims)), m_(std::move(m)) {
  require_square(dims_, m_, "DensityMatrix");
  if (!validate) return;
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw InvalidArgument("DensityMatrix: matrix is not Hermitian");
  }
  if (std::abs(m_.trace() - cplx(1.0)) > 1e-8) {
    throw InvalidArgument("DensityMatrix: trace differs from one");
  }
  if (min_eigenvalue(m_) < -1e-8) {
    throw InvalidArgument("DensityMatrix: matrix is not positive semidefinite");
  }
}

DensityMatrix DensityMatrix::pure(const Ket& psi) {
  const Ket k = psi.normalized();
  return {k.dims(), k.vector() * k.vector().adjoint(), false};
}

DensityMatrix DensityMatrix::maximally_mixed(const Dims& dims) {
  const int n = total_size(dims);
  return {dims, Matrix::Identity(n, n) / static_cast<double>(n), false};
}

DensityMatrix DensityMatrix::unchecked(Dims dims, Matrix m) {
  return {std::move(dims), std::move(m), false};
}

DensityMatrix DensityMatrix::restricted(const Sector& sector) const {
  const int k = static_cast<int>(sector.size());
  Matrix r(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) r(i, j) = m_(sector[i], sector[j]);
  const double lost = std::abs(m_.trace() - r.trace());
  if (lost > 1e-10) {
    throw InvalidArgument("DensityMatrix::restricted: state has weight outside the sector");
  }
  return {{k}, std::move(r), false};
}

Matrix rhs(const LindbladModel& model, const Matrix& rho) {
  require_square(model.dims(), rho, "rhs");
  LindbladKernel kernel(model);
  Matrix out(rho.rows(), rho.cols());
  kernel.apply(rho, out);
  return out;
}

Matrix adjoint_rhs(const LindbladModel& model, const Matrix& op) {
  require_square(model.dims(), op, "adjoint_rhs");
  LindbladKernel kernel(model);
  Matrix out(op.rows(), op.cols());
  kernel.apply_adjoint(op, out);
  return out;
}

double fidelity(const DensityMatrix& rho, const Ket& psi) {
  if (psi.size() != rho.size()) throw DimensionMismatch("fidelity: size mismatch");
  return std::real(psi.vector().dot(rho.matrix() * psi.vector()));
}

double purity(const DensityMatrix& rho) { return rho.matrix().cwiseAbs2().sum(); }

cplx expect(const DensityMatrix& rho, const Operator& op) {
  if (op.size() != rho.size()) throw DimensionMismatch("expect: size mismatch");
  return (op.matrix().transpose().cwiseProduct(rho.matrix())).sum();
}

double trace_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("trace_distance: size mismatch");
  }
  const Matrix d = 0.5 * ((a - b) + (a - b).adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(d, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double min_eigenvalue(const Matrix& rho) {
  const Matrix h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Observable expectation_observable(std::string name, const Operator& op) {
  const Matrix t = op.matrix().transpose();
  return {std::move(name), [t](const Matrix& rho) { return t.cwiseProduct(rho).sum(); }};
}

Observable fidelity_observable(std::string name, const Ket& psi) {
  const Vector v = psi.normalized().vector();
  return {std::move(name), [v](const Matrix& rho) { return cplx(std::real(v.dot(rho * v))); }};
}

Observable element_observable(std::string name, const Ket& bra, const Ket& ket) {
  const Vector b = bra.vector();
  const Vector k = ket.vector();
  return {std::move(name), [b, k](const Matrix& rho) { return b.dot(rho * k); }};
}

Observable conserved_observable(std::string name, const Matrix& j) {
  const Matrix c = j.conjugate();
  return {std::move(name), [c](const Matrix& rho) { return c.cwiseProduct(rho).sum(); }};
}

bool Trajectory::has(const std::string& name) const {
  return std::any_of(series.begin(), series.end(),
                     [&](const auto& s) { return s.first == name; });
}

const std::vector<cplx>& Trajectory::operator[](const std::string& name) const {
  for (const auto& s : series)
    if (s.first == name) return s.second;
  throw InvalidArgument("Trajectory: no series named '" + name + "'");
}

std::vector<double> Trajectory::real(const std::string& name) const {
  const auto& s = (*this)[name];
  std::vector<double> out(s.size());
  std::transform(s.begin(), s.end(), out.begin(), [](cplx z) { return z.real(); });
  return out;
}

std::vector<double> Trajectory::abs(const std::string& name) const {
  const auto& s = (*this)[name];
  std::vector<double> out(s.size());
  std::transform(s.begin(), s.end(), out.begin(), [](cplx z) { return std::abs(z); });
  return out;
}

Trajectory integrate(const LindbladModel& model, const DensityMatrix& rho0, double t_final,
                     const std::vector<Observable>& observables,
                     const IntegrationOptions& options) {
  if (rho0.size() != model.size()) throw DimensionMismatch("integrate: state/model mismatch");
  if (!(t_final > 0.0) || !std::isfinite(t_final)) {
    throw InvalidArgument("integrate: t_final must be positive");
  }
  if (options.output_points < 1) throw InvalidArgument("integrate: output_points < 1");

  const LindbladKernel kernel(model);
  const int npts = options.output_points;
  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(npts) + 1);
  for (const auto& o : observables) {
    traj.series.emplace_back(o.name, std::vector<cplx>{});
    traj.series.back().second.reserve(static_cast<std::size_t>(npts) + 1);
  }

  // Output index closest to each requested snapshot time.
  std::vector<int> snap_index;
  for (double ts : options.snapshot_times) {
    const double f = std::clamp(ts / t_final, 0.0, 1.0);
    snap_index.push_back(static_cast<int>(std::lround(f * npts)));
  }

  double max_trace_err = 0.0;
  double min_eig = std::numeric_limits<double>::infinity();
  auto record = [&](int i, const Matrix& rho) {
    traj.times.push_back(t_final * i / npts);
    for (std::size_t k = 0; k < observables.size(); ++k)
      traj.series[k].second.push_back(observables[k].eval(rho));
    max_trace_err = std::max(max_trace_err, std::abs(rho.trace() - cplx(1.0)));
    for (std::size_t s = 0; s < snap_index.size(); ++s) {
      if (snap_index[s] == i) {
        traj.snapshots.emplace_back(options.snapshot_times[s],
                                    DensityMatrix::unchecked(rho0.dims(), rho));
        min_eig = std::min(min_eig, min_eigenvalue(rho));
      }
    }
  };

  Method method = options.method;
  if (method == Method::kAuto) {
    method = model.size() <= kMaxPropagatorDim ? Method::kPropagator : Method::kDormandPrince;
  }

  Matrix final_rho;
  if (method == Method::kPropagator) {
    const Propagator prop(kernel, t_final / npts);
    Matrix rho = rho0.matrix();
    record(0, rho);
    for (int i = 1; i <= npts; ++i) {
      rho = prop.apply(rho);
      record(i, rho);
    }
    traj.stats.accepted = npts;
    traj.stats.min_step = t_final / npts;
    final_rho = std::move(rho);
  } else {
    const int nmax = *std::max_element(model.dims().begin(), model.dims().end());
    const double rate = std::max(model.max_rate(), 1e-300);
    const double h_min =
        options.h_min > 0.0 ? options.h_min : 1e-6 / (rate * static_cast<double>(nmax) * nmax);
    Dopri5 solver(kernel, rho0.matrix(), options.rtol, options.atol, h_min, options.max_steps);
    record(0, solver.state());
    for (int i = 1; i <= npts; ++i) {
      solver.advance_to(t_final * i / npts);
      record(i, solver.state());
    }
    traj.stats.accepted = solver.accepted();
    traj.stats.rejected = solver.rejected();
    traj.stats.rhs_evaluations = solver.evaluations();
    traj.stats.min_step = solver.min_step();
    final_rho = solver.state();
  }
  min_eig = std::min(min_eig, min_eigenvalue(final_rho));
  traj.stats.max_trace_error = max_trace_err;
  traj.stats.min_eigenvalue = min_eig;
  traj.final_state = DensityMatrix::unchecked(rho0.dims(), std::move(final_rho));
  return traj;
}

namespace {

// Column stacking: vec(A X B) = (B^T kron A) vec(X).
ColSparse sparse_liouvillian(const LindbladModel& model) {
  const Eigen::Index n = model.size();
  ColSparse id(n, n);
  id.setIdentity();
  const ColSparse h = model.hamiltonian().matrix().sparseView();
  const ColSparse ht = h.transpose();
  ColSparse l = -kI * (ColSparse(Eigen::kroneckerProduct(id, h)) -
                       ColSparse(Eigen::kroneckerProduct(ht, id)));
  for (const auto& c : model.collapses()) {
    const ColSparse a = c.op.matrix().sparseView();
    const ColSparse ac = a.conjugate();
    const ColSparse ada = a.adjoint() * a;
    const ColSparse adat = ada.transpose();
    l += c.rate * (ColSparse(Eigen::kroneckerProduct(ac, a)) -
                   0.5 * ColSparse(Eigen::kroneckerProduct(id, ada)) -
                   0.5 * ColSparse(Eigen::kroneckerProduct(adat, id)));
  }
  return l;
}

// Backward Euler steps (1 - hL) rho' = rho. Decaying modes shrink by
// 1/|1 - h lambda| per step and quantities conserved by L are kept exactly,
// so the iteration lands on the same steady state as the flow. The step
// doubles up to kMaxPolishStep/rate, refactoring only when it changes.
SteadyStateResult implicit_polish(const LindbladModel& model, const LindbladKernel& kernel,
                                  const Dims& dims, Matrix rho, double t, long steps,
                                  const SteadyStateOptions& options) {
  const Eigen::Index n = model.size();
  const double rate = std::max(model.max_rate(), 1e-300);
  const ColSparse liouvillian = sparse_liouvillian(model);
  ColSparse id(n * n, n * n);
  id.setIdentity();
  Eigen::SparseLU<ColSparse> lu;
  double h = std::max(t, 1.0 / rate), factored = 0.0;
  Matrix gen;
  kernel.apply_hermitian(rho, gen);
  double residual = gen.cwiseAbs().maxCoeff();
  for (int k = 0; k < kMaxPolishSteps && residual >= options.tol; ++k) {
    if (t + h > options.max_time) break;
    if (h != factored) {
      ColSparse a = id - h * liouvillian;
      a.makeCompressed();
      lu.compute(a);
      if (lu.info() != Eigen::Success) throw NoConvergence("steady_state: implicit step is singular");
      factored = h;
    }
    const Vector next = lu.solve(Vector(rho.reshaped()));
    rho = next.reshaped(n, n);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
    t += h;
    ++steps;
    h = std::min(2.0 * h, kMaxPolishStep / rate);
    kernel.apply_hermitian(rho, gen);
    residual = gen.cwiseAbs().maxCoeff();
  }
  if (residual >= options.tol) {
    throw NoConvergence("steady_state: residual " + std::to_string(residual) +
                        " above tolerance after t = " + std::to_string(t));
  }
  return {DensityMatrix::unchecked(dims, std::move(rho)), t, residual, steps};
}

}  // namespace

SteadyStateResult steady_state(const LindbladModel& model, const DensityMatrix& rho0,
                               const SteadyStateOptions& options) {
  if (rho0.size() != model.size()) throw DimensionMismatch("steady_state: state/model mismatch");
  const LindbladKernel kernel(model);
  const double rate = std::max(model.max_rate(), 1e-300);
  if (model.size() <= kMaxPropagatorDim) {
    // Exact steps of growing length; an explicit integrator would leave
    // stiff components at the atol level, which the generator amplifies.
    Matrix rho = rho0.matrix();
    double t = 0.0, dt = 1.0 / rate;
    long steps = 0;
    Matrix gen;
    kernel.apply_hermitian(rho, gen);
    double residual = gen.cwiseAbs().maxCoeff();
    while (residual >= options.tol) {
      if (t >= options.max_time) {
        throw NoConvergence("steady_state: residual " + std::to_string(residual) +
                            " above tolerance after t = " + std::to_string(t));
      }
      const Propagator prop(kernel, dt);
      rho = prop.apply(rho);
      rho = 0.5 * (rho + rho.adjoint()).eval();
      t += dt;
      ++steps;
      dt = std::min(2.0 * dt, options.max_time);
      kernel.apply_hermitian(rho, gen);
      residual = gen.cwiseAbs().maxCoeff();
    }
    return {DensityMatrix::unchecked(rho0.dims(), std::move(rho)), t, residual, steps};
  }
  const int nmax = *std::max_element(model.dims().begin(), model.dims().end());
  const double h_min = 1e-6 / (rate * static_cast<double>(nmax) * nmax);
  Dopri5 solver(kernel, rho0.matrix(), options.rtol, options.atol, h_min, 50'000'000);
  double residual = solver.derivative().cwiseAbs().maxCoeff();
  // Explicit steps leave stiff components near atol, which puts a floor
  // under the residual. Small models hand over to implicit steps once the
  // transient is gone or the residual stops improving; large ones give up.
  const bool can_polish = model.size() <= kMaxPolishDim;
  double best = residual, best_time = 0.0;
  while (residual >= options.tol) {
    const double t = solver.time();
    const double window = std::max(best_time, 1.0 / rate);
    if (can_polish && t < options.max_time && (residual < 1e-6 * rate || t > 64.0 * window)) {
      return implicit_polish(model, kernel, rho0.dims(), solver.state(), t, solver.accepted(),
                             options);
    }
    if (t >= options.max_time || t > 1000.0 * window) {
      throw NoConvergence("steady_state: residual " + std::to_string(residual) +
                          " above tolerance after t = " + std::to_string(t));
    }
    solver.step(options.max_time);
    residual = solver.derivative().cwiseAbs().maxCoeff();
    if (residual < 0.5 * best) {
      best = residual;
      best_time = solver.time();
    }
  }
  return {DensityMatrix::unchecked(rho0.dims(), solver.state()), solver.time(), residual,
          solver.accepted()};
}

}  // namespace catqubit
