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

#include "catqubit/hilbert.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace catqubit {

namespace {

void require_same_dims(const Dims& a, const Dims& b, const char* what) {
  if (a != b) throw DimensionMismatch(std::string(what) + ": mode dimensions differ");
}

// log(|alpha|^(2n) / n!) - |alpha|^2, the log Poisson weight of level n.
double log_poisson(double abs_alpha, int n) {
  const double x = abs_alpha * abs_alpha;
  if (x == 0.0) return n == 0 ? 0.0 : -INFINITY;
  return n * std::log(x) - std::lgamma(n + 1.0) - x;
}

}  // namespace

FockDim::FockDim(int n_max) : n_(n_max) {
  if (n_max < 2) throw InvalidArgument("FockDim: n_max must be at least 2");
}

Operator::Operator(Dims dims, Matrix m) : dims_(std::move(dims)), m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() != total_size(dims_)) {
    throw DimensionMismatch("Operator: matrix side does not match mode dimensions");
  }
}

Operator& Operator::operator+=(const Operator& o) {
  require_same_dims(dims_, o.dims_, "Operator +");
  m_ += o.m_;
  return *this;
}

Operator& Operator::operator-=(const Operator& o) {
  require_same_dims(dims_, o.dims_, "Operator -");
  m_ -= o.m_;
  return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_dims(a.dims(), b.dims(), "Operator *");
  return {a.dims(), a.matrix() * b.matrix()};
}

Ket::Ket(Dims dims, Vector v) : dims_(std::move(dims)), v_(std::move(v)) {
  if (v_.size() != total_size(dims_)) {
    throw DimensionMismatch("Ket: vector length does not match mode dimensions");
  }
}

Ket Ket::normalized() const {
  const double n = v_.norm();
  if (n == 0.0) throw InvalidArgument("Ket: cannot normalize the zero vector");
  return {dims_, v_ / n};
}

cplx Ket::inner(const Ket& other) const {
  require_same_dims(dims_, other.dims_, "Ket inner product");
  return v_.dot(other.v_);  // conjugates the left operand
}

Ket operator*(const Operator& op, const Ket& k) {
  require_same_dims(op.dims(), k.dims(), "Operator * Ket");
  return {k.dims(), op.matrix() * k.vector()};
}

Ket operator+(const Ket& a, const Ket& b) {
  require_same_dims(a.dims(), b.dims(), "Ket +");
  return {a.dims(), a.vector() + b.vector()};
}

Ket operator-(const Ket& a, const Ket& b) {
  require_same_dims(a.dims(), b.dims(), "Ket -");
  return {a.dims(), a.vector() - b.vector()};
}

Ket operator*(cplx s, const Ket& k) { return {k.dims(), s * k.vector()}; }

double coherent_tail_weight(double abs_alpha, int n_max) {
  if (abs_alpha == 0.0) return 0.0;
  // Terms past the Poisson mode decrease monotonically; sum until negligible.
  double tail = 0.0;
  for (int n = n_max;; ++n) {
    const double term = std::exp(log_poisson(abs_alpha, n));
    tail += term;
    if (n > abs_alpha * abs_alpha && term < 1e-18 * std::max(tail, 1e-300)) break;
    if (n > n_max + 100000) break;
  }
  return tail;
}

int default_dim(double abs_alpha) {
  return std::max(2, static_cast<int>(std::ceil(abs_alpha * abs_alpha + 8.0 * abs_alpha + 12.0)));
}

int minimum_dim(double abs_alpha) {
  int n = 2;
  while (coherent_tail_weight(abs_alpha, n) >= kTailTolerance) ++n;
  return n;
}

void check_truncation(double abs_alpha, FockDim dim) {
  const double tail = coherent_tail_weight(abs_alpha, dim.size());
  if (tail >= kTailTolerance) {
    throw TruncationTooSmall("n_max=" + std::to_string(dim.size()) + " leaves tail weight " +
                             std::to_string(tail) + " for |alpha|=" + std::to_string(abs_alpha) +
                             " (need n_max >= " + std::to_string(minimum_dim(abs_alpha)) + ")");
  }
}

Operator identity(FockDim dim) {
  return {{dim.size()}, Matrix::Identity(dim.size(), dim.size())};
}

Operator annihilation(FockDim dim) {
  const int n = dim.size();
  Matrix m = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) m(k - 1, k) = std::sqrt(static_cast<double>(k));
  return {{n}, std::move(m)};
}

Operator creation(FockDim dim) { return annihilation(dim).adjoint(); }

Operator number(FockDim dim) {
  const int n = dim.size();
  Matrix m = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) m(k, k) = k;
  return {{n}, std::move(m)};
}

Operator parity(FockDim dim) {
  const int n = dim.size();
  Matrix m = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) m(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
  return {{n}, std::move(m)};
}

Operator displacement(cplx beta, FockDim dim) {
  const int n = dim.size();
  if (beta == cplx{}) return identity(dim);
  // Work in a larger space so that the truncation edge does not reach the
  // retained block; the generator couples neighbouring levels only.
  const int padded = n + default_dim(std::abs(beta));
  const Matrix a = annihilation(FockDim(padded)).matrix();
  const Matrix gen = beta * a.adjoint() - std::conj(beta) * a;
  const Matrix d = gen.exp();
  return {{n}, d.topLeftCorner(n, n)};
}

Operator rotation(double theta, FockDim dim) {
  const int n = dim.size();
  Matrix m = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) m(k, k) = std::polar(1.0, theta * k);
  return {{n}, std::move(m)};
}

Ket fock(int n, FockDim dim) {
  if (n < 0 || n >= dim.size()) throw InvalidArgument("fock: level outside truncation");
  Vector v = Vector::Zero(dim.size());
  v(n) = 1.0;
  return {{dim.size()}, std::move(v)};
}

Ket coherent(cplx alpha, FockDim dim) {
  const double r = std::abs(alpha);
  check_truncation(r, dim);
  const int n = dim.size();
  Vector v(n);
  const double theta = std::arg(alpha);
  for (int k = 0; k < n; ++k) {
    const double mag = r == 0.0 ? (k == 0 ? 1.0 : 0.0) : std::exp(0.5 * log_poisson(r, k));
    v(k) = std::polar(mag, theta * k);
  }
  return Ket({n}, std::move(v)).normalized();
}

Ket cat(const CatSpec& spec, FockDim dim) {
  const int period = spec.components;
  if (period != 2 && period != 4) throw InvalidArgument("cat: components must be 2 or 4");
  if (spec.index < 0 || spec.index >= period) throw InvalidArgument("cat: index out of range");
  if (std::abs(spec.alpha) == 0.0 && spec.index != 0) {
    throw InvalidArgument("cat: odd sectors need a nonzero amplitude");
  }
  // Superposing the rotated copies |i^k alpha> with the phases of the
  // definition keeps exactly the Fock levels n = index (mod components).
  Vector v = coherent(spec.alpha, dim).vector();
  for (int k = 0; k < v.size(); ++k) {
    if (k % period != spec.index) v(k) = 0.0;
  }
  return Ket({dim.size()}, std::move(v)).normalized();
}

Operator tensor(const Operator& a, const Operator& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  Matrix m = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
  return {std::move(dims), std::move(m)};
}

Ket tensor(const Ket& a, const Ket& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  Vector v = Eigen::kroneckerProduct(a.vector(), b.vector()).eval();
  return {std::move(dims), std::move(v)};
}

Operator embed(const Operator& op, int mode, const Dims& dims) {
  if (mode < 0 || mode >= static_cast<int>(dims.size())) throw InvalidArgument("embed: bad mode");
  if (op.dims().size() != 1 || op.dims()[0] != dims[mode]) {
    throw DimensionMismatch("embed: operator does not match the mode dimension");
  }
  Matrix m = Matrix::Identity(1, 1);
  for (int k = 0; k < static_cast<int>(dims.size()); ++k) {
    const Matrix factor = k == mode ? op.matrix() : Matrix::Identity(dims[k], dims[k]);
    m = Eigen::kroneckerProduct(m, factor).eval();
  }
  return {dims, std::move(m)};
}

namespace {

// Photon numbers of every mode for flat index `flat`.
template <class Fn>
void for_each_level(const Dims& dims, Fn&& fn) {
  const int total = total_size(dims);
  std::vector<int> levels(dims.size());
  for (int flat = 0; flat < total; ++flat) {
    int rem = flat;
    for (int m = static_cast<int>(dims.size()) - 1; m >= 0; --m) {
      levels[m] = rem % dims[m];
      rem /= dims[m];
    }
    fn(flat, std::span<const int>(levels));
  }
}

}  // namespace

Sector parity_sector(const Dims& dims, int parity) {
  Sector s;
  for_each_level(dims, [&](int flat, std::span<const int> lv) {
    for (int n : lv) {
      if (n % 2 != parity) return;
    }
    s.push_back(flat);
  });
  return s;
}

Sector total_parity_sector(const Dims& dims, int parity) {
  Sector s;
  for_each_level(dims, [&](int flat, std::span<const int> lv) {
    int total = 0;
    for (int n : lv) total += n;
    if (total % 2 == parity) s.push_back(flat);
  });
  return s;
}

Sector sector_where(const Dims& dims, const std::function<bool(std::span<const int>)>& keep) {
  Sector s;
  for_each_level(dims, [&](int flat, std::span<const int> lv) {
    if (keep(lv)) s.push_back(flat);
  });
  return s;
}

Operator restrict_to(const Operator& op, const Sector& sector) {
  const int k = static_cast<int>(sector.size());
  Matrix m(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) m(i, j) = op.matrix()(sector[i], sector[j]);
  return {{k}, std::move(m)};
}

Ket restrict_to(const Ket& ket, const Sector& sector) {
  const int k = static_cast<int>(sector.size());
  Vector v(k);
  for (int i = 0; i < k; ++i) v(i) = ket.vector()(sector[i]);
  return {{k}, std::move(v)};
}

Ket embed_from(const Ket& ket, const Sector& sector, const Dims& full_dims) {
  if (ket.size() != static_cast<Eigen::Index>(sector.size())) {
    throw DimensionMismatch("embed_from: ket does not match the sector");
  }
  Vector v = Vector::Zero(total_size(full_dims));
  for (std::size_t i = 0; i < sector.size(); ++i) v(sector[i]) = ket.vector()(i);
  return {full_dims, std::move(v)};
}

Matrix embed_from(const Matrix& rho, const Sector& sector, int full_size) {
  Matrix out = Matrix::Zero(full_size, full_size);
  const int k = static_cast<int>(sector.size());
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) out(sector[i], sector[j]) = rho(i, j);
  return out;
}

}  // namespace catqubit
