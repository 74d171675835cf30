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
#include <span>

#include "catqubit/types.hpp"

/// Truncated Fock-space states and operators for one or two bosonic modes.
///
/// All matrices are dense. Two-mode objects use the Kronecker ordering
/// |n1, n2> -> n1 * dim2 + n2, i.e. mode 1 is the slow index.
namespace catqubit {

/// Number of retained Fock levels |0>..|n_max-1> of one mode.
class FockDim {
 public:
  explicit FockDim(int n_max);
  int size() const noexcept { return n_; }

  friend bool operator==(FockDim, FockDim) = default;

 private:
  int n_;
};

class Operator {
 public:
  Operator(Dims dims, Matrix m);

  const Dims& dims() const noexcept { return dims_; }
  Eigen::Index size() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }

  Operator adjoint() const { return {dims_, m_.adjoint()}; }

  Operator& operator+=(const Operator& o);
  Operator& operator-=(const Operator& o);
  Operator& operator*=(cplx s) {
    m_ *= s;
    return *this;
  }

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator*(cplx s, Operator a) { return a *= s; }
  friend Operator operator*(Operator a, cplx s) { return a *= s; }
  friend Operator operator*(const Operator& a, const Operator& b);

 private:
  Dims dims_;
  Matrix m_;
};

class Ket {
 public:
  /// Stores `v` as given; use `normalized()` when a unit vector is needed.
  Ket(Dims dims, Vector v);

  const Dims& dims() const noexcept { return dims_; }
  Eigen::Index size() const noexcept { return v_.size(); }
  const Vector& vector() const noexcept { return v_; }
  double norm() const { return v_.norm(); }
  Ket normalized() const;

  cplx inner(const Ket& other) const;  // <this|other>

 private:
  Dims dims_;
  Vector v_;
};

Ket operator*(const Operator& op, const Ket& k);
Ket operator+(const Ket& a, const Ket& b);
Ket operator-(const Ket& a, const Ket& b);
Ket operator*(cplx s, const Ket& k);

/// Amplitude, component count (2 or 4) and sector index of a cat state.
/// For 2-cats `index` 0 is the even (+) cat and 1 the odd (-) cat; for
/// 4-cats it is mu in {0,1,2,3}, the photon number modulo 4.
struct CatSpec {
  cplx alpha;
  int components = 2;
  int index = 0;

  static CatSpec even(cplx a) { return {a, 2, 0}; }
  static CatSpec odd(cplx a) { return {a, 2, 1}; }
  static CatSpec four(cplx a, int mu) { return {a, 4, mu}; }
};

/// Weight of a coherent state |alpha> on Fock levels n >= n_max.
double coherent_tail_weight(double abs_alpha, int n_max);

inline constexpr double kTailTolerance = 1e-10;

/// ceil(|a|^2 + 8|a| + 12): the default truncation for amplitude |a|.
int default_dim(double abs_alpha);

/// Smallest n_max whose coherent tail weight is below kTailTolerance.
int minimum_dim(double abs_alpha);

/// Throws TruncationTooSmall if `dim` cannot hold |alpha>.
void check_truncation(double abs_alpha, FockDim dim);

Operator identity(FockDim dim);
Operator annihilation(FockDim dim);
Operator creation(FockDim dim);
Operator number(FockDim dim);
Operator parity(FockDim dim);

/// exp(beta a^dag - beta* a), computed in a padded space and truncated.
Operator displacement(cplx beta, FockDim dim);

/// exp(i theta a^dag a).
Operator rotation(double theta, FockDim dim);

Ket fock(int n, FockDim dim);
Ket coherent(cplx alpha, FockDim dim);
Ket cat(const CatSpec& spec, FockDim dim);

Operator tensor(const Operator& a, const Operator& b);
Ket tensor(const Ket& a, const Ket& b);

/// Operator acting on one mode of a multi-mode space.
Operator embed(const Operator& op, int mode, const Dims& dims);

/// Flat basis indices of a sub-space: a list of retained basis states.
/// Operators that leave the sub-space invariant can be restricted to it
/// without approximation.
using Sector = std::vector<int>;

/// Basis states whose photon number in every mode has the given parity
/// (0 even, 1 odd).
Sector parity_sector(const Dims& dims, int parity);

/// Basis states whose total photon number has the given parity.
Sector total_parity_sector(const Dims& dims, int parity);

/// Basis states whose per-mode levels satisfy the predicate.
Sector sector_where(const Dims& dims, const std::function<bool(std::span<const int>)>& keep);

Operator restrict_to(const Operator& op, const Sector& sector);
Ket restrict_to(const Ket& k, const Sector& sector);
Ket embed_from(const Ket& k, const Sector& sector, const Dims& full_dims);
Matrix embed_from(const Matrix& rho, const Sector& sector, int full_size);

}  // namespace catqubit
