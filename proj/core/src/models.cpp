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

#include "catqubit/models.hpp"

#include <cmath>

namespace catqubit::models {
namespace {

Matrix power(const Matrix& m, int k) {
  Matrix out = Matrix::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) out = out * m;
  return out;
}

void check_pump(const Pump& p) {
  if (p.photons != 2 && p.photons != 4) {
    throw InvalidArgument("pump must exchange 2 or 4 photons");
  }
  if (!(p.kappa > 0.0)) throw InvalidArgument("pump loss rate must be positive");
}

Operator pump_hamiltonian(const Pump& p, const Matrix& a, const Dims& dims) {
  const Matrix ak = power(a, p.photons);
  return {dims, kI * (p.eps * ak.adjoint() - std::conj(p.eps) * ak)};
}

}  // namespace

cplx stabilized_alpha(int k, cplx eps, double kappa) {
  if (!(kappa > 0.0)) throw InvalidArgument("kappa must be positive");
  return std::pow(2.0 * eps / kappa, 1.0 / k);
}

cplx drive_for_alpha(int k, cplx alpha, double kappa) {
  return 0.5 * kappa * std::pow(alpha, k);
}

LindbladModel k_photon(const Pump& pump, FockDim dim, double kappa_phi, double kappa_1ph) {
  check_pump(pump);
  const Dims dims{dim.size()};
  const Matrix a = annihilation(dim).matrix();
  std::vector<Collapse> cs{{pump.kappa, Operator(dims, power(a, pump.photons))}};
  if (kappa_phi > 0.0) cs.push_back({kappa_phi, number(dim)});
  if (kappa_1ph > 0.0) cs.push_back({kappa_1ph, annihilation(dim)});
  return {pump_hamiltonian(pump, a, dims), std::move(cs)};
}

LindbladModel zeno_rotation(const Pump& pump, double eps_x, FockDim dim, double kappa_1ph) {
  const LindbladModel base = k_photon(pump, dim, 0.0, kappa_1ph);
  const Matrix a = annihilation(dim).matrix();
  const Matrix drive = pump.photons == 2 ? Matrix(a + a.adjoint())
                                         : Matrix(a * a + a.adjoint() * a.adjoint());
  return {base.hamiltonian() + Operator(base.dims(), eps_x * drive), base.collapses()};
}

LindbladModel entangling(const Pump& pump, double eps_xx, FockDim dim) {
  check_pump(pump);
  const Dims dims{dim.size(), dim.size()};
  const int k = pump.photons;
  const int m = k / 2;  // photons exchanged between the modes per coupling event
  const Matrix a = annihilation(dim).matrix();
  const Operator a1 = embed(annihilation(dim), 0, dims);
  const Operator a2 = embed(annihilation(dim), 1, dims);
  const Matrix a1m = power(a1.matrix(), m), a2m = power(a2.matrix(), m);
  const Matrix coupling = a1m * a2m.adjoint() + a2m * a1m.adjoint();
  const Operator h1 = embed(pump_hamiltonian(pump, a, {dim.size()}), 0, dims);
  const Operator h2 = embed(pump_hamiltonian(pump, a, {dim.size()}), 1, dims);
  Operator h = h1 + h2 + Operator(dims, eps_xx * coupling);
  std::vector<Collapse> cs{{pump.kappa, Operator(dims, power(a1.matrix(), k))},
                           {pump.kappa, Operator(dims, power(a2.matrix(), k))}};
  return {std::move(h), std::move(cs)};
}

}  // namespace catqubit::models
