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

#include "catqubit/reduction.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "catqubit/models.hpp"

namespace catqubit::reduction {

void CircuitParams::validate() const {
  if (!(kappa_b > 0.0)) throw InvalidArgument("kappa_b must be positive");
  if (!(g > 0.0)) throw InvalidArgument("g must be positive");
  if (!(eps_b >= 0.0)) throw InvalidArgument("eps_b must be non-negative");
}

double g_from_pump_ratio(double pump_ratio, double chi_ab) {
  return std::abs(pump_ratio) * chi_ab / 2.0;
}

ReducedParams adiabatic_params(const CircuitParams& p) {
  p.validate();
  return {2.0 * p.eps_b * p.g / p.kappa_b, 4.0 * p.g * p.g / p.kappa_b, std::sqrt(p.eps_b / p.g)};
}

LindbladModel build_full_model(const CircuitParams& p, FockDim n_a, FockDim n_b) {
  p.validate();
  const ReducedParams r = adiabatic_params(p);
  check_truncation(r.alpha, n_a);
  const Dims dims{n_a.size(), n_b.size()};
  const Matrix a = embed(annihilation(n_a), 0, dims).matrix();
  const Matrix b = embed(annihilation(n_b), 1, dims).matrix();
  const Matrix na = a.adjoint() * a, nb = b.adjoint() * b;
  const Matrix a2bd = a * a * b.adjoint();
  Matrix h = p.g * (a2bd + a2bd.adjoint()) - p.eps_b * (b + b.adjoint()) +
             0.5 * p.chi_aa * na * na + 0.5 * p.chi_bb * nb * nb + p.chi_ab * na * nb;
  return {Operator(dims, std::move(h)), {{p.kappa_b, Operator(dims, b)}}};
}

LindbladModel build_reduced_model(const CircuitParams& p, FockDim n_a) {
  const ReducedParams r = adiabatic_params(p);
  check_truncation(r.alpha, n_a);
  return models::k_photon({2, r.eps_2ph, r.kappa_2ph}, n_a);
}

Sector mode_parity_sector(const Dims& dims, int mode, int parity) {
  if (dims.size() != 2 || mode < 0 || mode > 1) {
    throw InvalidArgument("mode_parity_sector: two-mode dims expected");
  }
  Sector s;
  for (int i = 0; i < dims[0]; ++i)
    for (int j = 0; j < dims[1]; ++j)
      if (((mode == 0 ? i : j) % 2) == parity) s.push_back(i * dims[1] + j);
  return s;
}

ComparisonResult compare_full_vs_reduced(const CircuitParams& p, const ComparisonOptions& o) {
  const ReducedParams r = adiabatic_params(p);
  const FockDim na(o.n_a), nb(o.n_b);
  const Dims dims{o.n_a, o.n_b};

  // Mode-a parity is conserved by both models and the vacuum is even.
  const Sector full_sector = mode_parity_sector(dims, 0, 0);
  const Sector red_sector = parity_sector({o.n_a}, 0);
  const LindbladModel full = build_full_model(p, na, nb).restricted(full_sector);
  const LindbladModel red = build_reduced_model(p, na).restricted(red_sector);

  const Ket target = cat(CatSpec::even(r.alpha), na);
  const Matrix proj_a = target.vector() * target.vector().adjoint();
  const Operator proj_full = restrict_to(
      Operator(dims, Matrix(Eigen::kroneckerProduct(proj_a, Matrix::Identity(o.n_b, o.n_b)))),
      full_sector);
  const Operator nb_full = restrict_to(embed(number(nb), 1, dims), full_sector);
  const Ket target_red = restrict_to(target, red_sector);

  const auto vac_full = DensityMatrix::pure(restrict_to(tensor(fock(0, na), fock(0, nb)), full_sector));
  const auto vac_red = DensityMatrix::pure(restrict_to(fock(0, na), red_sector));

  SteadyStateOptions so;
  so.tol = o.steady_tol;
  so.max_time = o.max_time;
  const SteadyStateResult sf = steady_state(full, vac_full, so);
  const SteadyStateResult sr = steady_state(red, vac_red, so);

  ComparisonResult out;
  out.full_settle_time = sf.elapsed;
  out.reduced_settle_time = sr.elapsed;
  out.horizon = std::max(sf.elapsed, sr.elapsed);

  IntegrationOptions io;
  io.output_points = o.output_points;
  out.full = integrate(full, vac_full, out.horizon,
                       {expectation_observable("fidelity", proj_full),
                        expectation_observable("n_b", nb_full)},
                       io);
  out.reduced = integrate(red, vac_red, out.horizon, {fidelity_observable("fidelity", target_red)}, io);
  out.full_terminal = out.full.real("fidelity").back();
  out.reduced_terminal = out.reduced.real("fidelity").back();
  out.gap = std::abs(out.full_terminal - out.reduced_terminal);
  const auto ff = out.full.real("fidelity");
  const auto fr = out.reduced.real("fidelity");
  out.max_gap = 0.0;
  for (std::size_t i = 0; i < ff.size(); ++i) out.max_gap = std::max(out.max_gap, std::abs(ff[i] - fr[i]));
  const auto nbs = out.full.real("n_b");
  out.max_n_b = *std::max_element(nbs.begin(), nbs.end());
  return out;
}

}  // namespace catqubit::reduction
