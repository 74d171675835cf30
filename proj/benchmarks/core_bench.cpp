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


#include <benchmark/benchmark.h>

#include "catqubit/catqubit.hpp"
#include "catqubit/integrator.hpp"

namespace {

using namespace catqubit;

void BM_LindbladApply(benchmark::State& state) {
  const FockDim dim(static_cast<int>(state.range(0)));
  const LindbladModel model = models::k_photon({2, models::drive_for_alpha(2, 2.0, 1.0), 1.0}, dim);
  const LindbladKernel kernel(model);
  const Matrix rho = DensityMatrix::pure(coherent(1.5, dim)).matrix();
  Matrix out;
  for (auto _ : state) {
    kernel.apply_hermitian(rho, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_LindbladApply)->Arg(20)->Arg(40)->Arg(80);

void BM_TwoPhotonRelaxation(benchmark::State& state) {
  const FockDim dim(26);
  const LindbladModel model = models::k_photon({2, models::drive_for_alpha(2, 2.0, 1.0), 1.0}, dim);
  const DensityMatrix rho0 = DensityMatrix::pure(fock(0, dim));
  for (auto _ : state) {
    Trajectory t = integrate(model, rho0, 5.0, {expectation_observable("n", number(dim))});
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(BM_TwoPhotonRelaxation)->Unit(benchmark::kMillisecond);

void BM_BesselSequence(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto v = analytics::bessel_i_scaled_sequence(120, x);
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_BesselSequence)->Arg(1)->Arg(8)->Arg(32);

void BM_AsymptoticSeries(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(analytics::c_pm_series(2.0, {1.0, 0.5}));
  }
}
BENCHMARK(BM_AsymptoticSeries);

void BM_WignerGrid(benchmark::State& state) {
  const FockDim dim(30);
  const DensityMatrix rho = DensityMatrix::pure(cat(CatSpec::even(2.0), dim));
  wigner::GridSpec spec;
  spec.resolution = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto grid = wigner::wigner(rho, spec);
    benchmark::DoNotOptimize(grid.values.data());
  }
}
BENCHMARK(BM_WignerGrid)->Arg(41)->Arg(121)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
