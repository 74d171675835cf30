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

#include "catqubit/lindblad.hpp"

/// Master-equation builders for the driven dissipative processes.
///
/// Drive phases are chosen so that a real `eps` stabilises a real amplitude.
namespace catqubit::models {

/// Amplitude stabilised by i(eps a^dag^k - eps^* a^k) with loss kappa D[a^k].
cplx stabilized_alpha(int k, cplx eps, double kappa);
/// Drive that stabilises amplitude `alpha`: eps = kappa alpha^k / 2.
cplx drive_for_alpha(int k, cplx alpha, double kappa);

struct Pump {
  int photons = 2;  // 2 or 4
  cplx eps = 0.0;
  double kappa = 1.0;
};

/// H = i(eps a^dag^k - eps^* a^k), loss kappa D[a^k], plus optional
/// dephasing kappa_phi D[a^dag a] and single-photon loss kappa_1ph D[a].
LindbladModel k_photon(const Pump& pump, FockDim dim, double kappa_phi = 0.0,
                       double kappa_1ph = 0.0);

/// k_photon with an added Zeno drive: eps_x (a + a^dag) for two-photon
/// pumps, eps_x (a^2 + a^dag^2) for four-photon pumps.
LindbladModel zeno_rotation(const Pump& pump, double eps_x, FockDim dim, double kappa_1ph = 0.0);

/// Two identical pumped modes coupled by eps_xx (a1 a2^dag + h.c.) for
/// two-photon pumps or eps_xx (a1^2 a2^dag^2 + h.c.) for four-photon pumps.
LindbladModel entangling(const Pump& pump, double eps_xx, FockDim dim);

}  // namespace catqubit::models
