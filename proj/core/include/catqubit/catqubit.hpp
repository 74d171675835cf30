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

#include "catqubit/analytics.hpp"
#include "catqubit/gates.hpp"
#include "catqubit/hilbert.hpp"
#include "catqubit/integrator.hpp"
#include "catqubit/lindblad.hpp"
#include "catqubit/models.hpp"
#include "catqubit/reduction.hpp"
#include "catqubit/wigner.hpp"

namespace catqubit {

inline constexpr const char* kVersion = CATQUBIT_VERSION;

}  // namespace catqubit
