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

#include <algorithm>
#include <cmath>

#include "catqubit/analytics.hpp"

namespace catqubit::analytics {
namespace {

constexpr int kMaxOrder = 200;

// e^{-x} I_q(x) by the ascending series; used for small x.
double scaled_series(int q, double x) {
  const double h = 0.5 * x;
  double term = std::exp(q * std::log(h) - std::lgamma(q + 1.0) - x);
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= h * h / (k * static_cast<double>(k + q));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

}  // namespace

std::vector<double> bessel_i_scaled_sequence(int q_max, double x) {
  if (q_max < 0 || q_max > kMaxOrder) throw InvalidArgument("bessel: order out of range");
  if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidArgument("bessel: x must be >= 0");
  std::vector<double> out(static_cast<std::size_t>(q_max) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  if (x < 0.5) {
    for (int q = 0; q <= q_max; ++q) out[static_cast<std::size_t>(q)] = scaled_series(q, x);
    return out;
  }
  // Miller: start well above both the requested order and x, recur
  // downwards from an arbitrary seed and normalise with
  // e^x = I_0 + 2 sum_{k>=1} I_k.
  const double top = std::max<double>(q_max, x);
  int m = static_cast<int>(top + 30.0 + std::sqrt(60.0 * top));
  m += m % 2;
  double ip = 0.0, i = 1e-300, norm = 0.0;
  for (int j = m; j >= 1; --j) {
    const double im = ip + (2.0 * j / x) * i;
    ip = i;
    i = im;
    if (j - 1 <= q_max) out[static_cast<std::size_t>(j - 1)] = i;
    if (j - 1 >= 1) norm += 2.0 * i;
    if (std::abs(i) > 1e250) {
      i *= 1e-250;
      ip *= 1e-250;
      norm *= 1e-250;
      for (int k = j - 1; k <= q_max; ++k) out[static_cast<std::size_t>(k)] *= 1e-250;
    }
  }
  norm += i;  // I_0
  for (double& v : out) v /= norm;
  return out;
}

double bessel_i_scaled(int q, double x) {
  q = std::abs(q);
  return bessel_i_scaled_sequence(q, x)[static_cast<std::size_t>(q)];
}

double bessel_i(int q, double x) { return std::exp(x) * bessel_i_scaled(q, x); }

double bessel_identity_scaled(double x, int q_cap) {
  const auto is = bessel_i_scaled_sequence(q_cap + 1, x);
  double sum = is[0] * is[0];
  for (int q = 1; q <= q_cap; ++q) {
    const double sq = is[static_cast<std::size_t>(q)] * is[static_cast<std::size_t>(q)];
    const double sign = q % 2 == 0 ? 1.0 : -1.0;
    // terms q and -q, with I_{-q} = I_q
    sum += sign * sq * (1.0 / (2 * q + 1) + 1.0 / (1 - 2 * q));
  }
  return sum;
}

double bessel_recurrence_residual(int q, double x) {
  const int n = std::abs(q) + 1;
  const auto is = bessel_i_scaled_sequence(n, x);
  auto f = [&](int k) {
    const double v = is[static_cast<std::size_t>(std::abs(k))];
    return (std::abs(k) % 2 == 0) ? v : -v;
  };
  return x * (f(q - 1) - f(q + 1)) + 2.0 * q * f(q);
}

}  // namespace catqubit::analytics
