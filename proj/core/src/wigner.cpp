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

#include "catqubit/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

namespace catqubit::wigner {

void GridSpec::validate() const {
  if (resolution < 2) throw InvalidArgument("wigner grid needs at least two points per axis");
  if (!(x_max > x_min) || !(p_max > p_min)) throw InvalidArgument("wigner grid range is empty");
}

double PhaseSpaceGrid::integral() const {
  const auto n = static_cast<Eigen::Index>(x.size());
  const auto m = static_cast<Eigen::Index>(p.size());
  const double dx = (x.back() - x.front()) / static_cast<double>(n - 1);
  const double dp = (p.back() - p.front()) / static_cast<double>(m - 1);
  double s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      const double wx = (i == 0 || i == n - 1) ? 0.5 : 1.0;
      const double wp = (j == 0 || j == m - 1) ? 0.5 : 1.0;
      s += wx * wp * values(i, j);
    }
  return s * dx * dp;
}

double wigner_at(const Matrix& rho, cplx beta) {
  // Matrix elements of the displaced parity, w[n] ~ <n| D P D^dag |m> for the
  // current m, built by the normalised Laguerre recurrence in m and n.
  const Eigen::Index dim = rho.rows();
  std::vector<cplx> w(static_cast<std::size_t>(dim));
  const cplx two_b = 2.0 * beta;
  const cplx two_bc = std::conj(two_b);
  w[0] = std::exp(-2.0 * std::norm(beta)) / kPi;
  double sum = rho(0, 0).real() * w[0].real();
  for (Eigen::Index n = 1; n < dim; ++n) {
    w[static_cast<std::size_t>(n)] = two_b * w[static_cast<std::size_t>(n - 1)] / std::sqrt(double(n));
    sum += 2.0 * std::real(rho(0, n) * w[static_cast<std::size_t>(n)]);
  }
  for (Eigen::Index m = 1; m < dim; ++m) {
    const double sm = std::sqrt(double(m));
    cplx prev = w[static_cast<std::size_t>(m)];
    w[static_cast<std::size_t>(m)] = (two_bc * prev - sm * w[static_cast<std::size_t>(m - 1)]) / sm;
    sum += std::real(rho(m, m) * w[static_cast<std::size_t>(m)]);
    for (Eigen::Index n = m + 1; n < dim; ++n) {
      const cplx next =
          (two_b * w[static_cast<std::size_t>(n - 1)] - sm * prev) / std::sqrt(double(n));
      prev = w[static_cast<std::size_t>(n)];
      w[static_cast<std::size_t>(n)] = next;
      sum += 2.0 * std::real(rho(m, n) * next);
    }
  }
  return 2.0 * sum;
}

PhaseSpaceGrid wigner(const DensityMatrix& rho, const GridSpec& spec, int jobs) {
  spec.validate();
  if (rho.dims().size() != 1) throw DimensionMismatch("wigner: single-mode state expected");
  const Matrix& m = rho.matrix();
  const Eigen::Index n = m.rows();
  double top = 0.0;
  for (Eigen::Index k = std::max<Eigen::Index>(0, n - 2); k < n; ++k) top += m(k, k).real();
  if (top > 1e-6) {
    throw TruncationTooSmall("wigner: state has weight " + std::to_string(top) +
                             " on the highest Fock levels");
  }
  PhaseSpaceGrid g;
  const int r = spec.resolution;
  for (int i = 0; i < r; ++i) {
    g.x.push_back(spec.x_min + (spec.x_max - spec.x_min) * i / (r - 1));
    g.p.push_back(spec.p_min + (spec.p_max - spec.p_min) * i / (r - 1));
  }
  g.values.resize(r, r);
  auto rows = [&](int begin, int end) {
    for (int i = begin; i < end; ++i)
      for (int j = 0; j < r; ++j) g.values(i, j) = wigner_at(m, {g.x[i], g.p[j]});
  };
  jobs = std::clamp(jobs, 1, r);
  if (jobs == 1) {
    rows(0, r);
  } else {
    std::vector<std::jthread> pool;
    for (int k = 0; k < jobs; ++k) pool.emplace_back(rows, r * k / jobs, r * (k + 1) / jobs);
  }
  return g;
}

void write_csv(const PhaseSpaceGrid& grid, std::ostream& out) {
  out << "x,p,w\n";
  char buf[96];
  for (std::size_t i = 0; i < grid.x.size(); ++i)
    for (std::size_t j = 0; j < grid.p.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g\n", grid.x[i], grid.p[j],
                    grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      out << buf;
    }
}

}  // namespace catqubit::wigner
