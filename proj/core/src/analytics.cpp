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

#include "catqubit/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <tuple>

#include "catqubit/integrator.hpp"
#include "catqubit/models.hpp"

namespace catqubit::analytics {
namespace {

// log(n!!), with (-1)!! = 0!! = 1.
double log_double_factorial(int n) {
  if (n <= 0) return 0.0;
  if (n % 2 == 0) return 0.5 * n * std::log(2.0) + std::lgamma(0.5 * n + 1.0);
  const int h = (n + 1) / 2;
  return std::lgamma(n + 2.0) - h * std::log(2.0) - std::lgamma(h + 1.0);
}

// alpha / sqrt(1 - e^{-4|alpha|^2}), continuous at alpha -> 0 in modulus.
cplx amp_over_root(cplx alpha) {
  const double x = std::norm(alpha);
  if (x == 0.0) return 0.5;
  return alpha / std::sqrt(-std::expm1(-4.0 * x));
}

// Index of the last q whose weight |I_q(x)| / (2q+1) is not negligible.
int significant_orders(const std::vector<double>& is, int cap) {
  int q = 0;
  const double lead = is[0];
  for (int k = 1; k <= cap && k < static_cast<int>(is.size()); ++k) {
    if (is[static_cast<std::size_t>(k)] / (2 * k + 1) >= 1e-14 * lead) q = k;
  }
  return q;
}

struct Simpson {
  std::function<cplx(double)> f;
  double tol;
  int max_depth;

  cplx recurse(double a, double b, cplx fa, cplx fm, cplx fb, cplx whole, double eps,
               int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const cplx flm = f(lm), frm = f(rm);
    const cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const cplx delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
    if (depth >= max_depth) {
      throw QuadratureNoConvergence("adaptive Simpson exceeded its depth limit");
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * eps, depth + 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * eps, depth + 1);
  }

  cplx integrate(double a, double b, int panels) const {
    cplx total = 0.0;
    const double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i) {
      const double lo = a + i * h, hi = lo + h, mid = 0.5 * (lo + hi);
      const cplx flo = f(lo), fmid = f(mid), fhi = f(hi);
      const cplx whole = h / 6.0 * (flo + 4.0 * fmid + fhi);
      total += recurse(lo, hi, flo, fmid, fhi, whole, tol / panels, 0);
    }
    return total;
  }
};

}  // namespace

ConservedQuantity build_j_plus_plus(FockDim dim) {
  Matrix m = Matrix::Zero(dim.size(), dim.size());
  for (int n = 0; n < dim.size(); n += 2) m(n, n) = 1.0;
  return {ConservedLabel::kJpp, Operator({dim.size()}, std::move(m))};
}

ConservedQuantity build_j00_four_cat(FockDim dim) {
  Matrix m = Matrix::Zero(dim.size(), dim.size());
  for (int n = 0; n < dim.size(); n += 4) m(n, n) = 1.0;
  return {ConservedLabel::kJ00FourCat, Operator({dim.size()}, std::move(m))};
}

Operator build_j_plus_minus_term(int q, FockDim dim) {
  const int n = dim.size();
  Matrix m = Matrix::Zero(n, n);
  if (q >= 0) {
    // (N-1)!!/(N+2q)!! J++ a^{2q+1}: |2k> <2k+2q+1|
    for (int k = 0; 2 * k + 2 * q + 1 < n; ++k) {
      const int row = 2 * k, col = 2 * k + 2 * q + 1;
      const double lc = 0.5 * (std::lgamma(col + 1.0) - std::lgamma(row + 1.0)) +
                        log_double_factorial(row - 1) - log_double_factorial(row + 2 * q);
      m(row, col) = std::exp(lc);
    }
  } else {
    // J++ a^dag^{2p-1} N!!/(N+2p-1)!!: |m+2p-1> <m| for odd m
    const int p = -q;
    for (int col = 1; col + 2 * p - 1 < n; col += 2) {
      const int row = col + 2 * p - 1;
      const double lc = 0.5 * (std::lgamma(row + 1.0) - std::lgamma(col + 1.0)) +
                        log_double_factorial(col) - log_double_factorial(row);
      m(row, col) = std::exp(lc);
    }
  }
  return {{n}, std::move(m)};
}

ConservedQuantity build_j_plus_minus(cplx alpha, FockDim dim, int q_cap) {
  const double x = std::norm(alpha);
  const double theta = std::arg(alpha);
  const int cap = std::min({q_cap, dim.size() / 2 + 1, 199});
  const auto is = bessel_i_scaled_sequence(cap + 1, x);
  const int qmax = significant_orders(is, cap);
  // sqrt(2x / sinh 2x) I_q(x) = 2 sqrt(x) / sqrt(1 - e^{-4x}) e^{-x} I_q(x)
  const double pref = x == 0.0 ? 1.0 : 2.0 * std::sqrt(x) / std::sqrt(-std::expm1(-4.0 * x));
  Matrix j = Matrix::Zero(dim.size(), dim.size());
  for (int q = -qmax; q <= qmax; ++q) {
    const double sign = (std::abs(q) % 2 == 0) ? 1.0 : -1.0;
    const double w = pref * sign / (2 * q + 1) * is[static_cast<std::size_t>(std::abs(q))];
    if (w == 0.0) continue;
    j += (w * std::polar(1.0, -theta * (2 * q + 1))) * build_j_plus_minus_term(q, dim).matrix();
  }
  return {ConservedLabel::kJpm, Operator({dim.size()}, std::move(j)), alpha, qmax};
}

std::array<double, 3> AsymptoticState::bloch() const {
  return {2.0 * c_pm.real(), -2.0 * c_pm.imag(), c_pp - c_mm};
}

double c_pp_coherent(cplx beta) { return 0.5 * (1.0 + std::exp(-2.0 * std::norm(beta))); }

cplx c_pm_series(cplx alpha, cplx beta) {
  if (beta == cplx(0.0)) return 0.0;
  const double x = std::norm(alpha), y = std::norm(beta);
  const double dtheta = std::arg(alpha) - std::arg(beta);
  const int cap = 199;
  const auto ia = bessel_i_scaled_sequence(cap + 1, x);
  const auto ib = bessel_i_scaled_sequence(cap + 1, y);
  cplx sum = ia[0] * ib[0];
  const double lead = std::abs(sum);
  for (int q = 1; q <= cap; ++q) {
    const double p = ia[static_cast<std::size_t>(q)] * ib[static_cast<std::size_t>(q)];
    const double sign = q % 2 == 0 ? 1.0 : -1.0;
    const cplx up = sign * p / (2.0 * q + 1.0) * std::polar(1.0, 2.0 * q * dtheta);
    const cplx down = sign * p / (1.0 - 2.0 * q) * std::polar(1.0, -2.0 * q * dtheta);
    sum += up + down;
    if (p < 1e-17 * lead) break;
  }
  return 2.0 * amp_over_root(alpha) * std::conj(beta) * sum;
}

cplx c_pm_integral(cplx alpha, cplx beta, double tol) {
  if (beta == cplx(0.0)) return 0.0;
  const double x = std::norm(alpha), y = std::norm(beta);
  const cplx a2 = alpha * alpha, b2 = beta * beta;
  Simpson s{[&](double phi) {
              const double z = std::abs(a2 - b2 * std::polar(1.0, 2.0 * phi));
              return std::polar(std::exp(z - x - y) * bessel_i_scaled(0, z), -phi);
            },
            tol, 50};
  const cplx integral = s.integrate(0.0, kPi, 16);
  return kI * amp_over_root(alpha) * std::conj(beta) * integral;
}

AsymptoticState asymptotic_from_coherent(cplx alpha, cplx beta) {
  AsymptoticState s;
  s.alpha = alpha;
  s.c_pp = c_pp_coherent(beta);
  s.c_mm = 1.0 - s.c_pp;
  s.c_pm = c_pm_integral(alpha, beta);
  return s;
}

AsymptoticState asymptotic_from_state(cplx alpha, const DensityMatrix& rho0) {
  if (rho0.dims().size() != 1) throw DimensionMismatch("asymptotic_from_state: one mode only");
  const FockDim dim(static_cast<int>(rho0.size()));
  const Matrix jpp = build_j_plus_plus(dim).op.matrix();
  const Matrix jpm = build_j_plus_minus(alpha, dim).op.matrix();
  AsymptoticState s;
  s.alpha = alpha;
  s.c_pp = std::real(jpp.conjugate().cwiseProduct(rho0.matrix()).sum());
  s.c_mm = 1.0 - s.c_pp;
  s.c_pm = jpm.conjugate().cwiseProduct(rho0.matrix()).sum();
  return s;
}

DensityMatrix reconstruct_rho_infinity(const AsymptoticState& s, FockDim dim) {
  const Vector p = cat(CatSpec::even(s.alpha), dim).vector();
  const Vector m = cat(CatSpec::odd(s.alpha), dim).vector();
  Matrix rho = s.c_pp * p * p.adjoint() + s.c_mm * m * m.adjoint() +
               s.c_pm * p * m.adjoint() + std::conj(s.c_pm) * m * p.adjoint();
  return DensityMatrix::unchecked({dim.size()}, std::move(rho));
}

double erfi(double x) {
  // 2/sqrt(pi) sum x^{2n+1} / (n! (2n+1))
  const double x2 = x * x;
  double term = x, sum = x;
  for (int n = 1; n < 2000; ++n) {
    term *= x2 / n;
    const double add = term / (2 * n + 1);
    sum += add;
    if (std::abs(add) < 1e-17 * std::abs(sum)) break;
  }
  return 2.0 / std::sqrt(kPi) * sum;
}

double c_pm_limit_real_axis(double a) {
  if (a == 0.0) return 1.0 / std::sqrt(2.0 * kPi);
  return 0.5 * std::erf(std::sqrt(2.0) * a) / std::sqrt(-std::expm1(-4.0 * a * a));
}

cplx c_pm_limit_imaginary_axis(double a) {
  if (a == 0.0) return {0.0, -1.0 / std::sqrt(2.0 * kPi)};
  return {0.0, -0.5 * erfi(std::sqrt(2.0) * a) / std::sqrt(std::expm1(4.0 * a * a))};
}

double phase_flip_rate(cplx alpha, double kappa_phi) {
  const double x = std::norm(alpha);
  if (x == 0.0) return 0.5 * kappa_phi;
  if (2.0 * x > 700.0) return 0.0;
  return kappa_phi * x / std::sinh(2.0 * x);
}

DecayFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& s,
                        double t_begin, double t_end, double max_residual) {
  if (t.size() != s.size()) throw DimensionMismatch("fit_decay_rate: length mismatch");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_begin || t[i] > t_end) continue;
    const double v = std::abs(s[i]);
    if (!(v > 1e-300)) throw NonExponentialDecay("fit_decay_rate: signal vanishes in window");
    xs.push_back(t[i]);
    ys.push_back(std::log(v));
  }
  const int n = static_cast<int>(xs.size());
  if (n < 3) throw NonExponentialDecay("fit_decay_rate: fewer than three samples in window");
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += xs[static_cast<std::size_t>(i)];
    my += ys[static_cast<std::size_t>(i)];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dx = xs[static_cast<std::size_t>(i)] - mx;
    sxx += dx * dx;
    sxy += dx * (ys[static_cast<std::size_t>(i)] - my);
  }
  const double slope = sxy / sxx;
  const double icpt = my - slope * mx;
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = ys[static_cast<std::size_t>(i)] - (icpt + slope * xs[static_cast<std::size_t>(i)]);
    ss += r * r;
  }
  const double residual = std::sqrt(ss / n);
  if (residual > max_residual) {
    throw NonExponentialDecay("fit_decay_rate: RMS residual " + std::to_string(residual) +
                              " exceeds " + std::to_string(max_residual));
  }
  return {-slope, icpt, residual, n};
}

DecayFit fit_decay_rate(const Trajectory& traj, const std::string& name, double t_begin,
                        double t_end, double max_residual) {
  return fit_decay_rate(traj.times, traj.abs(name), t_begin, t_end, max_residual);
}

namespace {

Sector modulus_sector(int n, int period, int index) {
  Sector s;
  for (int k = index; k < n; k += period) s.push_back(k);
  return s;
}

Matrix block_of(const Matrix& m, const Sector& r, const Sector& c) {
  Matrix out(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(c.size()));
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(r[i], c[j]);
  return out;
}

// Propagates the (rows, cols) block of rho0 on a uniform grid and returns
// the observable sum(conj(w) .* block) at every grid time.
std::pair<std::vector<double>, std::vector<double>> block_signal(
    const LindbladModel& model, const Sector& rows, const Sector& cols, const Matrix& rho0,
    const Matrix& weight_full, double horizon, int points) {
  const BlockPropagator prop(model, rows, cols, horizon / points);
  Matrix x = block_of(rho0, rows, cols);
  const Matrix w = block_of(weight_full, rows, cols).conjugate();
  std::vector<double> t, s;
  for (int i = 0; i <= points; ++i) {
    if (i > 0) x = prop.apply(x);
    t.push_back(horizon * i / points);
    s.push_back(std::abs(w.cwiseProduct(x).sum()));
  }
  return {t, s};
}

double fit_horizon(double rate_estimate, const PhaseFlipOptions& o) {
  const double h = rate_estimate > 0.0 ? 3.0 / rate_estimate : o.horizon_cap;
  return std::clamp(h, 10.0 * o.transient, o.horizon_cap);
}

}  // namespace

PhaseFlipMeasurement measure_phase_flip_two_photon(double alpha, const PhaseFlipOptions& o) {
  if (!(alpha > 0.0)) throw InvalidArgument("phase-flip fit needs alpha > 0");
  const FockDim dim(o.n_max > 0 ? o.n_max : minimum_dim(alpha) + 6);
  check_truncation(alpha, dim);
  const double kappa_phi = o.kappa_phi_ratio * o.kappa;
  const LindbladModel model =
      models::k_photon({2, models::drive_for_alpha(2, alpha, o.kappa), o.kappa}, dim, kappa_phi);
  const Ket psi = (cat(CatSpec::even(alpha), dim) + cat(CatSpec::odd(alpha), dim)).normalized();
  const Matrix rho0 = psi.vector() * psi.vector().adjoint();
  const Matrix j = build_j_plus_minus(alpha, dim).op.matrix();
  const double analytic = phase_flip_rate(alpha, kappa_phi);
  const double horizon = fit_horizon(analytic, o);
  const auto [t, s] = block_signal(model, modulus_sector(dim.size(), 2, 0),
                                   modulus_sector(dim.size(), 2, 1), rho0, j, horizon,
                                   o.output_points);
  const DecayFit fit = fit_decay_rate(t, s, o.transient, horizon, 1e-3);
  return {alpha, analytic, fit, horizon};
}

PhaseFlipMeasurement measure_phase_flip_four_photon(double alpha, const PhaseFlipOptions& o) {
  if (!(alpha > 0.0)) throw InvalidArgument("phase-flip fit needs alpha > 0");
  const FockDim dim(o.n_max > 0 ? o.n_max : minimum_dim(alpha) + 8);
  check_truncation(alpha, dim);
  const double kappa_phi = o.kappa_phi_ratio * o.kappa;
  const LindbladModel model =
      models::k_photon({4, models::drive_for_alpha(4, alpha, o.kappa), o.kappa}, dim, kappa_phi);
  const Ket c0 = cat(CatSpec::four(alpha, 0), dim);
  const Ket c2 = cat(CatSpec::four(alpha, 2), dim);
  const Ket psi = (c0 + c2).normalized();
  const Matrix rho0 = psi.vector() * psi.vector().adjoint();
  // <C0| rho |C2> = sum conj(W) .* rho with W = |C0><C2|.
  const Matrix w = c0.vector() * c2.vector().adjoint();
  const double scale = 2.0 * kappa_phi;
  // The rate is not known in closed form and lies below the alpha -> 0
  // value: a first pass over the short horizon that value implies gives an
  // estimate, and a second pass stretches the horizon to match it.
  const Sector rows = modulus_sector(dim.size(), 4, 0);
  const Sector cols = modulus_sector(dim.size(), 4, 2);
  double horizon = fit_horizon(scale, o);
  auto [t, s] = block_signal(model, rows, cols, rho0, w, horizon, o.output_points);
  DecayFit fit = fit_decay_rate(t, s, o.transient, horizon, 1e-2);
  if (fit.rate * horizon < 1.0) {
    horizon = fit_horizon(std::max(fit.rate, 1e-12), o);
    std::tie(t, s) = block_signal(model, rows, cols, rho0, w, horizon, o.output_points);
    fit = fit_decay_rate(t, s, o.transient, horizon, 1e-2);
  }
  return {alpha, scale, fit, horizon};
}

}  // namespace catqubit::analytics
