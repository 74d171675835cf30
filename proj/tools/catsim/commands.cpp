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


#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include <catqubit/catqubit.hpp>
#include <unsupported/Eigen/KroneckerProduct>

#include "worker_pool.hpp"

namespace catsim {
namespace {

using namespace catqubit;
namespace an = catqubit::analytics;
namespace gt = catqubit::gates;
namespace rd = catqubit::reduction;

using json = nlohmann::json;

// ---------------------------------------------------------------- helpers

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

std::vector<KeySpec> with_common(std::vector<KeySpec> keys) {
  std::vector<KeySpec> all{
      {"experiment", "id", Kind::kString, std::string{}},
      {"experiment", "command", Kind::kString, std::string{}},
      {"experiment", "description", Kind::kString, std::string{}},
      {"experiment", "jobs", Kind::kInt, std::int64_t{0}},
  };
  all.insert(all.end(), keys.begin(), keys.end());
  return all;
}

std::vector<KeySpec> integration_keys(int points) {
  return {{"numerics", "rtol", Kind::kReal, 1e-8},
          {"numerics", "atol", Kind::kReal, 1e-10},
          {"numerics", "output_points", Kind::kInt, std::int64_t{points}},
          {"numerics", "method", Kind::kString, std::string("auto")}};
}

std::vector<KeySpec> circuit_keys() {
  const rd::CircuitParams d;
  return {{"physics", "g", Kind::kReal, d.g},
          {"physics", "eps_b", Kind::kReal, d.eps_b},
          {"physics", "kappa_b", Kind::kReal, d.kappa_b},
          {"physics", "chi_aa", Kind::kReal, d.chi_aa},
          {"physics", "chi_bb", Kind::kReal, d.chi_bb},
          {"physics", "chi_ab", Kind::kReal, d.chi_ab}};
}

void require_rate(const Config& c, const std::string& key) {
  const double v = c.real("physics", key);
  require(std::isfinite(v) && v >= 0.0, "physics." + key + " must be a finite rate >= 0");
}

IntegrationOptions integration_options(const Config& c) {
  IntegrationOptions io;
  io.rtol = c.real("numerics", "rtol");
  io.atol = c.real("numerics", "atol");
  require(io.rtol > 0.0 && io.atol > 0.0, "numerics.rtol and numerics.atol must be positive");
  const auto pts = c.integer("numerics", "output_points");
  require(pts >= 2 && pts <= 1'000'000, "numerics.output_points must lie in [2, 1e6]");
  io.output_points = static_cast<int>(pts);
  const std::string& m = c.string("numerics", "method");
  if (m == "auto") {
    io.method = Method::kAuto;
  } else if (m == "dopri5") {
    io.method = Method::kDormandPrince;
  } else if (m == "propagator") {
    io.method = Method::kPropagator;
  } else {
    throw ConfigError("numerics.method must be auto, dopri5 or propagator");
  }
  return io;
}

// Truncation from the config: zero selects the default for the largest
// amplitude in play, an explicit value must pass the adequacy rule.
int truncation(const Config& c, const std::string& key, double abs_alpha, int floor = 2) {
  const auto n = c.integer("numerics", key);
  require(n >= 0, "numerics." + key + " must be >= 0");
  if (n == 0) return std::max(default_dim(abs_alpha), floor);
  const int need = std::max(minimum_dim(abs_alpha), floor);
  require(n >= need, "numerics." + key + " = " + std::to_string(n) + " is below the adequate " +
                         std::to_string(need) + " for |alpha| = " + std::to_string(abs_alpha));
  return static_cast<int>(n);
}

rd::CircuitParams circuit_params(const Config& c) {
  rd::CircuitParams p;
  p.g = c.real("physics", "g");
  p.eps_b = c.real("physics", "eps_b");
  p.kappa_b = c.real("physics", "kappa_b");
  p.chi_aa = c.real("physics", "chi_aa");
  p.chi_bb = c.real("physics", "chi_bb");
  p.chi_ab = c.real("physics", "chi_ab");
  require(p.g > 0.0 && p.kappa_b > 0.0 && p.eps_b >= 0.0,
          "physics.g and physics.kappa_b must be positive, physics.eps_b >= 0");
  return p;
}

gt::GateKind gate_kind(const Config& c) {
  try {
    return gt::parse_gate_kind(c.string("physics", "kind"));
  } catch (const catqubit::InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

CsvTable trajectory_table(const Trajectory& traj, const std::vector<std::string>& names) {
  CsvTable t;
  t.columns.push_back("t");
  for (const auto& n : names) t.columns.push_back(n);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    std::vector<Cell> row{traj.times[i]};
    for (const auto& n : names) row.emplace_back(traj[n][i].real());
    t.add(std::move(row));
  }
  return t;
}

json stats_json(const Trajectory& traj) {
  return {{"accepted_steps", traj.stats.accepted},
          {"rejected_steps", traj.stats.rejected},
          {"rhs_evaluations", traj.stats.rhs_evaluations},
          {"min_step", traj.stats.min_step},
          {"max_trace_error", traj.stats.max_trace_error},
          {"min_eigenvalue", traj.stats.min_eigenvalue}};
}

Observable purity_observable() {
  return {"purity", [](const Matrix& rho) { return cplx(rho.cwiseAbs2().sum()); }};
}

// ----------------------------------------------------------------- steady

CommandResult run_steady(const Config& c, const RunContext&) {
  const std::string& kind = c.string("physics", "model");
  const std::string& init = c.string("physics", "initial");
  const cplx beta(c.real("physics", "initial_re"), c.real("physics", "initial_im"));
  const auto init_n = c.integer("physics", "initial_n");
  require(init == "vacuum" || init == "fock" || init == "coherent",
          "physics.initial must be vacuum, fock or coherent");
  require(init_n >= 0, "physics.initial_n must be >= 0");
  for (const char* k : {"kappa", "kappa_phi", "kappa_1ph"}) require_rate(c, k);

  std::optional<LindbladModel> model;
  Operator target_proj({1}, Matrix::Identity(1, 1));
  Dims dims;
  double abs_alpha = 0.0;
  json diag;

  auto initial_ket = [&](int n_a) {
    if (init == "fock") {
      require(init_n < n_a, "physics.initial_n lies outside the truncation");
      return fock(static_cast<int>(init_n), FockDim(n_a));
    }
    if (init == "coherent") return coherent(beta, FockDim(n_a));
    return fock(0, FockDim(n_a));
  };
  const double init_amp = init == "coherent" ? std::abs(beta)
                          : init == "fock"   ? std::sqrt(static_cast<double>(init_n))
                                             : 0.0;
  Ket psi0({1}, Vector::Ones(1));

  if (kind == "k-photon") {
    const auto photons = c.integer("physics", "photons");
    require(photons == 2 || photons == 4, "physics.photons must be 2 or 4");
    const double kappa = c.real("physics", "kappa");
    require(kappa > 0.0, "physics.kappa must be positive");
    const double eps_in = c.real("physics", "eps");
    const double n_bar = c.real("physics", "n_bar");
    require(n_bar >= 0.0, "physics.n_bar must be >= 0");
    const int k = static_cast<int>(photons);
    const cplx eps = eps_in >= 0.0 ? cplx(eps_in) : models::drive_for_alpha(k, std::sqrt(n_bar), kappa);
    const cplx alpha = models::stabilized_alpha(k, eps, kappa);
    abs_alpha = std::abs(alpha);
    const int n = truncation(c, "n_max", std::max(abs_alpha, init_amp),
                             static_cast<int>(init_n) + 1);
    const FockDim dim(n);
    model.emplace(models::k_photon({k, eps, kappa}, dim, c.real("physics", "kappa_phi"),
                                   c.real("physics", "kappa_1ph")));
    const auto idx = c.integer("physics", "target_index");
    require(idx >= 0 && idx < k, "physics.target_index must lie in [0, photons)");
    const Ket target = abs_alpha == 0.0 ? fock(0, dim)
                                        : cat({alpha, k, static_cast<int>(idx)}, dim);
    target_proj = Operator({n}, target.vector() * target.vector().adjoint());
    psi0 = initial_ket(n);
    dims = {n};
    diag["alpha"] = {alpha.real(), alpha.imag()};
  } else if (kind == "circuit-reduced" || kind == "circuit-full") {
    const rd::CircuitParams p = circuit_params(c);
    const rd::ReducedParams r = rd::adiabatic_params(p);
    abs_alpha = r.alpha;
    const int na = truncation(c, "n_max", std::max(abs_alpha, init_amp), static_cast<int>(init_n) + 1);
    const Ket target = cat(CatSpec::even(r.alpha), FockDim(na));
    const Matrix proj = target.vector() * target.vector().adjoint();
    psi0 = initial_ket(na);
    if (kind == "circuit-reduced") {
      model.emplace(rd::build_reduced_model(p, FockDim(na)));
      target_proj = Operator({na}, proj);
      dims = {na};
    } else {
      const auto nb = c.integer("numerics", "n_b");
      require(nb >= 2, "numerics.n_b must be >= 2");
      model.emplace(rd::build_full_model(p, FockDim(na), FockDim(static_cast<int>(nb))));
      dims = {na, static_cast<int>(nb)};
      target_proj = Operator(dims, Matrix(Eigen::kroneckerProduct(proj, Matrix::Identity(nb, nb))));
      psi0 = tensor(psi0, fock(0, FockDim(static_cast<int>(nb))));
    }
    diag["alpha"] = {r.alpha, 0.0};
    diag["eps_2ph"] = r.eps_2ph;
    diag["kappa_2ph"] = r.kappa_2ph;
  } else {
    throw ConfigError("physics.model must be k-photon, circuit-reduced or circuit-full");
  }

  // Without single-photon loss the k-photon model never mixes Fock levels of
  // different n mod k, so a Fock start can run on its own sector.
  const bool modular = (kind == "k-photon" && c.real("physics", "kappa_1ph") == 0.0) ||
                       kind == "circuit-reduced";
  if (modular && init != "coherent") {
    const int k = kind == "k-photon" ? static_cast<int>(c.integer("physics", "photons")) : 2;
    const int r = static_cast<int>(init_n) % k;
    const Sector sec = sector_where(dims, [&](std::span<const int> lv) { return lv[0] % k == r; });
    model.emplace(model->restricted(sec));
    target_proj = restrict_to(target_proj, sec);
    psi0 = restrict_to(psi0, sec);
    diag["sector_size"] = sec.size();
  }
  const DensityMatrix rho0 = DensityMatrix::pure(psi0);
  IntegrationOptions io = integration_options(c);
  double t_final = c.real("numerics", "t_final");
  require(t_final >= 0.0, "numerics.t_final must be >= 0");
  const double tol = c.real("numerics", "steady_tol");
  require(tol > 0.0, "numerics.steady_tol must be positive");
  // Zero horizon: run to steady-state detection first and integrate the
  // curve up to the detected time. An explicit horizon is checked instead.
  double residual = 0.0;
  if (t_final == 0.0) {
    SteadyStateOptions so;
    so.tol = tol;
    so.max_time = c.real("numerics", "max_time");
    const SteadyStateResult s = steady_state(*model, rho0, so);
    t_final = std::max(s.elapsed, 1.0 / model->max_rate());
    residual = s.residual;
  }
  const std::vector<Observable> obs{expectation_observable("fidelity", target_proj),
                                    purity_observable()};
  Trajectory traj = integrate(*model, rho0, t_final, obs, io);
  if (c.real("numerics", "t_final") > 0.0) {
    residual = rhs(*model, traj.final_state->matrix()).cwiseAbs().maxCoeff();
    if (!(residual < tol)) {
      throw NoConvergence("state at t = " + std::to_string(t_final) +
                          " is not stationary: residual " + std::to_string(residual));
    }
  }
  diag["t_final"] = t_final;
  diag["residual"] = residual;
  diag["final_fidelity"] = traj["fidelity"].back().real();
  diag["final_purity"] = traj["purity"].back().real();
  diag["n_max"] = dims;
  diag["integration"] = stats_json(traj);
  return {trajectory_table(traj, {"fidelity", "purity"}), diag};
}

// ------------------------------------------------------------------ sweep

CommandResult run_sweep(const Config& c, const RunContext& ctx) {
  const double n_bar = c.real("physics", "n_bar");
  const double kappa = c.real("physics", "kappa");
  require(n_bar > 0.0 && kappa > 0.0, "physics.n_bar and physics.kappa must be positive");
  const double alpha = std::sqrt(n_bar);
  const auto nre = c.integer("numerics", "re_points");
  const auto nim = c.integer("numerics", "im_points");
  require(nre >= 1 && nim >= 1 && nre * nim <= 1'000'000, "grid must have 1..1e6 points");
  const double re0 = c.real("numerics", "re_min"), re1 = c.real("numerics", "re_max");
  const double im0 = c.real("numerics", "im_min"), im1 = c.real("numerics", "im_max");
  require(re1 >= re0 && im1 >= im0, "grid bounds are inverted");
  auto coord = [](double lo, double hi, std::int64_t n, std::int64_t i) {
    return n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  const double max_beta = std::hypot(std::max(std::abs(re0), std::abs(re1)),
                                     std::max(std::abs(im0), std::abs(im1)));
  // The command-line fraction wins over the config; at most 5 % of points.
  const double requested =
      ctx.verify_fraction >= 0.0 ? ctx.verify_fraction : c.real("numerics", "verify_fraction");
  require(requested >= 0.0 && requested <= 1.0, "verify fraction must lie in [0, 1]");
  const double fraction = std::min(requested, 0.05);
  const std::size_t total = static_cast<std::size_t>(nre * nim);
  // Every stride-th point (row-major) is also integrated numerically.
  const std::size_t stride =
      fraction > 0.0 ? static_cast<std::size_t>(std::ceil(1.0 / fraction)) : total + 1;
  const int n = fraction > 0.0 ? truncation(c, "n_max", std::max(alpha, max_beta)) : 0;

  struct Point {
    double re, im, x, bloch_x, bloch_y, purity, c_pp;
    double num_x = std::nan(""), num_purity = std::nan(""), distance = std::nan("");
    std::string status = "analytic";
  };
  std::vector<Point> pts(total);
  const double cp = std::sqrt(0.5 * (1.0 + std::exp(-2.0 * n_bar)));
  const double cm = std::sqrt(0.5 * (1.0 - std::exp(-2.0 * n_bar)));

  parallel_for(total, ctx.jobs, [&](std::size_t idx) {
    Point& pt = pts[idx];
    const auto i = static_cast<std::int64_t>(idx) / nim;
    const auto j = static_cast<std::int64_t>(idx) % nim;
    pt.re = coord(re0, re1, nre, i);
    pt.im = coord(im0, im1, nim, j);
    try {
      const an::AsymptoticState s = an::asymptotic_from_coherent(alpha, {pt.re, pt.im});
      const auto b = s.bloch();
      pt.bloch_x = b[0];
      pt.bloch_y = b[1];
      pt.c_pp = s.c_pp;
      pt.purity = s.c_pp * s.c_pp + s.c_mm * s.c_mm + 2.0 * std::norm(s.c_pm);
      // <alpha|rho|alpha> - <-alpha|rho|-alpha> with |+-alpha> = cp C+ +- cm C-.
      pt.x = 4.0 * cp * cm * s.c_pm.real();
      if (idx % stride == 0) {
        const FockDim dim(n);
        const LindbladModel m =
            models::k_photon({2, models::drive_for_alpha(2, alpha, kappa), kappa}, dim);
        SteadyStateOptions so;
        so.tol = c.real("numerics", "steady_tol");
        so.max_time = c.real("numerics", "max_time");
        const SteadyStateResult ss =
            steady_state(m, DensityMatrix::pure(coherent({pt.re, pt.im}, dim)), so);
        const Ket pa = coherent(alpha, dim), ma = coherent(-alpha, dim);
        pt.num_x = (fidelity(ss.rho, pa) - fidelity(ss.rho, ma));
        pt.num_purity = purity(ss.rho);
        pt.distance = trace_distance(ss.rho.matrix(), an::reconstruct_rho_infinity(s, dim).matrix());
        pt.status = "verified";
      }
    } catch (const catqubit::Error& e) {
      pt.status = "failed:" + e.kind();
    }
  });

  CsvTable t;
  t.columns = {"beta_re", "beta_im", "x_coord", "bloch_x", "bloch_y", "purity", "c_pp",
               "numeric_x", "numeric_purity", "trace_distance", "status"};
  json diag;
  std::size_t verified = 0, failed = 0;
  double worst = 0.0;
  for (const auto& p : pts) {
    t.add({p.re, p.im, p.x, p.bloch_x, p.bloch_y, p.purity, p.c_pp, p.num_x, p.num_purity,
           p.distance, p.status});
    if (p.status == "verified") {
      ++verified;
      worst = std::max(worst, p.distance);
    } else if (p.status != "analytic") {
      ++failed;
    }
  }
  diag["alpha"] = alpha;
  diag["points"] = total;
  diag["verified"] = verified;
  diag["failed"] = failed;
  diag["max_trace_distance"] = worst;
  if (fraction > 0.0) diag["n_max"] = n;
  return {std::move(t), diag};
}

// ------------------------------------------------------------------- rabi

CommandResult run_rabi(const Config& c, const RunContext&) {
  gt::GateProtocol p;
  p.kind = gate_kind(c);
  require(p.kind == gt::GateKind::kXRotation2Cat || p.kind == gt::GateKind::kXRotation4Cat,
          "rabi needs an x-rotation kind");
  p.drive = c.real("physics", "eps");
  p.n_bar = c.real("physics", "n_bar");
  p.kappa = c.real("physics", "kappa");
  p.theta = c.real("physics", "theta");
  require(p.drive > 0.0 && p.n_bar > 0.0 && p.kappa > 0.0, "eps, n_bar and kappa must be positive");
  const auto init = c.integer("physics", "initial");
  require(init == 0 || init == 1, "physics.initial must be 0 or 1");
  gt::RunOptions o;
  o.n_max = truncation(c, "n_max", p.alpha());
  o.integration = integration_options(c);
  double t_final = c.real("numerics", "t_final");
  require(t_final >= 0.0, "numerics.t_final must be >= 0");
  if (t_final == 0.0) t_final = 2.0 * kPi / p.omega();  // two population periods

  const gt::RotationResult r = gt::run_x_rotation(p, static_cast<int>(init), t_final, o);
  CsvTable t;
  t.columns = {"t", "p0", "p1", "bloch_x", "bloch_y", "bloch_z", "parity"};
  const auto par = r.trajectory.real("parity");
  for (std::size_t i = 0; i < r.tomography.times.size(); ++i) {
    const auto b = r.tomography.bloch(i);
    t.add({r.tomography.times[i], r.tomography.p0[i], r.tomography.p1[i], b[0], b[1], b[2], par[i]});
  }
  json diag;
  diag["omega_formula"] = p.omega();
  try {
    diag["omega_fit"] = gt::fit_rabi_frequency(r.tomography);
  } catch (const catqubit::Error&) {
    diag["omega_fit"] = nullptr;  // horizon shorter than two crossings
  }
  diag["gate_time"] = p.nominal_time();
  if (c.boolean("numerics", "gate_fidelity")) diag["average_gate_fidelity"] = gt::average_gate_fidelity(p, o);
  diag["n_max"] = r.n_max;
  diag["sector_restricted"] = r.restricted;
  diag["integration"] = stats_json(r.trajectory);
  return {std::move(t), diag};
}

// --------------------------------------------------------------- entangle

CommandResult run_entangle(const Config& c, const RunContext&) {
  gt::GateProtocol p;
  p.kind = gate_kind(c);
  require(p.kind == gt::GateKind::kEntangle2Cat || p.kind == gt::GateKind::kEntangle4Cat,
          "entangle needs an entangle kind");
  p.drive = c.real("physics", "eps");
  p.n_bar = c.real("physics", "n_bar");
  p.kappa = c.real("physics", "kappa");
  require(p.drive > 0.0 && p.n_bar > 0.0 && p.kappa > 0.0, "eps, n_bar and kappa must be positive");
  gt::RunOptions o;
  const auto n = c.integer("numerics", "n_max");
  require(n >= 0, "numerics.n_max must be >= 0");
  // The four-photon run may sit below the adequacy rule by design.
  if (n > 0 && p.photons() == 2) truncation(c, "n_max", p.alpha());
  o.n_max = static_cast<int>(n);
  o.integration = integration_options(c);
  const double t_bell = kPi / (4.0 * p.omega());
  double t_final = c.real("numerics", "t_final");
  require(t_final >= 0.0, "numerics.t_final must be >= 0");
  if (t_final == 0.0) t_final = 2.0 * t_bell;
  const gt::EntanglingResult r = gt::run_entangling(p, t_final, o);
  json diag;
  diag["t_bell"] = t_bell;
  for (const char* name : {"bell_plus", "bell_minus"}) {
    const auto [tm, fm] = gt::locate_maximum(r.trajectory.times, r.trajectory.real(name), 0.0, t_final);
    diag[std::string(name) + "_peak"] = {{"t", tm}, {"fidelity", fm}};
  }
  diag["n_max"] = r.n_max;
  diag["integration"] = stats_json(r.trajectory);
  return {trajectory_table(r.trajectory, {"bell_plus", "bell_minus"}), diag};
}

// ------------------------------------------------------------------- kerr

CommandResult run_kerr(const Config& c, const RunContext&) {
  const double chi = c.real("physics", "chi");
  require(chi > 0.0 && std::isfinite(chi), "physics.chi must be positive");
  const cplx beta(c.real("physics", "beta_re"), c.real("physics", "beta_im"));
  require(std::abs(beta) > 0.0, "physics.beta must be nonzero");
  const int n = truncation(c, "n_max", std::abs(beta));
  const FockDim dim(n);
  const Ket psi = coherent(beta, dim);

  CsvTable t;
  t.columns = {"q", "t_q", "distance", "phase_insensitive_distance"};
  for (double qd : c.reals("physics", "q")) {
    require(qd >= 1.0 && qd == std::floor(qd) && qd <= 64.0, "physics.q entries must be integers in [1, 64]");
    const int q = static_cast<int>(qd);
    const double tq = kPi / (q * chi);
    const Ket evolved = gt::kerr_evolve(chi, tq, psi);
    const Ket formula = gt::kerr_superposition_formula(q, beta, dim);
    t.add({qd, tq, (evolved - formula).norm(), gt::phase_insensitive_distance(evolved, formula)});
  }

  json diag;
  // |+-beta> after pi/(2 chi) and the even cat after pi/(8 chi), up to a global phase.
  const double s = 1.0 / std::sqrt(2.0);
  const Ket minus = coherent(-beta, dim);
  diag["t2_residual"] = gt::phase_insensitive_distance(
      gt::kerr_evolve(chi, kPi / (2.0 * chi), psi), cplx(s) * (psi + cplx(0.0, -1.0) * minus));
  const Ket cp = cat(CatSpec::even(beta), dim);
  const Ket cpi = cat(CatSpec::even(kI * beta), dim);
  diag["t8_residual"] = gt::phase_insensitive_distance(gt::kerr_evolve(chi, kPi / (8.0 * chi), cp),
                                                       cplx(s) * (cp + cplx(0.0, -1.0) * cpi));
  diag["jump_commutation_residual"] = gt::kerr_jump_commutation_check(chi, 0.37 / chi, cp);
  diag["n_max"] = n;
  return {std::move(t), diag};
}

// ------------------------------------------------------------------- loss

CommandResult run_loss(const Config& c, const RunContext&) {
  gt::GateProtocol p;
  p.kind = gt::GateKind::kXRotation4Cat;
  p.drive = c.real("physics", "eps");
  p.n_bar = c.real("physics", "n_bar");
  p.kappa = c.real("physics", "kappa");
  require(p.drive >= 0.0 && p.n_bar > 0.0 && p.kappa > 0.0, "eps >= 0, n_bar and kappa > 0 required");
  require_rate(c, "kappa_1ph");
  gt::RunOptions o;
  o.n_max = static_cast<int>(c.integer("numerics", "n_max"));
  if (o.n_max != 0) truncation(c, "n_max", p.alpha());
  o.integration = integration_options(c);
  const double t_final = c.real("numerics", "t_final");
  require(t_final > 0.0, "numerics.t_final must be positive");
  const gt::LossResult r = gt::run_loss_during_gate(p, c.real("physics", "kappa_1ph"), t_final, 0.0, o);
  json diag;
  const double window = std::min(c.real("numerics", "fit_window"), t_final);
  const an::DecayFit fit = an::fit_decay_rate(r.trajectory, "sector0", 0.0, window, 1e-2);
  diag["sector0_decay_rate"] = fit.rate;
  diag["fit_residual"] = fit.residual;
  diag["omega"] = r.omega;
  diag["n_max"] = r.n_max;
  diag["integration"] = stats_json(r.trajectory);
  return {trajectory_table(r.trajectory, {"sector0", "sector1", "sector2", "sector3", "total"}), diag};
}

// -------------------------------------------------------- phase-flip-rate

CommandResult run_phase_flip(const Config& c, const RunContext& ctx) {
  const auto photons = c.integer("physics", "photons");
  require(photons == 2 || photons == 4, "physics.photons must be 2 or 4");
  an::PhaseFlipOptions o;
  o.kappa = c.real("physics", "kappa");
  o.kappa_phi_ratio = c.real("physics", "ratio");
  require(o.kappa > 0.0 && o.kappa_phi_ratio > 0.0, "physics.kappa and physics.ratio must be positive");
  o.n_max = static_cast<int>(c.integer("numerics", "n_max"));
  o.horizon_cap = c.real("numerics", "horizon_cap");
  o.transient = c.real("numerics", "transient");
  o.output_points = static_cast<int>(c.integer("numerics", "output_points"));
  const std::vector<double>& alphas = c.reals("physics", "alphas");
  for (double a : alphas) {
    require(a > 0.0, "alphas must be positive");
    if (o.n_max > 0) truncation(c, "n_max", a);
  }

  struct Row {
    double analytic = std::nan(""), fitted = std::nan(""), residual = std::nan(""),
           horizon = std::nan("");
    std::string status = "ok";
  };
  std::vector<Row> rows(alphas.size());
  parallel_for(alphas.size(), ctx.jobs, [&](std::size_t i) {
    try {
      const an::PhaseFlipMeasurement m = photons == 2 ? an::measure_phase_flip_two_photon(alphas[i], o)
                                                      : an::measure_phase_flip_four_photon(alphas[i], o);
      rows[i] = {m.analytic, m.fit.rate, m.fit.residual, m.horizon, "ok"};
    } catch (const catqubit::Error& e) {
      rows[i].status = "failed:" + e.kind();
    }
  });
  CsvTable t;
  t.columns = {"alpha", "reference", "fitted", "scaled", "fit_residual", "horizon", "status"};
  std::size_t failed = 0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const Row& r = rows[i];
    failed += r.status != "ok";
    t.add({alphas[i], r.analytic, r.fitted, r.fitted / r.analytic, r.residual, r.horizon, r.status});
  }
  if (failed == alphas.size()) throw NonExponentialDecay("no alpha produced an exponential fit");
  json diag;
  diag["photons"] = photons;
  diag["kappa_phi"] = o.kappa_phi_ratio * o.kappa;
  diag["reference"] = photons == 2 ? "kappa_phi |alpha|^2 / sinh(2 |alpha|^2)" : "2 kappa_phi";
  diag["failed"] = failed;
  return {std::move(t), diag};
}

// ------------------------------------------------------ adiabatic-compare

CommandResult run_compare(const Config& c, const RunContext&) {
  const rd::CircuitParams p = circuit_params(c);
  rd::ComparisonOptions o;
  o.n_a = truncation(c, "n_a", rd::adiabatic_params(p).alpha);
  o.n_b = static_cast<int>(c.integer("numerics", "n_b"));
  require(o.n_b >= 2, "numerics.n_b must be >= 2");
  o.steady_tol = c.real("numerics", "steady_tol");
  o.max_time = c.real("numerics", "max_time");
  o.output_points = static_cast<int>(c.integer("numerics", "output_points"));
  require(o.steady_tol > 0.0 && o.max_time > 0.0 && o.output_points >= 2, "bad numerics");
  const rd::ComparisonResult r = rd::compare_full_vs_reduced(p, o);
  CsvTable t;
  t.columns = {"t", "full_fidelity", "reduced_fidelity", "n_b"};
  const auto ff = r.full.real("fidelity"), fr = r.reduced.real("fidelity"), nb = r.full.real("n_b");
  for (std::size_t i = 0; i < r.full.times.size(); ++i) t.add({r.full.times[i], ff[i], fr[i], nb[i]});
  const rd::ReducedParams red = rd::adiabatic_params(p);
  json diag{{"alpha", red.alpha},
            {"eps_2ph", red.eps_2ph},
            {"kappa_2ph", red.kappa_2ph},
            {"horizon", r.horizon},
            {"full_settle_time", r.full_settle_time},
            {"reduced_settle_time", r.reduced_settle_time},
            {"full_terminal", r.full_terminal},
            {"reduced_terminal", r.reduced_terminal},
            {"terminal_gap", r.gap},
            {"max_gap", r.max_gap},
            {"max_n_b", r.max_n_b},
            {"adiabatic", p.adiabatic()}};
  return {std::move(t), diag};
}

// ----------------------------------------------------------------- wigner

CommandResult run_wigner(const Config& c, const RunContext& ctx) {
  const std::string& state = c.string("physics", "state");
  const cplx alpha(c.real("physics", "alpha_re"), c.real("physics", "alpha_im"));
  const auto comps = c.integer("physics", "components");
  const auto index = c.integer("physics", "index");
  const auto level = c.integer("physics", "n");
  Ket psi({1}, Vector::Ones(1));
  if (state == "cat") {
    require(comps == 2 || comps == 4, "physics.components must be 2 or 4");
    require(index >= 0 && index < comps, "physics.index out of range");
    const int n = truncation(c, "n_max", std::abs(alpha));
    psi = cat({alpha, static_cast<int>(comps), static_cast<int>(index)}, FockDim(n));
  } else if (state == "coherent") {
    psi = coherent(alpha, FockDim(truncation(c, "n_max", std::abs(alpha))));
  } else if (state == "fock") {
    require(level >= 0, "physics.n must be >= 0");
    const int n = truncation(c, "n_max", std::sqrt(static_cast<double>(level)), static_cast<int>(level) + 3);
    psi = fock(static_cast<int>(level), FockDim(n));
  } else {
    throw ConfigError("physics.state must be cat, coherent or fock");
  }
  wigner::GridSpec g;
  g.x_min = c.real("numerics", "x_min");
  g.x_max = c.real("numerics", "x_max");
  g.p_min = c.real("numerics", "p_min");
  g.p_max = c.real("numerics", "p_max");
  g.resolution = static_cast<int>(c.integer("numerics", "resolution"));
  try {
    g.validate();
  } catch (const catqubit::InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  const wigner::PhaseSpaceGrid grid = wigner::wigner(DensityMatrix::pure(psi), g, ctx.jobs);
  CsvTable t;
  t.columns = {"x", "p", "w"};
  for (std::size_t i = 0; i < grid.x.size(); ++i) {
    for (std::size_t j = 0; j < grid.p.size(); ++j) {
      t.add({grid.x[i], grid.p[j], grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
    }
  }
  json diag{{"integral", grid.integral()},
            {"min", grid.values.minCoeff()},
            {"max", grid.values.maxCoeff()},
            {"n_max", psi.size()}};
  return {std::move(t), diag};
}

std::vector<Command> build_commands() {
  const double pi = kPi;
  std::vector<Command> out;

  auto steady = with_common({
      {"physics", "model", Kind::kString, std::string("k-photon")},
      {"physics", "photons", Kind::kInt, std::int64_t{2}},
      {"physics", "n_bar", Kind::kReal, 4.0},
      {"physics", "eps", Kind::kReal, -1.0},
      {"physics", "kappa", Kind::kReal, 1.0},
      {"physics", "kappa_phi", Kind::kReal, 0.0},
      {"physics", "kappa_1ph", Kind::kReal, 0.0},
      {"physics", "initial", Kind::kString, std::string("vacuum")},
      {"physics", "initial_n", Kind::kInt, std::int64_t{0}},
      {"physics", "initial_re", Kind::kReal, 0.0},
      {"physics", "initial_im", Kind::kReal, 0.0},
      {"physics", "target_index", Kind::kInt, std::int64_t{0}},
      {"numerics", "n_max", Kind::kInt, std::int64_t{0}},
      {"numerics", "n_b", Kind::kInt, std::int64_t{12}},
      {"numerics", "t_final", Kind::kReal, 0.0},
      {"numerics", "steady_tol", Kind::kReal, 1e-9},
      {"numerics", "max_time", Kind::kReal, 1e5},
  });
  for (auto k : circuit_keys()) steady.push_back(k);
  for (auto k : integration_keys(400)) steady.push_back(k);
  out.push_back({"steady", "Convergence of the k-photon or circuit model to its steady state",
                 steady, run_steady});

  out.push_back({"sweep", "Asymptotic Bloch X-coordinate and purity over initial coherent states",
                 with_common({{"physics", "n_bar", Kind::kReal, 4.0},
                              {"physics", "kappa", Kind::kReal, 1.0},
                              {"numerics", "re_min", Kind::kReal, -2.0},
                              {"numerics", "re_max", Kind::kReal, 2.0},
                              {"numerics", "re_points", Kind::kInt, std::int64_t{41}},
                              {"numerics", "im_min", Kind::kReal, -1.5},
                              {"numerics", "im_max", Kind::kReal, 1.5},
                              {"numerics", "im_points", Kind::kInt, std::int64_t{31}},
                              {"numerics", "n_max", Kind::kInt, std::int64_t{0}},
                              {"numerics", "verify_fraction", Kind::kReal, 0.0},
                              {"numerics", "steady_tol", Kind::kReal, 1e-9},
                              {"numerics", "max_time", Kind::kReal, 1e4}}),
                 run_sweep});

  auto rabi = with_common({{"physics", "kind", Kind::kString, std::string("x-rotation-2cat")},
                           {"physics", "eps", Kind::kReal, 0.05},
                           {"physics", "n_bar", Kind::kReal, 4.0},
                           {"physics", "kappa", Kind::kReal, 1.0},
                           {"physics", "theta", Kind::kReal, pi},
                           {"physics", "initial", Kind::kInt, std::int64_t{0}},
                           {"numerics", "n_max", Kind::kInt, std::int64_t{0}},
                           {"numerics", "t_final", Kind::kReal, 0.0},
                           {"numerics", "gate_fidelity", Kind::kBool, false}});
  for (auto k : integration_keys(400)) rabi.push_back(k);
  out.push_back({"rabi", "Zeno X rotation of a 2- or 4-cat qubit", rabi, run_rabi});

  auto ent = with_common({{"physics", "kind", Kind::kString, std::string("entangle-2cat")},
                          {"physics", "eps", Kind::kReal, 0.05},
                          {"physics", "n_bar", Kind::kReal, 4.0},
                          {"physics", "kappa", Kind::kReal, 1.0},
                          {"numerics", "n_max", Kind::kInt, std::int64_t{0}},
                          {"numerics", "t_final", Kind::kReal, 0.0}});
  for (auto k : integration_keys(200)) ent.push_back(k);
  out.push_back({"entangle", "Two-mode entangling gate and Bell-state fidelities", ent, run_entangle});

  out.push_back({"kerr", "Kerr evolution against the multi-component superposition formula",
                 with_common({{"physics", "chi", Kind::kReal, 1.0},
                              {"physics", "beta_re", Kind::kReal, 2.0},
                              {"physics", "beta_im", Kind::kReal, 0.0},
                              {"physics", "q", Kind::kRealList, std::vector<double>{1, 2, 3, 4}},
                              {"numerics", "n_max", Kind::kInt, std::int64_t{0}}}),
                 run_kerr});

  auto loss = with_common({{"physics", "eps", Kind::kReal, 0.05},
                           {"physics", "n_bar", Kind::kReal, 4.0},
                           {"physics", "kappa", Kind::kReal, 1.0},
                           {"physics", "kappa_1ph", Kind::kReal, 0.005},
                           {"numerics", "n_max", Kind::kInt, std::int64_t{0}},
                           {"numerics", "t_final", Kind::kReal, 100.0},
                           {"numerics", "fit_window", Kind::kReal, 30.0}});
  for (auto k : integration_keys(200)) loss.push_back(k);
  out.push_back({"loss", "Single-photon loss during a 4-cat X rotation", loss, run_loss});

  out.push_back({"phase-flip-rate", "Fitted phase-flip rates under dephasing",
                 with_common({{"physics", "photons", Kind::kInt, std::int64_t{2}},
                              {"physics", "alphas", Kind::kRealList, std::vector<double>{1.0, 1.5, 2.0}},
                              {"physics", "ratio", Kind::kReal, 0.01},
                              {"physics", "kappa", Kind::kReal, 1.0},
                              {"numerics", "n_max", Kind::kInt, std::int64_t{0}},
                              {"numerics", "horizon_cap", Kind::kReal, 1e7},
                              {"numerics", "transient", Kind::kReal, 30.0},
                              {"numerics", "output_points", Kind::kInt, std::int64_t{200}}}),
                 run_phase_flip});

  auto cmp = with_common({{"numerics", "n_a", Kind::kInt, std::int64_t{24}},
                          {"numerics", "n_b", Kind::kInt, std::int64_t{12}},
                          {"numerics", "steady_tol", Kind::kReal, 1e-9},
                          {"numerics", "max_time", Kind::kReal, 1e5},
                          {"numerics", "output_points", Kind::kInt, std::int64_t{400}}});
  for (auto k : circuit_keys()) cmp.push_back(k);
  out.push_back({"adiabatic-compare", "Full circuit model against its adiabatic reduction", cmp,
                 run_compare});

  out.push_back({"wigner", "Wigner function of a cat, coherent or Fock state on a grid",
                 with_common({{"physics", "state", Kind::kString, std::string("cat")},
                              {"physics", "alpha_re", Kind::kReal, 2.0},
                              {"physics", "alpha_im", Kind::kReal, 0.0},
                              {"physics", "components", Kind::kInt, std::int64_t{2}},
                              {"physics", "index", Kind::kInt, std::int64_t{0}},
                              {"physics", "n", Kind::kInt, std::int64_t{0}},
                              {"numerics", "n_max", Kind::kInt, std::int64_t{0}},
                              {"numerics", "x_min", Kind::kReal, -4.0},
                              {"numerics", "x_max", Kind::kReal, 4.0},
                              {"numerics", "p_min", Kind::kReal, -4.0},
                              {"numerics", "p_max", Kind::kReal, 4.0},
                              {"numerics", "resolution", Kind::kInt, std::int64_t{121}}}),
                 run_wigner});
  return out;
}

}  // namespace

const std::vector<Command>& commands() {
  static const std::vector<Command> all = build_commands();
  return all;
}

const Command& find_command(const std::string& name) {
  for (const auto& c : commands()) {
    if (c.name == name) return c;
  }
  throw ConfigError("unknown command '" + name + "'");
}

}  // namespace catsim
