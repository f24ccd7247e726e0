#pragma once

// Experiment presets and the convergence harness.
//
// Reference-solution protocol: the "exact" solution of an error study is a
// finer numerical solve. Temporal sweeps solve once at (ref_tau, N_fixed)
// and require ref_tau below every studied tau; spatial sweeps solve once at
// (tau_fixed, ref_N) and require ref_N above every studied N, comparing in
// coefficient space through the zero-padding embedding.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <future>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qpnls/errors.hpp"
#include "qpnls/field.hpp"
#include "qpnls/integrator.hpp"
#include "qpnls/lattice.hpp"
#include "qpnls/operators.hpp"

namespace qpnls {

/// Below this error level the empirical order is roundoff noise and is
/// reported as NaN instead of a meaningless ratio of logs.
inline constexpr double kOrderFloor = 1e-13;

enum class SweepAxis { time, space };

struct ConvergenceReport {
  SweepAxis axis = SweepAxis::time;
  std::vector<double> params;   // tau values (descending) or N values (ascending)
  std::vector<double> errors;   // Err vs the reference solve, same order
  std::vector<double> orders;   // size()-1 entries, NaN where undefined
  std::vector<double> seconds;  // wall clock per row
  std::vector<double> max_mass_drift;  // per row, relative to the initial mass
};

struct ExperimentPreset {
  std::string name;
  ProjectionMatrix P;
  std::vector<PotentialMode> potential_modes;
  int init_halfwidth = 0;  // initial data defined on the mode box K_R^n
  double theta = 0.0;
  double T = 0.0;
  double ref_tau = 0.0;
  int ref_N = 0;

  /// Initial Fourier-Bohr coefficient rule: e^{-sum |m_a|} on the box.
  double initial_amplitude(std::span<const int> m) const {
    double s = 0.0;
    for (int v : m) s += std::abs(v);
    return std::exp(-s);
  }

  /// I_N of the initial data: amplitudes of the defining box folded onto the
  /// lattice modulo 2N per axis, which equals interpolating exact samples.
  QPState initial_state(const LatticePtr& lattice) const {
    if (lattice->parent_dim() != P.parent_dim())
      throw DimensionMismatch("lattice parent dimension does not match preset");
    QPState s = zero_state(lattice);
    const int n = P.parent_dim();
    const int ext = 2 * lattice->truncation();
    const int R = init_halfwidth;
    std::vector<int> m(n, -R);
    std::size_t flat;
    while (true) {
      flat = 0;
      for (int a = 0; a < n; ++a) {
        int j = m[a] % ext;
        if (j < 0) j += ext;
        flat = flat * static_cast<std::size_t>(ext) + static_cast<std::size_t>(j);
      }
      s.coeffs[flat] += initial_amplitude(m);
      int a = n - 1;
      for (; a >= 0; --a) {
        if (++m[a] < R) break;
        m[a] = -R;
      }
      if (a < 0) break;
    }
    return s;
  }
};

/// 1D incommensurate setting: V(x) = sin x + sum_{k=1..4} sin(k sqrt(3) x),
/// initial coefficients e^{-(|m1|+|m2|)} on -32 <= m1,m2 <= 31, T = 0.001.
inline ExperimentPreset preset_1d() {
  ExperimentPreset p{
      .name = "1d",
      .P = ProjectionMatrix(1, 2, {1.0, std::sqrt(3.0)}),
      .potential_modes = {},
      .init_halfwidth = 32,
      .theta = 10.0,
      .T = 0.001,
      .ref_tau = 1e-6,
      .ref_N = 64,
  };
  const cdouble half_over_i{0.0, -0.5};  // sin t = (e^{it} - e^{-it}) / (2i)
  p.potential_modes.push_back({{1, 0}, half_over_i});
  p.potential_modes.push_back({{-1, 0}, -half_over_i});
  for (int k = 1; k <= 4; ++k) {
    p.potential_modes.push_back({{0, k}, half_over_i});
    p.potential_modes.push_back({{0, -k}, -half_over_i});
  }
  return p;
}

/// 2D setting over a 4D parent torus: V_p(y) = sum_{j=1..3} cos(k_j . y),
/// initial coefficients e^{-sum |k_a|} on -16 <= k_a <= 15, T = 1e-4.
inline ExperimentPreset preset_2d() {
  const double c = std::cos(M_PI / 6.0);
  const double s = std::sin(M_PI / 6.0);
  ExperimentPreset p{
      .name = "2d",
      .P = ProjectionMatrix(2, 4,
                            {1.0, c, s, 0.0,
                             0.0, s, c, 1.0}),
      .potential_modes = {},
      .init_halfwidth = 16,
      .theta = 1.0,
      .T = 1e-4,
      .ref_tau = 1e-7,
      .ref_N = 32,
  };
  const std::vector<std::vector<int>> cosine_modes = {
      {0, 1, 0, -1}, {0, -1, 3, 0}, {2, 0, 0, 1}};
  for (const auto& k : cosine_modes) {
    std::vector<int> neg(k.size());
    for (std::size_t a = 0; a < k.size(); ++a) neg[a] = -k[a];
    p.potential_modes.push_back({k, cdouble{0.5, 0.0}});
    p.potential_modes.push_back({neg, cdouble{0.5, 0.0}});
  }
  return p;
}

/// Gaussian parent sample e^{-(y1^2+y2^2)/2} on [0,2pi)^2 for the soliton
/// study, taken literally on the fundamental domain (the seam discontinuity
/// is part of the setup); `centered` shifts the peak to (pi,pi) instead.
inline QPState gaussian_parent_initial(const LatticePtr& lattice, bool centered = false) {
  if (lattice->parent_dim() != 2)
    throw DimensionMismatch("gaussian parent initial data needs a 2D parent torus");
  GridField g = zero_field(lattice);
  const int ext = lattice->extents()[0];
  const double h = lattice->grid_spacing();
  const double c0 = centered ? M_PI : 0.0;
  for (int j1 = 0; j1 < ext; ++j1)
    for (int j2 = 0; j2 < ext; ++j2) {
      const double y1 = j1 * h - c0;
      const double y2 = j2 * h - c0;
      g.values[static_cast<std::size_t>(j1) * ext + j2] = std::exp(-0.5 * (y1 * y1 + y2 * y2));
    }
  return forward_transform(g);
}

/// Number of steps M with T = M * tau enforced to 1e-9 relative.
inline long steps_for(double T, double tau) {
  if (!(tau > 0.0)) throw DomainError("tau must be positive");
  if (T < 0.0) throw DomainError("T must be >= 0");
  const long M = std::lround(T / tau);
  if (std::abs(static_cast<double>(M) * tau - T) > 1e-9 * std::max(T, tau))
    throw NonIntegralStepsError("T/tau is not an integer (T = " + std::to_string(T) +
                                ", tau = " + std::to_string(tau) + ")");
  return M;
}

/// kappa_i = ln(e_i / e_{i+1}) / ln(p_i / p_{i+1}).
inline std::vector<double> compute_order(std::span<const double> errors,
                                         std::span<const double> params) {
  if (errors.size() != params.size() || errors.size() < 2)
    throw DomainError("compute_order needs equal-length inputs of size >= 2");
  for (double e : errors)
    if (!(e > 0.0)) throw DomainError("compute_order requires positive errors");
  for (double p : params)
    if (!(p > 0.0)) throw DomainError("compute_order requires positive parameters");
  std::vector<double> orders(errors.size() - 1);
  for (std::size_t i = 0; i + 1 < errors.size(); ++i)
    orders[i] = std::log(errors[i] / errors[i + 1]) / std::log(params[i] / params[i + 1]);
  return orders;
}

namespace detail {

struct EvolveOutcome {
  QPState final_state;
  double max_mass_drift = 0.0;
  double seconds = 0.0;
};

inline EvolveOutcome timed_evolve(const QPState& s0, const Potential& V, const SolverConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  auto [state, records] = evolve(s0, V, cfg);
  const auto t1 = std::chrono::steady_clock::now();
  double drift = 0.0;
  const double mass0 = records.front().mass;
  for (const auto& r : records) drift = std::max(drift, std::abs(r.mass - mass0));
  return {std::move(state), mass0 > 0.0 ? drift / mass0 : drift,
          std::chrono::duration<double>(t1 - t0).count()};
}

inline std::vector<double> orders_with_floor(const std::vector<double>& errors,
                                             const std::vector<double>& params) {
  std::vector<double> orders(errors.size() - 1, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    if (errors[i] > kOrderFloor && errors[i + 1] > kOrderFloor) {
      const double e[2] = {errors[i], errors[i + 1]};
      const double p[2] = {params[i], params[i + 1]};
      orders[i] = compute_order(e, p)[0];
    }
  }
  return orders;
}

/// Deterministic parallel map over row indices; results land by index.
template <typename Fn>
inline void parallel_rows(std::size_t count, int jobs, Fn&& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
  };
  std::vector<std::future<void>> futs;
  const int nworkers = std::min<int>(jobs, static_cast<int>(count));
  futs.reserve(static_cast<std::size_t>(nworkers));
  for (int w = 0; w < nworkers; ++w) futs.push_back(std::async(std::launch::async, worker));
  for (auto& f : futs) f.get();
}

}  // namespace detail

/// Errors vs a (ref_tau, N_fixed) reference for each tau in the list
/// (descending), with empirical orders between consecutive rows.
inline ConvergenceReport run_temporal_convergence(const ExperimentPreset& preset,
                                                  const std::vector<double>& tau_list, int N_fixed,
                                                  std::optional<double> ref_tau_override = {},
                                                  int jobs = 1) {
  if (tau_list.empty()) throw DomainError("tau_list must not be empty");
  for (std::size_t i = 0; i + 1 < tau_list.size(); ++i)
    if (!(tau_list[i] > tau_list[i + 1])) throw DomainError("tau_list must be sorted descending");
  const double ref_tau = ref_tau_override.value_or(preset.ref_tau);
  if (!(ref_tau < tau_list.back()))
    throw DomainError("reference tau must be finer than every studied tau");
  for (double tau : tau_list) steps_for(preset.T, tau);

  auto lattice = build_lattice(preset.P, N_fixed);
  const Potential V = build_potential(preset.potential_modes, lattice);
  const QPState s0 = preset.initial_state(lattice);

  SolverConfig ref_cfg{.tau = ref_tau, .steps = steps_for(preset.T, ref_tau),
                       .theta = preset.theta, .N = N_fixed};
  const QPState reference = detail::timed_evolve(s0, V, ref_cfg).final_state;

  ConvergenceReport report;
  report.axis = SweepAxis::time;
  report.params = tau_list;
  report.errors.resize(tau_list.size());
  report.seconds.resize(tau_list.size());
  report.max_mass_drift.resize(tau_list.size());
  detail::parallel_rows(tau_list.size(), jobs, [&](std::size_t i) {
    SolverConfig cfg{.tau = tau_list[i], .steps = steps_for(preset.T, tau_list[i]),
                     .theta = preset.theta, .N = N_fixed};
    auto outcome = detail::timed_evolve(s0, V, cfg);
    report.errors[i] = l2_error(outcome.final_state, reference);
    report.seconds[i] = outcome.seconds;
    report.max_mass_drift[i] = outcome.max_mass_drift;
  });
  report.orders = detail::orders_with_floor(report.errors, report.params);
  return report;
}

/// Errors vs a (tau_fixed, ref_N) reference for each N in the list
/// (ascending), compared through the zero-padding embedding.
inline ConvergenceReport run_spatial_convergence(const ExperimentPreset& preset,
                                                 const std::vector<int>& N_list, double tau_fixed,
                                                 std::optional<int> ref_N_override = {},
                                                 int jobs = 1) {
  if (N_list.empty()) throw DomainError("N_list must not be empty");
  for (std::size_t i = 0; i + 1 < N_list.size(); ++i)
    if (!(N_list[i] < N_list[i + 1])) throw DomainError("N_list must be sorted ascending");
  const int ref_N = ref_N_override.value_or(preset.ref_N);
  if (!(ref_N > N_list.back()))
    throw DomainError("reference N must be finer than every studied N");
  const long M = steps_for(preset.T, tau_fixed);

  auto ref_lattice = build_lattice(preset.P, ref_N);
  const Potential ref_V = build_potential(preset.potential_modes, ref_lattice);
  SolverConfig ref_cfg{.tau = tau_fixed, .steps = M, .theta = preset.theta, .N = ref_N};
  const QPState reference =
      detail::timed_evolve(preset.initial_state(ref_lattice), ref_V, ref_cfg).final_state;

  ConvergenceReport report;
  report.axis = SweepAxis::space;
  report.params.assign(N_list.begin(), N_list.end());
  report.errors.resize(N_list.size());
  report.seconds.resize(N_list.size());
  report.max_mass_drift.resize(N_list.size());
  detail::parallel_rows(N_list.size(), jobs, [&](std::size_t i) {
    auto lattice = build_lattice(preset.P, N_list[i]);
    const Potential V = build_potential(preset.potential_modes, lattice);
    SolverConfig cfg{.tau = tau_fixed, .steps = M, .theta = preset.theta, .N = N_list[i]};
    auto outcome = detail::timed_evolve(preset.initial_state(lattice), V, cfg);
    report.errors[i] = l2_error(outcome.final_state, reference);
    report.seconds[i] = outcome.seconds;
    report.max_mass_drift[i] = outcome.max_mass_drift;
  });
  report.orders = detail::orders_with_floor(report.errors, report.params);
  return report;
}

/// Independent validation oracle: classical RK4 on the collocation ODE system
///   d c_k / dt = -i ||P k||^2 c_k - i FFT[(V_p + theta |psi|^2) psi]_k,
/// the same spatial discretization the splitting scheme approximates, so the
/// splitting-vs-oracle error is pure O(tau^2). Small instances only.
inline QPState oracle_solve(const ExperimentPreset& preset, int N, double dt,
                            double* max_mass_drift = nullptr) {
  auto lattice = build_lattice(preset.P, N);
  if (lattice->size() > 4096)
    throw DomainError("oracle_solve is limited to (2N)^n <= 4096 modes");
  const long M = steps_for(preset.T, dt);
  const Potential V = build_potential(preset.potential_modes, lattice);
  QPState state = preset.initial_state(lattice);

  auto& fft = fft::transformer_for(lattice->extents());
  const auto& lsq = lattice->lambda_sq();
  const auto& vp = V.grid_values();
  const std::size_t sz = lattice->size();
  std::vector<cdouble> grid(sz), k1(sz), k2(sz), k3(sz), k4(sz), tmp(sz);
  const cdouble minus_i{0.0, -1.0};

  auto rhs = [&](const std::vector<cdouble>& c, std::vector<cdouble>& out) {
    fft.backward(c, grid);
    for (std::size_t j = 0; j < sz; ++j)
      grid[j] *= (vp[j] + preset.theta * std::norm(grid[j]));
    fft.forward(grid, out);
    for (std::size_t i = 0; i < sz; ++i) out[i] = minus_i * (lsq[i] * c[i] + out[i]);
  };

  const double mass0 = detail::mass_of(state.coeffs);
  double drift = 0.0;
  for (long m = 0; m < M; ++m) {
    rhs(state.coeffs, k1);
    for (std::size_t i = 0; i < sz; ++i) tmp[i] = state.coeffs[i] + 0.5 * dt * k1[i];
    rhs(tmp, k2);
    for (std::size_t i = 0; i < sz; ++i) tmp[i] = state.coeffs[i] + 0.5 * dt * k2[i];
    rhs(tmp, k3);
    for (std::size_t i = 0; i < sz; ++i) tmp[i] = state.coeffs[i] + dt * k3[i];
    rhs(tmp, k4);
    for (std::size_t i = 0; i < sz; ++i)
      state.coeffs[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (max_mass_drift != nullptr || (m & 1023) == 1023) {
      const double mass = detail::mass_of(state.coeffs);
      if (!std::isfinite(mass))
        throw NonFiniteError("oracle_solve became non-finite at step " + std::to_string(m + 1) +
                             " (dt too large?)");
      drift = std::max(drift, std::abs(mass - mass0));
    }
  }
  const double mass_end = detail::mass_of(state.coeffs);
  if (!std::isfinite(mass_end)) throw NonFiniteError("oracle_solve produced non-finite result");
  drift = std::max(drift, std::abs(mass_end - mass0));
  if (max_mass_drift != nullptr) *max_mass_drift = mass0 > 0.0 ? drift / mass0 : drift;
  return state;
}

}  // namespace qpnls
