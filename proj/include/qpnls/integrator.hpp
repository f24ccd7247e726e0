#pragma once

// Full discrete scheme: per step,
//   Step 1  kinetic half-step in coefficient space,
//   Step 2  inverse FFT -> pointwise phase e^{-i tau (V_p + theta |phi|^2)} -> FFT,
//   Step 3  kinetic half-step.
// Every sub-step is an isometry of the discrete l2 norm (unitary diagonal
// phase, modulus-preserving pointwise phase, norm-preserving FFT pair), so
// the mass sum |c_k|^2 is conserved to roundoff regardless of V and theta.

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpnls/errors.hpp"
#include "qpnls/field.hpp"
#include "qpnls/operators.hpp"

namespace qpnls {

struct EvolutionRecord {
  long step = 0;
  double time = 0.0;
  double mass = 0.0;
  std::optional<double> x_alpha;
};

namespace detail {

struct StrangWorkspace {
  std::vector<cdouble> kinetic_phase;  // e^{-i (tau/2) ||P k||^2} per mode
  std::vector<cdouble> grid;

  StrangWorkspace(const FrequencyLattice& lat, double tau) : grid(lat.size()) {
    kinetic_phase.resize(lat.size());
    const auto& lsq = lat.lambda_sq();
    for (std::size_t i = 0; i < lsq.size(); ++i)
      kinetic_phase[i] = std::polar(1.0, -0.5 * tau * lsq[i]);
  }
};

inline void strang_step_inplace(std::vector<cdouble>& coeffs, const Potential& V, double theta,
                                double tau, StrangWorkspace& ws, fft::Transformer& fft) {
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] *= ws.kinetic_phase[i];
  fft.backward(coeffs, ws.grid);
  const auto& vp = V.grid_values();
  for (std::size_t j = 0; j < ws.grid.size(); ++j)
    ws.grid[j] *= std::polar(1.0, -tau * (vp[j] + theta * std::norm(ws.grid[j])));
  fft.forward(ws.grid, coeffs);
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] *= ws.kinetic_phase[i];
}

inline double mass_of(const std::vector<cdouble>& coeffs) {
  double acc = 0.0;
  for (const cdouble& c : coeffs) acc += std::norm(c);
  return std::sqrt(acc);
}

}  // namespace detail

/// One Strang step of size cfg.tau.
inline QPState strang_step(const QPState& s, const Potential& V, const SolverConfig& cfg) {
  if (!s.lattice->same_geometry(*V.lattice()))
    throw LatticeMismatch("state and potential live on different lattices");
  detail::StrangWorkspace ws(*s.lattice, cfg.tau);
  QPState out{s.lattice, s.coeffs};
  detail::strang_step_inplace(out.coeffs, V, cfg.theta, cfg.tau, ws,
                              fft::transformer_for(s.lattice->extents()));
  return out;
}

/// cfg.steps sequential Strang steps with a per-step diagnostic record
/// (step 0 is the initial state). Throws NonFiniteError as soon as a
/// coefficient stops being finite, reporting the last finite record.
inline std::pair<QPState, std::vector<EvolutionRecord>> evolve(const QPState& s0,
                                                               const Potential& V,
                                                               const SolverConfig& cfg) {
  cfg.validate();
  if (!s0.lattice->same_geometry(*V.lattice()))
    throw LatticeMismatch("state and potential live on different lattices");

  QPState state{s0.lattice, s0.coeffs};
  auto& fft = fft::transformer_for(state.lattice->extents());
  detail::StrangWorkspace ws(*state.lattice, cfg.tau);

  std::vector<EvolutionRecord> records;
  records.reserve(static_cast<std::size_t>(cfg.steps) + 1);
  auto record = [&](long m) {
    EvolutionRecord r{m, m * cfg.tau, detail::mass_of(state.coeffs), std::nullopt};
    if (cfg.diag_alpha) r.x_alpha = x_alpha_norm(state, *cfg.diag_alpha);
    records.push_back(r);
    return r.mass;
  };
  double mass = record(0);
  if (!std::isfinite(mass)) throw NonFiniteError("initial state is not finite");

  for (long m = 1; m <= cfg.steps; ++m) {
    detail::strang_step_inplace(state.coeffs, V, cfg.theta, cfg.tau, ws, fft);
    mass = record(m);
    if (!std::isfinite(mass)) {
      const auto& last = records[records.size() - 2];
      throw NonFiniteError("non-finite coefficients at step " + std::to_string(m) + " (t = " +
                           std::to_string(m * cfg.tau) + "); last finite mass " +
                           std::to_string(last.mass) + " at step " + std::to_string(last.step));
    }
  }
  return {std::move(state), std::move(records)};
}

}  // namespace qpnls
