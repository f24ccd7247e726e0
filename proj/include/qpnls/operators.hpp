#pragma once

// The two exact sub-flows of the splitting scheme and the sparse-mode
// potential. Sign convention: e^{i t Laplacian} acts on the mode e^{i lambda.x}
// as multiplication by e^{-i t ||lambda||^2}, the choice that solves
// i psi_t = -Laplacian psi. The kinetic step therefore rotates coefficient
// phases by -(tau/2) ||P k||^2, using the projected frequencies, never the
// parent-mode norms.

#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <vector>

#include "qpnls/errors.hpp"
#include "qpnls/field.hpp"
#include "qpnls/lattice.hpp"

namespace qpnls {

struct PotentialMode {
  std::vector<int> k;
  cdouble amplitude;

  bool operator==(const PotentialMode&) const = default;
};

/// Real quasiperiodic potential, defined by a conjugate-symmetric sparse list
/// of parent modes and materialized on a lattice's collocation grid.
class Potential {
 public:
  Potential(LatticePtr lattice, std::vector<PotentialMode> modes, std::vector<double> grid_values)
      : lattice_(std::move(lattice)), modes_(std::move(modes)), grid_values_(std::move(grid_values)) {}

  const LatticePtr& lattice() const { return lattice_; }
  const std::vector<PotentialMode>& modes() const { return modes_; }
  const std::vector<double>& grid_values() const { return grid_values_; }

 private:
  LatticePtr lattice_;
  std::vector<PotentialMode> modes_;
  std::vector<double> grid_values_;
};

struct SolverConfig {
  double tau = 0.0;     // step size; negative runs the scheme backward
  long steps = 0;       // M
  double theta = 0.0;   // nonlinearity strength
  int N = 1;            // truncation
  double collision_tol = kDefaultCollisionTol;
  double rank_tol = kDefaultRankTol;
  std::optional<double> diag_alpha;  // record X_alpha norm per step when set

  void validate() const {
    if (!std::isfinite(tau) || tau == 0.0) throw DomainError("tau must be finite and nonzero");
    if (steps < 0) throw DomainError("step count must be >= 0");
    if (N < 1) throw DomainError("truncation N must be >= 1");
  }
};

namespace detail {

// Evaluates the sparse mode sum on the grid by per-axis phase tables, so a
// mode outside K_N^n still lands on its exact aliased grid values.
inline std::vector<cdouble> materialize_modes(const FrequencyLattice& lat,
                                              const std::vector<PotentialMode>& modes) {
  const int n = lat.parent_dim();
  const int ext = lat.extents().empty() ? 1 : lat.extents()[0];
  const double h = lat.grid_spacing();
  std::vector<cdouble> acc(lat.size(), cdouble{0.0, 0.0});
  std::vector<std::vector<cdouble>> tab(n, std::vector<cdouble>(ext));
  std::vector<int> idx(n, 0);
  for (const auto& m : modes) {
    for (int a = 0; a < n; ++a)
      for (int j = 0; j < ext; ++j) tab[a][j] = std::polar(1.0, m.k[a] * j * h);
    idx.assign(n, 0);
    for (std::size_t flat = 0; flat < acc.size(); ++flat) {
      cdouble w = m.amplitude;
      for (int a = 0; a < n; ++a) w *= tab[a][idx[a]];
      acc[flat] += w;
      for (int a = n - 1; a >= 0; --a) {
        if (++idx[a] < ext) break;
        idx[a] = 0;
      }
    }
  }
  return acc;
}

}  // namespace detail

/// Validates conjugate symmetry of the mode list, materializes the parent
/// grid values, and checks the imaginary residue (V must be real).
inline Potential build_potential(const std::vector<PotentialMode>& modes, LatticePtr lattice) {
  const int n = lattice->parent_dim();
  std::map<std::vector<int>, cdouble> by_mode;
  for (const auto& m : modes) {
    if (m.k.size() != static_cast<std::size_t>(n))
      throw DimensionMismatch("potential mode length != parent dimension");
    if (!by_mode.emplace(m.k, m.amplitude).second)
      throw DomainError("duplicate potential mode");
  }
  for (const auto& [k, amp] : by_mode) {
    std::vector<int> neg(k.size());
    for (std::size_t a = 0; a < k.size(); ++a) neg[a] = -k[a];
    auto it = by_mode.find(neg);
    const double scale = std::max(1.0, std::abs(amp));
    if (it == by_mode.end() || std::abs(it->second - std::conj(amp)) > 1e-12 * scale)
      throw NotRealError("potential mode list is not conjugate-symmetric");
  }

  std::vector<cdouble> complex_values = detail::materialize_modes(*lattice, modes);
  std::vector<double> grid(complex_values.size());
  for (std::size_t i = 0; i < complex_values.size(); ++i) {
    if (std::abs(complex_values[i].imag()) > 1e-12)
      throw NotRealError("materialized potential has imaginary residue > 1e-12");
    grid[i] = complex_values[i].real();
  }
  return Potential{std::move(lattice), modes, std::move(grid)};
}

/// Exact kinetic propagator over tau/2: coefficient k picks up the phase
/// e^{-i (tau/2) ||P k||^2}. Unitary, so the l2 norm is preserved.
inline QPState kinetic_half_step(const QPState& s, double tau) {
  QPState out{s.lattice, s.coeffs};
  const auto& lsq = s.lattice->lambda_sq();
  for (std::size_t i = 0; i < out.coeffs.size(); ++i)
    out.coeffs[i] *= std::polar(1.0, -0.5 * tau * lsq[i]);
  return out;
}

/// Exact flow of i phi_t = (V + theta |phi|^2) phi over tau: a pointwise
/// phase rotation, since |phi|^2 is constant along this sub-flow. Preserves
/// each |value| exactly.
inline GridField nonlinear_phase_step(const GridField& g, const Potential& V, double theta,
                                      double tau) {
  if (!g.lattice->same_geometry(*V.lattice()))
    throw ShapeMismatch("potential grid does not match field grid");
  GridField out{g.lattice, g.values};
  const auto& vp = V.grid_values();
  for (std::size_t j = 0; j < out.values.size(); ++j)
    out.values[j] *= std::polar(1.0, -tau * (vp[j] + theta * std::norm(out.values[j])));
  return out;
}

}  // namespace qpnls
