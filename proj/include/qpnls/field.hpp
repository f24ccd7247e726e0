#pragma once

// Quasiperiodic field representation. A QPState holds the complex Fourier
// coefficients of the parent function on the truncated lattice; a GridField
// holds parent-function values on the uniform (2N)^n collocation grid
// y_j = j * h, h = pi/N. forward_transform / inverse_transform move between
// the two and are exact inverses up to roundoff; interpolate() is the
// trigonometric interpolation I_N (same computation as forward_transform,
// named for the role it plays in the scheme).

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "qpnls/errors.hpp"
#include "qpnls/fft.hpp"
#include "qpnls/lattice.hpp"

namespace qpnls {

using cdouble = std::complex<double>;

struct QPState {
  LatticePtr lattice;
  std::vector<cdouble> coeffs;  // flat (2N)^n tensor, FFT mode order
};

struct GridField {
  LatticePtr lattice;
  std::vector<cdouble> values;  // flat (2N)^n tensor, grid order
};

inline QPState zero_state(LatticePtr lat) {
  std::vector<cdouble> c(lat->size(), cdouble{0.0, 0.0});
  return QPState{std::move(lat), std::move(c)};
}

inline GridField zero_field(LatticePtr lat) {
  std::vector<cdouble> v(lat->size(), cdouble{0.0, 0.0});
  return GridField{std::move(lat), std::move(v)};
}

inline QPState forward_transform(const GridField& g) {
  QPState s{g.lattice, std::vector<cdouble>(g.values.size())};
  fft::transformer_for(g.lattice->extents()).forward(g.values, s.coeffs);
  return s;
}

inline GridField inverse_transform(const QPState& s) {
  GridField g{s.lattice, std::vector<cdouble>(s.coeffs.size())};
  fft::transformer_for(s.lattice->extents()).backward(s.coeffs, g.values);
  return g;
}

/// Trigonometric interpolation I_N from samples of the parent function.
inline QPState interpolate(const GridField& samples_of_parent) {
  return forward_transform(samples_of_parent);
}

inline double l2_norm(const QPState& s) {
  double acc = 0.0;
  for (const cdouble& c : s.coeffs) acc += std::norm(c);
  return std::sqrt(acc);
}

inline cdouble inner_product(const QPState& a, const QPState& b) {
  if (!a.lattice->same_geometry(*b.lattice))
    throw LatticeMismatch("inner_product requires states on the same lattice");
  cdouble acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) acc += a.coeffs[i] * std::conj(b.coeffs[i]);
  return acc;
}

/// Parent-torus Sobolev-type norm sqrt(sum (1 + ||k||^{4a}) |c_k|^2), with the
/// k of the parent modes (not the projected frequencies). At a = 0 this is
/// the plain L^2 norm, not sqrt(2) times it.
inline double x_alpha_norm(const QPState& s, double alpha) {
  if (!(alpha >= 0.0)) throw DomainError("x_alpha_norm requires alpha >= 0");
  if (alpha == 0.0) return l2_norm(s);
  const auto& lat = *s.lattice;
  const int n = lat.parent_dim();
  double acc = 0.0;
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    auto k = lat.mode_at(i);
    double ksq = 0.0;
    for (int a = 0; a < n; ++a) ksq += static_cast<double>(k[a]) * k[a];
    acc += (1.0 + std::pow(ksq, 2.0 * alpha)) * std::norm(s.coeffs[i]);
  }
  return std::sqrt(acc);
}

/// Zero-padding embedding of a state into a finer lattice over the same P.
inline QPState embed(const QPState& s, LatticePtr finer) {
  if (!s.lattice->embeds_in(*finer))
    throw LatticeMismatch("embed target must be a finer lattice over the same projection");
  QPState out = zero_state(std::move(finer));
  for (std::size_t i = 0; i < s.coeffs.size(); ++i)
    out.coeffs[out.lattice->index_of(s.lattice->mode_at(i))] = s.coeffs[i];
  return out;
}

/// L^2 distance of coefficient tensors; states on different truncations of
/// the same projection are compared after zero-padding the coarser one.
inline double l2_error(const QPState& a, const QPState& b) {
  const QPState* fine = &a;
  const QPState* coarse = &b;
  if (a.lattice->same_geometry(*b.lattice)) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) acc += std::norm(a.coeffs[i] - b.coeffs[i]);
    return std::sqrt(acc);
  }
  if (b.lattice->embeds_in(*a.lattice)) {
    fine = &a;
    coarse = &b;
  } else if (a.lattice->embeds_in(*b.lattice)) {
    fine = &b;
    coarse = &a;
  } else {
    throw LatticeMismatch("l2_error: neither lattice embeds in the other");
  }
  const int Nc = coarse->lattice->truncation();
  double acc = 0.0;
  for (std::size_t i = 0; i < fine->coeffs.size(); ++i) {
    auto k = fine->lattice->mode_at(i);
    bool inside = true;
    for (int a2 = 0; a2 < fine->lattice->parent_dim(); ++a2)
      if (k[a2] < -Nc || k[a2] >= Nc) {
        inside = false;
        break;
      }
    const cdouble other = inside ? coarse->coeffs[coarse->lattice->index_of(k)] : cdouble{0.0, 0.0};
    acc += std::norm(fine->coeffs[i] - other);
  }
  return std::sqrt(acc);
}

/// Direct Fourier-Bohr summation psi(x) = sum_k c_k e^{i (P k).x}. Uses the
/// identity (P k).x = k.(P^T x), so each point costs one integer dot product
/// per mode. Intended for plotting-sized point sets.
inline std::vector<cdouble> evaluate_at_points(const QPState& s,
                                               std::span<const std::vector<double>> xs) {
  const auto& lat = *s.lattice;
  const auto& P = lat.projection();
  const int d = lat.physical_dim();
  const int n = lat.parent_dim();
  std::vector<cdouble> out;
  out.reserve(xs.size());
  std::vector<double> y(n);
  for (const auto& x : xs) {
    if (x.size() != static_cast<std::size_t>(d))
      throw DimensionMismatch("evaluation point has wrong dimension");
    for (int a = 0; a < n; ++a) {
      double acc = 0.0;
      for (int i = 0; i < d; ++i) acc += P.entry(i, a) * x[i];
      y[a] = acc;
    }
    cdouble acc{0.0, 0.0};
    for (std::size_t idx = 0; idx < s.coeffs.size(); ++idx) {
      auto k = lat.mode_at(idx);
      double phase = 0.0;
      for (int a = 0; a < n; ++a) phase += k[a] * y[a];
      acc += s.coeffs[idx] * std::polar(1.0, phase);
    }
    out.push_back(acc);
  }
  return out;
}

}  // namespace qpnls
