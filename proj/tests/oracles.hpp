#pragma once

// Independent reference computations the tests check the library against.
// Everything here is deliberately written from the defining formulas (naive
// summation, quadrature, closed forms) and never calls the code path under
// test.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qpnls/field.hpp"
#include "qpnls/lattice.hpp"

namespace oracles {

using qpnls::cdouble;
using qpnls::FrequencyLattice;
using qpnls::GridField;
using qpnls::QPState;

// O(M^2) discrete Fourier sum: c_k = (1/M) sum_j v_j e^{-i k.y_j}.
inline std::vector<cdouble> naive_forward(const GridField& g) {
  const auto& lat = *g.lattice;
  const int n = lat.parent_dim();
  const int ext = lat.extents()[0];
  const double h = lat.grid_spacing();
  std::vector<cdouble> out(lat.size(), cdouble{0.0, 0.0});
  for (std::size_t ki = 0; ki < lat.size(); ++ki) {
    auto k = lat.mode_at(ki);
    cdouble acc{0.0, 0.0};
    std::vector<int> j(n, 0);
    for (std::size_t flat = 0; flat < lat.size(); ++flat) {
      double phase = 0.0;
      for (int a = 0; a < n; ++a) phase += k[a] * (j[a] * h);
      acc += g.values[flat] * std::polar(1.0, -phase);
      for (int a = n - 1; a >= 0; --a) {
        if (++j[a] < ext) break;
        j[a] = 0;
      }
    }
    out[ki] = acc / static_cast<double>(lat.size());
  }
  return out;
}

// O(M^2) synthesis: v_j = sum_k c_k e^{+i k.y_j}.
inline std::vector<cdouble> naive_inverse(const QPState& s) {
  const auto& lat = *s.lattice;
  const int n = lat.parent_dim();
  const int ext = lat.extents()[0];
  const double h = lat.grid_spacing();
  std::vector<cdouble> out(lat.size(), cdouble{0.0, 0.0});
  std::vector<int> j(n, 0);
  for (std::size_t flat = 0; flat < lat.size(); ++flat) {
    cdouble acc{0.0, 0.0};
    for (std::size_t ki = 0; ki < lat.size(); ++ki) {
      auto k = lat.mode_at(ki);
      double phase = 0.0;
      for (int a = 0; a < n; ++a) phase += k[a] * (j[a] * h);
      acc += s.coeffs[ki] * std::polar(1.0, phase);
    }
    out[flat] = acc;
    for (int a = n - 1; a >= 0; --a) {
      if (++j[a] < ext) break;
      j[a] = 0;
    }
  }
  return out;
}

// Largest singular value of a 2 x n matrix from the characteristic
// polynomial of the 2x2 Gram matrix P P^T.
inline double gram_sigma_max_2xn(const qpnls::ProjectionMatrix& P) {
  double g00 = 0.0, g01 = 0.0, g11 = 0.0;
  for (int j = 0; j < P.parent_dim(); ++j) {
    g00 += P.entry(0, j) * P.entry(0, j);
    g01 += P.entry(0, j) * P.entry(1, j);
    g11 += P.entry(1, j) * P.entry(1, j);
  }
  const double tr = g00 + g11;
  const double det = g00 * g11 - g01 * g01;
  const double eig_max = 0.5 * (tr + std::sqrt(tr * tr - 4.0 * det));
  return std::sqrt(eig_max);
}

// Mean-value quadrature of psi(x) conj(phi(x)) along the physical line
// (d = 1): equispaced Riemann mean over [-T, T] with a step chosen off any
// resonance of the difference frequencies. The mean-value truncation error
// decays like 1/(gap * T).
inline cdouble mean_value_inner_1d(const QPState& a, const QPState& b, double T, double step) {
  const auto& lat = *a.lattice;
  const long samples = static_cast<long>(2.0 * T / step);
  cdouble acc{0.0, 0.0};
  std::vector<double> point(1);
  for (long i = 0; i < samples; ++i) {
    point[0] = -T + (i + 0.5) * step;
    const auto va = qpnls::evaluate_at_points(a, std::span{&point, 1});
    const auto vb = qpnls::evaluate_at_points(b, std::span{&point, 1});
    acc += va[0] * std::conj(vb[0]);
  }
  (void)lat;
  return acc / static_cast<double>(samples);
}

// Periodic multilinear interpolation of a parent-grid field at y (n = 2).
inline cdouble bilinear_parent_value(const GridField& g, double y1, double y2) {
  const int ext = g.lattice->extents()[0];
  const double h = g.lattice->grid_spacing();
  const double two_pi = 2.0 * M_PI;
  auto wrap = [&](double y) {
    double r = std::fmod(y, two_pi);
    if (r < 0) r += two_pi;
    return r;
  };
  const double u = wrap(y1) / h;
  const double v = wrap(y2) / h;
  const int i0 = static_cast<int>(u) % ext, i1 = (i0 + 1) % ext;
  const int j0 = static_cast<int>(v) % ext, j1 = (j0 + 1) % ext;
  const double fu = u - std::floor(u), fv = v - std::floor(v);
  auto at = [&](int i, int j) { return g.values[static_cast<std::size_t>(i) * ext + j]; };
  return (1 - fu) * (1 - fv) * at(i0, j0) + fu * (1 - fv) * at(i1, j0) +
         (1 - fu) * fv * at(i0, j1) + fu * fv * at(i1, j1);
}

inline QPState random_state(qpnls::LatticePtr lat, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  QPState s = qpnls::zero_state(std::move(lat));
  for (auto& c : s.coeffs) c = cdouble{dist(rng), dist(rng)};
  return s;
}

inline GridField random_field(qpnls::LatticePtr lat, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  GridField g = qpnls::zero_field(std::move(lat));
  for (auto& v : g.values) v = cdouble{dist(rng), dist(rng)};
  return g;
}

inline double max_rel_coeff_error(const std::vector<cdouble>& got,
                                  const std::vector<cdouble>& want) {
  double scale = 0.0;
  for (const auto& w : want) scale = std::max(scale, std::abs(w));
  if (scale == 0.0) scale = 1.0;
  double err = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) err = std::max(err, std::abs(got[i] - want[i]));
  return err / scale;
}

}  // namespace oracles
