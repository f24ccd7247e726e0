#pragma once

// CSV emission. Floats are printed with 17 significant digits so that every
// dump round-trips losslessly through text.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "qpnls/bench.hpp"
#include "qpnls/errors.hpp"
#include "qpnls/field.hpp"
#include "qpnls/integrator.hpp"

namespace qpnls {

inline std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file " + path.string());
  return out;
}

inline void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace detail

/// Coefficient dump: header k_1,...,k_n,re,im; one row per mode in lattice order.
inline void write_state_csv(const std::filesystem::path& path, const QPState& s) {
  auto out = detail::open_output(path);
  const int n = s.lattice->parent_dim();
  for (int a = 1; a <= n; ++a) out << "k_" << a << ",";
  out << "re,im\n";
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    for (int v : s.lattice->mode_at(i)) out << v << ",";
    out << fmt17(s.coeffs[i].real()) << "," << fmt17(s.coeffs[i].imag()) << "\n";
  }
  detail::finish_output(out, path);
}

/// Grid dump: header j_1,...,j_n,re,im; one row per grid point in storage order.
inline void write_grid_csv(const std::filesystem::path& path, const GridField& g) {
  auto out = detail::open_output(path);
  const int n = g.lattice->parent_dim();
  const int ext = g.lattice->extents()[0];
  for (int a = 1; a <= n; ++a) out << "j_" << a << ",";
  out << "re,im\n";
  std::vector<int> j(n, 0);
  for (std::size_t flat = 0; flat < g.values.size(); ++flat) {
    for (int a = 0; a < n; ++a) out << j[a] << ",";
    out << fmt17(g.values[flat].real()) << "," << fmt17(g.values[flat].imag()) << "\n";
    for (int a = n - 1; a >= 0; --a) {
      if (++j[a] < ext) break;
      j[a] = 0;
    }
  }
  detail::finish_output(out, path);
}

inline void write_trace_csv(const std::filesystem::path& path,
                            const std::vector<EvolutionRecord>& records) {
  auto out = detail::open_output(path);
  const bool with_alpha = !records.empty() && records.front().x_alpha.has_value();
  out << (with_alpha ? "m,t,mass,x_alpha\n" : "m,t,mass\n");
  for (const auto& r : records) {
    out << r.step << "," << fmt17(r.time) << "," << fmt17(r.mass);
    if (with_alpha) out << "," << fmt17(r.x_alpha.value_or(std::nan("")));
    out << "\n";
  }
  detail::finish_output(out, path);
}

/// Convergence report: param,err,kappa,seconds with kappa empty on the first row.
inline void write_report_csv(const std::filesystem::path& path, const ConvergenceReport& rep) {
  auto out = detail::open_output(path);
  out << "param,err,kappa,seconds\n";
  for (std::size_t i = 0; i < rep.params.size(); ++i) {
    out << fmt17(rep.params[i]) << "," << fmt17(rep.errors[i]) << ",";
    if (i > 0) out << fmt17(rep.orders[i - 1]);
    out << "," << fmt17(rep.seconds[i]) << "\n";
  }
  detail::finish_output(out, path);
}

/// Soliton profile: |psi| sampled along an axis.
inline void write_profile_csv(const std::filesystem::path& path, const std::vector<double>& xs,
                              const std::vector<double>& abs_psi) {
  auto out = detail::open_output(path);
  out << "x,abs_psi\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    out << fmt17(xs[i]) << "," << fmt17(abs_psi[i]) << "\n";
  detail::finish_output(out, path);
}

}  // namespace qpnls
