#pragma once

// Projection matrices and truncated frequency lattices.
//
// A d-dimensional quasiperiodic field is represented through an n-dimensional
// periodic parent function; the d x n projection matrix P maps integer parent
// modes k in Z^n to physical Fourier exponents lambda = P k. The truncated
// index set K_N^n = {-N <= k_j < N} is stored in FFT wraparound order: along
// each axis, storage index j holds mode k = j for j < N and k = j - 2N for
// j >= N, so coefficient tensors can be handed to the FFT without reshuffling.

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "qpnls/errors.hpp"

namespace qpnls {

inline constexpr double kDefaultCollisionTol = 1e-10;
inline constexpr double kDefaultRankTol = 1e-12;

class ProjectionMatrix {
 public:
  /// Row-major d x n entry list. Requires d >= 1 and n >= d.
  ProjectionMatrix(int physical_dim, int parent_dim, std::vector<double> row_major)
      : d_(physical_dim), n_(parent_dim), entries_(std::move(row_major)) {
    if (d_ < 1) throw DimensionMismatch("projection matrix needs d >= 1");
    if (n_ < d_) throw DimensionMismatch("projection matrix needs n >= d");
    if (entries_.size() != static_cast<std::size_t>(d_) * static_cast<std::size_t>(n_))
      throw DimensionMismatch("projection matrix entry count != d*n");
    for (double v : entries_)
      if (!std::isfinite(v)) throw DomainError("projection matrix entry not finite");
  }

  int physical_dim() const { return d_; }
  int parent_dim() const { return n_; }
  double entry(int i, int j) const { return entries_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<double>& entries() const { return entries_; }

  bool operator==(const ProjectionMatrix&) const = default;

 private:
  int d_;
  int n_;
  std::vector<double> entries_;
};

namespace detail {

inline Eigen::MatrixXd to_eigen(const ProjectionMatrix& P) {
  Eigen::MatrixXd m(P.physical_dim(), P.parent_dim());
  for (int i = 0; i < P.physical_dim(); ++i)
    for (int j = 0; j < P.parent_dim(); ++j) m(i, j) = P.entry(i, j);
  return m;
}

}  // namespace detail

/// Largest singular value of P, exact to LAPACK-grade accuracy.
inline double max_singular_value(const ProjectionMatrix& P) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(detail::to_eigen(P));
  return svd.singularValues()(0);
}

/// Full real rank check: sigma_d > rank_tol * sigma_1.
inline void validate_rank(const ProjectionMatrix& P, double rank_tol = kDefaultRankTol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(detail::to_eigen(P));
  const auto& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(P.physical_dim() - 1);
  if (!(smax > 0.0) || !(smin > rank_tol * smax))
    throw RankError("projection matrix is rank-deficient (sigma_min/sigma_max = " +
                    std::to_string(smax > 0 ? smin / smax : 0.0) + ")");
}

/// lambda = P k, the physical frequency of parent mode k.
inline std::vector<double> lambda_of(const ProjectionMatrix& P, std::span<const int> k) {
  if (k.size() != static_cast<std::size_t>(P.parent_dim()))
    throw DimensionMismatch("mode length != parent dimension");
  std::vector<double> lambda(P.physical_dim(), 0.0);
  for (int i = 0; i < P.physical_dim(); ++i) {
    double acc = 0.0;
    for (int j = 0; j < P.parent_dim(); ++j) acc += P.entry(i, j) * k[j];
    lambda[i] = acc;
  }
  return lambda;
}

class FrequencyLattice {
 public:
  FrequencyLattice(ProjectionMatrix P, int N) : P_(std::move(P)), N_(N) {
    if (N_ < 1) throw DomainError("truncation N must be >= 1");
    const int n = P_.parent_dim();
    extents_.assign(n, 2 * N_);
    size_ = 1;
    for (int a = 0; a < n; ++a) size_ *= static_cast<std::size_t>(2 * N_);

    modes_.resize(size_ * static_cast<std::size_t>(n));
    lambda_sq_.resize(size_);
    std::vector<int> idx(n, 0);
    for (std::size_t flat = 0; flat < size_; ++flat) {
      int* mode = &modes_[flat * n];
      for (int a = 0; a < n; ++a) mode[a] = idx[a] < N_ ? idx[a] : idx[a] - 2 * N_;
      double sq = 0.0;
      for (int i = 0; i < P_.physical_dim(); ++i) {
        double acc = 0.0;
        for (int a = 0; a < n; ++a) acc += P_.entry(i, a) * mode[a];
        sq += acc * acc;
      }
      lambda_sq_[flat] = sq;
      for (int a = n - 1; a >= 0; --a) {
        if (++idx[a] < 2 * N_) break;
        idx[a] = 0;
      }
    }
  }

  const ProjectionMatrix& projection() const { return P_; }
  int truncation() const { return N_; }
  int parent_dim() const { return P_.parent_dim(); }
  int physical_dim() const { return P_.physical_dim(); }
  std::size_t size() const { return size_; }
  const std::vector<int>& extents() const { return extents_; }
  double grid_spacing() const { return M_PI / N_; }

  /// Parent mode k of the flat storage index, in FFT wraparound order.
  std::span<const int> mode_at(std::size_t flat) const {
    return {&modes_[flat * parent_dim()], static_cast<std::size_t>(parent_dim())};
  }
  /// ||P k||_2^2 table aligned with the flat storage order.
  const std::vector<double>& lambda_sq() const { return lambda_sq_; }

  /// Same projection matrix (bitwise) and same truncation.
  bool same_geometry(const FrequencyLattice& other) const {
    return N_ == other.N_ && P_ == other.P_;
  }
  /// True if every mode of this lattice exists in `finer` (same P, N <= N').
  bool embeds_in(const FrequencyLattice& finer) const {
    return P_ == finer.P_ && N_ <= finer.N_;
  }

  /// Flat index of mode k (components must satisfy -N <= k_a < N).
  std::size_t index_of(std::span<const int> k) const {
    std::size_t flat = 0;
    for (int a = 0; a < parent_dim(); ++a) {
      const int j = k[a] >= 0 ? k[a] : k[a] + 2 * N_;
      flat = flat * static_cast<std::size_t>(2 * N_) + static_cast<std::size_t>(j);
    }
    return flat;
  }

 private:
  ProjectionMatrix P_;
  int N_;
  std::vector<int> extents_;
  std::size_t size_ = 0;
  std::vector<int> modes_;       // size_ * n, FFT order
  std::vector<double> lambda_sq_;
};

using LatticePtr = std::shared_ptr<const FrequencyLattice>;

namespace detail {

// Minimum of ||P delta|| over the difference set of K_N^n. Every pair
// difference k - k' lies in [-(2N-1), 2N-1]^n and every such delta is
// realized by some pair, so scanning the difference box is an exact
// all-pairs check at (4N-1)^n cost instead of (2N)^(2n).
inline void check_collisions(const ProjectionMatrix& P, int N, double tol) {
  const int n = P.parent_dim();
  const int d = P.physical_dim();
  const int lo = -(2 * N - 1), hi = 2 * N - 1;
  std::vector<int> delta(n, lo);
  const double tol_sq = tol * tol;
  double min_sq = -1.0;
  std::vector<int> argmin;
  while (true) {
    bool zero = true, canonical_half = false;
    for (int a = 0; a < n; ++a) {
      if (delta[a] != 0) {
        zero = false;
        canonical_half = delta[a] > 0;
        break;
      }
    }
    if (!zero && canonical_half) {
      double sq = 0.0;
      for (int i = 0; i < d; ++i) {
        double acc = 0.0;
        for (int a = 0; a < n; ++a) acc += P.entry(i, a) * delta[a];
        sq += acc * acc;
      }
      if (min_sq < 0.0 || sq < min_sq) {
        min_sq = sq;
        argmin = delta;
      }
    }
    int a = n - 1;
    for (; a >= 0; --a) {
      if (++delta[a] <= hi) break;
      delta[a] = lo;
    }
    if (a < 0) break;
  }
  if (min_sq >= 0.0 && min_sq <= tol_sq) {
    std::string msg = "frequency collision at truncation N=" + std::to_string(N) +
                      ": ||P*delta|| = " + std::to_string(std::sqrt(min_sq)) + " for delta = (";
    for (std::size_t a = 0; a < argmin.size(); ++a)
      msg += (a ? "," : "") + std::to_string(argmin[a]);
    msg += ")";
    throw CollisionError(msg);
  }
}

}  // namespace detail

/// Builds the truncated lattice, running the rank check on P and the exact
/// pairwise frequency-collision check on K_N^n.
inline LatticePtr build_lattice(const ProjectionMatrix& P, int N,
                                double collision_tol = kDefaultCollisionTol,
                                double rank_tol = kDefaultRankTol) {
  validate_rank(P, rank_tol);
  detail::check_collisions(P, N, collision_tol);
  return std::make_shared<const FrequencyLattice>(P, N);
}

}  // namespace qpnls
