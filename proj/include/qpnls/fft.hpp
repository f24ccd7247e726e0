#pragma once

// Thin wrapper around FFTW for the n-dimensional complex transforms on the
// parent torus. Conventions:
//   forward : coeffs_k = (1/M) sum_j values_j e^{-i k.y_j}   (M = prod dims)
//   backward: values_j =       sum_k coeffs_k e^{+i k.y_j}
// which matches FFTW_FORWARD/FFTW_BACKWARD up to the 1/M factor, and makes
// the pair an exact inverse. Plans are cached per thread keyed on the extent
// vector; the FFTW planner itself is not thread-safe, so plan creation and
// destruction are serialized behind a global mutex. FFTW_ESTIMATE keeps plan
// selection (and therefore output bits) reproducible on a given machine.

#include <complex>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include <fftw3.h>

namespace qpnls::fft {

using cdouble = std::complex<double>;

inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Transformer {
 public:
  explicit Transformer(std::vector<int> extents) : extents_(std::move(extents)) {
    size_ = 1;
    for (int e : extents_) size_ *= static_cast<std::size_t>(e);
    in_ = fftw_alloc_complex(size_);
    out_ = fftw_alloc_complex(size_);
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd_ = fftw_plan_dft(static_cast<int>(extents_.size()), extents_.data(), in_, out_,
                         FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft(static_cast<int>(extents_.size()), extents_.data(), in_, out_,
                         FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  Transformer(const Transformer&) = delete;
  Transformer& operator=(const Transformer&) = delete;

  ~Transformer() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(in_);
    fftw_free(out_);
  }

  std::size_t size() const { return size_; }

  // grid values -> normalized coefficients
  void forward(std::span<const cdouble> in, std::span<cdouble> out) {
    std::memcpy(in_, in.data(), size_ * sizeof(cdouble));
    fftw_execute(fwd_);
    const double scale = 1.0 / static_cast<double>(size_);
    auto* o = reinterpret_cast<const cdouble*>(out_);
    for (std::size_t i = 0; i < size_; ++i) out[i] = o[i] * scale;
  }

  // coefficients -> grid values
  void backward(std::span<const cdouble> in, std::span<cdouble> out) {
    std::memcpy(in_, in.data(), size_ * sizeof(cdouble));
    fftw_execute(bwd_);
    std::memcpy(out.data(), out_, size_ * sizeof(cdouble));
  }

 private:
  std::vector<int> extents_;
  std::size_t size_ = 0;
  fftw_complex* in_ = nullptr;
  fftw_complex* out_ = nullptr;
  fftw_plan fwd_{};
  fftw_plan bwd_{};
};

/// Per-thread plan cache. Each worker thread of a convergence sweep gets its
/// own plans and scratch buffers, so concurrent transforms never share state.
inline Transformer& transformer_for(const std::vector<int>& extents) {
  thread_local std::map<std::vector<int>, std::unique_ptr<Transformer>> cache;
  auto it = cache.find(extents);
  if (it == cache.end())
    it = cache.emplace(extents, std::make_unique<Transformer>(extents)).first;
  return *it->second;
}

}  // namespace qpnls::fft
