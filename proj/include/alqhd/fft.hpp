#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace alqhd::detail {

/// Iterative radix-2 FFT with precomputed bit-reversal and twiddle tables.
/// Forward is unnormalized, inverse carries the 1/n factor, so a forward /
/// inverse round trip preserves the data up to rounding. Lengths must be
/// powers of two, which the callers guarantee.
class Radix2Plan {
 public:
  explicit Radix2Plan(std::size_t n) : n_(n) {
    if (n == 0 || (n & (n - 1)) != 0)
      throw std::invalid_argument("Radix2Plan: length must be a power of two");
    rev_.resize(n);
    std::size_t log2n = 0;
    while ((std::size_t{1} << log2n) < n) ++log2n;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < log2n; ++b) r |= ((i >> b) & 1u) << (log2n - 1 - b);
      rev_[i] = r;
    }
    // twiddles for stage of half-length h: exp(-2 pi i j / (2h)), j = 0..h-1,
    // stored contiguously; stage h starts at offset h-1 (sum of previous halves)
    tw_.resize(n > 1 ? n - 1 : 0);
    for (std::size_t h = 1; h < n; h <<= 1) {
      const double base = -std::numbers::pi / static_cast<double>(h);
      for (std::size_t j = 0; j < h; ++j) {
        const double ang = base * static_cast<double>(j);
        tw_[(h - 1) + j] = {std::cos(ang), std::sin(ang)};
      }
    }
  }

  std::size_t size() const noexcept { return n_; }

  void forward(std::complex<double>* a) const { run(a, false); }
  void inverse(std::complex<double>* a) const {
    run(a, true);
    const double s = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) a[i] *= s;
  }

 private:
  void run(std::complex<double>* a, bool conj) const {
    for (std::size_t i = 0; i < n_; ++i)
      if (i < rev_[i]) std::swap(a[i], a[rev_[i]]);
    for (std::size_t h = 1; h < n_; h <<= 1) {
      const std::complex<double>* w = tw_.data() + (h - 1);
      for (std::size_t block = 0; block < n_; block += 2 * h) {
        for (std::size_t j = 0; j < h; ++j) {
          const std::complex<double> tw = conj ? std::conj(w[j]) : w[j];
          const std::complex<double> u = a[block + j];
          const std::complex<double> v = a[block + j + h] * tw;
          a[block + j] = u + v;
          a[block + j + h] = u - v;
        }
      }
    }
  }

  std::size_t n_;
  std::vector<std::size_t> rev_;
  std::vector<std::complex<double>> tw_;
};

/// In-place transform along one axis of a row-major tensor. Lines are
/// gathered into scratch, transformed, and scattered back; `plan` must match
/// dims[axis].
inline void transform_axis(std::complex<double>* data, const std::vector<std::size_t>& dims,
                           std::size_t axis, const Radix2Plan& plan, bool inverse,
                           std::vector<std::complex<double>>& scratch) {
  const std::size_t r = dims[axis];
  std::size_t stride = 1;
  for (std::size_t j = dims.size(); j-- > axis + 1;) stride *= dims[j];
  std::size_t outer = 1;
  for (std::size_t j = 0; j < axis; ++j) outer *= dims[j];
  scratch.resize(r);

  for (std::size_t o = 0; o < outer; ++o) {
    const std::size_t block = o * r * stride;
    for (std::size_t s = 0; s < stride; ++s) {
      std::complex<double>* base = data + block + s;
      if (stride == 1) {
        if (inverse)
          plan.inverse(base);
        else
          plan.forward(base);
      } else {
        for (std::size_t k = 0; k < r; ++k) scratch[k] = base[k * stride];
        if (inverse)
          plan.inverse(scratch.data());
        else
          plan.forward(scratch.data());
        for (std::size_t k = 0; k < r; ++k) base[k * stride] = scratch[k];
      }
    }
  }
}

}  // namespace alqhd::detail
