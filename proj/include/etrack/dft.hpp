#pragma once

// Discrete Fourier transforms for the small, mostly prime sizes the tracker uses
// (37x37 feature grids, 33-level scale axis). Direct O(n^2) evaluation against a
// cached twiddle table; for these sizes that beats a general mixed-radix FFT and
// is bitwise deterministic.
//
// Conventions: forward transform is unnormalized, inverse carries 1/N.

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <numbers>
#include <vector>

#include "etrack/core.hpp"

namespace etrack {

using cplx = std::complex<double>;

struct ComplexGrid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<cplx> values;

  ComplexGrid() = default;
  ComplexGrid(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c) {}

  cplx& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  std::size_t size() const { return values.size(); }
};

namespace dft {

// (a*b) without the NaN-recovery path of operator* on std::complex.
inline cplx mul(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}
inline cplx mul_conj(cplx a, cplx b) {  // conj(a) * b
  return {a.real() * b.real() + a.imag() * b.imag(), a.real() * b.imag() - a.imag() * b.real()};
}

/// Twiddle table for length n: table[k*n + j] = exp(-2 pi i j k / n).
class Plan {
 public:
  explicit Plan(std::size_t n) : n_(n), fwd_(n * n) {
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) {
        const double ang = -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
        fwd_[k * n + j] = {std::cos(ang), std::sin(ang)};
      }
  }

  std::size_t size() const { return n_; }
  const cplx* row(std::size_t k) const { return &fwd_[k * n_]; }

 private:
  std::size_t n_;
  std::vector<cplx> fwd_;
};

/// Per-thread plan cache; plans are immutable once built.
inline const Plan& plan(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<Plan>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Plan>(n);
  return *slot;
}

/// 1-D transform of a strided real sequence.
inline void forward_real_1d(const double* in, std::size_t stride, std::size_t n, cplx* out) {
  const Plan& p = plan(n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx* tw = p.row(k);
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = in[j * stride];
      re += v * tw[j].real();
      im += v * tw[j].imag();
    }
    out[k] = {re, im};
  }
}

inline std::vector<cplx> forward_1d(const std::vector<double>& x) {
  std::vector<cplx> out(x.size());
  if (!x.empty()) forward_real_1d(x.data(), 1, x.size(), out.data());
  return out;
}

inline std::vector<cplx> inverse_1d(const std::vector<cplx>& x) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n);
  if (n == 0) return out;
  const Plan& p = plan(n);
  const double s = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx* tw = p.row(k);
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      // x[j] * conj(tw[j])
      re += x[j].real() * tw[j].real() + x[j].imag() * tw[j].imag();
      im += x[j].imag() * tw[j].real() - x[j].real() * tw[j].imag();
    }
    out[k] = {re * s, im * s};
  }
  return out;
}

namespace detail {

// Column pass: out(k, c) = sum_j tw_k[j] * in(j, c) (tw conjugated for the inverse).
inline void column_pass(const ComplexGrid& in, ComplexGrid& out, bool inverse) {
  const std::size_t rows = in.rows, cols = in.cols;
  const Plan& p = plan(rows);
  std::fill(out.values.begin(), out.values.end(), cplx{});
  for (std::size_t k = 0; k < rows; ++k) {
    const cplx* tw = p.row(k);
    cplx* dst = &out.values[k * cols];
    for (std::size_t j = 0; j < rows; ++j) {
      const cplx t = inverse ? std::conj(tw[j]) : tw[j];
      const cplx* src = &in.values[j * cols];
      for (std::size_t c = 0; c < cols; ++c) dst[c] += mul(t, src[c]);
    }
  }
}

}  // namespace detail

/// Unnormalized 2-D forward transform of a real grid.
inline ComplexGrid forward_2d(const Grid2D& g) {
  ComplexGrid rowsft(g.rows, g.cols);
  for (std::size_t r = 0; r < g.rows; ++r)
    forward_real_1d(&g.values[r * g.cols], 1, g.cols, &rowsft.values[r * g.cols]);
  ComplexGrid out(g.rows, g.cols);
  detail::column_pass(rowsft, out, false);
  return out;
}

/// 2-D inverse transform including the 1/(rows*cols) factor.
inline ComplexGrid inverse_2d(const ComplexGrid& f) {
  ComplexGrid colft(f.rows, f.cols);
  detail::column_pass(f, colft, true);
  const Plan& p = plan(f.cols);
  const double s = 1.0 / static_cast<double>(f.rows * f.cols);
  ComplexGrid out(f.rows, f.cols);
  for (std::size_t r = 0; r < f.rows; ++r) {
    const cplx* src = &colft.values[r * f.cols];
    for (std::size_t k = 0; k < f.cols; ++k) {
      const cplx* tw = p.row(k);
      double re = 0.0, im = 0.0;
      for (std::size_t j = 0; j < f.cols; ++j) {
        re += src[j].real() * tw[j].real() + src[j].imag() * tw[j].imag();
        im += src[j].imag() * tw[j].real() - src[j].real() * tw[j].imag();
      }
      out(r, k) = {re * s, im * s};
    }
  }
  return out;
}

}  // namespace dft
}  // namespace etrack
