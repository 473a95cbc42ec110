#pragma once

#include <complex>
#include <span>

namespace psn {

using cplx = std::complex<double>;

/// In-place 2-D complex transform of a row-major rows x cols array, backed by
/// FFTW. Plans are created once per shape under a global lock and executed
/// with the new-array interface, so a single instance may be shared by many
/// threads as long as each call works on its own buffer.
class Fft2D {
 public:
  Fft2D(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  /// Unnormalized forward transform, X_k = sum_x x_x e^{-i k x}.
  void forward(std::span<cplx> data) const;
  /// Inverse transform including the 1/(rows*cols) factor.
  void inverse(std::span<cplx> data) const;
  /// Inverse transform without normalization.
  void inverse_unscaled(std::span<cplx> data) const;

 private:
  int rows_;
  int cols_;
  void* forward_plan_;
  void* inverse_plan_;
};

/// Real-to-complex 2-D transform of a row-major rows x cols real array into
/// the rows x (cols/2 + 1) half spectrum, and its inverse. Shared like Fft2D.
class RealFft2D {
 public:
  RealFft2D(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t spectrum_size() const { return static_cast<std::size_t>(rows_) * (cols_ / 2 + 1); }

  /// Unnormalized forward transform. `in` is left untouched.
  void forward(std::span<const double> in, std::span<cplx> out) const;
  /// Inverse including 1/(rows*cols); destroys `in`.
  void inverse(std::span<cplx> in, std::span<double> out) const;

 private:
  int rows_;
  int cols_;
  void* forward_plan_;
  void* inverse_plan_;
};

}  // namespace psn
