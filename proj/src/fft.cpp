#include "psn/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace psn {
namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan inverse;
};

// FFTW's planner is not reentrant; execution through fftw_execute_dft is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

PlanPair plans_for(int rows, int cols) {
  static std::map<std::pair<int, int>, PlanPair> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto it = cache.find({rows, cols});
  if (it != cache.end()) return it->second;
  std::vector<cplx> scratch(static_cast<std::size_t>(rows) * cols);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p{fftw_plan_dft_2d(rows, cols, buf, buf, FFTW_FORWARD, flags),
             fftw_plan_dft_2d(rows, cols, buf, buf, FFTW_BACKWARD, flags)};
  if (p.forward == nullptr || p.inverse == nullptr)
    throw std::runtime_error("FFTW failed to create a plan");
  cache.emplace(std::make_pair(rows, cols), p);
  return p;
}

PlanPair real_plans_for(int rows, int cols) {
  static std::map<std::pair<int, int>, PlanPair> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto it = cache.find({rows, cols});
  if (it != cache.end()) return it->second;
  std::vector<double> real(static_cast<std::size_t>(rows) * cols);
  std::vector<cplx> half(static_cast<std::size_t>(rows) * (cols / 2 + 1));
  auto* h = reinterpret_cast<fftw_complex*>(half.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p{fftw_plan_dft_r2c_2d(rows, cols, real.data(), h, flags),
             fftw_plan_dft_c2r_2d(rows, cols, h, real.data(), flags)};
  if (p.forward == nullptr || p.inverse == nullptr)
    throw std::runtime_error("FFTW failed to create a plan");
  cache.emplace(std::make_pair(rows, cols), p);
  return p;
}

}  // namespace

Fft2D::Fft2D(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("Fft2D: bad shape");
  PlanPair p = plans_for(rows, cols);
  forward_plan_ = p.forward;
  inverse_plan_ = p.inverse;
}

void Fft2D::forward(std::span<cplx> data) const {
  if (data.size() != static_cast<std::size_t>(rows_) * cols_)
    throw std::invalid_argument("Fft2D: shape mismatch");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), buf, buf);
}

void Fft2D::inverse_unscaled(std::span<cplx> data) const {
  if (data.size() != static_cast<std::size_t>(rows_) * cols_)
    throw std::invalid_argument("Fft2D: shape mismatch");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_), buf, buf);
}

void Fft2D::inverse(std::span<cplx> data) const {
  inverse_unscaled(data);
  const double scale = 1.0 / (static_cast<double>(rows_) * cols_);
  for (auto& v : data) v *= scale;
}

RealFft2D::RealFft2D(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows <= 0 || cols <= 0 || cols % 2 != 0) throw std::invalid_argument("RealFft2D: bad shape");
  PlanPair p = real_plans_for(rows, cols);
  forward_plan_ = p.forward;
  inverse_plan_ = p.inverse;
}

void RealFft2D::forward(std::span<const double> in, std::span<cplx> out) const {
  if (in.size() != static_cast<std::size_t>(rows_) * cols_ || out.size() != spectrum_size())
    throw std::invalid_argument("RealFft2D: shape mismatch");
  // r2c transforms do not write to their input.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft2D::inverse(std::span<cplx> in, std::span<double> out) const {
  if (out.size() != static_cast<std::size_t>(rows_) * cols_ || in.size() != spectrum_size())
    throw std::invalid_argument("RealFft2D: shape mismatch");
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(in.data()), out.data());
  const double scale = 1.0 / (static_cast<double>(rows_) * cols_);
  for (auto& v : out) v *= scale;
}

}  // namespace psn
