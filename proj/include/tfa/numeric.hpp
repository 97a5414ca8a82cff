#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace tfa {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Neumaier-compensated accumulator. The order of add() calls fixes the result
// bit for bit, which the partition identities in grid.hpp rely on.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Japanese bracket <x> = (1 + |x|^2)^{1/2}.
inline double bracket(std::span<const double> x) noexcept {
  double s = 1.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

inline double euclidean_norm(std::span<const double> x) noexcept {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// Row-major (axis 0 fastest) multi-index helpers shared by grids and
// sequences.
inline std::size_t flat_size(std::span<const std::size_t> shape) noexcept {
  std::size_t n = 1;
  for (auto s : shape) n *= s;
  return n;
}

inline void unflatten(std::size_t flat, std::span<const std::size_t> shape,
                      std::span<std::size_t> idx) noexcept {
  for (std::size_t k = 0; k < shape.size(); ++k) {
    idx[k] = flat % shape[k];
    flat /= shape[k];
  }
}

inline std::size_t flatten(std::span<const std::size_t> idx,
                           std::span<const std::size_t> shape) noexcept {
  std::size_t flat = 0;
  for (std::size_t k = shape.size(); k-- > 0;) flat = flat * shape[k] + idx[k];
  return flat;
}

inline double relative_difference(double a, double b) noexcept {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace tfa
