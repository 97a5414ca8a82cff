#pragma once

// Analysis windows: L^2-normalized Gaussians and Hermite functions (tensor
// products in d > 1) with closed-form Fourier transforms, and sampled windows
// that carry their own grid.

#include <cmath>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tfa/errors.hpp"
#include "tfa/grid.hpp"
#include "tfa/numeric.hpp"

namespace tfa {

// Normalized Hermite function h_n(t) = (2^n n! sqrt(pi))^{-1/2} H_n(t) e^{-t^2/2}
// by the stable three-term recurrence.
inline double hermite_function(int n, double t) {
  double h0 = std::pow(pi, -0.25) * std::exp(-0.5 * t * t);
  if (n == 0) return h0;
  double h1 = std::sqrt(2.0) * t * h0;
  for (int k = 1; k < n; ++k) {
    const double h2 = std::sqrt(2.0 / (k + 1)) * t * h1 - std::sqrt(double(k) / (k + 1)) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

class Window {
 public:
  enum class Kind { gaussian, hermite, sampled };

  static Window gaussian(std::size_t dim, double sigma) { return Window(Kind::gaussian, dim, 0, sigma); }
  // phi(t) = prod_k sigma^{-1/2} h_n(t_k / sigma). Order 0 is the Gaussian of width sigma.
  static Window hermite(std::size_t dim, int order, double sigma) {
    if (order < 0) throw InvalidArgument("Hermite order must be >= 0");
    return Window(Kind::hermite, dim, order, sigma);
  }
  static Window sampled(SampledField samples) {
    Window w(Kind::sampled, samples.grid.dim(), 0, 1.0);
    w.samples_ = std::make_shared<SampledField>(std::move(samples));
    return w;
  }

  Kind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  double sigma() const noexcept { return sigma_; }
  int order() const noexcept { return order_; }
  bool has_analytic_transform() const noexcept { return kind_ != Kind::sampled; }
  const SampledField* samples() const noexcept { return samples_.get(); }

  double operator()(std::span<const double> t) const {
    if (kind_ == Kind::sampled) return sampled_value(t);
    double v = 1.0;
    for (double s : t) v *= hermite_function(order_, s / sigma_) / std::sqrt(sigma_);
    return v;
  }

  double operator()(std::initializer_list<double> t) const {
    return (*this)(std::span<const double>(t.begin(), t.size()));
  }

  // phi^(eta) = (2 pi)^{-d/2} int phi(t) e^{-i t eta} dt. For the Hermite
  // family this is sigma^{d/2} prod_k (-i)^n h_n(sigma eta_k).
  cplx fourier(std::span<const double> eta) const {
    if (kind_ == Kind::sampled) throw UnsupportedError("sampled windows have no analytic transform");
    static const cplx minus_i_pow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    cplx v = 1.0;
    for (double e : eta) v *= minus_i_pow[order_ % 4] * std::sqrt(sigma_) * hermite_function(order_, sigma_ * e);
    return v;
  }

  // Radius beyond which |phi| < 1e-17 max |phi| (per axis, in ambient units).
  double support_radius() const {
    if (kind_ == Kind::sampled) {
      double r = 0.0;
      const auto& f = *samples_;
      for (std::size_t i = 0; i < f.size(); ++i)
        if (f.values[i] != cplx{}) {
          const Vec x = f.grid.point(i);
          r = std::max(r, x.cwiseAbs().maxCoeff());
        }
      return r + f.grid.basis().matrix().cwiseAbs().maxCoeff();
    }
    return sigma_ * (std::sqrt(2.0 * order_ + 1.0) + 9.0);
  }

  std::string name() const {
    char buf[64];
    switch (kind_) {
      case Kind::gaussian: std::snprintf(buf, sizeof buf, "gaussian(sigma=%.17g)", sigma_); break;
      case Kind::hermite: std::snprintf(buf, sizeof buf, "hermite(n=%d,sigma=%.17g)", order_, sigma_); break;
      case Kind::sampled: std::snprintf(buf, sizeof buf, "sampled"); break;
    }
    return buf;
  }

 private:
  Window(Kind kind, std::size_t dim, int order, double sigma)
      : kind_(kind), dim_(dim), order_(order), sigma_(sigma) {
    if (dim_ == 0) throw InvalidArgument("window dimension must be positive");
    if (!(sigma_ > 0.0)) throw InvalidArgument("window width must be positive");
  }

  // Sample lookup; t must be a grid node of the window's grid or outside it.
  double sampled_value(std::span<const double> t) const {
    const auto& f = *samples_;
    const auto& g = f.grid;
    const Vec c = g.basis().coordinates(Eigen::Map<const Vec>(t.data(), Eigen::Index(t.size())));
    std::vector<std::size_t> idx(g.dim());
    for (std::size_t k = 0; k < g.dim(); ++k) {
      const double u = (c(Eigen::Index(k)) - double(g.lo()[k]) - g.offset()[k]) * double(g.samples_per_cell()[k]) - 0.5;
      const double r = std::round(u);
      if (std::abs(u - r) > 1e-9 * std::max(1.0, std::abs(r)))
        throw ResolutionError("point is not commensurate with the sampled window's grid");
      if (r < 0 || r >= double(g.shape()[k])) return 0.0;
      idx[k] = std::size_t(r);
    }
    return f.values[flatten(idx, g.shape())].real();
  }

  Kind kind_;
  std::size_t dim_;
  int order_;
  double sigma_;
  std::shared_ptr<const SampledField> samples_;
};

// {"kind": "gaussian", "sigma": s} | {"kind": "hermite", "order": n, "sigma": s}
inline Window parse_window(const nlohmann::json& j, std::size_t dim, const std::string& pointer = "") {
  if (!j.is_object() || !j.contains("kind"))
    throw ValidationError("window requires a kind (at " + pointer + "/kind)");
  const auto kind = j.at("kind").get<std::string>();
  const double sigma = j.value("sigma", 1.0);
  if (kind == "gaussian") return Window::gaussian(dim, sigma);
  if (kind == "hermite") return Window::hermite(dim, j.value("order", 0), sigma);
  throw ValidationError("unknown window kind '" + kind + "' (at " + pointer + "/kind)");
}

inline nlohmann::json window_to_json(const Window& w) {
  switch (w.kind()) {
    case Window::Kind::gaussian: return {{"kind", "gaussian"}, {"sigma", w.sigma()}};
    case Window::Kind::hermite: return {{"kind", "hermite"}, {"order", w.order()}, {"sigma", w.sigma()}};
    case Window::Kind::sampled: return {{"kind", "sampled"}};
  }
  return {};
}

}  // namespace tfa
