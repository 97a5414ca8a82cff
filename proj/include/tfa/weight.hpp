#pragma once

// Weights from a closed algebraic family: constant, polynomial <x>^s,
// exponential e^{s|x|}, separable products of one-dimensional forms and
// pointwise products. Any form may act on a subset of the coordinates, which
// is how omega(x, xi) = omega_0(xi) is expressed.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tfa/errors.hpp"
#include "tfa/numeric.hpp"

namespace tfa {

class Weight {
 public:
  enum class Form { constant, polynomial, exponential, separable, product };

  static Weight constant(std::size_t dim) { return Weight(Form::constant, dim, 0.0, {}); }
  static Weight polynomial(std::size_t dim, double s) { return Weight(Form::polynomial, dim, s, {}); }
  static Weight exponential(std::size_t dim, double s) { return Weight(Form::exponential, dim, s, {}); }

  // factors[k] is one-dimensional and acts on coordinate k.
  static Weight separable(std::vector<Weight> factors) {
    for (auto& f : factors)
      if (f.dim() != 1) throw InvalidArgument("separable weight factors must be one-dimensional");
    const auto d = factors.size();
    return Weight(Form::separable, d, 0.0, std::move(factors));
  }

  static Weight product(std::vector<Weight> factors) {
    if (factors.empty()) throw InvalidArgument("product weight needs at least one factor");
    const auto d = factors.front().dim();
    for (auto& f : factors)
      if (f.dim() != d) throw InvalidArgument("product weight factors must share a dimension");
    return Weight(Form::product, d, 0.0, std::move(factors));
  }

  // Lifts this weight to R^{ambient_dim}, reading coordinates `axes`.
  Weight on_axes(std::size_t ambient_dim, std::vector<std::size_t> axes) const {
    if (axes.size() != inner_dim())
      throw InvalidArgument("axis selection must match the weight's own dimension");
    for (auto a : axes)
      if (a >= ambient_dim) throw InvalidArgument("axis selection out of range");
    Weight w = *this;
    w.dim_ = ambient_dim;
    w.axes_ = std::move(axes);
    return w;
  }

  Form form() const noexcept { return form_; }
  std::size_t dim() const noexcept { return dim_; }
  double parameter() const noexcept { return s_; }
  const std::vector<Weight>& factors() const noexcept { return factors_; }
  const std::vector<std::size_t>& axes() const noexcept { return axes_; }

  bool is_constant() const noexcept {
    if (form_ == Form::constant) return true;
    if (form_ == Form::polynomial || form_ == Form::exponential) return s_ == 0.0;
    return std::all_of(factors_.begin(), factors_.end(),
                       [](const Weight& w) { return w.is_constant(); });
  }

  // log omega(x); finite for every finite x.
  double log_value(std::span<const double> x) const {
    if (x.size() != dim_)
      throw InvalidArgument("weight of dimension " + std::to_string(dim_) +
                            " evaluated at a point of dimension " + std::to_string(x.size()));
    if (axes_.empty()) return log_inner(x);
    std::vector<double> y(axes_.size());
    for (std::size_t k = 0; k < axes_.size(); ++k) y[k] = x[axes_[k]];
    return log_inner(y);
  }

  double operator()(std::span<const double> x) const {
    const double lv = log_value(x);
    const double v = std::exp(lv);
    if (!std::isfinite(v) || v == 0.0) {
      std::ostringstream os;
      os << "weight value out of double range at x = (";
      for (std::size_t k = 0; k < x.size(); ++k) os << (k ? ", " : "") << x[k];
      os << "), log omega = " << lv;
      throw RangeError(os.str());
    }
    return v;
  }
  double operator()(std::initializer_list<double> x) const {
    return (*this)(std::span<const double>(x.begin(), x.size()));
  }

  // 1/omega, symbolically.
  Weight inverse() const {
    Weight w = *this;
    w.s_ = -s_;
    for (auto& f : w.factors_) f = f.inverse();
    return w;
  }

  friend bool operator==(const Weight&, const Weight&) = default;

 private:
  Weight(Form form, std::size_t dim, double s, std::vector<Weight> factors)
      : form_(form), dim_(dim), s_(s), factors_(std::move(factors)) {
    if (dim_ == 0) throw InvalidArgument("weight dimension must be positive");
  }

  std::size_t inner_dim() const noexcept {
    if (form_ == Form::separable) return factors_.size();
    if (form_ == Form::product) return factors_.front().dim();
    return axes_.empty() ? dim_ : axes_.size();
  }

  double log_inner(std::span<const double> y) const {
    switch (form_) {
      case Form::constant:
        return 0.0;
      case Form::polynomial:
        return s_ == 0.0 ? 0.0 : s_ * std::log(bracket(y));
      case Form::exponential:
        return s_ == 0.0 ? 0.0 : s_ * euclidean_norm(y);
      case Form::separable: {
        double acc = 0.0;
        for (std::size_t k = 0; k < factors_.size(); ++k)
          acc += factors_[k].log_value(y.subspan(k, 1));
        return acc;
      }
      case Form::product: {
        double acc = 0.0;
        for (auto& f : factors_) acc += f.log_value(y);
        return acc;
      }
    }
    return 0.0;
  }

  Form form_ = Form::constant;
  std::size_t dim_ = 1;
  double s_ = 0.0;
  std::vector<Weight> factors_;
  std::vector<std::size_t> axes_;
};

// rho = 2d(1/r - 1), plus one when strict.
inline double theta_rho_exponent(double r, std::size_t d, bool strict) {
  if (!(r > 0.0) || r > 1.0) throw InvalidArgument("quasi-norm order r must lie in (0, 1]");
  return 2.0 * double(d) * (1.0 / r - 1.0) + (strict ? 1.0 : 0.0);
}

// (Theta_rho v)(X) = v(X) <X>^rho on R^{2d}.
inline Weight theta_rho(const Weight& v, double r, std::size_t d, bool strict) {
  const double rho = theta_rho_exponent(r, d, strict);
  if (v.dim() != 2 * d)
    throw InvalidArgument("theta_rho expects a weight on R^{2d}");
  if (rho == 0.0) return v;
  return Weight::product({v, Weight::polynomial(v.dim(), rho)});
}

struct ModeratenessCertificate {
  double radius = 0.0;
  std::size_t points_per_axis = 0;
  double constant = 0.0;        // max omega(x+y) / (omega(x) v(y))
  double lower_constant = 0.0;  // max 1 / (v(-x) omega(x))
  double upper_constant = 0.0;  // max omega(x) / v(x)
};

namespace detail {
inline std::vector<std::vector<double>> cube_grid(std::size_t dim, double radius, std::size_t n) {
  std::vector<double> axis(n);
  for (std::size_t i = 0; i < n; ++i)
    axis[i] = -radius + 2.0 * radius * double(i) / double(n - 1);
  std::size_t total = 1;
  for (std::size_t k = 0; k < dim; ++k) total *= n;
  std::vector<std::vector<double>> pts(total, std::vector<double>(dim));
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    for (std::size_t k = 0; k < dim; ++k) {
      pts[flat][k] = axis[rest % n];
      rest /= n;
    }
  }
  return pts;
}

inline double checked_log(const Weight& w, std::span<const double> x) {
  const double lv = w.log_value(x);
  if (!std::isfinite(lv) || std::abs(lv) > 700.0) {
    std::ostringstream os;
    os << "weight overflow at (";
    for (std::size_t k = 0; k < x.size(); ++k) os << (k ? ", " : "") << x[k];
    os << ")";
    throw RangeError(os.str());
  }
  return lv;
}
}  // namespace detail

// Grid certificate for omega(x+y) <= C omega(x) v(y) over [-R, R]^d with N
// points per axis. Deterministic: the same grid reproduces C bit for bit.
inline ModeratenessCertificate certify_moderate(const Weight& omega, const Weight& v, double radius,
                                                std::size_t n) {
  if (omega.dim() != v.dim()) throw InvalidArgument("omega and v must share a dimension");
  if (n < 3) throw InvalidArgument("certification grid needs at least 3 points per axis");
  if (!(radius > 0.0)) throw InvalidArgument("certification radius must be positive");
  const auto pts = detail::cube_grid(omega.dim(), radius, n);
  std::vector<double> lw(pts.size()), lv(pts.size()), lv_neg(pts.size());
  std::vector<double> neg(omega.dim());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    lw[i] = detail::checked_log(omega, pts[i]);
    lv[i] = detail::checked_log(v, pts[i]);
    for (std::size_t k = 0; k < neg.size(); ++k) neg[k] = -pts[i][k];
    lv_neg[i] = detail::checked_log(v, neg);
  }
  ModeratenessCertificate c;
  c.radius = radius;
  c.points_per_axis = n;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> sum(omega.dim());
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) {
      for (std::size_t k = 0; k < sum.size(); ++k) sum[k] = pts[i][k] + pts[j][k];
      best = std::max(best, detail::checked_log(omega, sum) - lw[i] - lv[j]);
    }
  double lo = -std::numeric_limits<double>::infinity(), hi = lo;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    lo = std::max(lo, -lv_neg[i] - lw[i]);
    hi = std::max(hi, lw[i] - lv[i]);
  }
  c.constant = std::exp(best);
  c.lower_constant = std::exp(lo);
  c.upper_constant = std::exp(hi);
  return c;
}

// Smallest rate r with e^{-r|x|} <= omega(x) <= e^{r|x|} on the grid points of
// the ball with |x| >= 1 (the constant is absorbed inside the unit ball).
inline double exp_envelope(const Weight& omega, double radius, std::size_t n = 0) {
  if (!(radius > 0.0)) throw InvalidArgument("envelope radius must be positive");
  if (n == 0) n = omega.dim() == 1 ? 2001 : omega.dim() == 2 ? 201 : 21;
  double rate = 0.0;
  for (const auto& x : detail::cube_grid(omega.dim(), radius, n)) {
    const double r = euclidean_norm(x);
    if (r < 1.0 || r > radius) continue;
    rate = std::max(rate, std::abs(omega.log_value(x)) / r);
  }
  return rate;
}

// JSON schema: {"form": "constant"|"polynomial"|"exponential"|"product"|
// "separable", "params": [...], "dim": d, "axes": [...] (optional)}.
// product/separable take weight objects as params.
inline Weight parse_weight(const nlohmann::json& j, const std::string& pointer = "") {
  auto fail = [&](const std::string& key, const std::string& msg) -> Weight {
    throw ValidationError(msg + " (at " + pointer + "/" + key + ")");
  };
  if (!j.is_object()) return fail("", "weight must be an object");
  if (!j.contains("form") || !j.at("form").is_string()) return fail("form", "missing weight form");
  const std::string form = j.at("form").get<std::string>();
  const nlohmann::json params = j.value("params", nlohmann::json::array());
  if (!params.is_array()) return fail("params", "params must be an array");
  auto scalar = [&]() {
    if (params.size() != 1 || !params[0].is_number())
      fail("params", "form '" + form + "' takes exactly one numeric parameter");
    return params[0].get<double>();
  };
  std::size_t dim = j.value("dim", std::size_t(0));
  Weight w = Weight::constant(1);
  if (form == "constant") {
    if (dim == 0) fail("dim", "constant weight requires dim");
    w = Weight::constant(j.contains("axes") ? j.at("axes").size() : dim);
  } else if (form == "polynomial" || form == "exponential") {
    if (dim == 0) fail("dim", "weight requires dim");
    const std::size_t inner = j.contains("axes") ? j.at("axes").size() : dim;
    w = form == "polynomial" ? Weight::polynomial(inner, scalar()) : Weight::exponential(inner, scalar());
  } else if (form == "product" || form == "separable") {
    std::vector<Weight> fs;
    for (std::size_t k = 0; k < params.size(); ++k)
      fs.push_back(parse_weight(params[k], pointer + "/params/" + std::to_string(k)));
    if (fs.empty()) fail("params", "product needs factors");
    w = form == "product" ? Weight::product(std::move(fs)) : Weight::separable(std::move(fs));
    if (dim == 0) dim = w.dim();
  } else {
    return fail("form", "unknown weight form '" + form + "'");
  }
  if (j.contains("axes")) {
    auto axes = j.at("axes").get<std::vector<std::size_t>>();
    w = w.on_axes(dim, std::move(axes));
  } else if (w.dim() != dim) {
    fail("dim", "dim does not match the factors");
  }
  return w;
}

inline nlohmann::json weight_to_json(const Weight& w) {
  nlohmann::json j;
  switch (w.form()) {
    case Weight::Form::constant: j["form"] = "constant"; j["params"] = nlohmann::json::array(); break;
    case Weight::Form::polynomial: j["form"] = "polynomial"; j["params"] = {w.parameter()}; break;
    case Weight::Form::exponential: j["form"] = "exponential"; j["params"] = {w.parameter()}; break;
    case Weight::Form::separable:
    case Weight::Form::product: {
      j["form"] = w.form() == Weight::Form::product ? "product" : "separable";
      j["params"] = nlohmann::json::array();
      for (auto& f : w.factors()) j["params"].push_back(weight_to_json(f));
      break;
    }
  }
  j["dim"] = w.dim();
  if (!w.axes().empty()) j["axes"] = w.axes();
  return j;
}

}  // namespace tfa
