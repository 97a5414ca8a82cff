#pragma once

// Trigonometric polynomials f = sum_alpha c(f, alpha) e^{i <., alpha>} with
// frequencies alpha = T_{E'} nu on the dual lattice of the period basis E.

#include <complex>
#include <map>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "tfa/basis.hpp"
#include "tfa/errors.hpp"
#include "tfa/numeric.hpp"

namespace tfa {

using cplx = std::complex<double>;

class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  explicit TrigPolynomial(OrderedBasis period) : period_(std::move(period)), dual_(dual_basis(period_)) {}

  const OrderedBasis& period_basis() const noexcept { return period_; }
  const OrderedBasis& dual() const noexcept { return dual_; }
  std::size_t dim() const noexcept { return period_.dim(); }
  // Keyed by the integer coordinates nu of alpha in Lambda'_E.
  const std::map<IntVec, cplx>& coefficients() const noexcept { return coeffs_; }

  void set(const IntVec& nu, cplx c) {
    if (nu.size() != dim()) throw InvalidArgument("frequency index dimension mismatch");
    if (c == cplx{})
      coeffs_.erase(nu);
    else
      coeffs_[nu] = c;
  }
  cplx coefficient(const IntVec& nu) const {
    auto it = coeffs_.find(nu);
    return it == coeffs_.end() ? cplx{} : it->second;
  }
  bool empty() const noexcept { return coeffs_.empty(); }

  Vec frequency(const IntVec& nu) const { return Lattice(dual_).point(nu); }

  cplx operator()(const Vec& x) const {
    cplx acc{};
    for (const auto& [nu, c] : coeffs_) acc += c * std::polar(1.0, x.dot(frequency(nu)));
    return acc;
  }

  TrigPolynomial scaled(cplx s) const {
    TrigPolynomial t(period_);
    for (const auto& [nu, c] : coeffs_) t.set(nu, c * s);
    return t;
  }
  // c(g, alpha) = c(f, alpha - beta), i.e. g = e^{i <., beta>} f.
  TrigPolynomial frequency_shifted(const IntVec& beta) const {
    TrigPolynomial t(period_);
    for (const auto& [nu, c] : coeffs_) {
      IntVec m = nu;
      for (std::size_t k = 0; k < m.size(); ++k) m[k] += beta[k];
      t.set(m, c);
    }
    return t;
  }

  // Componentwise min/max of the nu indices.
  std::pair<IntVec, IntVec> index_hull() const {
    if (coeffs_.empty()) return {IntVec(dim(), 0), IntVec(dim(), 0)};
    IntVec lo = coeffs_.begin()->first, hi = lo;
    for (const auto& [nu, c] : coeffs_)
      for (std::size_t k = 0; k < dim(); ++k) {
        lo[k] = std::min(lo[k], nu[k]);
        hi[k] = std::max(hi[k], nu[k]);
      }
    return {lo, hi};
  }

 private:
  OrderedBasis period_;
  OrderedBasis dual_;
  std::map<IntVec, cplx> coeffs_;
};

// `terms` distinct frequencies with |nu_k| <= max_index and complex
// coefficients uniform in the unit square.
inline TrigPolynomial random_trig_polynomial(std::mt19937_64& rng, const OrderedBasis& period,
                                             std::size_t terms, std::int64_t max_index) {
  TrigPolynomial t(period);
  std::uniform_int_distribution<std::int64_t> idx(-max_index, max_index);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto span = std::size_t(2 * max_index + 1);
  std::size_t cap = 1;
  for (std::size_t k = 0; k < period.dim(); ++k) cap *= span;
  terms = std::min(terms, cap);
  while (t.coefficients().size() < terms) {
    IntVec nu(period.dim());
    for (auto& n : nu) n = idx(rng);
    if (t.coefficient(nu) != cplx{}) continue;
    const double re = u(rng), im = u(rng);
    t.set(nu, {re, im});
  }
  return t;
}

// {"lattice": {"columns": ...}, "coeffs": [{"alpha": [nu...], "re": x, "im": y}]}
// where alpha lists the integer coordinates of the frequency in Lambda'_E.
inline nlohmann::json trig_to_json(const TrigPolynomial& t) {
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& [nu, c] : t.coefficients()) cs.push_back({{"alpha", nu}, {"re", c.real()}, {"im", c.imag()}});
  return {{"lattice", t.period_basis()}, {"coeffs", cs}};
}

inline TrigPolynomial trig_from_json(const nlohmann::json& j, const std::string& pointer = "") {
  if (!j.contains("lattice")) throw ValidationError("trig polynomial requires a lattice (at " + pointer + "/lattice)");
  TrigPolynomial t(j.at("lattice").get<OrderedBasis>());
  for (const auto& c : j.value("coeffs", nlohmann::json::array())) {
    auto nu = c.at("alpha").get<IntVec>();
    if (nu.size() != t.dim()) throw ValidationError("coefficient index has the wrong dimension (at " + pointer + "/coeffs)");
    t.set(nu, {c.value("re", 0.0), c.value("im", 0.0)});
  }
  return t;
}

}  // namespace tfa
