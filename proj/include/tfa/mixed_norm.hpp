#pragma once

// Iterated mixed quasi-norms L^q_{E,(omega)}: g_0 = |f omega| in basis
// coordinates, then g_k = || g_{k-1}(., z_k) ||_{L^{q_k}(R)} axis by axis.
// The discrete versions l^q_{E,(omega)} reduce the same way with unit steps.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "tfa/basis.hpp"
#include "tfa/errors.hpp"
#include "tfa/exponent.hpp"
#include "tfa/grid.hpp"
#include "tfa/numeric.hpp"
#include "tfa/weight.hpp"

namespace tfa {

// Non-negative N-d array, axis 0 fastest.
struct NonNegArray {
  std::vector<double> values;
  std::vector<std::size_t> shape;
};

// (sum_i v_i^p * step)^{1/p}; max for p = inf. Compensated, index order.
template <class Get>
double lebesgue_reduce(std::size_t n, Get&& get, double p, double step) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, get(i));
    return m;
  }
  CompensatedSum acc;
  if (p == 1.0) {
    for (std::size_t i = 0; i < n; ++i) acc.add(get(i));
    return acc.value() * step;
  }
  if (p == 2.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double v = get(i);
      acc.add(v * v);
    }
    return std::sqrt(acc.value() * step);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double v = get(i);
    if (v != 0.0) acc.add(std::pow(v, p));
  }
  return std::pow(acc.value() * step, 1.0 / p);
}

// Reduces one axis, returning an array with that axis removed.
inline NonNegArray reduce_axis(const NonNegArray& a, std::size_t axis, double p, double step) {
  const auto& sh = a.shape;
  std::size_t inner = 1, outer = 1;
  for (std::size_t k = 0; k < axis; ++k) inner *= sh[k];
  for (std::size_t k = axis + 1; k < sh.size(); ++k) outer *= sh[k];
  const std::size_t n = sh[axis];
  NonNegArray out;
  out.shape = sh;
  out.shape.erase(out.shape.begin() + std::ptrdiff_t(axis));
  out.values.resize(inner * outer);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t i = 0; i < inner; ++i) {
      const std::size_t base = o * n * inner + i;
      out.values[o * inner + i] =
          lebesgue_reduce(n, [&](std::size_t t) { return a.values[base + t * inner]; }, p, step);
    }
  return out;
}

// Reduces the axes in `order` (order[0] first) with exponents[axis] and
// steps[axis]. Exponents and steps are indexed by original axis.
inline double iterated_norm(NonNegArray a, const ExponentVector& exponents,
                            const std::vector<double>& steps, std::vector<std::size_t> order = {}) {
  const std::size_t d = a.shape.size();
  if (exponents.size() != d || steps.size() != d)
    throw InvalidArgument("exponent count does not match the number of axes");
  if (order.empty()) {
    order.resize(d);
    std::iota(order.begin(), order.end(), 0);
  }
  std::vector<std::size_t> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < d; ++k)
    if (sorted[k] != k) throw InvalidArgument("reduction order is not a permutation");
  if (a.values.empty()) return 0.0;
  std::vector<std::size_t> remaining(d);
  std::iota(remaining.begin(), remaining.end(), 0);
  for (std::size_t axis : order) {
    const auto pos = std::size_t(std::find(remaining.begin(), remaining.end(), axis) - remaining.begin());
    a = reduce_axis(a, pos, exponents[axis].value(), steps[axis]);
    remaining.erase(remaining.begin() + std::ptrdiff_t(pos));
  }
  return a.values.front();
}

struct CellRange {
  IntVec lo, hi;  // inclusive
};

struct MixedNormSpec {
  OrderedBasis basis;
  ExponentVector exponents;
  std::optional<Weight> weight;           // omega = 1 when empty
  std::optional<CellRange> region;        // f_Omega: zero outside these cells
  std::vector<std::size_t> permutation;   // reduction order; identity when empty
};

inline void check_grid_basis(const GridSpec& g, const OrderedBasis& e) {
  if (g.dim() != e.dim() || !approx_equal(g.basis(), e, 1e-12))
    throw InvalidArgument("grid axes are not aligned with the norm's basis coordinates");
}

// ||f||_{L^q_{E,(omega)}(Omega)} on the sample grid.
inline double mixed_norm(const SampledField& f, const MixedNormSpec& spec) {
  check_grid_basis(f.grid, spec.basis);
  const auto d = f.grid.dim();
  if (spec.exponents.size() != d)
    throw InvalidArgument("exponent count " + std::to_string(spec.exponents.size()) +
                          " does not match dimension " + std::to_string(d));
  const SampledField fw = spec.weight ? weigh(f, *spec.weight) : f;
  NonNegArray g{fw.magnitudes(), f.grid.shape()};
  if (spec.region) {
    const auto& r = *spec.region;
    std::vector<std::size_t> idx(d);
    for (std::size_t i = 0; i < g.values.size(); ++i) {
      unflatten(i, g.shape, idx);
      for (std::size_t k = 0; k < d; ++k) {
        const auto cell = f.grid.lo()[k] + std::int64_t(idx[k] / f.grid.samples_per_cell()[k]);
        if (cell < r.lo[k] || cell > r.hi[k]) {
          g.values[i] = 0.0;
          break;
        }
      }
    }
  }
  std::vector<double> steps(d);
  for (std::size_t k = 0; k < d; ++k) steps[k] = f.grid.step(k);
  return iterated_norm(std::move(g), spec.exponents, steps, spec.permutation);
}

// Finitely supported sequence on Lambda_E, stored on the index box
// lo[k] <= n_k < lo[k] + shape[k].
struct LatticeSequence {
  IntVec lo;
  std::vector<std::size_t> shape;
  std::vector<cplx> values;  // axis 0 fastest

  static LatticeSequence zeros(IntVec lo, std::vector<std::size_t> shape) {
    LatticeSequence a{std::move(lo), std::move(shape), {}};
    a.values.assign(flat_size(a.shape), cplx{});
    return a;
  }
  std::size_t dim() const noexcept { return shape.size(); }
  std::size_t size() const noexcept { return values.size(); }
  IntVec index(std::size_t flat) const {
    std::vector<std::size_t> idx(dim());
    unflatten(flat, shape, idx);
    IntVec n(dim());
    for (std::size_t k = 0; k < dim(); ++k) n[k] = lo[k] + std::int64_t(idx[k]);
    return n;
  }
  cplx at(const IntVec& n) const {
    std::vector<std::size_t> idx(dim());
    for (std::size_t k = 0; k < dim(); ++k) {
      const auto off = n[k] - lo[k];
      if (off < 0 || off >= std::int64_t(shape[k])) return {};
      idx[k] = std::size_t(off);
    }
    return values[flatten(idx, shape)];
  }
};

// ||a||_{l^q_{E,(omega)}}: omega sampled at the lattice points T_E n.
inline double discrete_mixed_norm(const LatticeSequence& a, const ExponentVector& exponents,
                                  const std::optional<Weight>& omega = std::nullopt,
                                  const std::optional<OrderedBasis>& basis = std::nullopt,
                                  std::vector<std::size_t> permutation = {}) {
  const auto d = a.dim();
  if (exponents.size() != d) throw InvalidArgument("exponent count does not match sequence dimension");
  NonNegArray g{std::vector<double>(a.size()), a.shape};
  const OrderedBasis e = basis ? *basis : OrderedBasis::standard(d);
  const Lattice lattice(e);
  for (std::size_t i = 0; i < a.size(); ++i) {
    double w = 1.0;
    if (omega && !omega->is_constant() && a.values[i] != cplx{}) {
      const Vec x = lattice.point(a.index(i));
      w = (*omega)(std::span<const double>(x.data(), std::size_t(x.size())));
    }
    g.values[i] = std::abs(a.values[i]) * w;
  }
  return iterated_norm(std::move(g), exponents, std::vector<double>(d, 1.0), std::move(permutation));
}

struct TriangleCheck {
  bool holds = false;
  double lhs = 0.0;     // ||f+g||^r
  double rhs = 0.0;     // ||f||^r + ||g||^r
  double defect = 0.0;  // lhs - rhs
};

// r-power triangle inequality ||f+g||^r <= ||f||^r + ||g||^r, slack 1e-12.
template <class Field>
TriangleCheck quasi_triangle_check(const std::function<double(const Field&)>& norm, const Field& f,
                                   const Field& g, const Field& sum, double r) {
  if (!(r > 0.0) || r > 1.0) throw InvalidArgument("order r must lie in (0, 1]");
  TriangleCheck t;
  t.lhs = std::pow(norm(sum), r);
  t.rhs = std::pow(norm(f), r) + std::pow(norm(g), r);
  t.defect = t.lhs - t.rhs;
  t.holds = t.defect <= 1e-12 * std::max(t.rhs, 1e-300);
  return t;
}

inline TriangleCheck quasi_triangle_check(const SampledField& f, const SampledField& g,
                                          const MixedNormSpec& spec) {
  if (!f.grid.same_layout(g.grid)) throw InvalidArgument("fields must share a grid");
  SampledField s = f;
  for (std::size_t i = 0; i < s.size(); ++i) s.values[i] += g.values[i];
  std::function<double(const SampledField&)> norm = [&](const SampledField& x) {
    return mixed_norm(x, spec);
  };
  return quasi_triangle_check<SampledField>(norm, f, g, s, spec.exponents.order());
}

// JSON: {"exponents": [...], "weight": {...}, "basis": {...}, "permutation": [...]}.
inline MixedNormSpec parse_mixed_norm_spec(const nlohmann::json& j, const std::string& pointer = "") {
  MixedNormSpec s;
  try {
    s.exponents = j.at("exponents").get<ExponentVector>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError("missing or malformed exponents (at " + pointer + "/exponents)");
  } catch (const InvalidArgument& e) {
    throw ValidationError(std::string(e.what()) + " (at " + pointer + "/exponents)");
  }
  s.basis = j.contains("basis") ? j.at("basis").get<OrderedBasis>()
                                : OrderedBasis::standard(s.exponents.size());
  if (j.contains("weight")) s.weight = parse_weight(j.at("weight"), pointer + "/weight");
  if (j.contains("permutation")) s.permutation = j.at("permutation").get<std::vector<std::size_t>>();
  if (s.basis.dim() != s.exponents.size())
    throw ValidationError("basis dimension differs from exponent count (at " + pointer + ")");
  return s;
}

}  // namespace tfa
