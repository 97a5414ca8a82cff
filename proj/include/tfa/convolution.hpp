#pragma once

// Semi-discrete convolution (a *_[E] f)(x) = sum_j a(j) f(x - j) over the
// lattice of E, and the Lebesgue estimate for it on the domain I that is one
// period along the axes in E_0 and the full line along the others.

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tfa/errors.hpp"
#include "tfa/exponent.hpp"
#include "tfa/grid.hpp"
#include "tfa/mixed_norm.hpp"
#include "tfa/weight.hpp"
#include "tfa/wiener.hpp"

namespace tfa {

// Axes flagged in `periodic` must cover exactly one cell of E; f is read as
// periodic there and the result stays on that cell. Along the other axes f
// vanishes off its grid and the result grid is enlarged by the support of a.
// The result lives on the grid re-expressed in the coordinates of E.
inline SampledField semidiscrete_convolution(const LatticeSequence& a, const SampledField& f, const OrderedBasis& e,
                                             std::vector<bool> periodic = {}) {
  const GridSpec g = align_to_cells(f.grid, e);
  const auto d = g.dim();
  if (a.dim() != d) throw InvalidArgument("sequence and field dimensions differ");
  if (periodic.empty()) periodic.assign(d, false);
  if (periodic.size() != d) throw InvalidArgument("periodic axis flags must match the dimension");
  IntVec lo = g.lo(), hi = g.hi();
  for (std::size_t k = 0; k < d; ++k) {
    if (periodic[k]) {
      if (g.cells(k) != 1) throw InvalidArgument("periodic axis " + std::to_string(k) + " must cover one cell of E");
      continue;
    }
    lo[k] += a.lo[k];
    hi[k] += a.lo[k] + std::int64_t(a.shape[k]) - 1;
  }
  const GridSpec out_grid(e, g.samples_per_cell(), lo, hi, g.offset());
  SampledField out = SampledField::zeros(out_grid, f.codomain);
  const auto& in_shape = g.shape();
  const auto& out_shape = out_grid.shape();
  std::vector<std::size_t> idx(d);
  std::vector<std::int64_t> shift(d);
  for (std::size_t s = 0; s < a.size(); ++s) {
    const cplx aj = a.values[s];
    if (aj == cplx{}) continue;
    const IntVec j = a.index(s);
    for (std::size_t k = 0; k < d; ++k)
      shift[k] = (periodic[k] ? j[k] : j[k] + g.lo()[k] - lo[k]) * std::int64_t(g.samples_per_cell()[k]);
    for (std::size_t i = 0; i < f.size(); ++i) {
      unflatten(i, in_shape, idx);
      std::size_t flat = 0, stride = 1;
      for (std::size_t k = 0; k < d; ++k) {
        auto n = std::int64_t(idx[k]) + shift[k];
        if (periodic[k]) {
          const auto m = std::int64_t(out_shape[k]);
          n = ((n % m) + m) % m;
        }
        flat += std::size_t(n) * stride;
        stride *= out_shape[k];
      }
      out.values[flat] += aj * f.values[i];
    }
  }
  out.metadata = f.metadata;
  return out;
}

struct YoungSpec {
  OrderedBasis cells;          // E
  std::vector<bool> periodic;  // e_k in E_0
  ExponentVector p, r;
  std::optional<Weight> omega, v;
};

// r_k <= min_{m <= k} (1, p_m)
inline void check_young_hypotheses(const YoungSpec& s) {
  const auto d = s.cells.dim();
  if (s.p.size() != d || s.r.size() != d) throw InvalidArgument("exponents must have one entry per axis");
  double bound = 1.0;
  for (std::size_t k = 0; k < d; ++k) {
    bound = std::min(bound, s.p[k].value());
    if (s.r[k].value() > bound)
      throw PreconditionError("convolution hypothesis r_k <= min_{m<=k}(1, p_m) fails at k = " +
                              std::to_string(k + 1) + " (r_k = " + format_double(s.r[k].value()) +
                              ", bound " + format_double(bound) + ")");
  }
}

struct YoungMeasurement {
  double lhs = 0.0;     // ||a * f||_{L^p_{E,(omega)}(I)}
  double a_norm = 0.0;  // ||a||_{l^r_{E,(v)}}
  double f_norm = 0.0;  // ||f||_{L^p_{E,(omega)}(I)}
  double constant() const { return a_norm * f_norm > 0.0 ? lhs / (a_norm * f_norm) : 0.0; }
};

inline YoungMeasurement young_estimate_check(const LatticeSequence& a, const SampledField& f, const YoungSpec& s) {
  check_young_hypotheses(s);
  const auto conv = semidiscrete_convolution(a, f, s.cells, s.periodic);
  SampledField fe = f;
  fe.grid = align_to_cells(f.grid, s.cells);
  const MixedNormSpec lp{s.cells, s.p, s.omega, {}, {}};
  YoungMeasurement m;
  m.lhs = mixed_norm(conv, lp);
  m.f_norm = mixed_norm(fe, lp);
  m.a_norm = discrete_mixed_norm(a, s.r, s.v, s.cells);
  return m;
}

struct YoungStudySpec {
  YoungSpec young;
  std::size_t batches = 50;
  std::size_t samples_per_cell = 8;
  std::int64_t f_radius = 2;  // f lives on cells -R..R-1 along non-periodic axes
  std::int64_t a_radius = 3;  // a lives on -R..R along every axis
  bool nonnegative = false;
  std::uint64_t seed = 0x5EED;
};

struct YoungStudyReport {
  std::vector<YoungMeasurement> batches;
  double max_constant = 0.0;
  double min_constant = 0.0;
};

// Random (a, f) pairs. f is a sum of three products of one-dimensional
// bumps: von Mises profiles along periodic axes, Gaussians along the rest.
// The parameters are drawn before sampling, so changing the resolution
// re-samples the same functions.
inline YoungStudyReport young_batch_study(const YoungStudySpec& s) {
  check_young_hypotheses(s.young);
  const auto d = s.young.cells.dim();
  std::vector<bool> periodic = s.young.periodic;
  if (periodic.empty()) periodic.assign(d, false);
  if (periodic.size() != d) throw InvalidArgument("periodic axis flags must match the dimension");
  if (s.batches == 0) throw InvalidArgument("young study needs at least one batch");
  IntVec lo(d), hi(d);
  for (std::size_t k = 0; k < d; ++k) {
    lo[k] = periodic[k] ? 0 : -s.f_radius;
    hi[k] = periodic[k] ? 0 : s.f_radius - 1;
  }
  const GridSpec g(s.young.cells, std::vector<std::size_t>(d, s.samples_per_cell), lo, hi);
  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto coef = [&] {
    return s.nonnegative ? cplx{U(rng), 0.0} : cplx{2.0 * U(rng) - 1.0, 2.0 * U(rng) - 1.0};
  };
  struct Bump {
    cplx c;
    std::vector<double> mu, width;
  };
  YoungStudyReport rep;
  for (std::size_t b = 0; b < s.batches; ++b) {
    std::vector<Bump> bumps(3);
    for (auto& bump : bumps) {
      bump.c = coef();
      for (std::size_t k = 0; k < d; ++k) {
        bump.mu.push_back(periodic[k] ? U(rng) : 2.0 * U(rng) - 1.0);
        bump.width.push_back(periodic[k] ? 0.5 + 2.0 * U(rng) : 0.3 + 0.5 * U(rng));
      }
    }
    auto a = LatticeSequence::zeros(IntVec(d, -s.a_radius), std::vector<std::size_t>(d, std::size_t(2 * s.a_radius + 1)));
    for (auto& v : a.values) v = coef();
    SampledField f = SampledField::zeros(g);
    std::vector<std::size_t> idx(d);
    for (std::size_t i = 0; i < f.size(); ++i) {
      unflatten(i, g.shape(), idx);
      cplx acc{};
      for (const auto& bump : bumps) {
        double prod = 1.0;
        for (std::size_t k = 0; k < d; ++k) {
          const double u = double(lo[k]) + (double(idx[k]) + 0.5) / double(s.samples_per_cell);
          const double t = u - bump.mu[k];
          prod *= periodic[k] ? std::exp(bump.width[k] * (std::cos(two_pi * t) - 1.0))
                              : std::exp(-0.5 * t * t / (bump.width[k] * bump.width[k]));
        }
        acc += bump.c * prod;
      }
      f.values[i] = acc;
    }
    YoungSpec ys = s.young;
    ys.periodic = periodic;
    rep.batches.push_back(young_estimate_check(a, f, ys));
  }
  rep.max_constant = rep.min_constant = rep.batches.front().constant();
  for (const auto& m : rep.batches) {
    rep.max_constant = std::max(rep.max_constant, m.constant());
    rep.min_constant = std::min(rep.min_constant, m.constant());
  }
  return rep;
}

}  // namespace tfa
