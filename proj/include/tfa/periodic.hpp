#pragma once

// Trigonometric polynomials as periodic distributions: Fourier coefficients,
// coefficient norms, the action on test windows, and the equivalence of
// coefficient norms with mixed STFT norms over one period.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tfa/corpus.hpp"
#include "tfa/errors.hpp"
#include "tfa/mixed_norm.hpp"
#include "tfa/modulation.hpp"
#include "tfa/stft.hpp"
#include "tfa/trigpoly.hpp"
#include "tfa/wiener.hpp"

namespace tfa {

// c(f, alpha) = |kappa(E)|^{-1} (f, e^{i <., alpha>})_{L^2(kappa(E))} for
// every index nu in [nu_lo, nu_hi]. f must cover exactly one cell of E.
inline TrigPolynomial fourier_coefficients(const SampledField& f, const OrderedBasis& e, const IntVec& nu_lo,
                                           const IntVec& nu_hi) {
  const GridSpec g = align_to_cells(f.grid, e);
  const auto d = g.dim();
  if (nu_lo.size() != d || nu_hi.size() != d) throw InvalidArgument("frequency range dimension mismatch");
  for (std::size_t k = 0; k < d; ++k) {
    if (g.cells(k) != 1) throw InvalidArgument("f must be sampled on exactly one fundamental domain");
    const auto m = std::int64_t(g.samples_per_cell()[k]);
    if (nu_lo[k] > nu_hi[k]) throw InvalidArgument("empty frequency range on axis " + std::to_string(k));
    if (2 * std::max(std::abs(nu_lo[k]), std::abs(nu_hi[k])) >= m)
      throw AliasingError("frequency index " + std::to_string(std::max(std::abs(nu_lo[k]), std::abs(nu_hi[k]))) +
                          " on axis " + std::to_string(k) + " is outside the Nyquist range of " +
                          std::to_string(m) + " samples per period");
  }
  TrigPolynomial t(e);
  const auto pts = g.points();
  std::vector<std::size_t> shape(d);
  for (std::size_t k = 0; k < d; ++k) shape[k] = std::size_t(nu_hi[k] - nu_lo[k] + 1);
  std::vector<std::size_t> idx(d);
  for (std::size_t s = 0; s < flat_size(shape); ++s) {
    unflatten(s, shape, idx);
    IntVec nu(d);
    for (std::size_t k = 0; k < d; ++k) nu[k] = nu_lo[k] + std::int64_t(idx[k]);
    const Vec alpha = t.frequency(nu);
    CompensatedSum re, im;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const cplx v = f.values[i] * std::polar(1.0, -pts[i].dot(alpha));
      re.add(v.real());
      im.add(v.imag());
    }
    const double n = double(f.size());
    t.set(nu, {re.value() / n, im.value() / n});
  }
  return t;
}

// f on the grid of one fundamental domain with m samples per axis.
inline SampledField synthesize(const TrigPolynomial& f, std::size_t m) {
  const GridSpec g(f.period_basis(), {m}, IntVec(f.dim(), 0), IntVec(f.dim(), 0));
  return sample(g, [&](const Vec& x) { return f(x); });
}

// ||{c(f, alpha) omega_0(alpha)}||_{l^q} over Lambda'_E, reduced in `permutation` order.
inline double coefficient_norm(const TrigPolynomial& f, const ExponentVector& q,
                               const std::optional<Weight>& omega0 = {},
                               const std::vector<std::size_t>& permutation = {}) {
  const auto d = f.dim();
  if (q.size() != d) throw InvalidArgument("coefficient exponents must match the dimension");
  if (f.empty()) return 0.0;
  const auto [lo, hi] = f.index_hull();
  std::vector<std::size_t> shape(d);
  for (std::size_t k = 0; k < d; ++k) shape[k] = std::size_t(hi[k] - lo[k] + 1);
  auto a = LatticeSequence::zeros(lo, shape);
  for (const auto& [nu, c] : f.coefficients()) {
    std::size_t flat = 0, stride = 1;
    for (std::size_t k = 0; k < d; ++k) {
      flat += std::size_t(nu[k] - lo[k]) * stride;
      stride *= shape[k];
    }
    a.values[flat] = c;
  }
  return discrete_mixed_norm(a, q, omega0, f.dual(), permutation);
}

// <f, phi> = (2 pi)^{d/2} sum_alpha c(f, alpha) phi^(-alpha)
inline cplx distribution_action(const TrigPolynomial& f, const Window& phi) {
  if (!phi.has_analytic_transform()) throw UnsupportedError("distribution action needs an analytic transform");
  if (phi.dim() != f.dim()) throw InvalidArgument("window and polynomial dimensions differ");
  cplx acc{};
  for (const auto& [nu, c] : f.coefficients()) {
    const Vec minus = -f.frequency(nu);
    acc += c * phi.fourier(std::span<const double>(minus.data(), f.dim()));
  }
  return std::pow(two_pi, 0.5 * double(f.dim())) * acc;
}

// Frequency radius past which |phi^| drops below 1e-12 of its peak after
// raising to the power q_min.
inline double frequency_reach(const Window& w, double q_min) {
  const double n = w.kind() == Window::Kind::hermite ? double(w.order()) : 0.0;
  return (std::sqrt(2.0 * std::log(1e12) / q_min) + std::sqrt(2.0 * n + 1.0) + 1.0) / w.sigma();
}

// Phase grid over kappa(E_0) x (frequency box) with basis E_0 x E_0'.
// The frequency box covers the coefficient hull widened by `reach`.
inline GridSpec periodic_phase_grid(const TrigPolynomial& f, double reach, std::size_t m_x, std::size_t m_xi,
                                    double x_offset = 0.0) {
  const auto d = f.dim();
  const auto n = Eigen::Index(d);
  Mat t = Mat::Zero(2 * n, 2 * n);
  t.topLeftCorner(n, n) = f.period_basis().matrix();
  t.bottomRightCorner(n, n) = f.dual().matrix();
  const double coord_reach = reach * f.dual().matrix().inverse().norm();
  const auto [lo, hi] = f.index_hull();
  IntVec glo(2 * d), ghi(2 * d);
  std::vector<double> off(2 * d, 0.0);
  for (std::size_t k = 0; k < d; ++k) {
    glo[k] = 0;
    ghi[k] = 0;
    off[k] = x_offset;
    glo[d + k] = lo[k] - std::int64_t(std::ceil(coord_reach));
    ghi[d + k] = hi[k] + std::int64_t(std::ceil(coord_reach));
  }
  std::vector<std::size_t> m(2 * d);
  for (std::size_t k = 0; k < d; ++k) {
    m[k] = m_x;
    m[d + k] = m_xi;
  }
  return GridSpec(OrderedBasis(t), m, glo, ghi, off);
}

struct PeriodicNorms {
  double coefficients = 0.0;  // ||c(f, .)||_{l^q_{E_0', (omega_0)}}
  double script_m = 0.0;      // script M^r_{E_0}(omega, L^q_{E_0'})
  double script_w = 0.0;      // script W^r_{E_0}(omega, L^q_{E_0'})
  double m_inf = 0.0;         // M^{inf, q}_{E, (omega)} over one period
  double w_inf = 0.0;         // W^{inf, q}_{E, (omega)} over one period
  double interleaved = 0.0;   // L^{q_0}_{E_*}(Omega), q_0 = (q_1, q_1, q_2, q_2, ...)
  std::optional<double> double_integral;  // Lebesgue (iint |V f omega|^q)^{1/q}, q = r < inf
};

struct PeriodicSpec {
  ExponentVector q, r;
  std::optional<Weight> omega0;  // on R^d, read at xi
  std::size_t m_x = 16, m_xi = 8;
  double x_offset = 0.0;
  bool check_truncation = true;
  std::optional<double> reach;  // frequency half-width; from the window when empty
};

inline PeriodicNorms periodic_norms(const TrigPolynomial& f, const Window& w, const PeriodicSpec& s) {
  const auto d = f.dim();
  if (s.q.size() != d || s.r.size() != d) throw InvalidArgument("q and r must have one entry per axis");
  if (s.omega0 && s.omega0->dim() != d) throw InvalidArgument("omega_0 must live on R^d");
  const double reach = s.reach ? *s.reach : frequency_reach(w, std::min(1.0, s.q.min()));
  const GridSpec g = periodic_phase_grid(f, reach, s.m_x, s.m_xi, s.x_offset);
  const auto F = stft_trigpoly(f, w, g);
  std::vector<std::size_t> xi_axes(d);
  for (std::size_t k = 0; k < d; ++k) xi_axes[k] = d + k;
  std::optional<Weight> omega;
  if (s.omega0) omega = s.omega0->on_axes(2 * d, xi_axes);
  const auto [gx, gxi] = split_phase_grid(g);
  const auto inf_d = ExponentVector::uniform(Exponent::infinity(), d);

  PeriodicNorms out;
  out.coefficients = coefficient_norm(f, s.q, s.omega0);
  const TwoVariableSpec two{{s.r, gx.basis(), {inf_d, {}, {}}}, {gxi.basis(), s.q, {}, {}, {}}, omega};
  const auto script = script_norms(F, two);
  out.script_m = script.m;
  out.script_w = script.w;

  MixedNormSpec m_spec{g.basis(), inf_d.concat(s.q), omega, {}, {}};
  out.m_inf = mixed_norm(F, m_spec);
  MixedNormSpec w_spec = m_spec;
  w_spec.permutation.resize(2 * d);
  for (std::size_t k = 0; k < d; ++k) {
    w_spec.permutation[k] = d + k;
    w_spec.permutation[d + k] = k;
  }
  out.w_inf = mixed_norm(F, w_spec);

  MixedNormSpec inter{g.basis(), s.q.concat(s.q), omega, {}, {}};
  for (std::size_t k = 0; k < d; ++k) {
    inter.permutation.push_back(k);
    inter.permutation.push_back(d + k);
  }
  out.interleaved = mixed_norm(F, inter);

  bool q_equals_r = true;
  for (std::size_t k = 0; k < d; ++k)
    q_equals_r = q_equals_r && s.q[k].value() == s.r[k].value() && s.q[k].value() == s.q[0].value();
  if (q_equals_r && !s.q[0].is_infinite()) {
    const double q = s.q[0].value();
    const double jac = std::abs(g.basis().matrix().determinant());
    out.double_integral = std::pow(jac, 1.0 / q) * mixed_norm(F, {g.basis(), s.q.concat(s.q), omega, {}, {}});
  }

  if (s.check_truncation && out.m_inf > 0.0) {
    CellRange inner{g.lo(), g.hi()};
    for (std::size_t k = d; k < 2 * d; ++k) {
      ++inner.lo[k];
      --inner.hi[k];
    }
    MixedNormSpec cut = m_spec;
    cut.region = inner;
    const double share = (out.m_inf - mixed_norm(F, cut)) / out.m_inf;
    if (share > truncation_tolerance)
      throw TruncationError("frequency box too small: the boundary cell layer carries " + format_double(share) +
                            " of the norm");
  }
  return out;
}

// Largest relative spread over `shifts` grid-commensurate translates x of
// g(xi) = ||V f(., xi)||_{L^r(x + kappa(E))}, over frequency nodes where g is
// at least 1e-8 of its maximum.
inline double periodicity_defect(const TrigPolynomial& f, const Window& w, const ExponentVector& r,
                                 std::size_t shifts = 20, std::size_t m_x = 40, std::size_t m_xi = 8) {
  if (shifts == 0) throw InvalidArgument("periodicity check needs at least one shift");
  const auto d = f.dim();
  const double reach = frequency_reach(w, std::min(1.0, r.min()));
  std::vector<std::vector<double>> g(shifts);
  for (std::size_t s = 0; s < shifts; ++s) {
    const double off = double(s * 7) / double(m_x);
    const GridSpec grid = periodic_phase_grid(f, reach, m_x, m_xi, off);
    const auto F = stft_trigpoly(f, w, grid);
    const auto [gx, gxi] = split_phase_grid(grid);
    const WienerSpec local{r, gx.basis(), {ExponentVector::uniform(Exponent::infinity(), d), {}, {}}};
    SampledField slice = SampledField::zeros(gx);
    const std::size_t nx = gx.size();
    for (std::size_t k = 0; k < gxi.size(); ++k) {
      std::copy(F.values.begin() + std::ptrdiff_t(k * nx), F.values.begin() + std::ptrdiff_t((k + 1) * nx),
                slice.values.begin());
      g[s].push_back(wiener_norm(slice, local));
    }
  }
  const double top = *std::max_element(g[0].begin(), g[0].end());
  double defect = 0.0;
  for (std::size_t k = 0; k < g[0].size(); ++k) {
    double lo = g[0][k], hi = g[0][k];
    for (const auto& row : g) {
      lo = std::min(lo, row[k]);
      hi = std::max(hi, row[k]);
    }
    if (hi >= 1e-8 * top) defect = std::max(defect, (hi - lo) / hi);
  }
  return defect;
}

struct PeriodicRow {
  std::string id;
  PeriodicNorms norms;
};

struct PeriodicReport {
  std::vector<PeriodicRow> rows;
  // max/min over the corpus of each column divided by the coefficient norm
  double spread_script_m = 0.0, spread_script_w = 0.0, spread_m_inf = 0.0, spread_w_inf = 0.0,
         spread_interleaved = 0.0;
  std::optional<double> spread_double_integral;
};

inline PeriodicReport periodic_equivalence_study(const std::vector<std::pair<std::string, TrigPolynomial>>& corpus,
                                                 const Window& w, const PeriodicSpec& s) {
  if (corpus.empty()) throw InvalidArgument("empty corpus");
  PeriodicReport rep;
  std::vector<double> sm, sw, mi, wi, il, di;
  for (const auto& [id, f] : corpus) {
    if (f.empty()) throw InvalidArgument("corpus entry " + id + " is the zero polynomial");
    auto n = periodic_norms(f, w, s);
    sm.push_back(n.script_m / n.coefficients);
    sw.push_back(n.script_w / n.coefficients);
    mi.push_back(n.m_inf / n.coefficients);
    wi.push_back(n.w_inf / n.coefficients);
    il.push_back(n.interleaved / n.coefficients);
    if (n.double_integral) di.push_back(*n.double_integral / n.coefficients);
    rep.rows.push_back({id, std::move(n)});
  }
  rep.spread_script_m = spread_of(sm);
  rep.spread_script_w = spread_of(sw);
  rep.spread_m_inf = spread_of(mi);
  rep.spread_w_inf = spread_of(wi);
  rep.spread_interleaved = spread_of(il);
  if (!di.empty()) rep.spread_double_integral = spread_of(di);
  return rep;
}

// The six trigonometric polynomials of the standard corpus.
inline std::vector<std::pair<std::string, TrigPolynomial>> trig_corpus(std::uint64_t seed = 0x5EED) {
  std::vector<std::pair<std::string, TrigPolynomial>> out;
  for (const auto& e : standard_corpus(seed))
    if (!e.decays()) out.emplace_back(e.id, e.poly);
  return out;
}

}  // namespace tfa
