#pragma once

// Short-time Fourier transform with the unitary angular convention
//   V_phi f(x, xi) = (2 pi)^{-d/2} int f(t) conj(phi(t - x)) e^{-i <t, xi>} dt
// on phase-split grids (block-diagonal basis, x axes first).

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tfa/errors.hpp"
#include "tfa/grid.hpp"
#include "tfa/trigpoly.hpp"
#include "tfa/window.hpp"

namespace tfa {

// Throws unless the 2d-dimensional grid basis is block diagonal.
inline void require_phase_grid(const GridSpec& grid, std::size_t d) {
  if (grid.dim() != 2 * d)
    throw InvalidArgument("phase-space grid must have dimension " + std::to_string(2 * d));
  const auto& t = grid.basis().matrix();
  const auto n = Eigen::Index(d);
  if (t.topRightCorner(n, n).cwiseAbs().maxCoeff() > 0.0 || t.bottomLeftCorner(n, n).cwiseAbs().maxCoeff() > 0.0)
    throw InvalidArgument("phase-space grid basis must split into configuration and frequency blocks");
}

namespace detail {

// Nodes of the first (config) or last (frequency) d axes, flat in axis-0-fastest order.
inline std::vector<Vec> half_nodes(const GridSpec& grid, bool config) {
  const std::size_t d = grid.dim() / 2;
  const std::size_t off = config ? 0 : d;
  std::vector<std::size_t> shape(grid.shape().begin() + std::ptrdiff_t(off),
                                 grid.shape().begin() + std::ptrdiff_t(off + d));
  const Mat block = grid.basis().matrix().block(Eigen::Index(off), Eigen::Index(off), Eigen::Index(d), Eigen::Index(d));
  std::vector<Vec> out(flat_size(shape));
  std::vector<std::size_t> idx(d);
  Vec c(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < out.size(); ++i) {
    unflatten(i, shape, idx);
    for (std::size_t k = 0; k < d; ++k) c(Eigen::Index(k)) = grid.coordinate(off + k, idx[k]);
    out[i] = block * c;
  }
  return out;
}

inline double max_step(const GridSpec& g) {
  double h = 0.0;
  for (std::size_t k = 0; k < g.dim(); ++k)
    h = std::max(h, g.basis().vector(k).norm() * g.step(k));
  return h;
}

}  // namespace detail

inline SampledField make_stft_field(const GridSpec& grid, const Window& w, const std::string& source) {
  SampledField out = SampledField::zeros(grid, Codomain::phase_space);
  out.metadata["window"] = w.name();
  out.metadata["convention"] = "unitary-angular";
  out.metadata["source"] = source;
  return out;
}

// Direct quadrature per phase-space node over the samples of f.
inline SampledField stft(const SampledField& f, const Window& w, const GridSpec& grid) {
  const std::size_t d = f.grid.dim();
  if (w.dim() != d) throw InvalidArgument("window and signal dimensions differ");
  require_phase_grid(grid, d);
  const double h = detail::max_step(f.grid);
  if (w.kind() != Window::Kind::sampled && w.sigma() < 4.0 * h)
    throw ResolutionError("window width " + format_double(w.sigma()) + " is below 4 signal grid steps (step " +
                          format_double(h) + ")");

  const auto xs = detail::half_nodes(grid, true);
  const auto xis = detail::half_nodes(grid, false);
  SampledField out = make_stft_field(grid, w, f.metadata.count("source") ? f.metadata.at("source") : "sampled");

  std::vector<Vec> ts;
  std::vector<cplx> fv;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.values[i] != cplx{}) {
      ts.push_back(f.grid.point(i));
      fv.push_back(f.values[i]);
    }
  if (ts.empty()) return out;

  const double scale = f.grid.sample_volume() * std::pow(two_pi, -0.5 * double(d));
  const double radius = w.support_radius();
  const bool table = ts.size() * xis.size() <= (std::size_t(1) << 22);
  std::vector<cplx> phase;
  if (table) {
    phase.resize(ts.size() * xis.size());
    for (std::size_t n = 0; n < ts.size(); ++n)
      for (std::size_t k = 0; k < xis.size(); ++k) phase[n * xis.size() + k] = std::polar(1.0, -ts[n].dot(xis[k]));
  }

  std::vector<double> xi_norm(xis.size());
  for (std::size_t k = 0; k < xis.size(); ++k) xi_norm[k] = xis[k].norm();

  std::vector<std::size_t> active;
  std::vector<cplx> wt;
  std::vector<cplx> acc(xis.size());
  Vec diff(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    active.clear();
    wt.clear();
    double mass = 0.0, reach = 0.0;
    for (std::size_t n = 0; n < ts.size(); ++n) {
      diff = ts[n] - xs[i];
      if (diff.cwiseAbs().maxCoeff() > radius) continue;
      const double p = w(std::span<const double>(diff.data(), d));
      if (p == 0.0) continue;
      active.push_back(n);
      wt.push_back(fv[n] * p * scale);
      mass += std::abs(wt.back());
      reach = std::max(reach, ts[n].norm());
    }
    std::fill(acc.begin(), acc.end(), cplx{});
    for (std::size_t a = 0; a < active.size(); ++a) {
      const std::size_t n = active[a];
      if (table) {
        const cplx* row = &phase[n * xis.size()];
        for (std::size_t k = 0; k < xis.size(); ++k) acc[k] += wt[a] * row[k];
      } else {
        for (std::size_t k = 0; k < xis.size(); ++k) acc[k] += wt[a] * std::polar(1.0, -ts[n].dot(xis[k]));
      }
    }
    // Values inside their own rounding-error bound (phase arguments t.xi
    // carry an absolute error of eps |t| |xi|) have no significant digits.
    for (std::size_t k = 0; k < xis.size(); ++k) {
      const double bound = 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + reach * xi_norm[k]) * mass;
      out.values[i + xs.size() * k] = std::abs(acc[k]) > bound ? acc[k] : cplx{};
    }
  }
  return out;
}

// V_phi f(x, xi) = sum_alpha c(f, alpha) e^{-i <x, xi - alpha>} Phi(xi - alpha),
// Phi(eta) = conj(phi^(-eta)).
inline SampledField stft_trigpoly(const TrigPolynomial& f, const Window& w, const GridSpec& grid) {
  if (!w.has_analytic_transform())
    throw UnsupportedError("the trigonometric fast path needs a window with an analytic transform; "
                           "synthesize f on a grid and use stft instead");
  const std::size_t d = f.dim();
  if (w.dim() != d) throw InvalidArgument("window and polynomial dimensions differ");
  require_phase_grid(grid, d);
  const auto xs = detail::half_nodes(grid, true);
  const auto xis = detail::half_nodes(grid, false);
  SampledField out = make_stft_field(grid, w, "trig-polynomial");
  Vec eta(static_cast<Eigen::Index>(d));
  for (const auto& [nu, c] : f.coefficients()) {
    const Vec alpha = f.frequency(nu);
    for (std::size_t k = 0; k < xis.size(); ++k) {
      eta = alpha - xis[k];
      const cplx big_phi = std::conj(w.fourier(std::span<const double>(eta.data(), d)));
      if (big_phi == cplx{}) continue;
      const cplx cf = c * big_phi;
      eta = xis[k] - alpha;
      for (std::size_t i = 0; i < xs.size(); ++i)
        out.values[i + xs.size() * k] += cf * std::polar(1.0, -xs[i].dot(eta));
    }
  }
  return out;
}

struct SubharmonicReport {
  double constant = 0.0;  // max |F(X)| / ||F||_{L^p(B_r(X))}
  std::size_t nodes = 0;  // interior nodes examined
};

// Measured constant of |F(X)| <= C ||F||_{L^p(B_r(X))} over grid nodes whose
// ball lies inside the grid.
inline SubharmonicReport subharmonic_check(const SampledField& F, double p, double r) {
  const auto& g = F.grid;
  const std::size_t dim = g.dim();
  const double h = detail::max_step(g);
  if (!(r > 0.0) || r < 8.0 * h)
    throw ResolutionError("ball radius " + format_double(r) + " is resolved by fewer than 8 samples (step " +
                          format_double(h) + ")");
  Mat step = g.basis().matrix();
  for (std::size_t k = 0; k < dim; ++k) step.col(Eigen::Index(k)) *= g.step(k);
  Eigen::JacobiSVD<Mat> svd(step);
  const double smin = svd.singularValues()(Eigen::Index(dim) - 1);
  const auto reach = std::int64_t(std::ceil(r / smin));

  std::vector<std::vector<std::int64_t>> offsets;
  std::vector<std::int64_t> o(dim, -reach);
  Vec u(static_cast<Eigen::Index>(dim));
  for (;;) {
    for (std::size_t k = 0; k < dim; ++k) u(Eigen::Index(k)) = double(o[k]);
    if ((step * u).norm() <= r) offsets.push_back(o);
    std::size_t k = 0;
    while (k < dim && ++o[k] > reach) o[k++] = -reach;
    if (k == dim) break;
  }

  SubharmonicReport rep;
  const auto& shape = g.shape();
  std::vector<std::size_t> idx(dim), nb(dim);
  const double vol = g.sample_volume();
  for (std::size_t i = 0; i < F.size(); ++i) {
    unflatten(i, shape, idx);
    bool interior = true;
    for (std::size_t k = 0; k < dim; ++k)
      if (std::int64_t(idx[k]) < reach || std::int64_t(idx[k]) + reach >= std::int64_t(shape[k])) interior = false;
    if (!interior) continue;
    double ball = 0.0;
    CompensatedSum acc;
    for (const auto& off : offsets) {
      for (std::size_t k = 0; k < dim; ++k) nb[k] = std::size_t(std::int64_t(idx[k]) + off[k]);
      const double v = std::abs(F.values[flatten(nb, shape)]);
      if (std::isinf(p))
        ball = std::max(ball, v);
      else if (v != 0.0)
        acc.add(std::pow(v, p));
    }
    if (!std::isinf(p)) ball = std::pow(acc.value() * vol, 1.0 / p);
    ++rep.nodes;
    if (ball > 0.0) rep.constant = std::max(rep.constant, std::abs(F.values[i]) / ball);
  }
  if (rep.nodes == 0) throw ResolutionError("no grid node has its ball inside the grid");
  return rep;
}

}  // namespace tfa
