#pragma once

// Discrete Gabor systems on the cyclic group Z_L: time shifts by a, frequency
// shifts by b DFT bins. Sample n stands for the point t = rep(n) h with
// h = (2 pi / L)^{1/2}, so the time and frequency periods are equal.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tfa/errors.hpp"
#include "tfa/numeric.hpp"
#include "tfa/weight.hpp"
#include "tfa/window.hpp"

namespace tfa {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline double torus_step(std::size_t L) { return std::sqrt(two_pi / double(L)); }

// Representative of n in [-L/2, L/2).
inline std::int64_t torus_rep(std::int64_t n, std::size_t L) {
  const auto l = std::int64_t(L);
  n %= l;
  if (n < 0) n += l;
  return n >= (l + 1) / 2 ? n - l : n;
}

// w sampled at rep(n) h and periodized over the neighbouring periods.
inline std::vector<cplx> sample_periodic(const Window& w, std::size_t L) {
  if (w.dim() != 1) throw InvalidArgument("periodic sampling needs a window on R");
  const double h = torus_step(L), period = h * double(L);
  const int wraps = int(std::ceil(w.support_radius() / period)) + 1;
  std::vector<cplx> s(L);
  for (std::size_t n = 0; n < L; ++n) {
    const double t = double(torus_rep(std::int64_t(n), L)) * h;
    for (int j = -wraps; j <= wraps; ++j) s[n] += w({t + j * period});
  }
  return s;
}

class GaborSystem {
 public:
  GaborSystem(std::vector<cplx> window, std::size_t a, std::size_t b) : g_(std::move(window)), a_(a), b_(b) {
    const auto L = g_.size();
    if (L == 0) throw InvalidArgument("empty Gabor window");
    if (a == 0 || b == 0 || L % a != 0 || L % b != 0)
      throw InvalidArgument("lattice steps a = " + std::to_string(a) + ", b = " + std::to_string(b) +
                            " must divide L = " + std::to_string(L));
    twiddle_.resize(L);
    for (std::size_t j = 0; j < L; ++j) twiddle_[j] = std::polar(1.0, two_pi * double(j) / double(L));
  }

  std::size_t length() const noexcept { return g_.size(); }
  std::size_t a() const noexcept { return a_; }
  std::size_t b() const noexcept { return b_; }
  std::size_t time_shifts() const noexcept { return g_.size() / a_; }
  std::size_t freq_shifts() const noexcept { return g_.size() / b_; }
  std::size_t atoms() const noexcept { return time_shifts() * freq_shifts(); }
  double redundancy() const noexcept { return double(atoms()) / double(length()); }
  const std::vector<cplx>& window() const noexcept { return g_; }

  // e^{2 pi i j / L}
  cplx twiddle(std::int64_t j) const {
    const auto L = std::int64_t(g_.size());
    return twiddle_[std::size_t(((j % L) + L) % L)];
  }

  // pi(x, w) g at sample n: g(n - x) e^{2 pi i w n / L}.
  cplx shifted(const std::vector<cplx>& g, std::int64_t x, std::int64_t w, std::int64_t n) const {
    const auto L = std::int64_t(g_.size());
    return g[std::size_t((((n - x) % L) + L) % L)] * twiddle(w * n);
  }

  cplx atom(std::size_t k, std::size_t l, std::size_t n) const {
    return shifted(g_, std::int64_t(k * a_), std::int64_t(l * b_), std::int64_t(n));
  }

 private:
  std::vector<cplx> g_;
  std::size_t a_, b_;
  std::vector<cplx> twiddle_;
};

// c(k, l) = <f, g_{k,l}>, stored at k + K l. The discrete inner product
// carries no (2 pi)^{-d/2} factor.
struct CoefficientArray {
  std::size_t K = 0, M = 0;
  std::vector<cplx> values;
  cplx& operator()(std::size_t k, std::size_t l) { return values[k + K * l]; }
  cplx operator()(std::size_t k, std::size_t l) const { return values[k + K * l]; }
};

inline CoefficientArray analysis(const std::vector<cplx>& f, const GaborSystem& G) {
  const auto L = G.length();
  if (f.size() != L) throw InvalidArgument("signal length does not match the Gabor system");
  CoefficientArray c{G.time_shifts(), G.freq_shifts(), {}};
  c.values.assign(c.K * c.M, cplx{});
  std::vector<cplx> h(L);
  for (std::size_t k = 0; k < c.K; ++k) {
    for (std::size_t n = 0; n < L; ++n) h[n] = f[n] * std::conj(G.window()[(n + L - (k * G.a()) % L) % L]);
    for (std::size_t l = 0; l < c.M; ++l) {
      cplx acc{};
      for (std::size_t n = 0; n < L; ++n) acc += h[n] * G.twiddle(-std::int64_t(l * G.b() * n));
      c(k, l) = acc;
    }
  }
  return c;
}

inline std::vector<cplx> synthesis(const CoefficientArray& c, const GaborSystem& G) {
  if (c.K != G.time_shifts() || c.M != G.freq_shifts())
    throw InvalidArgument("coefficient array does not match the Gabor system");
  const auto L = G.length();
  std::vector<cplx> f(L);
  for (std::size_t k = 0; k < c.K; ++k)
    for (std::size_t l = 0; l < c.M; ++l) {
      const cplx ck = c(k, l);
      if (ck == cplx{}) continue;
      for (std::size_t n = 0; n < L; ++n) f[n] += ck * G.atom(k, l, n);
    }
  return f;
}

// S = sum over atoms of g g^*, assembled atom by atom.
inline CMat frame_operator(const GaborSystem& G) {
  const auto L = Eigen::Index(G.length());
  CMat S = CMat::Zero(L, L);
  CVec g(L);
  for (std::size_t k = 0; k < G.time_shifts(); ++k)
    for (std::size_t l = 0; l < G.freq_shifts(); ++l) {
      for (Eigen::Index n = 0; n < L; ++n) g(n) = G.atom(k, l, std::size_t(n));
      S.noalias() += g * g.adjoint();
    }
  return S;
}

struct FrameReport {
  double A = 0.0, B = 0.0;
  double condition = std::numeric_limits<double>::infinity();
  bool frame = false;
  std::optional<std::size_t> n_min;
};

inline constexpr double frame_tolerance = 1e-8;

inline FrameReport frame_bounds(const CMat& S) {
  Eigen::SelfAdjointEigenSolver<CMat> es(S, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  FrameReport r;
  r.A = std::max(0.0, ev(0));
  r.B = ev(ev.size() - 1);
  r.frame = r.B > 0.0 && r.A > frame_tolerance * r.B;
  if (r.A > 0.0) r.condition = r.B / r.A;
  return r;
}

inline FrameReport frame_bounds(const GaborSystem& G) { return frame_bounds(frame_operator(G)); }

// Smallest n dividing both a and b for which (a/n, b/n) gives a frame.
inline std::optional<std::size_t> smallest_frame_refinement(const std::vector<cplx>& window, std::size_t a,
                                                            std::size_t b) {
  for (std::size_t n = 1; n <= std::min(a, b); ++n) {
    if (a % n || b % n) continue;
    if (frame_bounds(GaborSystem(window, a / n, b / n)).frame) return n;
  }
  return std::nullopt;
}

struct DualWindow {
  std::vector<cplx> window;
  std::size_t iterations = 0;
  double residual = 0.0;  // ||S psi - g|| / ||g||
};

inline constexpr double dual_residual_tolerance = 1e-10;

// Jacobi-preconditioned conjugate gradients for S x = rhs, S Hermitian positive definite.
inline CVec pcg_solve(const CMat& S, const CVec& rhs, double tol, std::size_t max_iter, std::size_t& iterations,
                      double& residual) {
  const double bnorm = rhs.norm();
  CVec x = CVec::Zero(rhs.size());
  iterations = 0;
  residual = 0.0;
  if (bnorm == 0.0) return x;
  const CVec dinv = S.diagonal().real().cwiseInverse().cast<cplx>();
  CVec r = rhs;
  CVec z = dinv.cwiseProduct(r);
  CVec p = z;
  cplx rz = r.dot(z);
  while (iterations < max_iter) {
    const CVec Sp = S * p;
    const cplx alpha = rz / p.dot(Sp);
    x += alpha * p;
    r -= alpha * Sp;
    ++iterations;
    residual = r.norm() / bnorm;
    if (residual <= tol) break;
    z = dinv.cwiseProduct(r);
    const cplx rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  residual = (S * x - rhs).norm() / bnorm;
  return x;
}

inline DualWindow canonical_dual(const GaborSystem& G) {
  const CMat S = frame_operator(G);
  const auto rep = frame_bounds(S);
  if (!rep.frame)
    throw DefinitenessError("not a frame: min eigenvalue of S is " + format_double(rep.A) + " (max " +
                            format_double(rep.B) + ")");
  const auto L = G.length();
  CVec g(static_cast<Eigen::Index>(L));
  for (std::size_t n = 0; n < L; ++n) g(Eigen::Index(n)) = G.window()[n];
  DualWindow d;
  const CVec psi = pcg_solve(S, g, dual_residual_tolerance, 10 * L, d.iterations, d.residual);
  if (!(d.residual <= dual_residual_tolerance))
    throw ResolutionError("dual window solve stopped at residual " + format_double(d.residual) + " after " +
                          std::to_string(d.iterations) + " iterations");
  d.window.assign(psi.data(), psi.data() + psi.size());
  return d;
}

// Analysis with `analyze`, synthesis with `synthesize` (same lattice).
inline std::vector<cplx> reconstruct(const std::vector<cplx>& f, const GaborSystem& analyze,
                                     const GaborSystem& synthesize) {
  if (analyze.a() != synthesize.a() || analyze.b() != synthesize.b() || analyze.length() != synthesize.length())
    throw InvalidArgument("analysis and synthesis systems must share the lattice");
  return synthesis(analysis(f, analyze), synthesize);
}

// V_g f(x, w) = <f, pi(x, w) g> on all of Z_L x Z_L, stored at x + L w.
inline std::vector<cplx> discrete_stft(const std::vector<cplx>& f, const std::vector<cplx>& g, const GaborSystem& G) {
  const auto L = G.length();
  if (f.size() != L || g.size() != L) throw InvalidArgument("signal length does not match the Gabor system");
  std::vector<cplx> V(L * L), h(L);
  for (std::size_t x = 0; x < L; ++x) {
    for (std::size_t n = 0; n < L; ++n) h[n] = f[n] * std::conj(g[(n + L - x) % L]);
    for (std::size_t w = 0; w < L; ++w) {
      cplx acc{};
      for (std::size_t n = 0; n < L; ++n) acc += h[n] * G.twiddle(-std::int64_t(w * n));
      V[x + L * w] = acc;
    }
  }
  return V;
}

// Phase-space point of node (x, w): (rep(x) h, rep(w) h).
inline std::array<double, 2> torus_point(std::int64_t x, std::int64_t w, std::size_t L) {
  const double h = torus_step(L);
  return {double(torus_rep(x, L)) * h, double(torus_rep(w, L)) * h};
}

// max over X, Y of omega(X) / (omega(X + Y) v(Y)) on the node torus.
inline double torus_moderateness(const Weight& omega, const Weight& v, std::size_t L) {
  if (omega.dim() != 2 || v.dim() != 2) throw InvalidArgument("torus weights must live on R^2");
  const auto l = std::int64_t(L);
  std::vector<double> lw(L * L), lv(L * L);
  for (std::int64_t w = 0; w < l; ++w)
    for (std::int64_t x = 0; x < l; ++x) {
      const auto p = torus_point(x, w, L);
      lw[std::size_t(x + l * w)] = omega.log_value(p);
      lv[std::size_t(x + l * w)] = v.log_value(p);
    }
  double best = -std::numeric_limits<double>::infinity();
  for (std::int64_t X = 0; X < l * l; ++X)
    for (std::int64_t Y = 0; Y < l * l; ++Y) {
      const auto s = ((X % l + Y % l) % l) + l * ((X / l + Y / l) % l);
      best = std::max(best, lw[std::size_t(X)] - lw[std::size_t(s)] - lv[std::size_t(Y)]);
    }
  return std::exp(best);
}

struct DominationReport {
  std::size_t n = 1;
  double defect = 0.0;    // max over nodes of |V_{g0} f| - sum_k a(k) |V_g f|(X + k)
  double lhs_max = 0.0;
  std::size_t terms = 0;  // lattice coefficients kept after truncation
  double dual_residual = 0.0;
  // Weighted transfer omega F_0 <= C (a v) * (omega F), when weights are given.
  std::optional<double> measured_constant, moderateness_constant;
};

inline constexpr double domination_truncation = 1e-12;

// |V_{g0} f|(X) <= sum_{k in Lambda_n} |V_psi g0(k)| |V_g f|(X + k), where
// Lambda_n is the lattice (a/n, b/n) of G and psi its canonical dual.
inline DominationReport window_change_domination(const std::vector<cplx>& f, const GaborSystem& G,
                                                 const std::vector<cplx>& g0, std::size_t n,
                                                 const std::optional<Weight>& omega = {},
                                                 const std::optional<Weight>& v = {}) {
  if (n == 0 || G.a() % n || G.b() % n) throw InvalidArgument("refinement n must divide both lattice steps");
  if (omega.has_value() != v.has_value()) throw InvalidArgument("weighted transfer needs both omega and v");
  const GaborSystem Gn(G.window(), G.a() / n, G.b() / n);
  const auto dual = canonical_dual(Gn);
  const auto L = G.length();
  const auto coeff = analysis(g0, GaborSystem(dual.window, Gn.a(), Gn.b()));
  double cmax = 0.0;
  for (const auto& c : coeff.values) cmax = std::max(cmax, std::abs(c));
  struct Term {
    std::size_t dx, dw;
    double a;
  };
  std::vector<Term> terms;
  for (std::size_t l = 0; l < coeff.M; ++l)
    for (std::size_t k = 0; k < coeff.K; ++k) {
      const double a = std::abs(coeff(k, l));
      if (a > domination_truncation * cmax) terms.push_back({k * Gn.a(), l * Gn.b(), a});
    }

  const auto F0 = discrete_stft(f, g0, Gn), F = discrete_stft(f, G.window(), Gn);
  std::vector<double> absF(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) absF[i] = std::abs(F[i]);
  std::vector<double> lw, lv;
  if (omega) {
    lw.resize(L * L);
    lv.resize(L * L);
    for (std::size_t w = 0; w < L; ++w)
      for (std::size_t x = 0; x < L; ++x) {
        const auto p = torus_point(std::int64_t(x), std::int64_t(w), L);
        lw[x + L * w] = omega->log_value(p);
        lv[x + L * w] = v->log_value(p);
      }
  }

  DominationReport rep;
  rep.n = n;
  rep.terms = terms.size();
  rep.dual_residual = dual.residual;
  rep.defect = -std::numeric_limits<double>::infinity();
  double measured = 0.0;
  for (std::size_t w = 0; w < L; ++w)
    for (std::size_t x = 0; x < L; ++x) {
      double rhs = 0.0, wrhs = 0.0;
      for (const auto& t : terms) {
        const auto y = (x + t.dx) % L + L * ((w + t.dw) % L);
        rhs += t.a * absF[y];
        if (omega) wrhs += t.a * std::exp(lv[t.dx + L * t.dw] + lw[y]) * absF[y];
      }
      const double lhs = std::abs(F0[x + L * w]);
      rep.lhs_max = std::max(rep.lhs_max, lhs);
      rep.defect = std::max(rep.defect, lhs - rhs);
      if (omega && lhs > 0.0 && wrhs > 0.0) measured = std::max(measured, std::exp(lw[x + L * w]) * lhs / wrhs);
    }
  if (omega) {
    rep.measured_constant = measured;
    rep.moderateness_constant = torus_moderateness(*omega, *v, L);
  }
  return rep;
}

}  // namespace tfa
