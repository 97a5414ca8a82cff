#pragma once

// The fixed 20-entry test corpus on R: Gaussians, Hermite functions, chirped
// Gaussians and random trigonometric polynomials (seed 0x5EED).

#include <cmath>
#include <string>
#include <vector>

#include "tfa/stft.hpp"
#include "tfa/trigpoly.hpp"
#include "tfa/window.hpp"

namespace tfa {

struct CorpusEntry {
  enum class Kind { gaussian, hermite, chirp, trig };
  std::string id;
  Kind kind = Kind::gaussian;
  double sigma = 1.0;
  double center = 0.0;
  double chirp = 0.0;       // f = g(t - c) e^{i chirp (t - c)^2 / 2} e^{i beta t}
  double modulation = 0.0;  // beta
  int order = 0;
  TrigPolynomial poly;

  bool decays() const noexcept { return kind != Kind::trig; }

  cplx operator()(double t) const {
    if (kind == Kind::trig) {
      Vec x(1);
      x(0) = t;
      return poly(x);
    }
    const double s = t - center;
    const double g = hermite_function(kind == Kind::hermite ? order : 0, s / sigma) / std::sqrt(sigma);
    return g * std::polar(1.0, 0.5 * chirp * s * s + modulation * t);
  }

  // |f(t)| is negligible (< 1e-17 relative) for |t - center| beyond this.
  double radius() const { return sigma * (std::sqrt(2.0 * order + 1.0) + 9.0); }
};

inline std::vector<CorpusEntry> standard_corpus(std::uint64_t seed = 0x5EED) {
  using K = CorpusEntry::Kind;
  std::vector<CorpusEntry> c;
  for (double s : {0.5, 1.0, 2.0})
    for (double x0 : {0.0, 1.5}) {
      CorpusEntry e;
      e.id = "gauss_s" + format_double(s) + "_c" + format_double(x0);
      e.sigma = s;
      e.center = x0;
      c.push_back(e);
    }
  for (int n = 0; n < 4; ++n) {
    CorpusEntry e;
    e.id = "hermite_" + std::to_string(n);
    e.kind = K::hermite;
    e.order = n;
    c.push_back(e);
  }
  const double chirps[4][4] = {{1.0, 0.0, 0.25, 0.0}, {1.0, 0.0, 0.5, 0.0}, {1.5, -1.0, 0.25, 1.0}, {1.5, 1.0, 0.5, -1.0}};
  for (const auto& p : chirps) {
    CorpusEntry e;
    e.kind = K::chirp;
    e.sigma = p[0];
    e.center = p[1];
    e.chirp = p[2];
    e.modulation = p[3];
    e.id = "chirp_s" + format_double(p[0]) + "_c" + format_double(p[1]) + "_k" + format_double(p[2]) + "_b" +
           format_double(p[3]);
    c.push_back(e);
  }
  std::mt19937_64 rng(seed);
  for (int k = 0; k < 6; ++k) {
    CorpusEntry e;
    e.id = "trig_" + std::to_string(k);
    e.kind = K::trig;
    e.poly = random_trig_polynomial(rng, OrderedBasis::from_vectors({{two_pi}}), 5, 3);
    c.push_back(e);
  }
  return c;
}

// V_phi f on a phase-space grid. Trigonometric polynomials use the closed
// form; the rest are sampled with `samples_per_unit` points per unit length
// over the support that the window can reach from the grid.
inline SampledField stft_of(const CorpusEntry& f, const Window& w, const GridSpec& phase,
                            std::size_t samples_per_unit = 16) {
  if (phase.dim() != 2) throw InvalidArgument("corpus entries live on R; the phase grid must be 2-dimensional");
  if (!f.decays()) return stft_trigpoly(f.poly, w, phase);
  const auto [gx_lo, gx_hi] = [&] {
    const double a = phase.basis().matrix()(0, 0);
    const double u = a * (double(phase.lo()[0]) + phase.offset()[0]);
    const double v = a * (double(phase.hi()[0]) + 1.0 + phase.offset()[0]);
    return std::pair{std::min(u, v), std::max(u, v)};
  }();
  const double reach = w.support_radius();
  const double lo = std::max(gx_lo - reach, f.center - f.radius());
  const double hi = std::min(gx_hi + reach, f.center + f.radius());
  if (!(lo < hi)) return make_stft_field(phase, w, f.id);
  const auto a = std::int64_t(std::floor(lo)), b = std::int64_t(std::ceil(hi));
  const GridSpec sg(OrderedBasis::standard(1), {samples_per_unit}, {a}, {b - 1});
  auto s = sample(sg, [&](const Vec& t) { return f(t(0)); });
  s.metadata["source"] = f.id;
  return stft(s, w, phase);
}

}  // namespace tfa
