#pragma once

// Modulation-space quasi-norms M^{p,q}_{E,(omega)} and W^{p,q}_{E,(omega)}
// evaluated on STFT fields, and the window/local-exponent equivalence study.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tfa/corpus.hpp"
#include "tfa/errors.hpp"
#include "tfa/mixed_norm.hpp"
#include "tfa/stft.hpp"
#include "tfa/wiener.hpp"

namespace tfa {

enum class Flavor { M, W };

struct ModSpec {
  OrderedBasis basis;  // block-diagonal E_1 x E_2 on R^{2d}
  ExponentVector p, q;
  std::optional<Weight> omega;
  Flavor flavor = Flavor::M;
  bool check_truncation = true;
};

// Boundary share above which a truncated box is rejected.
inline constexpr double truncation_tolerance = 1e-8;

namespace detail {

inline MixedNormSpec mod_mixed_spec(const ModSpec& s, std::size_t d) {
  MixedNormSpec m;
  m.basis = s.basis;
  m.exponents = s.p.concat(s.q);
  m.weight = s.omega;
  if (s.flavor == Flavor::W) {
    m.permutation.resize(2 * d);
    for (std::size_t k = 0; k < d; ++k) {
      m.permutation[k] = d + k;
      m.permutation[d + k] = k;
    }
  }
  return m;
}

}  // namespace detail

// Relative drop of a grid norm when the outermost cell layer is removed.
inline double boundary_share(const SampledField& F, const MixedNormSpec& spec, double full) {
  const auto& g = F.grid;
  CellRange inner{g.lo(), g.hi()};
  for (std::size_t k = 0; k < g.dim(); ++k) {
    if (g.cells(k) < 3) return std::numeric_limits<double>::infinity();
    ++inner.lo[k];
    --inner.hi[k];
  }
  if (full == 0.0) return 0.0;
  MixedNormSpec s = spec;
  s.region = inner;
  return (full - mixed_norm(F, s)) / full;
}

inline double mod_norm(const SampledField& F, const ModSpec& spec) {
  const auto d = F.grid.dim() / 2;
  split_phase_grid(F.grid);
  if (spec.p.size() != d || spec.q.size() != d) throw InvalidArgument("exponent dimensions must equal d");
  if (spec.omega && spec.omega->dim() != 2 * d) throw InvalidArgument("weight must live on R^{2d}");
  const auto m = detail::mod_mixed_spec(spec, d);
  const double value = mixed_norm(F, m);
  if (spec.check_truncation) {
    const double share = boundary_share(F, m, value);
    if (share > truncation_tolerance)
      throw TruncationError("truncation box too small: the boundary cell layer carries " + format_double(share) +
                            " of the norm");
  }
  return value;
}

struct EquivalenceRow {
  std::string id;
  double lebesgue = 0.0;       // ||V_{phi_1} f||_{L^p_{E,(omega)}}
  std::vector<double> wiener;  // ||V_{phi_2} f||_{W^r_E(omega, l^p_E)}, one per r
  double wiener_inf = 0.0;     // r = infinity
  std::vector<double> ratio;   // wiener[k] / wiener_inf
};

struct EquivalenceReport {
  std::vector<double> rs;
  std::vector<EquivalenceRow> rows;
  std::vector<double> spread;  // max/min over the corpus of ratio[k]
  double lebesgue_spread = 0.0;  // max/min of lebesgue / wiener_inf
};

struct EquivalenceSpec {
  GridSpec phase;        // cells E on R^2
  ExponentVector p;      // (p_x, p_xi)
  std::optional<Weight> omega;
  std::vector<double> rs;
  std::size_t samples_per_unit = 16;
};

inline double spread_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi / *lo;
}

inline EquivalenceReport equivalence_study(const std::vector<CorpusEntry>& corpus, const EquivalenceSpec& spec,
                                           const Window& phi1, const Window& phi2) {
  if (corpus.empty()) throw InvalidArgument("empty corpus");
  if (spec.p.size() != 2) throw InvalidArgument("equivalence study exponents must be (p_x, p_xi)");
  for (double r : spec.rs)
    if (!(r > 0.0)) throw InvalidArgument("local exponents must lie in (0, inf]");
  const OrderedBasis& e = spec.phase.basis();
  ModSpec ms{e, ExponentVector({spec.p[0]}), ExponentVector({spec.p[1]}), spec.omega, Flavor::M, true};
  const std::optional<Weight> lattice_weight = spec.omega;
  auto wiener_at = [&](const SampledField& F, double r) {
    return wiener_norm(F, {ExponentVector::uniform(Exponent(r), 2), e, {spec.p, lattice_weight, {}}});
  };

  EquivalenceReport rep;
  rep.rs = spec.rs;
  std::vector<std::vector<double>> cols(spec.rs.size());
  std::vector<double> leb;
  for (const auto& f : corpus) {
    const auto F1 = stft_of(f, phi1, spec.phase, spec.samples_per_unit);
    const auto F2 = &phi1 == &phi2 ? F1 : stft_of(f, phi2, spec.phase, spec.samples_per_unit);
    ms.check_truncation = f.decays();
    EquivalenceRow row;
    row.id = f.id;
    row.lebesgue = mod_norm(F1, ms);
    row.wiener_inf = wiener_at(F2, std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < spec.rs.size(); ++k) {
      row.wiener.push_back(wiener_at(F2, spec.rs[k]));
      row.ratio.push_back(row.wiener.back() / row.wiener_inf);
      cols[k].push_back(row.ratio.back());
    }
    leb.push_back(row.lebesgue / row.wiener_inf);
    rep.rows.push_back(std::move(row));
  }
  for (const auto& c : cols) rep.spread.push_back(spread_of(c));
  rep.lebesgue_spread = spread_of(leb);
  return rep;
}

}  // namespace tfa
