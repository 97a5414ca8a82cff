#pragma once

// Wiener amalgam quasi-norms W^r_E(omega_0, l^p_E): local L^r norms over the
// cells j + kappa(E), weighted by omega_0(j) and reduced by a discrete mixed
// norm over Lambda_E. Two-variable variants act on phase-space fields with the
// configuration axes first.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "tfa/errors.hpp"
#include "tfa/exponent.hpp"
#include "tfa/grid.hpp"
#include "tfa/mixed_norm.hpp"
#include "tfa/weight.hpp"

namespace tfa {

struct GlobalSpec {
  ExponentVector exponents;
  std::optional<Weight> weight;          // omega_0 on the lattice points
  std::vector<std::size_t> permutation;  // reduction order, identity when empty
};

struct WienerSpec {
  ExponentVector local;  // r
  OrderedBasis cells;    // E
  GlobalSpec global;
};

// Re-expresses the grid in the coordinates of E when every vector of E is an
// integer multiple n_k of the grid's k-th basis vector and the grid's cell
// ranges tile whole E cells. Sample order is unchanged.
inline GridSpec align_to_cells(const GridSpec& g, const OrderedBasis& e) {
  const auto d = g.dim();
  if (e.dim() != d) throw InvalidArgument("cell basis and grid dimensions differ");
  std::vector<std::size_t> m(d);
  IntVec lo(d), hi(d);
  std::vector<double> off(d);
  for (std::size_t k = 0; k < d; ++k) {
    const Vec gk = g.basis().vector(k), ek = e.vector(k);
    const double n = ek.dot(gk) / gk.squaredNorm();
    const double nr = std::round(n);
    if (nr < 1.0 || (ek - nr * gk).norm() > 1e-12 * ek.norm() || std::abs(n - nr) > 1e-9)
      throw ResolutionError("grid axis " + std::to_string(k) + " is not commensurate with the cell basis");
    const auto ni = std::int64_t(nr);
    auto floordiv = [](std::int64_t a, std::int64_t b) { return a >= 0 ? a / b : -((-a + b - 1) / b); };
    if (floordiv(g.lo()[k], ni) * ni != g.lo()[k] || floordiv(g.hi()[k] + 1, ni) * ni != g.hi()[k] + 1)
      throw ResolutionError("grid cells on axis " + std::to_string(k) + " do not tile whole cells of E");
    m[k] = g.samples_per_cell()[k] * std::size_t(ni);
    lo[k] = floordiv(g.lo()[k], ni);
    hi[k] = floordiv(g.hi()[k] + 1, ni) - 1;
    off[k] = g.offset()[k] / nr;
  }
  return GridSpec(e, m, lo, hi, off);
}

// a(j) = ||f||_{L^r_E(j + kappa(E))} for every covered cell j.
inline LatticeSequence local_norms(const SampledField& f, const OrderedBasis& e, const ExponentVector& r) {
  const GridSpec g = align_to_cells(f.grid, e);
  const auto d = g.dim();
  if (r.size() != d) throw InvalidArgument("local exponent count does not match dimension");
  auto a = LatticeSequence::zeros(g.lo(), g.cell_shape());
  std::vector<double> steps(d);
  for (std::size_t k = 0; k < d; ++k) steps[k] = g.step(k);
  for_each_cell(g, [&](std::size_t c, const IntVec&, const std::vector<std::size_t>& members) {
    NonNegArray cell{std::vector<double>(members.size()), g.samples_per_cell()};
    for (std::size_t s = 0; s < members.size(); ++s) cell.values[s] = std::abs(f.values[members[s]]);
    a.values[c] = iterated_norm(std::move(cell), r, steps);
  });
  return a;
}

inline double wiener_norm(const SampledField& f, const WienerSpec& spec) {
  const auto a = local_norms(f, spec.cells, spec.local);
  return discrete_mixed_norm(a, spec.global.exponents, spec.global.weight, spec.cells, spec.global.permutation);
}

// Configuration (first d axes) and frequency (last d axes) halves of a
// block-diagonal phase-space grid.
struct PhaseGrids {
  GridSpec x, xi;
};

inline PhaseGrids split_phase_grid(const GridSpec& g) {
  const auto d = g.dim() / 2;
  if (g.dim() != 2 * d || d == 0) throw InvalidArgument("phase-space grid must have even dimension");
  const Mat& t = g.basis().matrix();
  const auto n = Eigen::Index(d);
  if (t.topRightCorner(n, n).cwiseAbs().maxCoeff() > 0.0 || t.bottomLeftCorner(n, n).cwiseAbs().maxCoeff() > 0.0)
    throw InvalidArgument("phase-space grid basis must split into configuration and frequency blocks");
  auto half = [&](std::size_t off) {
    const auto b = std::ptrdiff_t(off), e = std::ptrdiff_t(off + d);
    return GridSpec(OrderedBasis(Mat(t.block(Eigen::Index(off), Eigen::Index(off), n, n))),
                    std::vector<std::size_t>(g.samples_per_cell().begin() + b, g.samples_per_cell().begin() + e),
                    IntVec(g.lo().begin() + b, g.lo().begin() + e), IntVec(g.hi().begin() + b, g.hi().begin() + e),
                    std::vector<double>(g.offset().begin() + b, g.offset().begin() + e));
  };
  return {half(0), half(d)};
}

// Two-variable spec: the Wiener part acts on the configuration variable, the
// companion norm B_0 on the frequency variable (in the coordinates of the
// frequency half of the grid). The weight omega on R^{2d} multiplies F first.
struct TwoVariableSpec {
  WienerSpec wiener;
  MixedNormSpec companion;
  std::optional<Weight> omega;
};

namespace detail {

inline SampledField weighted(const SampledField& F, const std::optional<Weight>& omega) {
  return omega ? weigh(F, *omega) : F;
}

inline void check_companion(const GridSpec& xi, const MixedNormSpec& c) {
  if (c.exponents.size() != xi.dim())
    throw InvalidArgument("companion exponents must match the frequency dimension");
  check_grid_basis(xi, c.basis);
}

}  // namespace detail

// ||phi||_{B_0} with phi(xi) = ||F_omega(., xi)||_{W^r_E(1, l^p_E)}.
inline double wiener_var1(const SampledField& F, const TwoVariableSpec& spec) {
  const auto [gx, gxi] = split_phase_grid(F.grid);
  detail::check_companion(gxi, spec.companion);
  const SampledField Fw = detail::weighted(F, spec.omega);
  const std::size_t nx = gx.size();
  SampledField slice = SampledField::zeros(gx);
  SampledField phi = SampledField::zeros(gxi);
  for (std::size_t k = 0; k < gxi.size(); ++k) {
    std::copy(Fw.values.begin() + std::ptrdiff_t(k * nx), Fw.values.begin() + std::ptrdiff_t((k + 1) * nx),
              slice.values.begin());
    phi.values[k] = wiener_norm(slice, spec.wiener);
  }
  MixedNormSpec c = spec.companion;
  c.weight.reset();
  return mixed_norm(phi, c);
}

// ||psi||_{W^r_E(1, l^p_E)} with psi(x) = ||F_omega(x, .)||_{B_0}.
inline double wiener_var2(const SampledField& F, const TwoVariableSpec& spec) {
  const auto [gx, gxi] = split_phase_grid(F.grid);
  detail::check_companion(gxi, spec.companion);
  const SampledField Fw = detail::weighted(F, spec.omega);
  const std::size_t nx = gx.size();
  SampledField slice = SampledField::zeros(gxi);
  SampledField psi = SampledField::zeros(gx);
  MixedNormSpec c = spec.companion;
  c.weight.reset();
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t k = 0; k < gxi.size(); ++k) slice.values[k] = Fw.values[i + nx * k];
    psi.values[i] = mixed_norm(slice, c);
  }
  return wiener_norm(psi, spec.wiener);
}

struct ScriptNorms {
  double m = 0.0;  // script M^r_E(omega, B_0)
  double w = 0.0;  // script W^r_E(omega, B_0)
};

// Both values from one STFT field, global component l^infinity.
inline ScriptNorms script_norms(const SampledField& F, TwoVariableSpec spec) {
  spec.wiener.global = GlobalSpec{ExponentVector::uniform(Exponent::infinity(), spec.wiener.cells.dim()), {}, {}};
  return {wiener_var1(F, spec), wiener_var2(F, spec)};
}

struct ChainNorms {
  double left = 0.0, middle = 0.0, right = 0.0;
  double ratio_lm() const { return middle / left; }   // first inequality: <= 1
  double ratio_mr() const { return right / middle; }  // second inequality: measured constant
};

struct EmbeddingReport {
  ChainNorms chain1, chain2;
};

struct EmbeddingSpec {
  ExponentVector p, q, r;  // each of length d
  double r1 = 1.0, r2 = 1.0;
  std::optional<Weight> omega;
};

// Hypotheses r1 <= min(p, q, r) and r2 <= min(q).
inline void check_embedding_hypotheses(const EmbeddingSpec& s) {
  auto fail = [](const std::string& what) { throw PreconditionError("embedding hypothesis violated: " + what); };
  if (!(s.r1 > 0.0) || !(s.r2 > 0.0)) fail("r1 and r2 must be positive");
  if (s.r1 > s.p.min()) fail("r1 <= min(p) fails (r1 = " + format_double(s.r1) + ")");
  if (s.r1 > s.q.min()) fail("r1 <= min(q) fails (r1 = " + format_double(s.r1) + ")");
  if (s.r1 > s.r.min()) fail("r1 <= min(r) fails (r1 = " + format_double(s.r1) + ")");
  if (s.r2 > s.q.min()) fail("r2 <= min(q) fails (r2 = " + format_double(s.r2) + ")");
}

// Norms of both embedding chains for F on a phase-space grid whose cells are
// E_1 x E_2 (x axes first). Chain 1 reduces x before xi, chain 2 xi before x.
inline EmbeddingReport embedding_check_rel1(const SampledField& F, const EmbeddingSpec& s) {
  check_embedding_hypotheses(s);
  const auto [gx, gxi] = split_phase_grid(F.grid);
  const auto d = gx.dim();
  if (s.p.size() != d || s.q.size() != d || s.r.size() != d)
    throw InvalidArgument("chain exponents must have length d");
  const SampledField Fw = detail::weighted(F, s.omega);
  const OrderedBasis& e = F.grid.basis();
  const ExponentVector inf_d = ExponentVector::uniform(Exponent::infinity(), d);
  const ExponentVector pq = s.p.concat(s.q);
  std::vector<std::size_t> xi_first(2 * d);
  for (std::size_t k = 0; k < d; ++k) {
    xi_first[k] = d + k;
    xi_first[d + k] = k;
  }
  MixedNormSpec lq;
  lq.basis = gxi.basis();
  lq.exponents = s.q;

  EmbeddingReport rep;
  rep.chain1.left = wiener_norm(Fw, {s.r.concat(inf_d), e, {pq, {}, {}}});
  rep.chain1.middle = wiener_var1(Fw, {{s.r, gx.basis(), {s.p, {}, {}}}, lq, {}});
  rep.chain1.right = wiener_norm(Fw, {ExponentVector::uniform(Exponent(s.r1), 2 * d), e, {pq, {}, {}}});

  rep.chain2.left = wiener_norm(Fw, {ExponentVector::uniform(Exponent::infinity(), 2 * d), e, {pq, {}, xi_first}});
  rep.chain2.middle =
      wiener_var2(Fw, {{ExponentVector::uniform(Exponent(s.r2), d), gx.basis(), {s.p, {}, {}}}, lq, {}});
  rep.chain2.right = wiener_norm(Fw, {ExponentVector::uniform(Exponent(s.r2), 2 * d), e, {pq, {}, xi_first}});
  return rep;
}

}  // namespace tfa
