#include <catch_amalgamated.hpp>

#include <set>

#include "test_support.hpp"
#include "tfa/modulation.hpp"

using namespace tfa;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double inf = std::numeric_limits<double>::infinity();

ModSpec standard_mod(ExponentVector p, ExponentVector q, Flavor fl = Flavor::M) {
  return {OrderedBasis::standard(2), std::move(p), std::move(q), {}, fl, true};
}

SampledField gaussian_stft(const GridSpec& phase, double center = 0.0) {
  CorpusEntry g;
  g.id = "g";
  g.center = center;
  return stft_of(g, Window::gaussian(1, 1.0), phase);
}

}  // namespace

TEST_CASE("mod_norm examples") {
  const GridSpec box(OrderedBasis::standard(2), {8}, {-8, -8}, {7, 7});
  SECTION("Gaussian pair has unit M^2 norm") {
    CHECK_THAT(mod_norm(gaussian_stft(box), standard_mod({2.0}, {2.0})), WithinAbs(1.0, 1e-6));
  }
  SECTION("single exponential in M^{inf,2}") {
    TrigPolynomial f(OrderedBasis::from_vectors({{two_pi}}));
    f.set({1}, 1.0);
    const auto V = stft_trigpoly(f, Window::gaussian(1, 1.0), box);
    CHECK_THAT(mod_norm(V, standard_mod({inf}, {2.0})), WithinAbs(1.0, 1e-6));
    CHECK_THAT(mod_norm(V, standard_mod({inf}, {2.0}, Flavor::W)), WithinAbs(1.0, 1e-6));
  }
  SECTION("zero") {
    CHECK(mod_norm(SampledField::zeros(box, Codomain::phase_space), standard_mod({1.0}, {0.5})) == 0.0);
  }
  SECTION("small boxes are rejected") {
    const GridSpec small(OrderedBasis::standard(2), {8}, {-2, -2}, {1, 1});
    CHECK_THROWS_AS(mod_norm(gaussian_stft(small), standard_mod({2.0}, {2.0})), TruncationError);
    auto spec = standard_mod({2.0}, {2.0});
    spec.check_truncation = false;
    CHECK(mod_norm(gaussian_stft(small), spec) < 1.0);
  }
  SECTION("M and W agree when p = q") {
    const GridSpec wide_box(OrderedBasis::standard(2), {4}, {-14, -14}, {13, 13});
    const auto V = gaussian_stft(wide_box, 0.7);
    for (double p : {0.5, 1.0, 2.0})
      CHECK_THAT(mod_norm(V, standard_mod({p}, {p}, Flavor::W)), WithinRel(mod_norm(V, standard_mod({p}, {p})), 1e-12));
  }
}

TEST_CASE("mod_norm is a quasi-norm") {
  auto rng = testing::make_rng(71);
  const GridSpec g(OrderedBasis::standard(2), {3}, {-2, -2}, {2, 2});
  for (const auto& [p, q] : {std::pair{0.5, 2.0}, std::pair{1.0, inf}, std::pair{3.0, 0.75}})
    for (Flavor fl : {Flavor::M, Flavor::W}) {
      ModSpec spec{OrderedBasis::standard(2), {p}, {q}, Weight::polynomial(2, 1.0), fl, false};
      for (int t = 0; t < 20; ++t) {
        auto a = testing::random_field(rng, g), b = testing::random_field(rng, g);
        SampledField s = a, c = a;
        for (std::size_t i = 0; i < s.size(); ++i) {
          s.values[i] += b.values[i];
          c.values[i] *= cplx{0.0, -2.5};
        }
        const double r = std::min({1.0, p, q});
        CHECK(std::pow(mod_norm(s, spec), r) <=
              (std::pow(mod_norm(a, spec), r) + std::pow(mod_norm(b, spec), r)) * (1 + 1e-12));
        CHECK_THAT(mod_norm(c, spec), WithinRel(2.5 * mod_norm(a, spec), 1e-13));
      }
    }
}

TEST_CASE("M^{inf,q} does not depend on the configuration basis") {
  // Both grids place their x samples at the same points.
  const GridSpec unit(OrderedBasis::standard(2), {4, 4}, {-14, -14}, {13, 13});
  const GridSpec wide(OrderedBasis::from_vectors({{2.0, 0.0}, {0.0, 1.0}}), {8, 4}, {-7, -14}, {6, 13});
  const auto a = gaussian_stft(unit, 0.4), b = gaussian_stft(wide, 0.4);
  for (double q : {0.5, 1.0, 2.0}) {
    const ModSpec su{unit.basis(), {inf}, {q}, {}, Flavor::M, true};
    const ModSpec sw{wide.basis(), {inf}, {q}, {}, Flavor::M, true};
    CHECK_THAT(mod_norm(b, sw), WithinRel(mod_norm(a, su), 1e-9));
  }
}

TEST_CASE("corpus") {
  const auto c = standard_corpus();
  CHECK(c.size() == 20);
  std::set<std::string> ids;
  std::size_t trig = 0;
  for (const auto& e : c) {
    ids.insert(e.id);
    if (!e.decays()) ++trig;
  }
  CHECK(ids.size() == 20);
  CHECK(trig == 6);
  const auto again = standard_corpus();
  for (std::size_t k = 0; k < c.size(); ++k) CHECK(c[k](0.37) == again[k](0.37));

  // L^2 normalization of the decaying entries.
  const GridSpec g(OrderedBasis::standard(1), {32}, {-30}, {29});
  for (const auto& e : c) {
    if (!e.decays()) continue;
    auto f = sample(g, [&](const Vec& t) { return cplx{std::norm(e(t(0)))}; });
    CHECK_THAT(quadrature(f).real(), WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("equivalence study") {
  const double a = std::sqrt(two_pi);
  const GridSpec phase(OrderedBasis::scaled_standard(2, a), {4}, {-10, -10}, {9, 9});
  const auto w = Window::gaussian(1, 1.0);

  SECTION("single Gaussian") {
    const auto corpus = std::vector<CorpusEntry>{standard_corpus().front()};
    const auto rep = equivalence_study(corpus, {phase, {2.0, 2.0}, {}, {1.0}, 16}, w, w);
    REQUIRE(rep.rows.size() == 1);
    CHECK(std::isfinite(rep.rows[0].wiener[0]));
    CHECK(rep.rows[0].ratio[0] > 0.0);
    CHECK(rep.rows[0].ratio[0] <= 1.0);
  }
  SECTION("one-sided bound over the corpus") {
    for (const ExponentVector& p : {ExponentVector{0.5, 0.5}, ExponentVector{1.0, 2.0}, ExponentVector{inf, 1.0}}) {
      const auto rep = equivalence_study(standard_corpus(), {phase, p, {}, {0.5, 1.0}, 16}, w, w);
      for (const auto& row : rep.rows)
        for (double r : row.ratio) {
          CHECK(r > 0.0);
          CHECK(r <= 1.0 + 1e-9);
        }
      for (double s : rep.spread) CHECK(std::isfinite(s));
    }
  }
  SECTION("lattice translates share their ratios") {
    std::vector<CorpusEntry> shifted;
    for (int k = -2; k <= 2; ++k) {
      CorpusEntry e;
      e.id = "shift_" + std::to_string(k);
      e.sigma = 1.3;
      e.center = k * a;
      shifted.push_back(e);
    }
    const auto rep = equivalence_study(shifted, {phase, {1.0, 2.0}, {}, {0.5, 1.0}, 16}, w, w);
    for (const auto& row : rep.rows)
      for (std::size_t k = 0; k < row.ratio.size(); ++k)
        CHECK_THAT(row.ratio[k], WithinRel(rep.rows[0].ratio[k], 1e-9));
  }
  SECTION("empty corpus") {
    CHECK_THROWS_AS(equivalence_study({}, {phase, {1.0, 1.0}, {}, {1.0}, 16}, w, w), InvalidArgument);
  }
}
