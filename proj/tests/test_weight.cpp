#include <catch_amalgamated.hpp>

#include "test_support.hpp"
#include "tfa/weight.hpp"

using namespace tfa;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<Weight> family(std::size_t d) {
  std::vector<Weight> out{Weight::constant(d),       Weight::polynomial(d, 2.0),
                          Weight::polynomial(d, -1.5), Weight::exponential(d, 1.0),
                          Weight::exponential(d, 0.5)};
  out.push_back(Weight::product({Weight::polynomial(d, 1.0), Weight::exponential(d, 0.25)}));
  if (d == 2)
    out.push_back(Weight::separable({Weight::polynomial(1, 3.0), Weight::exponential(1, 1.0)}));
  return out;
}

}  // namespace

TEST_CASE("theta_rho exponent and values") {
  CHECK(theta_rho_exponent(1.0, 1, false) == 0.0);
  CHECK(theta_rho_exponent(0.5, 1, false) == 2.0);
  CHECK(theta_rho_exponent(0.5, 1, true) == 3.0);
  CHECK(theta_rho_exponent(1.0, 1, true) == 1.0);
  CHECK_THROWS_AS(theta_rho_exponent(0.0, 1, false), InvalidArgument);
  CHECK_THROWS_AS(theta_rho_exponent(1.5, 1, false), InvalidArgument);

  const auto one = Weight::constant(2);
  CHECK(theta_rho(one, 1.0, 1, false)({0.3, -2.0}) == 1.0);
  CHECK_THAT(theta_rho(one, 0.5, 1, false)({1.0, 1.0}), WithinRel(3.0, 1e-14));
  CHECK_THAT(theta_rho(Weight::exponential(2, 1.0), 0.5, 1, true)({0.0, 0.0}), WithinAbs(1.0, 1e-15));
  // Oracle: e^{|z|} (1 + |z|^2)^{3/2} at z = (1, 2).
  const double want = std::exp(std::sqrt(5.0)) * std::pow(6.0, 1.5);
  CHECK_THAT(theta_rho(Weight::exponential(2, 1.0), 0.5, 1, true)({1.0, 2.0}), WithinRel(want, 1e-13));
}

TEST_CASE("theta_rho with rho = 0 is pointwise the identity") {
  auto rng = testing::make_rng(3);
  for (const auto& v : family(2)) {
    const auto t = theta_rho(v, 1.0, 1, false);
    for (int i = 0; i < 200; ++i) {
      const double x = testing::uniform(rng, -10, 10), y = testing::uniform(rng, -10, 10);
      CHECK(t({x, y}) == v({x, y}));
    }
  }
}

TEST_CASE("certify_moderate examples") {
  SECTION("constant weights") {
    const auto c = certify_moderate(Weight::constant(1), Weight::constant(1), 5.0, 21);
    CHECK(c.constant == 1.0);
  }
  SECTION("Peetre: <x+y> <= sqrt 2 <x> <y>") {
    const auto w = Weight::polynomial(1, 1.0);
    const auto c = certify_moderate(w, w, 20.0, 81);
    CHECK(c.constant <= std::sqrt(2.0) + 1e-12);
    CHECK(c.constant >= 1.0);
    // Grid oracle computed directly.
    double best = 0.0;
    for (int i = 0; i < 81; ++i)
      for (int j = 0; j < 81; ++j) {
        const double x = -20.0 + 40.0 * i / 80.0, y = -20.0 + 40.0 * j / 80.0;
        best = std::max(best, std::sqrt(1 + (x + y) * (x + y)) /
                                  (std::sqrt(1 + x * x) * std::sqrt(1 + y * y)));
      }
    CHECK_THAT(c.constant, WithinRel(best, 1e-12));
  }
  SECTION("exponential weights are submultiplicative with constant 1") {
    const auto w = Weight::exponential(1, 1.0);
    CHECK_THAT(certify_moderate(w, w, 10.0, 41).constant, WithinAbs(1.0, 1e-12));
  }
  SECTION("certificates are reproducible bit for bit") {
    const auto w = Weight::product({Weight::polynomial(2, 1.5), Weight::exponential(2, 0.3)});
    const auto a = certify_moderate(w, w, 4.0, 9);
    const auto b = certify_moderate(w, w, 4.0, 9);
    CHECK(a.constant == b.constant);
    CHECK(a.lower_constant == b.lower_constant);
  }
  SECTION("preconditions") {
    CHECK_THROWS_AS(certify_moderate(Weight::constant(1), Weight::constant(2), 1.0, 5), InvalidArgument);
    CHECK_THROWS_AS(certify_moderate(Weight::constant(1), Weight::constant(1), 1.0, 2), InvalidArgument);
    CHECK_THROWS_AS(certify_moderate(Weight::exponential(1, 5.0), Weight::exponential(1, 5.0), 200.0, 5),
                    RangeError);
  }
}

TEST_CASE("submultiplicative closure and evenness over the family") {
  auto rng = testing::make_rng(11);
  for (std::size_t d : {1u, 2u}) {
    for (const auto& v : family(d)) {
      if (v.parameter() < 0) continue;
      const auto c = certify_moderate(v, v, 5.0, d == 1 ? 41 : 9);
      CHECK(std::isfinite(c.constant));
      for (int i = 0; i < 1000; ++i) {
        std::vector<double> x(d), nx(d);
        for (std::size_t k = 0; k < d; ++k) {
          x[k] = testing::uniform(rng, -10, 10);
          nx[k] = -x[k];
        }
        CHECK(v(x) == v(nx));
      }
    }
  }
}

TEST_CASE("moderateness consequences hold with the measured envelope companion") {
  for (const auto& w : family(1)) {
    const double r = exp_envelope(w, 10.0);
    const auto v = Weight::exponential(1, r);
    const auto c = certify_moderate(w, v, 10.0, 101);
    CHECK(std::isfinite(c.constant));
    CHECK(c.lower_constant <= c.constant * (1 + 1e-12));
    CHECK(c.upper_constant <= c.constant * (1 + 1e-12));
  }
}

TEST_CASE("exp_envelope examples") {
  CHECK(exp_envelope(Weight::constant(1), 10.0) == 0.0);
  CHECK_THAT(exp_envelope(Weight::exponential(1, 2.0), 10.0), WithinAbs(2.0, 1e-6));
  // Oracle: grid maximum of 3 log<x>/|x| over 1 <= |x| <= R on the same grid.
  const std::size_t n = 2001;
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = -10.0 + 20.0 * double(i) / double(n - 1);
    if (std::abs(x) < 1.0) continue;
    best = std::max(best, 3.0 * 0.5 * std::log1p(x * x) / std::abs(x));
  }
  CHECK_THAT(exp_envelope(Weight::polynomial(1, 3.0), 10.0), WithinRel(best, 1e-12));
}

TEST_CASE("inverse weights evaluate without overflow and invert exactly") {
  auto rng = testing::make_rng(5);
  for (double s : {-5.0, 5.0}) {
    for (const auto& w : {Weight::polynomial(2, s), Weight::exponential(2, s)}) {
      for (int i = 0; i < 100; ++i) {
        const double x = testing::uniform(rng, -35, 35), y = testing::uniform(rng, -35, 35);
        const double a = w({x, y}), b = w.inverse()({x, y});
        CHECK(a > 0.0);
        CHECK(b > 0.0);
        CHECK_THAT(a * b, WithinRel(1.0, 1e-12));
      }
    }
  }
}

TEST_CASE("weights restricted to axes read only those coordinates") {
  const auto w0 = Weight::polynomial(1, 2.0);
  const auto w = w0.on_axes(2, {1});
  CHECK(w({100.0, 2.0}) == w0({2.0}));
  CHECK_THAT(w({-3.0, 2.0}), WithinRel(5.0, 1e-14));
}

TEST_CASE("weight JSON round trip and validation") {
  const auto j = nlohmann::json::parse(R"({"form": "product", "dim": 2, "params": [
      {"form": "polynomial", "params": [1.5], "dim": 2},
      {"form": "exponential", "params": [0.5], "dim": 2}]})");
  const auto w = parse_weight(j);
  CHECK(w == parse_weight(weight_to_json(w)));
  CHECK_THAT(w({3.0, 4.0}), WithinRel(std::pow(26.0, 0.75) * std::exp(2.5), 1e-13));
  CHECK_THROWS_AS(parse_weight(nlohmann::json::parse(R"({"form": "gaussian", "dim": 1})"), "/w"),
                  ValidationError);
  CHECK_THROWS_WITH(parse_weight(nlohmann::json::parse(R"({"form": "gaussian", "dim": 1})"), "/w"),
                    Catch::Matchers::ContainsSubstring("/w/form"));
  const auto c = parse_weight(nlohmann::json::parse(R"({"form": "constant", "dim": 4, "axes": [2, 3]})"));
  CHECK(c({1, 2, 3, 4}) == 1.0);
}
