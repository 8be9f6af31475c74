#include <doctest.h>

#include <random>

#include "tbgeom/weights.hpp"

using namespace tbgeom;
using doctest::Approx;

TEST_CASE("derived coefficients of the classical metrics") {
  SUBCASE("sasaki") {
    auto w = named_family("sasaki");
    for (double t : {0.0, 0.3, 2.0}) {
      auto d = derived_coeffs(w, t);
      CHECK(d.L == 0.0);
      CHECK(d.M == 0.0);
      CHECK(d.N == 0.0);
      CHECK(d.F1 == 0.0);
      CHECK(d.F2 == 0.0);
      CHECK(d.F3 == 0.0);
      CHECK(std::abs(d.A_coef) < 1e-15);
      CHECK(std::abs(d.B_coef) < 1e-15);
      CHECK(std::abs(d.lee_coef) < 1e-15);
    }
  }
  SUBCASE("cheeger-gromoll at t = 1/2") {
    auto d = derived_coeffs(named_family("cheeger_gromoll"), 0.5);
    CHECK(d.L == Approx(-0.5).epsilon(1e-14));
    CHECK(d.M == Approx(0.75).epsilon(1e-14));
    CHECK(d.N == Approx(0.25).epsilon(1e-14));
    CHECK(d.F1 == Approx(0.125).epsilon(1e-14));
    CHECK(d.F2 == Approx(-0.875).epsilon(1e-14));
    CHECK(d.F3 == Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("cheeger-gromoll lee coefficient at t = 3/2") {
    // s = √(1+2t) = 2: −(1/s² + 1/(1+s))
    auto d = derived_coeffs(named_family("cheeger_gromoll"), 1.5);
    CHECK(d.lee_coef == Approx(-7.0 / 12.0).epsilon(1e-14));
  }
  SUBCASE("g1 is curvature free") {
    auto w = named_family("g1");
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.0, 5.0);
    for (int i = 0; i < 20; ++i) {
      const double t = U(rng), r = std::sqrt(1 + 2 * t);
      auto d = derived_coeffs(w, t);
      CHECK(std::abs(d.F1) < 1e-12);
      CHECK(std::abs(d.F2) < 1e-12);
      CHECK(std::abs(d.F3) < 1e-12);
      CHECK(d.L == Approx(1 / (1 + r)).epsilon(1e-13));
      CHECK(d.M == Approx(1 / (1 + 2 * t + r)).epsilon(1e-13));
      CHECK(d.N == Approx(-1 / ((1 + 2 * t) * (1 + r))).epsilon(1e-13));
    }
  }
}

TEST_CASE("A and B near the zero section") {
  const double a = 0.7, b = -0.2;
  auto exact = [&](double t) {
    const double s = a + 2 * b * t;
    return std::pair{(1 / std::sqrt(a) - 1 / std::sqrt(s)) / (2 * t), (std::sqrt(a) - std::sqrt(s)) / (2 * t)};
  };
  auto below = ab_coefficients(-1, 0.999e-6, a, b);
  auto above = ab_coefficients(-1, 1.001e-6, a, b);
  CHECK(std::abs(below.first - above.first) < 1e-8);
  CHECK(std::abs(below.second - above.second) < 1e-8);
  auto at1e3 = exact(1e-3);
  auto series = ab_coefficients(-1, 0.0, a, b);
  CHECK(std::abs(series.first - at1e3.first) < 1e-2);
  CHECK(std::abs(series.second - at1e3.second) < 1e-2);
  CHECK_THROWS_AS(ab_coefficients(1, 0.0, a, b), DomainError);
}

TEST_CASE("almost Kähler completion") {
  SUBCASE("constant a gives Sasaki") {
    auto w = almost_kahler_complete(UniFn::constant(1.0), -1);
    for (double t : {0.0, 0.5, 4.0}) CHECK(w.b(t) == 0.0);
  }
  SUBCASE("a = 1 + t") {
    auto w = almost_kahler_complete(UniFn::make([](auto t) { return 1.0 + t; }), -1);
    CHECK(w.b(1.0) == Approx(1.25).epsilon(1e-15));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 5.0);
    for (int i = 0; i < 50; ++i) CHECK(std::abs(derived_coeffs(w, U(rng)).lee_coef) <= 1e-10);
    CHECK(std::abs(derived_coeffs(w, 1.0).lee_coef) <= 1e-12);
  }
  SUBCASE("epsilon = +1 with t*a decreasing") {
    auto a = UniFn::make([](auto t) { return 1.0 / (t * t); });
    auto w = almost_kahler_complete(a, 1, TDomain{0.1, 5.0, true});
    for (double t : {0.2, 1.0, 3.0}) CHECK(std::abs(derived_coeffs(w, t).lee_coef) <= 1e-10);
  }
  SUBCASE("preconditions") {
    auto cg_a = UniFn::make([](auto t) { return 1.0 / (1.0 + 2.0 * t); });
    CHECK_THROWS_AS(almost_kahler_complete(cg_a, -1), DomainError);
    auto w = almost_kahler_complete(cg_a, -1, {}, MonotonicityRule::Exact);
    CHECK(std::abs(derived_coeffs(w, 0.8).lee_coef) <= 1e-12);
    CHECK_THROWS_AS(almost_kahler_complete(UniFn::make([](auto t) { return 1.0 + t; }), 1, TDomain{0.1, 2.0}),
                    DomainError);
  }
}

TEST_CASE("Kähler families") {
  SUBCASE("case 2 closed form") {
    auto w = kahler_family(2, -1.0, 2.0);
    CHECK(w.a(0.0) == Approx(0.25).epsilon(1e-15));
    CHECK(w.b(0.0) == Approx(-0.25).epsilon(1e-15));
    CHECK(std::abs(kahler_residual_b(w, 0.2)) <= 1e-12);
    CHECK(std::abs(kahler_residual_a(w, -1.0, 0.2)) <= 1e-12);
    for (double t : {0.05, 0.1, 0.2}) CHECK(integrability_c(w, t) == Approx(-1.0).epsilon(1e-9));
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(0.0, 10.0);
    for (int i = 0; i < 50; ++i) {
      const double t = U(rng);
      CHECK(std::abs(kahler_residual_b(w, t)) <= 1e-10);
      CHECK(std::abs(kahler_residual_a(w, -1.0, t)) <= 1e-10);
    }
  }
  SUBCASE("case 2 on a ball") {
    auto w = kahler_family(2, 1.0, -1.0);
    CHECK(w.domain().hi == 1.0);
    for (double t : {0.1, 0.5, 0.9}) {
      CHECK(std::abs(kahler_residual_b(w, t)) <= 1e-10);
      CHECK(std::abs(kahler_residual_a(w, 1.0, t)) <= 1e-10);
      CHECK(integrability_c(w, t) == Approx(1.0).epsilon(1e-9));
    }
  }
  SUBCASE("case 1") {
    auto w = kahler_family(1, 1.0, -1.0);
    CHECK(w.epsilon() == 1);
    CHECK_FALSE(w.domain().contains(0.0));
    CHECK_THROWS_AS(derived_coeffs(w, 0.0), DomainError);
    for (double t : {0.1, 0.5, 0.9}) {
      CHECK(std::abs(kahler_residual_b(w, t)) <= 1e-10);
      CHECK(std::abs(kahler_residual_a(w, 1.0, t)) <= 1e-10);
    }
  }
  SUBCASE("parameter signs") {
    CHECK_THROWS_AS(kahler_family(1, -1.0, -1.0), DomainError);
    CHECK_THROWS_AS(kahler_family(2, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(kahler_family(3, 1.0, -1.0), DomainError);
  }
}

TEST_CASE("integrability constant") {
  auto s = named_family("sasaki");
  for (double t : {0.1, 1.0}) CHECK(std::abs(integrability_c(s, t)) < 1e-15);
  auto w = named_family("lck_example", {{"c", 1.0}, {"k", 1.0}});
  for (double t : {0.1, 0.5, 1.0}) CHECK(integrability_c(w, t) == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("flat families") {
  auto p = named_family("flat_power", {{"a0", 1.0}, {"k", 2.0}});
  CHECK(p.a(1.0) == Approx(1.0));
  CHECK(p.b(1.0) == Approx(4.0));
  CHECK(flatness_residual(p, 1.0) == 0.0);
  std::vector<WeightPair> flats = {p, named_family("flat_power", {{"a0", 2.0}, {"k", -0.5}}), named_family("g1"),
                                   named_family("flat_exp", {{"a0", 3.0}, {"branch", "plus"}}),
                                   named_family("flat_exp", {{"a0", 0.5}, {"branch", "minus"}})};
  for (const auto& w : flats)
    for (double t : {0.05, 0.4, 1.3, 2.9}) {
      auto j = w.jet(t);
      const double scale = std::max(1.0, std::abs(j.b) + std::abs(j.da) * (1 + t * std::abs(j.da) / (2 * j.a)));
      CHECK(std::abs(flat_relation_residual(w, t)) <= 1e-12 * scale);
      auto d = derived_coeffs(w, t);
      CHECK(std::abs(d.F2) <= 1e-10);
      CHECK(std::abs(d.F3) <= 1e-10);
    }
  CHECK_THROWS_AS(named_family("flat_power", {{"a0", 1.0}, {"k", 0.5}}), DomainError);
}

TEST_CASE("named families stay positive definite") {
  std::vector<WeightPair> all = {
      named_family("sasaki"),
      named_family("cheeger_gromoll"),
      named_family("g1"),
      named_family("lck_example", {{"c", 0.5}, {"k", 2.0}}),
      named_family("scal_a23"),
      named_family("scal_exp", {{"m", 2}}),
      named_family("scal_band", {{"k", 0.5}, {"c", 1.0}, {"m", 3}}),
      named_family("scal_t2", {{"k", 1.0}, {"c", 1.0}, {"m", 2}}),
      named_family("kahler", {{"case", 2}, {"c", -1.0}, {"kappa", 2.0}}),
  };
  std::mt19937_64 rng(1);
  for (const auto& w : all) {
    auto [lo, hi] = w.domain().sampling_range();
    std::uniform_real_distribution<double> U(lo, hi);
    for (int i = 0; i < 50; ++i) {
      double t = U(rng);
      if (!w.domain().contains(t)) continue;
      CHECK(w.a(t) > 0.0);
      CHECK(w.a(t) + 2 * t * w.b(t) > 0.0);
    }
  }
  CHECK_THROWS_AS(named_family("nope"), ConfigError);
  CHECK_THROWS_AS(named_family("scal_band", {{"k", 0.9}, {"c", 1.0}, {"m", 2}}), DomainError);
}

TEST_CASE("scal_t2 domain is cut at the positive root") {
  auto w = named_family("scal_t2", {{"k", 1.0}, {"c", 1.0}, {"m", 2}});
  const double t2 = w.domain().hi, m = 2, k = 1, c = 1;
  CHECK(std::isfinite(t2));
  CHECK(std::abs(m * (2 + m) - 2 * k * (2 + m) * t2 - 2 * c * c * m * t2 * t2) < 1e-12);
  CHECK_FALSE(w.domain().contains(t2));
  CHECK_THROWS_AS(derived_coeffs(w, t2 + 0.1), DomainError);
}

TEST_CASE("derivative fields match central differences") {
  std::vector<WeightPair> all = {named_family("cheeger_gromoll"), named_family("g1"),
                                 named_family("lck_example", {{"c", 1.0}, {"k", 1.0}}), kahler_family(2, -1, 2),
                                 almost_kahler_complete(UniFn::make([](auto t) { return 1.0 + t; }), -1)};
  const double h = 1e-6;
  for (const auto& w : all)
    for (double t : {0.3, 1.1}) {
      auto j = w.jet(t);
      CHECK(std::abs(j.da - (w.a(t + h) - w.a(t - h)) / (2 * h)) <= 1e-6);
      CHECK(std::abs(j.db - (w.b(t + h) - w.b(t - h)) / (2 * h)) <= 1e-6);
      CHECK(std::abs(j.dda - (w.jet(t + h).da - w.jet(t - h).da) / (2 * h)) <= 1e-6);
    }
}

TEST_CASE("weights from json") {
  auto w = weights_from_json(nlohmann::json::parse(
      R"({"name": "custom", "a": {"kind": "poly", "coeffs": [1, 0.3]}, "b": {"kind": "exp_poly", "coeffs": [0, -1]}, "epsilon": 1, "t_domain": [0.01, 4]})"));
  CHECK(w.epsilon() == 1);
  CHECK(w.a(2.0) == Approx(1.6));
  CHECK(w.b(1.0) == Approx(std::exp(-1.0)));
  CHECK(w.jet(1.0).db == Approx(-std::exp(-1.0)));
  CHECK_FALSE(w.domain().contains(5.0));

  auto cg = weights_from_json(nlohmann::json::parse(R"({"name": "cheeger_gromoll"})"));
  CHECK(cg.a(0.5) == Approx(0.5));
  auto k2 = weights_from_json(nlohmann::json::parse(R"({"name": "kahler", "params": {"case": 2, "c": -1, "kappa": 2}})"));
  CHECK(k2.name() == "kahler_case2");
  auto ak = weights_from_json(nlohmann::json::parse(R"({"name": "almost_kahler", "a": {"coeffs": [1, 1]}})"));
  CHECK(ak.b(1.0) == Approx(1.25));

  CHECK_THROWS_AS(weights_from_json(nlohmann::json::parse(R"({"name": "custom", "a": {"coeffs": [1]}})")), ConfigError);
  CHECK_THROWS_AS(weights_from_json(nlohmann::json::parse(R"({"name": "sasaki", "epsilon": 2})")), ConfigError);
  CHECK_THROWS_AS(weights_from_json(nlohmann::json::parse(R"({"name": "lck_example", "params": {"c": 1}})")), ConfigError);
}
