#include <doctest.h>

#include <random>

#include "tbgeom/tbundle.hpp"

using namespace tbgeom;
using doctest::Approx;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec r(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) r(i++) = x;
  return r;
}

Vec random_vec(std::mt19937_64& rng, int m, double s = 1.0) {
  std::uniform_real_distribution<double> U(-s, s);
  Vec r(m);
  for (int i = 0; i < m; ++i) r(i) = U(rng);
  return r;
}

SplitVector random_split(std::mt19937_64& rng, const TangentPoint& P) {
  const auto m = static_cast<int>(P.x.size());
  return {random_vec(rng, m), random_vec(rng, m), P};
}

ChartMetric warped_metric() {
  auto f = [](auto x) {
    using T = std::remove_cv_t<typename decltype(x)::element_type>;
    using std::sin;
    T off = 0.2 * sin(x[0] * x[1]);
    return std::vector<T>{1.0 + x[0] * x[0] + 0.5 * x[1] * x[1], off, off, 2.0 + x[0] * x[1] * x[1] + x[0]};
  };
  return ChartMetric::analytic(2, "warped", f);
}

// u scaled so that ½ g(u, u) = t
Vec with_energy(const ChartMetric& base, const Vec& x, Vec u, double t) {
  const double n2 = u.dot(base.matrix(x) * u);
  return u * std::sqrt(2.0 * t / n2);
}

}  // namespace

TEST_CASE("points and split vectors") {
  const auto base = space_form(2, 1.0);
  const auto P = TangentPoint::make(base, vec({0.1, 0.2}), vec({0.5, -0.3}));
  const double g = 1.0 / std::pow(1.0 + 0.25 * 0.05, 2);
  CHECK(P.t == Approx(0.5 * g * 0.34).epsilon(1e-15));
  const auto Q = TangentPoint::make(base, vec({0.1, 0.2 + 1e-9}), vec({0.5, -0.3}));
  SplitVector a = SplitVector::horizontal(P, vec({1, 0}));
  SplitVector b = SplitVector::vertical(Q, vec({0, 1}));
  CHECK_THROWS_AS(a + b, MismatchedPointError);
  CHECK_THROWS_AS(TangentPoint::make(base, vec({0.1, 0.2}), vec({1.0})), DomainError);
  AdaptedGeometry ag(base, named_family("sasaki"), P.x, P.u, 1);
  CHECK_THROWS_AS(ag.metric(a, b), MismatchedPointError);
}

TEST_CASE("metric g_A") {
  SUBCASE("sasaki splits orthogonally") {
    AdaptedGeometry ag(euclidean(2), named_family("sasaki"), vec({0, 0}), vec({0.3, 0.4}), 1);
    const Vec X = vec({1, 2}), Y = vec({-0.5, 0.7});
    CHECK(ag.metric(ag.H(X), ag.H(Y)) == Approx(X.dot(Y)));
    CHECK(ag.metric(ag.V(X), ag.V(Y)) == Approx(X.dot(Y)));
    CHECK(ag.metric(ag.H(X), ag.V(Y)) == 0.0);
    CHECK(ag.metric(SplitVector::zero(ag.point()), ag.H(X)) == 0.0);
  }
  SUBCASE("cheeger-gromoll on u") {
    // g(u,u) = 2t = 1: (1/2)(g(u,u) + g(u,u)²) = 1
    const Vec u = vec({0.6, 0.8});
    AdaptedGeometry ag(euclidean(2), named_family("cheeger_gromoll"), vec({0, 0}), u, 1);
    CHECK(ag.t() == Approx(0.5));
    CHECK(ag.metric(ag.V(u), ag.V(u)) == Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("almost complex structure J_A") {
  SUBCASE("sasaki") {
    AdaptedGeometry ag(space_form(2, 1.0), named_family("sasaki"), vec({0.2, 0.1}), vec({0.3, -0.4}), 1);
    const Vec X = vec({0.7, -1.3});
    CHECK((ag.J(ag.H(X)) - ag.V(X)).max_abs() < 1e-15);
    CHECK((ag.J(ag.V(X)) + ag.H(X)).max_abs() < 1e-15);
  }
  SUBCASE("cheeger-gromoll maps u^H to u^V") {
    const Vec u = vec({0.9, -0.4});
    AdaptedGeometry ag(space_form(2, 1.0), named_family("cheeger_gromoll"), vec({0.2, 0.1}), u, 1);
    CHECK((ag.J(ag.H(u)) - ag.V(u)).max_abs() < 1e-14);
    CHECK((ag.J(ag.V(u)) + ag.H(u)).max_abs() < 1e-14);
  }
  SUBCASE("J² = −I and compatibility for every family") {
    std::mt19937_64 rng(11);
    struct Case {
      WeightPair w;
      ChartMetric base;
      double t;
    };
    std::vector<Case> cases = {
        {named_family("sasaki"), space_form(3, 1.0), 0.4},
        {named_family("cheeger_gromoll"), space_form(3, 1.0), 0.7},
        {named_family("g1"), euclidean(3), 1.2},
        {named_family("lck_example", {{"c", 1.0}, {"k", 1.0}}), space_form(3, 1.0), 0.3},
        {kahler_family(2, -1.0, 2.0), space_form(3, -1.0), 0.2},
        {kahler_family(1, 1.0, -1.0), space_form(3, 1.0), 0.4},
        {named_family("scal_a23"), warped_metric(), 0.9},
    };
    for (auto& c : cases) {
      const int m = c.base.dim();
      const Vec x = random_vec(rng, m, 0.3);
      const Vec u = with_energy(c.base, x, random_vec(rng, m), c.t);
      AdaptedGeometry ag(c.base, c.w, x, u, 1);
      for (int i = 0; i < 100; ++i) {
        SplitVector U = random_split(rng, ag.point());
        CHECK((ag.J(ag.J(U)) + U).max_abs() <= 1e-10);
      }
      CHECK(ag.compatibility_residual() <= 1e-10);
    }
    AdaptedGeometry s(euclidean(2), named_family("sasaki"), vec({0, 0}), vec({1, 0}), 1);
    CHECK(s.compatibility_residual() <= 1e-12);
  }
  SUBCASE("undefined on the zero section for ε = +1") {
    auto w = named_family("g1").with_epsilon(+1);
    AdaptedGeometry ag(euclidean(2), w, vec({0, 0}), vec({0, 0}), 1);
    CHECK_FALSE(ag.has_complex_structure());
    CHECK_THROWS_AS(ag.J(ag.H(vec({1, 0}))), DomainError);
  }
}

TEST_CASE("kahler form of cheeger-gromoll") {
  std::mt19937_64 rng(5);
  const auto base = space_form(2, 1.0);
  const Vec x = vec({0.2, -0.1}), u = vec({0.8, 0.5});
  AdaptedGeometry ag(base, named_family("cheeger_gromoll"), x, u, 1);
  const double r = std::sqrt(1.0 + 2.0 * ag.t());
  for (int i = 0; i < 10; ++i) {
    const Vec X = random_vec(rng, 2), Y = random_vec(rng, 2);
    CHECK(std::abs(ag.kahler_form(ag.H(X), ag.H(Y))) < 1e-14);
    CHECK(std::abs(ag.kahler_form(ag.V(X), ag.V(Y))) < 1e-14);
    const double expect = -(ag.base().inner(X, Y) + ag.gu(X) * ag.gu(Y) / (1.0 + r)) / r;
    CHECK(ag.kahler_form(ag.H(X), ag.V(Y)) == Approx(expect).epsilon(1e-13));
    SplitVector U = random_split(rng, ag.point()), W = random_split(rng, ag.point());
    CHECK(std::abs(ag.kahler_form(U, W) + ag.kahler_form(W, U)) <= 1e-12);
    CHECK(ag.kahler_form(ag.J(U), U) == Approx(ag.metric(U, U)).epsilon(1e-12));
  }
}

TEST_CASE("lee form") {
  const Vec x = vec({0.1, 0.1}), X = vec({0.3, 1.0});
  AdaptedGeometry s(space_form(2, 1.0), named_family("sasaki"), x, vec({0.4, 0.2}), 1);
  CHECK(s.lee_form(s.V(X)) == 0.0);
  auto ak = almost_kahler_complete(UniFn::make([](auto t) { return 1.0 + t; }), -1);
  AdaptedGeometry a(euclidean(2), ak, vec({0, 0}), vec({std::sqrt(2.0), 0}), 1);
  CHECK(a.t() == Approx(1.0));
  CHECK(std::abs(a.lee_form(a.V(X))) <= 1e-12);
  CHECK(a.lee_form(a.H(X)) == 0.0);
}

TEST_CASE("connection displays") {
  SUBCASE("sasaki over euclidean") {
    AdaptedGeometry ag(euclidean(2), named_family("sasaki"), vec({0.5, 0.5}), vec({0.2, 0.9}), 2);
    const Vec X = vec({1, 2}), Y = vec({3, -1});
    for (auto U : {ag.H(X), ag.V(X)})
      for (auto W : {ag.H(Y), ag.V(Y)}) CHECK(ag.connection(U, W).max_abs() == 0.0);
  }
  SUBCASE("cheeger-gromoll: ∇_{u^V} u^V = 0 at t = 1/2") {
    const Vec u = vec({0.6, 0.8});
    AdaptedGeometry ag(euclidean(2), named_family("cheeger_gromoll"), vec({0, 0}), u, 2);
    CHECK(ag.connection(ag.V(u), ag.V(u)).max_abs() < 1e-15);
  }
}

TEST_CASE("area of planes") {
  std::mt19937_64 rng(9);
  SUBCASE("sasaki") {
    AdaptedGeometry ag(euclidean(2), named_family("sasaki"), vec({0, 0}), vec({0.3, 0.2}), 1);
    const Vec X = vec({1, 0}), Y = vec({0, 1});
    CHECK(ag.area(ag.H(X), ag.H(Y)) == Approx(1.0));
    CHECK(ag.area(ag.H(X), ag.V(Y)) == Approx(1.0));
    CHECK(ag.area(ag.V(X), ag.V(Y)) == Approx(1.0));
  }
  SUBCASE("cheeger-gromoll at t = 1/2") {
    AdaptedGeometry ag(euclidean(2), named_family("cheeger_gromoll"), vec({0, 0}), vec({1, 0}), 1);
    const Vec X = vec({0, 1}), Y = vec({1, 0});
    CHECK(ag.area_display("VV", X, Y) == Approx(0.5).epsilon(1e-15));
    CHECK(ag.area(ag.V(X), ag.V(Y)) == Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("closed forms equal the Gram determinant") {
    const auto base = warped_metric();
    auto w = named_family("cheeger_gromoll");
    for (int i = 0; i < 20; ++i) {
      const Vec x = random_vec(rng, 2, 0.4);
      AdaptedGeometry ag(base, w, x, random_vec(rng, 2), 1);
      const Mat e = ag.base().orthonormal_frame(random_vec(rng, 2));
      const Vec X = e.col(0), Y = e.col(1);
      CHECK(ag.area_display("HH", X, Y) == Approx(ag.area(ag.H(X), ag.H(Y))).epsilon(1e-12));
      CHECK(ag.area_display("HV", X, Y) == Approx(ag.area(ag.H(X), ag.V(Y))).epsilon(1e-12));
      CHECK(ag.area_display("VV", X, Y) == Approx(ag.area(ag.V(X), ag.V(Y))).epsilon(1e-12));
      SplitVector U = random_split(rng, ag.point()), W = random_split(rng, ag.point());
      CHECK(ag.area(U, W) >= 0.0);
    }
  }
}

TEST_CASE("curvature tensor of g_A") {
  std::mt19937_64 rng(21);
  SUBCASE("g1 and sasaki over euclidean are flat") {
    for (int m : {2, 3}) {
      for (auto w : {named_family("g1"), named_family("sasaki")}) {
        for (int i = 0; i < 50; ++i) {
          const Vec x = random_vec(rng, m);
          AdaptedGeometry ag(euclidean(m), w, x, random_vec(rng, m, 1.2));
          SplitVector U = random_split(rng, ag.point()), V = random_split(rng, ag.point()),
                      W = random_split(rng, ag.point());
          CHECK(ag.curvature(U, V, W).max_abs() <= 1e-9);
        }
      }
    }
  }
  SUBCASE("symmetries and first Bianchi identity") {
    const auto base = warped_metric();
    WeightPair w("generic", UniFn::make([](auto t) { return 1.0 + 0.5 * t + 0.1 * t * t; }),
                 UniFn::make([](auto t) { return 0.3 - 0.1 * t; }), -1, TDomain{0.0, 5.0, true});
    for (auto wp : {w, named_family("cheeger_gromoll")}) {
      for (int i = 0; i < 10; ++i) {
        const Vec x = random_vec(rng, 2, 0.4);
        AdaptedGeometry ag(base, wp, x, with_energy(base, x, random_vec(rng, 2), 0.6));
        const auto& P = ag.point();
        SplitVector U = random_split(rng, P), V = random_split(rng, P), W = random_split(rng, P),
                    S = random_split(rng, P);
        const double r = ag.curvature4(U, V, W, S);
        CHECK(std::abs(r + ag.curvature4(V, U, W, S)) <= 1e-8);
        CHECK(std::abs(r + ag.curvature4(U, V, S, W)) <= 1e-8);
        CHECK(std::abs(r - ag.curvature4(W, S, U, V)) <= 1e-8);
        CHECK((ag.curvature(U, V, W) + ag.curvature(V, W, U) + ag.curvature(W, U, V)).max_abs() <= 1e-8);
      }
    }
  }
}

TEST_CASE("sectional curvature displays") {
  std::mt19937_64 rng(33);
  SUBCASE("closed forms match the definition") {
    const auto base = warped_metric();
    for (auto w : {named_family("cheeger_gromoll"), named_family("lck_example", {{"c", 1.0}, {"k", 1.0}})}) {
      for (int i = 0; i < 10; ++i) {
        const Vec x = random_vec(rng, 2, 0.4);
        AdaptedGeometry ag(base, w, x, random_vec(rng, 2));
        const Mat e = ag.base().orthonormal_frame(random_vec(rng, 2));
        const Vec X = e.col(0), Y = e.col(1);
        CHECK(ag.sectional_display("HH", X, Y) == Approx(ag.sectional(ag.H(X), ag.H(Y))).epsilon(1e-10));
        CHECK(ag.sectional_display("HV", X, Y) == Approx(ag.sectional(ag.H(X), ag.V(Y))).epsilon(1e-10));
        CHECK(ag.sectional_display("VV", X, Y) == Approx(ag.sectional(ag.V(X), ag.V(Y))).epsilon(1e-10));
      }
    }
  }
  SUBCASE("space form horizontal display") {
    for (double c : {1.0, -1.0, 2.0}) {
      auto w = named_family("cheeger_gromoll");
      for (int i = 0; i < 10; ++i) {
        const Vec x = random_vec(rng, 3, 0.3);
        AdaptedGeometry ag(space_form(3, c), w, x, random_vec(rng, 3));
        const Mat e = ag.base().orthonormal_frame(random_vec(rng, 3));
        const Vec X = e.col(0), Y = e.col(1);
        const double a = ag.jet().a, gx = ag.gu(X), gy = ag.gu(Y);
        CHECK(ag.sectional(ag.H(X), ag.H(Y)) ==
              Approx(c - 0.75 * a * c * c * (gx * gx + gy * gy)).epsilon(1e-8).scale(1.0));
        CHECK(ag.sectional(ag.H(X), ag.V(Y)) >= -1e-12);
        CHECK(ag.sectional(ag.H(Y), ag.V(X)) >= -1e-12);
      }
    }
  }
  SUBCASE("adapted basis") {
    const auto base = warped_metric();
    for (auto w : {named_family("cheeger_gromoll"), named_family("sasaki")}) {
      const Vec x = vec({0.2, -0.3});
      AdaptedGeometry ag(base, w, x, vec({0.7, 0.4}));
      const auto B = ag.adapted_basis();
      const int n = 4;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          CHECK(ag.metric(B.E[static_cast<std::size_t>(a)], B.E[static_cast<std::size_t>(b)]) ==
                Approx(a == b ? 1.0 : 0.0).scale(1.0).epsilon(1e-10));
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
          CHECK(ag.basis_sectional_display(a, b) ==
                Approx(ag.sectional(B.E[static_cast<std::size_t>(a)], B.E[static_cast<std::size_t>(b)]))
                    .scale(1.0)
                    .epsilon(1e-10));
      for (int i = 0; i < 2; ++i)
        CHECK(std::abs(ag.sectional(B.E[static_cast<std::size_t>(i)], B.E[2])) <= 1e-12);
    }
  }
  SUBCASE("degenerate plane") {
    AdaptedGeometry ag(space_form(2, 1.0), named_family("sasaki"), vec({0, 0}), vec({0.3, 0.1}));
    CHECK_THROWS_AS(ag.sectional(ag.H(vec({1, 0})), ag.H(vec({2, 0}))), DegeneratePlaneError);
  }
  SUBCASE("horizontal bound predicate") {
    auto cg = named_family("cheeger_gromoll");
    CHECK(horizontal_sectional_bound(cg, 1.0, 0.1));
    CHECK_FALSE(horizontal_sectional_bound(named_family("sasaki"), 1.0, 2.0));
  }
}

TEST_CASE("scalar curvature") {
  std::mt19937_64 rng(44);
  SUBCASE("closed form equals the adapted-basis sum") {
    for (auto w : {named_family("cheeger_gromoll"), named_family("sasaki")}) {
      for (int m : {2, 3}) {
        for (int i = 0; i < 5; ++i) {
          const Vec x = random_vec(rng, m, 0.3);
          AdaptedGeometry ag(space_form(m, 1.0), w, x, random_vec(rng, m));
          CHECK(ag.scalar_curvature() ==
                Approx(ag.scalar_curvature_basis_sum()).epsilon(1e-6).scale(1.0));
        }
      }
      const Vec x = vec({0.1, 0.3});
      AdaptedGeometry ag(warped_metric(), w, x, vec({0.5, -0.6}));
      CHECK(ag.scalar_curvature() == Approx(ag.scalar_curvature_basis_sum()).epsilon(1e-6));
    }
  }
  SUBCASE("space-form display agrees with the general formula") {
    for (double c : {-1.0, 1.0})
      for (int m : {2, 3}) {
        auto w = named_family("cheeger_gromoll");
        const Vec x = random_vec(rng, m, 0.3);
        AdaptedGeometry ag(space_form(m, c), w, x, random_vec(rng, m));
        CHECK(space_form_scalar(w, c, m, ag.t()) == Approx(ag.scalar_curvature()).epsilon(1e-9).scale(1.0));
        CHECK(space_form_scalar_published(w, c, m, ag.t()) ==
              Approx(ag.scalar_curvature_published()).epsilon(1e-9).scale(1.0));
      }
  }
  SUBCASE("sasaki over euclidean") {
    AdaptedGeometry ag(euclidean(2), named_family("sasaki"), vec({1, 2}), vec({0.3, 0.3}));
    CHECK(ag.scalar_curvature() == 0.0);
  }
  SUBCASE("published coefficient differs off the zero section") {
    AdaptedGeometry ag(space_form(2, 1.0), named_family("cheeger_gromoll"), vec({0, 0}), vec({1, 0}));
    CHECK(std::abs(ag.scalar_curvature() - ag.scalar_curvature_published()) > 0.1);
  }
}

TEST_CASE("nijenhuis closed forms") {
  SUBCASE("sasaki over euclidean") {
    AdaptedGeometry ag(euclidean(2), named_family("sasaki"), vec({0, 0}), vec({0.5, 0.2}));
    const Vec X = vec({1, 0.3}), Y = vec({-0.2, 1});
    CHECK(ag.nijenhuis_hh(X, Y).max_abs() < 1e-15);
    CHECK(ag.nijenhuis_vv(X, Y).max_abs() < 1e-15);
  }
  SUBCASE("sasaki over the sphere") {
    const Vec u = vec({0.5, 0.2});
    AdaptedGeometry ag(space_form(2, 1.0), named_family("sasaki"), vec({0.1, 0}), u);
    const Vec X = vec({1, 0.3}), Y = vec({-0.2, 1});
    auto N = ag.nijenhuis_hh(X, Y);
    CHECK((N.v - ag.base().R(X, Y, u)).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK(N.v.lpNorm<Eigen::Infinity>() > 1e-2);
  }
  SUBCASE("kahler case 2 vanishes") {
    std::mt19937_64 rng(8);
    auto w = kahler_family(2, -1.0, 2.0);
    for (int i = 0; i < 20; ++i) {
      const Vec x = random_vec(rng, 2, 0.5);
      AdaptedGeometry ag(space_form(2, -1.0), w, x, random_vec(rng, 2));
      const Vec X = random_vec(rng, 2), Y = random_vec(rng, 2);
      CHECK(ag.nijenhuis_hh(X, Y).max_abs() <= 1e-8);
      CHECK(ag.nijenhuis_vv(X, Y).max_abs() <= 1e-8);
    }
  }
  SUBCASE("the published vertical display is not antisymmetric") {
    AdaptedGeometry ag(space_form(2, 1.0), named_family("cheeger_gromoll"), vec({0.1, 0.2}), vec({0.7, -0.3}));
    const Vec X = vec({1, 0.3}), Y = vec({-0.2, 1});
    CHECK((ag.nijenhuis_vv(X, Y) + ag.nijenhuis_vv(Y, X)).max_abs() < 1e-14);
    CHECK((ag.nijenhuis_vv(X, Y, true) + ag.nijenhuis_vv(Y, X, true)).max_abs() > 1e-3);
  }
}

TEST_CASE("coordinate conversions") {
  AdaptedGeometry ag(space_form(3, 1.0), named_family("cheeger_gromoll"), vec({0.2, 0.1, -0.3}),
                     vec({0.4, 0.5, 0.6}));
  SplitVector U{vec({1, 2, 3}), vec({-1, 0.5, 0.25}), ag.point()};
  CHECK((ag.from_coordinates(ag.to_coordinates(U)) - U).max_abs() < 1e-15);
  CHECK((ag.frame() * U.stacked() - ag.to_coordinates(U)).lpNorm<Eigen::Infinity>() < 1e-15);
}
