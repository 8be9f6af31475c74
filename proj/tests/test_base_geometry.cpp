#include <doctest.h>

#include <random>

#include "tbgeom/base_geometry.hpp"

using namespace tbgeom;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec r(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) r(i++) = x;
  return r;
}

// Christoffels straight from central differences of the component matrix.
Tensor3 fd_christoffel(const ChartMetric& metric, const Vec& x, double h) {
  const int m = metric.dim();
  std::vector<Mat> dg;
  for (int l = 0; l < m; ++l) {
    Vec xp = x, xm = x;
    xp(l) += h;
    xm(l) -= h;
    dg.push_back((metric.matrix(xp) - metric.matrix(xm)) / (2 * h));
  }
  Mat ginv = metric.matrix(x).inverse();
  Tensor3 G(m);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double s = 0;
        for (int l = 0; l < m; ++l) s += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        G(k, i, j) = 0.5 * s;
      }
  return G;
}

ChartMetric bumped_metric() {
  // g = diag(1, 1 + x1²)
  auto f = [](auto x) {
    using T = std::remove_cv_t<typename decltype(x)::element_type>;
    return std::vector<T>{T(1.0), T(0.0), T(0.0), 1.0 + x[0] * x[0]};
  };
  return ChartMetric::analytic(2, "bump", f);
}

ChartMetric generic_metric() {
  auto f = [](auto x) {
    using T = std::remove_cv_t<typename decltype(x)::element_type>;
    using std::sin;
    T off = 0.2 * sin(x[0] * x[1]);
    return std::vector<T>{1.0 + x[0] * x[0] + 0.5 * x[1] * x[1], off, off, 2.0 + x[0] * x[1] * x[1] + x[0]};
  };
  return ChartMetric::analytic(2, "generic", f);
}

}  // namespace

TEST_CASE("christoffel symbols") {
  SUBCASE("euclidean has none") {
    PointGeometry pg(euclidean(3), vec({0.4, -1.2, 2.0}));
    CHECK(pg.christoffel().max_abs() == 0.0);
  }
  SUBCASE("conformal chart at the origin") {
    CHECK(christoffel(space_form(2, 4.0), vec({0.0, 0.0})).max_abs() < 1e-15);
  }
  SUBCASE("space form c=1 against differenced components") {
    const auto metric = space_form(2, 1.0);
    const Vec x = vec({0.3, 0.4});
    Tensor3 diff = christoffel(metric, x) - fd_christoffel(metric, x, 1e-5);
    CHECK(diff.max_abs() <= 1e-8);
  }
  SUBCASE("symmetric in the lower pair") {
    PointGeometry pg(space_form(3, -0.7), vec({0.1, 0.5, -0.3}), 1);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(pg.christoffel()(k, i, j) == doctest::Approx(pg.christoffel()(k, j, i)).epsilon(1e-15));
  }
}

TEST_CASE("space form curvature identity") {
  const double c = -1.0;
  const auto metric = space_form(3, c);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int s = 0; s < 10; ++s) {
    Vec x = vec({U(rng), U(rng), U(rng)});
    PointGeometry pg(metric, x, 3);
    const Mat& g = pg.g();
    double worst = 0.0;
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l)
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            double expect = c * (g(j, l) * (k == i) - g(i, l) * (k == j));
            worst = std::max(worst, std::abs(pg.riemann()(k, l, i, j) - expect));
          }
    CHECK(worst <= 1e-7);
    CHECK(pg.nabla_riemann().max_abs() <= 1e-6);
  }
}

TEST_CASE("sectional curvature") {
  SUBCASE("unit sphere chart") {
    const auto metric = space_form(2, 1.0);
    const Vec x = vec({0.3, 0.4});
    CHECK(sectional(metric, x, vec({1, 0}), vec({0, 1})) == doctest::Approx(1.0).epsilon(1e-7));
  }
  SUBCASE("random planes of a space form") {
    const auto metric = space_form(3, 2.5);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> N(0.0, 0.5);
    for (int p = 0; p < 20; ++p) {
      PointGeometry pg(metric, vec({N(rng), N(rng), N(rng)}), 2);
      for (int q = 0; q < 100; ++q) {
        Vec X = vec({N(rng), N(rng), N(rng)}), Y = vec({N(rng), N(rng), N(rng)});
        CHECK(std::abs(pg.sectional(X, Y) - 2.5) <= 1e-6);
      }
    }
  }
  SUBCASE("euclidean and homogeneity") {
    CHECK(sectional(euclidean(2), vec({0.2, 0.1}), vec({1, 2}), vec({-1, 0.5})) == 0.0);
    PointGeometry pg(generic_metric(), vec({0.3, -0.2}), 2);
    Vec X = vec({0.7, 0.1}), Y = vec({-0.2, 1.1});
    CHECK(pg.sectional(2.0 * X, Y) == doctest::Approx(pg.sectional(X, Y)).epsilon(1e-14));
  }
  SUBCASE("degenerate plane") {
    PointGeometry pg(space_form(2, 1.0), vec({0.1, 0.2}), 2);
    CHECK_THROWS_AS(pg.sectional(vec({1, 2}), vec({2, 4})), DegeneratePlaneError);
  }
}

TEST_CASE("curvature symmetries and Bianchi identities") {
  const auto metric = generic_metric();
  const Vec x = vec({0.35, -0.6});
  PointGeometry pg(metric, x, 3);
  const auto& R = pg.riemann();
  const Mat& g = pg.g();
  auto lowered = [&](int h, int k, int i, int j) {
    double s = 0;
    for (int a = 0; a < 2; ++a) s += g(h, a) * R(a, k, i, j);
    return s;
  };
  double anti = 0, pair = 0, bianchi1 = 0;
  for (int h = 0; h < 2; ++h)
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          anti = std::max(anti, std::abs(R(h, k, i, j) + R(h, k, j, i)));
          anti = std::max(anti, std::abs(lowered(h, k, i, j) + lowered(k, h, i, j)));
          pair = std::max(pair, std::abs(lowered(h, k, i, j) - lowered(i, j, h, k)));
          bianchi1 = std::max(bianchi1, std::abs(R(h, k, i, j) + R(h, i, j, k) + R(h, j, k, i)));
        }
  CHECK(anti <= 1e-9);
  CHECK(pair <= 1e-9);
  CHECK(bianchi1 <= 1e-9);

  const auto& DR = pg.nabla_riemann();
  double bianchi2 = 0;
  for (int h = 0; h < 2; ++h)
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int l = 0; l < 2; ++l)
            bianchi2 = std::max(bianchi2, std::abs(DR(l, h, k, i, j) + DR(i, h, k, j, l) + DR(j, h, k, l, i)));
  CHECK(bianchi2 <= 1e-9);
}

TEST_CASE("covariant derivative of curvature against differenced curvature") {
  const auto metric = bumped_metric();
  const Vec x = vec({0.2, 0.0});
  const double h = 1e-4;
  PointGeometry pg(metric, x, 3);
  const auto& G = pg.christoffel();
  const auto& R = pg.riemann();
  double worst = 0;
  for (int p = 0; p < 2; ++p) {
    Vec xp = x, xm = x;
    xp(p) += h;
    xm(p) -= h;
    Tensor4 dR = curvature(metric, xp) - curvature(metric, xm);
    for (int a = 0; a < 2; ++a)
      for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            double v = dR(a, k, i, j) / (2 * h);
            for (int l = 0; l < 2; ++l)
              v += G(a, p, l) * R(l, k, i, j) - G(l, p, k) * R(a, l, i, j) - G(l, p, i) * R(a, k, l, j) -
                   G(l, p, j) * R(a, k, i, l);
            worst = std::max(worst, std::abs(v - pg.nabla_riemann()(p, a, k, i, j)));
          }
  }
  CHECK(worst <= 1e-5);
  CHECK(nabla_R(euclidean(2), vec({1.0, 2.0})).max_abs() == 0.0);
}

TEST_CASE("dual derivatives agree with central differences") {
  const auto metric = generic_metric();
  const Vec x = vec({0.25, 0.4});
  PointGeometry dual(metric, x, 2, DerivativeSource::Dual);
  PointGeometry diff(metric, x, 2, DerivativeSource::CentralDifference, {1e-5, 1e-4, 1e-3});
  CHECK((dual.christoffel() - diff.christoffel()).max_abs() <= 1e-6);
  CHECK((dual.riemann() - diff.riemann()).max_abs() <= 1e-6);

  auto sampled = ChartMetric::sampled(2, "sampled-sphere", [](std::span<const double> x) {
    double q = 1.0 + 0.25 * (x[0] * x[0] + x[1] * x[1]);
    double f = 1.0 / (q * q);
    return std::vector<double>{f, 0.0, 0.0, f};
  });
  CHECK_FALSE(sampled.has_analytic_derivatives());
  PointGeometry pg(sampled, x, 3);
  CHECK(pg.sectional(vec({1, 0}), vec({0, 1})) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("domain and singularity errors") {
  CHECK_THROWS_AS(PointGeometry(space_form(2, -1.0), vec({2.0, 1.0})), DomainError);
  CHECK_THROWS_AS(PointGeometry(space_form(2, 1.0), vec({0.1, 0.2, 0.3})), DomainError);
  auto singular = ChartMetric::analytic(2, "degenerate", [](auto x) {
    using T = std::remove_cv_t<typename decltype(x)::element_type>;
    return std::vector<T>{x[0], T(0.0), T(0.0), T(1.0)};
  });
  try {
    PointGeometry pg(singular, vec({0.0, 0.5}), 1);
    FAIL("expected SingularMetricError");
  } catch (const SingularMetricError& e) {
    CHECK(std::string(e.what()).find("(0, 0.5)") != std::string::npos);
  }
}

TEST_CASE("metric from json") {
  auto j = nlohmann::json::parse(R"({"dim": 2, "kind": "diagonal_polynomial",
    "params": {"diagonal": [[{"coeff": 1}], [{"coeff": 1}, {"coeff": 1, "powers": [2, 0]}]]}})");
  auto metric = metric_from_json(j);
  const Vec x = vec({0.2, 0.0});
  CHECK((curvature(metric, x) - curvature(bumped_metric(), x)).max_abs() <= 1e-14);
  CHECK_THROWS_AS(metric_from_json(nlohmann::json::parse(R"({"dim": 2, "kind": "torus"})")), ConfigError);
  CHECK_THROWS_AS(metric_from_json(nlohmann::json::parse(R"({"dim": 2, "kind": "space_form", "params": {}})")), ConfigError);
  auto sf = metric_from_json(nlohmann::json::parse(R"({"dim": 3, "kind": "space_form", "params": {"c": 2}})"));
  CHECK(sf.constant_curvature().value() == 2.0);
}
