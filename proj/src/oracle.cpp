#include "tbgeom/oracle.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

namespace tbgeom {

namespace {

struct Split {
  Vec x, y;
};

Split split(const Vec& z) {
  const auto m = z.size() / 2;
  return {z.head(m), z.tail(m)};
}

// (Γ₀)^k_i = Γ^k_ij y^j
Mat gamma0(const PointGeometry& pg, const Vec& y) {
  const int m = pg.dim();
  Mat G0(m, m);
  for (int i = 0; i < m; ++i) G0.col(i) = pg.gamma(Vec::Unit(m, i), y);
  return G0;
}

void check_step(double h, const Vec& z, const Vec& dir) {
  const double scale = std::max(1.0, z.lpNorm<Eigen::Infinity>());
  if (!(h > 0.0) || h * dir.lpNorm<Eigen::Infinity>() < 64.0 * std::numeric_limits<double>::epsilon() * scale) {
    std::ostringstream os;
    os << "finite-difference step h = " << h << " underflows at |z| = " << scale;
    throw GeometryError(os.str());
  }
}

// Directional central difference of f along dir, with one optional Richardson step.
template <class R, class F>
R directional(F&& f, const Vec& z, const Vec& dir, double h, bool richardson) {
  check_step(h, z, dir);
  auto D = [&](double s) -> R { return (f(Vec(z + s * dir)) - f(Vec(z - s * dir))) / (2.0 * s); };
  if (!richardson) return D(h);
  const R coarse = D(h);
  const R fine = D(0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

Vec tensor_as_vec(const Tensor3& T) {
  return Eigen::Map<const Vec>(T.data().data(), static_cast<Eigen::Index>(T.size()));
}

void warn_if_ill_conditioned(const Mat& G, const Vec& z, const OracleOptions& opt) {
  Eigen::JacobiSVD<Mat> svd(G);
  const auto& s = svd.singularValues();
  const double cond = s(0) / s(s.size() - 1);
  if (!(cond > opt.condition_warning)) return;
  std::ostringstream os;
  os << "induced metric condition number " << cond << " exceeds " << opt.condition_warning << " at z = "
     << format_point({z.data(), static_cast<std::size_t>(z.size())});
  if (opt.warn)
    opt.warn(os.str());
  else
    std::cerr << "warning: " << os.str() << '\n';
}

Tensor3 connection_from(const InducedMetric& im, const Vec& z, const OracleOptions& opt) {
  const int n = im.dim();
  const Mat Ginv = im.components(z).inverse();
  std::vector<Mat> dG(static_cast<std::size_t>(n));
  auto comp = [&](const Vec& p) { return im.components(p); };
  for (int a = 0; a < n; ++a) dG[static_cast<std::size_t>(a)] = directional<Mat>(comp, z, Vec::Unit(n, a), opt.h, opt.richardson);
  Tensor3 Gam(n);
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int d = 0; d < n; ++d)
          s += Ginv(c, d) * (dG[static_cast<std::size_t>(a)](b, d) + dG[static_cast<std::size_t>(b)](a, d) -
                             dG[static_cast<std::size_t>(d)](a, b));
        Gam(c, a, b) = 0.5 * s;
      }
  return Gam;
}

double derivative_prefactor(int degree, FormConvention conv) {
  switch (conv) {
    case FormConvention::Calibrated:
      return degree == 1 ? 0.5 : 1.0;
    case FormConvention::Normalized:
      return 1.0 / (degree + 1.0);
    case FormConvention::Unnormalized:
      return 1.0;
  }
  return 1.0;
}

SplitVector to_split(const TangentPoint& P, const Mat& F, const Vec& c) {
  return SplitVector::from_stacked(P, F.partialPivLu().solve(c));
}

}  // namespace

Vec stack_point(const TangentPoint& P) {
  Vec z(P.x.size() + P.u.size());
  z << P.x, P.u;
  return z;
}

TangentPoint unstack_point(const ChartMetric& base, const Vec& z) {
  const auto s = split(z);
  return TangentPoint::make(base, s.x, s.y);
}

Mat InducedMetric::components(const Vec& z) const {
  const auto [x, y] = split(z);
  const int m = base_.dim();
  PointGeometry pg(base_, x, 1);
  const Mat& g = pg.g();
  const double t = 0.5 * y.dot(g * y);
  w_.require_admissible(t);
  const Vec gy = g * y;
  const Mat V = w_.a(t) * g + w_.b(t) * gy * gy.transpose();
  const Mat G0 = gamma0(pg, y);
  Mat G(2 * m, 2 * m);
  G.topLeftCorner(m, m) = g + G0.transpose() * V * G0;
  G.topRightCorner(m, m) = G0.transpose() * V;
  G.bottomLeftCorner(m, m) = V * G0;
  G.bottomRightCorner(m, m) = V;
  return 0.5 * (G + G.transpose());
}

Mat InducedMetric::frame(const Vec& z) const {
  const auto [x, y] = split(z);
  const int m = base_.dim();
  PointGeometry pg(base_, x, 1);
  Mat F = Mat::Identity(2 * m, 2 * m);
  F.bottomLeftCorner(m, m) = -gamma0(pg, y);
  return F;
}

Mat InducedMetric::complex_structure(const Vec& z) const {
  const auto [x, y] = split(z);
  AdaptedGeometry ag(base_, w_, x, y, 1);
  const Mat F = ag.frame();
  return F * ag.J_matrix() * F.inverse();
}

Vec fd_directional(const std::function<Vec(const Vec&)>& f, const Vec& z, const Vec& dir,
                   const OracleOptions& opt) {
  return directional<Vec>(f, z, dir, opt.h, opt.richardson);
}

InducedMetric induce(const ChartMetric& base, const WeightPair& w) { return InducedMetric(base, w); }

Tensor3 fd_connection(const InducedMetric& im, const Vec& z, const OracleOptions& opt) {
  warn_if_ill_conditioned(im.components(z), z, opt);
  return connection_from(im, z, opt);
}

Tensor4 fd_curvature(const InducedMetric& im, const Vec& z, const OracleOptions& opt) {
  warn_if_ill_conditioned(im.components(z), z, opt);
  const int n = im.dim();
  const Tensor3 Gam = connection_from(im, z, opt);
  // dGam[a] holds ∂_a Γ as a flat (c, i, j) vector.
  std::vector<Vec> dGam(static_cast<std::size_t>(n));
  auto conn = [&](const Vec& p) { return tensor_as_vec(connection_from(im, p, opt)); };
  for (int a = 0; a < n; ++a)
    dGam[static_cast<std::size_t>(a)] = directional<Vec>(conn, z, Vec::Unit(n, a), opt.outer_step(), opt.richardson);
  auto dG = [&](int a, int c, int i, int j) {
    return dGam[static_cast<std::size_t>(a)](static_cast<Eigen::Index>((c * n + i) * n + j));
  };
  Tensor4 R(n);
  for (int d = 0; d < n; ++d)
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double s = dG(a, d, b, c) - dG(b, d, a, c);
          for (int e = 0; e < n; ++e) s += Gam(d, a, e) * Gam(e, b, c) - Gam(d, b, e) * Gam(e, a, c);
          R(d, c, a, b) = s;
        }
  return R;
}

double fd_scalar_curvature(const InducedMetric& im, const Vec& z, const OracleOptions& opt) {
  const int n = im.dim();
  const Tensor4 R = fd_curvature(im, z, opt);
  const Mat Ginv = im.components(z).inverse();
  double s = 0.0;
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) {
      double ric = 0.0;
      for (int a = 0; a < n; ++a) ric += R(a, c, a, b);
      s += Ginv(b, c) * ric;
    }
  return s;
}

double fd_exterior_derivative(const Form& form, const Vec& z, const std::vector<Vec>& vectors,
                              const OracleOptions& opt) {
  const int k = form.degree;
  if (static_cast<int>(vectors.size()) != k + 1)
    throw GeometryError("exterior derivative of a " + std::to_string(k) + "-form needs " + std::to_string(k + 1) +
                        " vectors, got " + std::to_string(vectors.size()));
  double s = 0.0;
  for (int i = 0; i <= k; ++i) {
    std::vector<Vec> rest;
    for (int j = 0; j <= k; ++j)
      if (j != i) rest.push_back(vectors[static_cast<std::size_t>(j)]);
    auto f = [&](const Vec& p) { return form.eval(p, rest); };
    const double d = directional<double>(f, z, vectors[static_cast<std::size_t>(i)], opt.h, opt.richardson);
    s += (i % 2 == 0 ? d : -d);
  }
  return derivative_prefactor(k, opt.forms) * s;
}

double wedge_1_2(const Form& omega, const Form& Omega, const Vec& z, const Vec& X, const Vec& Y, const Vec& Z,
                 FormConvention conv) {
  auto w = [&](const Vec& A) { return omega.eval(z, {A}); };
  auto W = [&](const Vec& A, const Vec& B) { return Omega.eval(z, {A, B}); };
  const double s = w(X) * W(Y, Z) + w(Y) * W(Z, X) + w(Z) * W(X, Y);
  return conv == FormConvention::Normalized ? s / 3.0 : s;
}

Form kahler_form_field(const InducedMetric& im) {
  return {2, [im](const Vec& z, const std::vector<Vec>& v) {
            return v[0].dot(im.components(z) * (im.complex_structure(z) * v[1]));
          }};
}

Form lee_form_field(const InducedMetric& im) {
  return {1, [im](const Vec& z, const std::vector<Vec>& v) {
            const auto [x, y] = split(z);
            PointGeometry pg(im.base(), x, 1);
            const double t = 0.5 * y.dot(pg.g() * y);
            const auto k = derived_coeffs(im.weights(), t);
            const Vec vert = v[0].tail(x.size()) + gamma0(pg, y) * v[0].head(x.size());
            return k.lee_coef * pg.inner(vert, y);
          }};
}

Form energy_function(const InducedMetric& im) {
  return {0, [im](const Vec& z, const std::vector<Vec>&) {
            const auto [x, y] = split(z);
            return 0.5 * y.dot(im.base().matrix(x) * y);
          }};
}

Form fd_differential(const Form& f, const OracleOptions& opt) {
  if (f.degree != 0) throw GeometryError("fd_differential takes a 0-form");
  return {1, [f, opt](const Vec& z, const std::vector<Vec>& v) {
            auto g = [&](const Vec& p) { return f.eval(p, {}); };
            return directional<double>(g, z, v[0], opt.h, opt.richardson);
          }};
}

Vec fd_nijenhuis(const InducedMetric& im, const Vec& z, const Vec& U, const Vec& V, const OracleOptions& opt) {
  const Mat J = im.complex_structure(z);
  auto Jf = [&](const Vec& p) { return im.complex_structure(p); };
  auto dJ = [&](const Vec& dir) { return Mat(directional<Mat>(Jf, z, dir, opt.h, opt.richardson)); };
  const Vec JU = J * U, JV = J * V;
  return dJ(JU) * V - dJ(JV) * U + J * (dJ(V) * U) - J * (dJ(U) * V);
}

SplitVector oracle_connection(const InducedMetric& im, const SplitVector& U, const SplitVector& W,
                              const OracleOptions& opt) {
  const Vec z = stack_point(U.at);
  const Mat F = im.frame(z);
  const Vec Uc = F * U.stacked();
  const Vec Wad = W.stacked();
  auto Wf = [&](const Vec& p) { return Vec(im.frame(p) * Wad); };
  Vec r = directional<Vec>(Wf, z, Uc, opt.h, opt.richardson);
  const Tensor3 Gam = fd_connection(im, z, opt);
  const Vec Wc = F * Wad;
  const int n = im.dim();
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) r(c) += Gam(c, a, b) * Uc(a) * Wc(b);
  return to_split(U.at, F, r);
}

SplitVector apply_curvature(const Tensor4& R, const Mat& frame, const SplitVector& U, const SplitVector& V,
                            const SplitVector& W) {
  const Vec Uc = frame * U.stacked(), Vc = frame * V.stacked(), Wc = frame * W.stacked();
  const int n = R.dim();
  Vec r = Vec::Zero(n);
  for (int d = 0; d < n; ++d)
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) r(d) += R(d, c, a, b) * Wc(c) * Uc(a) * Vc(b);
  return to_split(U.at, frame, r);
}

SplitVector oracle_curvature(const InducedMetric& im, const SplitVector& U, const SplitVector& V,
                             const SplitVector& W, const OracleOptions& opt) {
  const Vec z = stack_point(U.at);
  return apply_curvature(fd_curvature(im, z, opt), im.frame(z), U, V, W);
}

SplitVector oracle_nijenhuis(const InducedMetric& im, const SplitVector& U, const SplitVector& V,
                             const OracleOptions& opt) {
  const Vec z = stack_point(U.at);
  const Mat F = im.frame(z);
  return to_split(U.at, F, fd_nijenhuis(im, z, F * U.stacked(), F * V.stacked(), opt));
}

}  // namespace tbgeom
