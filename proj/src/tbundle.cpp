#include "tbgeom/tbundle.hpp"

#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

namespace tbgeom {

namespace {

std::span<const double> as_span(const Vec& x) { return {x.data(), static_cast<std::size_t>(x.size())}; }

}  // namespace

TangentPoint TangentPoint::make(const ChartMetric& base, const Vec& x, const Vec& u) {
  if (u.size() != x.size())
    throw DomainError("fiber vector has dimension " + std::to_string(u.size()) + ", chart point has " +
                      std::to_string(x.size()));
  Mat g = base.matrix(x);
  return {x, u, 0.5 * u.dot(g * u)};
}

bool TangentPoint::same_as(const TangentPoint& o, double tol) const {
  if (x.size() != o.x.size() || u.size() != o.u.size()) return false;
  return (x - o.x).lpNorm<Eigen::Infinity>() <= tol && (u - o.u).lpNorm<Eigen::Infinity>() <= tol;
}

SplitVector SplitVector::horizontal(const TangentPoint& p, const Vec& X) {
  return {X, Vec::Zero(X.size()), p};
}

SplitVector SplitVector::vertical(const TangentPoint& p, const Vec& X) {
  return {Vec::Zero(X.size()), X, p};
}

SplitVector SplitVector::zero(const TangentPoint& p) {
  return {Vec::Zero(p.x.size()), Vec::Zero(p.x.size()), p};
}

Vec SplitVector::stacked() const {
  Vec r(h.size() + v.size());
  r << h, v;
  return r;
}

SplitVector SplitVector::from_stacked(const TangentPoint& p, const Vec& hv) {
  const auto m = p.x.size();
  return {hv.head(m), hv.tail(m), p};
}

namespace {

void check_same(const SplitVector& a, const SplitVector& b) {
  if (!a.at.same_as(b.at))
    throw MismatchedPointError("split vectors at different points of T(M): x = " + format_point(as_span(a.at.x)) +
                               " vs " + format_point(as_span(b.at.x)));
}

}  // namespace

SplitVector& SplitVector::operator+=(const SplitVector& o) {
  check_same(*this, o);
  h += o.h;
  v += o.v;
  return *this;
}

SplitVector& SplitVector::operator-=(const SplitVector& o) {
  check_same(*this, o);
  h -= o.h;
  v -= o.v;
  return *this;
}

SplitVector& SplitVector::operator*=(double s) {
  h *= s;
  v *= s;
  return *this;
}

double SplitVector::max_abs() const {
  return std::max(h.lpNorm<Eigen::Infinity>(), v.lpNorm<Eigen::Infinity>());
}

AdaptedGeometry::AdaptedGeometry(const ChartMetric& base, const WeightPair& w, const Vec& x, const Vec& u, int order)
    : w_(w), pg_(base, x, order) {
  if (u.size() != x.size())
    throw DomainError("fiber vector has dimension " + std::to_string(u.size()) + ", chart point has " +
                      std::to_string(x.size()));
  P_ = {x, u, 0.5 * u.dot(pg_.g() * u)};
  w_.require_admissible(P_.t);
  jet_ = w_.jet(P_.t);
  k_ = derived_coeffs(jet_, w_.epsilon());
  j_defined_ = k_.complex_defined;
  sa_ = std::sqrt(jet_.a);
}

void AdaptedGeometry::require_here(const SplitVector& U) const {
  if (!U.at.same_as(P_))
    throw MismatchedPointError("split vector at x = " + format_point(as_span(U.at.x)) +
                               " used at x = " + format_point(as_span(P_.x)));
}

void AdaptedGeometry::require_complex() const {
  if (!j_defined_)
    throw DomainError("J_A with epsilon = +1 is undefined on the zero section (t = " + std::to_string(P_.t) + ")");
}

void AdaptedGeometry::require_curvature() const {
  if (pg_.order() < 3) throw GeometryError("tangent bundle curvature needs base geometry of order 3");
}

double AdaptedGeometry::metric(const SplitVector& U, const SplitVector& W) const {
  require_here(U);
  require_here(W);
  return pg_.inner(U.h, W.h) + jet_.a * pg_.inner(U.v, W.v) + jet_.b * gu(U.v) * gu(W.v);
}

Mat AdaptedGeometry::metric_matrix() const {
  const int m = dim();
  const Vec gu_vec = pg_.g() * P_.u;
  Mat G = Mat::Zero(2 * m, 2 * m);
  G.topLeftCorner(m, m) = pg_.g();
  G.bottomRightCorner(m, m) = jet_.a * pg_.g() + jet_.b * gu_vec * gu_vec.transpose();
  return G;
}

SplitVector AdaptedGeometry::J(const SplitVector& U) const {
  require_here(U);
  require_complex();
  SplitVector r = SplitVector::zero(P_);
  r.h = -sa_ * U.v + k_.B_coef * gu(U.v) * P_.u;
  r.v = U.h / sa_ - k_.A_coef * gu(U.h) * P_.u;
  return r;
}

Mat AdaptedGeometry::J_matrix() const {
  const int m = dim();
  Mat Jm(2 * m, 2 * m);
  for (int c = 0; c < 2 * m; ++c) Jm.col(c) = J(SplitVector::from_stacked(P_, Vec::Unit(2 * m, c))).stacked();
  return Jm;
}

double AdaptedGeometry::compatibility_residual(int pairs, unsigned seed) const {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  const int m = dim();
  auto draw = [&] {
    Vec s(2 * m);
    for (int i = 0; i < 2 * m; ++i) s(i) = N(rng);
    return SplitVector::from_stacked(P_, s);
  };
  double worst = 0.0;
  for (int i = 0; i < pairs; ++i) {
    SplitVector U = draw(), W = draw();
    worst = std::max(worst, std::abs(metric(J(U), J(W)) - metric(U, W)));
  }
  return worst;
}

double AdaptedGeometry::kahler_form(const SplitVector& U, const SplitVector& W) const { return metric(U, J(W)); }

double AdaptedGeometry::lee_form(const SplitVector& U) const {
  require_here(U);
  require_complex();
  return k_.lee_coef * gu(U.v);
}

SplitVector AdaptedGeometry::nijenhuis_hh(const Vec& X, const Vec& Y) const {
  require_complex();
  require_curvature();
  const double c = -jet_.da / (2.0 * jet_.a * jet_.a) + (jet_.a + P_.t * jet_.da) / (jet_.a * sa_) * k_.A_coef;
  const Vec& u = P_.u;
  return V(c * (gu(X) * Y - gu(Y) * X) + R(X, Y, u));
}

SplitVector AdaptedGeometry::nijenhuis_vv(const Vec& X, const Vec& Y, bool as_printed) const {
  require_complex();
  require_curvature();
  const Vec& u = P_.u;
  const double B = k_.B_coef;
  Vec r = -jet_.a * R(X, Y, u) + sa_ * B * gu(Y) * R(X, u, u);
  r -= as_printed ? Vec(sa_ * B * R(Y, u, u)) : Vec(sa_ * B * gu(X) * R(Y, u, u));
  r -= k_.lee_coef * (gu(Y) * X - gu(X) * Y);
  return V(r);
}

SplitVector AdaptedGeometry::connection_lift(const char* kind, const Vec& X, const Vec& Y) const {
  const Vec& u = P_.u;
  const double a = jet_.a;
  SplitVector r = SplitVector::zero(P_);
  if (std::strcmp(kind, "HH") == 0) {
    r.h = pg_.gamma(X, Y);
    if (pg_.order() >= 2) r.v = -0.5 * R(X, Y, u);
  } else if (std::strcmp(kind, "HV") == 0) {
    r.v = pg_.gamma(X, Y);
    if (pg_.order() >= 2) r.h = 0.5 * a * R(u, Y, X);
  } else if (std::strcmp(kind, "VH") == 0) {
    if (pg_.order() >= 2) r.h = 0.5 * a * R(u, X, Y);
  } else if (std::strcmp(kind, "VV") == 0) {
    r.v = k_.L * (gu(X) * Y + gu(Y) * X) + (k_.M * pg_.inner(X, Y) + k_.N * gu(X) * gu(Y)) * u;
  } else {
    throw GeometryError(std::string("unknown connection lift pattern '") + kind + "'");
  }
  return r;
}

SplitVector AdaptedGeometry::connection(const SplitVector& U, const SplitVector& W) const {
  require_here(U);
  require_here(W);
  if (pg_.order() < 2) throw GeometryError("tangent bundle connection needs base geometry of order 2");
  return connection_lift("HH", U.h, W.h) + connection_lift("HV", U.h, W.v) + connection_lift("VH", U.v, W.h) +
         connection_lift("VV", U.v, W.v);
}

SplitVector AdaptedGeometry::curvature_display(SlotPattern p, const Vec& X, const Vec& Y, const Vec& Z) const {
  require_curvature();
  const Vec& u = P_.u;
  const double a = jet_.a, da = jet_.da;
  const auto& k = k_;
  SplitVector r = SplitVector::zero(P_);
  switch (p) {
    case SlotPattern::HHH:
      r.h = R(X, Y, Z) +
            0.25 * a * (R(u, R(X, Z, u), Y) - R(u, R(Y, Z, u), X) + 2.0 * R(u, R(X, Y, u), Z));
      r.v = 0.5 * DR(Z, X, Y, u);
      break;
    case SlotPattern::HHV: {
      const Vec Rxyu = R(X, Y, u);
      r.v = R(X, Y, Z) + 0.25 * a * (R(Y, R(u, Z, X), u) - R(X, R(u, Z, Y), u)) + k.L * gu(Z) * Rxyu +
            k.M * pg_.inner(Rxyu, Z) * u;
      r.h = 0.5 * a * (DR(X, u, Z, Y) - DR(Y, u, Z, X));
      break;
    }
    case SlotPattern::HVH: {
      const Vec Rxzu = R(X, Z, u);
      r.h = 0.5 * a * DR(X, u, Y, Z);
      r.v = 0.5 * (R(X, Z, Y) - 0.5 * a * R(X, R(u, Y, Z), u) + k.L * gu(Y) * Rxzu + k.M * pg_.inner(Rxzu, Y) * u);
      break;
    }
    case SlotPattern::HVV:
      r.h = -0.5 * a * R(Y, Z, X) - 0.25 * a * a * R(u, Y, R(u, Z, X)) +
            0.25 * da * (gu(Z) * R(u, Y, X) - gu(Y) * R(u, Z, X));
      break;
    case SlotPattern::VVH:
      r.h = a * R(X, Y, Z) + 0.5 * da * (gu(X) * R(u, Y, Z) - gu(Y) * R(u, X, Z)) +
            0.25 * a * a * (R(u, X, R(u, Y, Z)) - R(u, Y, R(u, X, Z)));
      break;
    case SlotPattern::VVV:
      r.v = k.F1 * gu(Z) * (gu(X) * Y - gu(Y) * X) + k.F2 * (pg_.inner(X, Z) * Y - pg_.inner(Y, Z) * X) +
            k.F3 * (pg_.inner(X, Z) * gu(Y) - pg_.inner(Y, Z) * gu(X)) * u;
      break;
  }
  return r;
}

SplitVector AdaptedGeometry::curvature(const SplitVector& U, const SplitVector& W, const SplitVector& Z) const {
  require_here(U);
  require_here(W);
  require_here(Z);
  using S = SlotPattern;
  SplitVector r = curvature_display(S::HHH, U.h, W.h, Z.h);
  r += curvature_display(S::HHV, U.h, W.h, Z.v);
  r += curvature_display(S::HVH, U.h, W.v, Z.h);
  r += curvature_display(S::HVV, U.h, W.v, Z.v);
  r -= curvature_display(S::HVH, W.h, U.v, Z.h);
  r -= curvature_display(S::HVV, W.h, U.v, Z.v);
  r += curvature_display(S::VVH, U.v, W.v, Z.h);
  r += curvature_display(S::VVV, U.v, W.v, Z.v);
  return r;
}

double AdaptedGeometry::curvature4(const SplitVector& U, const SplitVector& W, const SplitVector& Z,
                                   const SplitVector& S) const {
  return metric(curvature(U, W, Z), S);
}

double AdaptedGeometry::area(const SplitVector& U, const SplitVector& W) const {
  const double uw = metric(U, W);
  return metric(U, U) * metric(W, W) - uw * uw;
}

double AdaptedGeometry::area_display(const char* kind, const Vec& X, const Vec& Y) const {
  const double a = jet_.a, b = jet_.b, gx = gu(X), gy = gu(Y);
  if (std::strcmp(kind, "HH") == 0) return 1.0;
  if (std::strcmp(kind, "HV") == 0) return a + b * gy * gy;
  if (std::strcmp(kind, "VV") == 0) return a * a + a * b * (gx * gx + gy * gy);
  throw GeometryError(std::string("unknown area pattern '") + kind + "'");
}

double AdaptedGeometry::sectional(const SplitVector& U, const SplitVector& W) const {
  const double q = area(U, W);
  if (!(q > 1e-14 * metric(U, U) * metric(W, W)))
    throw DegeneratePlaneError("degenerate plane in T(M) at x = " + format_point(as_span(P_.x)));
  return curvature4(U, W, W, U) / q;
}

double AdaptedGeometry::sectional_display(const char* kind, const Vec& X, const Vec& Y) const {
  require_curvature();
  const Vec& u = P_.u;
  const double a = jet_.a, b = jet_.b, gx = gu(X), gy = gu(Y);
  if (std::strcmp(kind, "HH") == 0) return pg_.sectional(X, Y) - 0.75 * a * pg_.norm2(R(X, Y, u));
  if (std::strcmp(kind, "HV") == 0) return a * a * pg_.norm2(R(u, Y, X)) / (4.0 * (a + b * gy * gy));
  if (std::strcmp(kind, "VV") == 0)
    return -(k_.F1 * a * gy * gy + k_.F2 * (a + b * gx * gx) + k_.F3 * (a + 2.0 * P_.t * b) * gx * gx) /
           (a * a + a * b * (gx * gx + gy * gy));
  throw GeometryError(std::string("unknown sectional pattern '") + kind + "'");
}

AdaptedBasis AdaptedGeometry::adapted_basis() const {
  const int m = dim();
  AdaptedBasis B;
  B.e = pg_.orthonormal_frame(P_.u);
  const double a = jet_.a, s = jet_.a + 2.0 * P_.t * jet_.b;
  for (int i = 0; i < m; ++i) B.E.push_back(H(B.e.col(i)));
  B.E.push_back(V(B.e.col(0) / std::sqrt(s)));
  for (int k = 1; k < m; ++k) B.E.push_back(V(B.e.col(k) / std::sqrt(a)));
  return B;
}

double AdaptedGeometry::basis_sectional_display(int alpha, int beta) const {
  require_curvature();
  const int m = dim();
  if (alpha == beta) throw DegeneratePlaneError("basis sectional curvature needs two distinct indices");
  if (alpha > beta) std::swap(alpha, beta);
  const Mat e = pg_.orthonormal_frame(P_.u);
  const Vec& u = P_.u;
  const double a = jet_.a;
  if (beta < m) return pg_.sectional(e.col(alpha), e.col(beta)) - 0.75 * a * pg_.norm2(R(e.col(alpha), e.col(beta), u));
  if (alpha < m) {
    if (beta == m) return 0.0;
    return 0.25 * a * pg_.norm2(R(u, e.col(beta - m), e.col(alpha)));
  }
  if (alpha == m) return -(k_.F2 + 2.0 * P_.t * k_.F3) / a;
  return -k_.F2 / a;
}

double AdaptedGeometry::sum_Ru_squared() const {
  const Mat e = pg_.orthonormal_frame(P_.u);
  double s = 0.0;
  for (int i = 0; i < dim(); ++i)
    for (int j = i + 1; j < dim(); ++j) s += pg_.norm2(R(e.col(i), e.col(j), P_.u));
  return s;
}

double AdaptedGeometry::scalar_curvature_published() const {
  require_curvature();
  const double a = jet_.a, m = dim();
  return pg_.scalar() + 0.5 * (2.0 - 3.0 * a) * sum_Ru_squared() +
         (1.0 - m) / a * (m * k_.F2 + 4.0 * P_.t * k_.F3);
}

double AdaptedGeometry::scalar_curvature() const {
  require_curvature();
  const double a = jet_.a, m = dim();
  return pg_.scalar() - 0.5 * a * sum_Ru_squared() + (1.0 - m) / a * (m * k_.F2 + 4.0 * P_.t * k_.F3);
}

double AdaptedGeometry::scalar_curvature_basis_sum() const {
  require_curvature();
  const AdaptedBasis B = adapted_basis();
  const int n = 2 * dim();
  double s = 0.0;
  for (int al = 0; al < n; ++al)
    for (int be = al + 1; be < n; ++be) s += 2.0 * curvature4(B.E[al], B.E[be], B.E[be], B.E[al]);
  return s;
}

Mat AdaptedGeometry::frame() const {
  const int m = dim();
  Mat F = Mat::Identity(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) F.block(m, i, m, 1) = -pg_.gamma(Vec::Unit(m, i), P_.u);
  return F;
}

Vec AdaptedGeometry::to_coordinates(const SplitVector& U) const {
  require_here(U);
  Vec c(2 * dim());
  c << U.h, U.v - pg_.gamma(U.h, P_.u);
  return c;
}

SplitVector AdaptedGeometry::from_coordinates(const Vec& c) const {
  const int m = dim();
  SplitVector r = SplitVector::zero(P_);
  r.h = c.head(m);
  r.v = c.tail(m) + pg_.gamma(r.h, P_.u);
  return r;
}

double space_form_scalar(const WeightPair& w, double c, int m, double t) {
  const auto j = w.jet(t);
  const auto k = derived_coeffs(w, t);
  return (m - 1.0) * (m * c - j.a * t * c * c - (m * k.F2 + 4.0 * t * k.F3) / j.a);
}

double space_form_scalar_published(const WeightPair& w, double c, int m, double t) {
  const auto j = w.jet(t);
  const auto k = derived_coeffs(w, t);
  return (m - 1.0) * (m * c + t * (2.0 - 3.0 * j.a) * c * c - (m * k.F2 + 4.0 * t * k.F3) / j.a);
}

bool horizontal_sectional_bound(const WeightPair& w, double C, double t) {
  return t <= 0.0 || w.a(t) <= 2.0 / (3.0 * C * t);
}

double metric_gA(const WeightPair& w, const ChartMetric& base, const TangentPoint& P, const SplitVector& U,
                 const SplitVector& V) {
  return AdaptedGeometry(base, w, P.x, P.u, 1).metric(U, V);
}

SplitVector almost_complex_JA(const WeightPair& w, const ChartMetric& base, const TangentPoint& P,
                              const SplitVector& U) {
  return AdaptedGeometry(base, w, P.x, P.u, 1).J(U);
}

double compatibility_check(const WeightPair& w, const ChartMetric& base, const TangentPoint& P) {
  return AdaptedGeometry(base, w, P.x, P.u, 1).compatibility_residual();
}

double scalar_curvature(const WeightPair& w, const ChartMetric& base, const TangentPoint& P) {
  return AdaptedGeometry(base, w, P.x, P.u, 3).scalar_curvature();
}

}  // namespace tbgeom
