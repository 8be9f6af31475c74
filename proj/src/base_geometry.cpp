#include "tbgeom/base_geometry.hpp"

#include <cmath>
#include <string>

namespace tbgeom {

namespace {

std::span<const double> as_span(const Vec& x) { return {x.data(), static_cast<std::size_t>(x.size())}; }

MetricJet dual_jet(const ChartMetric& metric, const Vec& x, int order) {
  const int m = metric.dim();
  MetricJet jet;
  jet.order = order;
  jet.g = metric.matrix(x);
  auto idx = [m](int i, int j) { return static_cast<std::size_t>(i * m + j); };
  if (order >= 1) {
    jet.d1 = Tensor3(m);
    std::vector<D1> xd(static_cast<std::size_t>(m));
    for (int l = 0; l < m; ++l) {
      for (int k = 0; k < m; ++k) xd[static_cast<std::size_t>(k)] = D1(x(k), k == l ? 1.0 : 0.0);
      auto c = metric.components<D1>(xd);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) jet.d1(l, i, j) = c[idx(i, j)].du;
    }
  }
  if (order >= 2) {
    jet.d2 = Tensor4(m);
    std::vector<D2> xd(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < m; ++l) {
        for (int q = 0; q < m; ++q)
          xd[static_cast<std::size_t>(q)] = D2(D1(x(q), q == l ? 1.0 : 0.0), D1(q == k ? 1.0 : 0.0, 0.0));
        auto c = metric.components<D2>(xd);
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) jet.d2(k, l, i, j) = c[idx(i, j)].du.du;
      }
  }
  if (order >= 3) {
    jet.d3 = Tensor5(m);
    std::vector<D3> xd(static_cast<std::size_t>(m));
    for (int p = 0; p < m; ++p)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          for (int q = 0; q < m; ++q) {
            D2 inner(D1(x(q), q == l ? 1.0 : 0.0), D1(q == k ? 1.0 : 0.0, 0.0));
            D2 outer(D1(q == p ? 1.0 : 0.0, 0.0), D1(0.0, 0.0));
            xd[static_cast<std::size_t>(q)] = D3(inner, outer);
          }
          auto c = metric.components<D3>(xd);
          for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) jet.d3(p, k, l, i, j) = c[idx(i, j)].du.du.du;
        }
  }
  return jet;
}

MetricJet difference_jet(const ChartMetric& metric, const Vec& x, int order, FiniteDifferenceSteps steps) {
  const int m = metric.dim();
  MetricJet jet;
  jet.order = order;
  jet.g = metric.matrix(x);
  auto eval = [&](const Vec& p) { return metric.matrix(p); };
  if (order >= 1) {
    jet.d1 = Tensor3(m);
    const double h = steps.first;
    for (int l = 0; l < m; ++l) {
      Vec xp = x, xm = x;
      xp(l) += h;
      xm(l) -= h;
      Mat d = (eval(xp) - eval(xm)) / (2.0 * h);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) jet.d1(l, i, j) = d(i, j);
    }
  }
  if (order >= 2) {
    jet.d2 = Tensor4(m);
    const double h = steps.second;
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < m; ++l) {
        Mat acc = Mat::Zero(m, m);
        for (int sk : {1, -1})
          for (int sl : {1, -1}) {
            Vec p = x;
            p(k) += sk * h;
            p(l) += sl * h;
            acc += static_cast<double>(sk * sl) * eval(p);
          }
        acc /= 4.0 * h * h;
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) jet.d2(k, l, i, j) = acc(i, j);
      }
  }
  if (order >= 3) {
    jet.d3 = Tensor5(m);
    const double h = steps.third;
    for (int p = 0; p < m; ++p)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          Mat acc = Mat::Zero(m, m);
          for (int sp : {1, -1})
            for (int sk : {1, -1})
              for (int sl : {1, -1}) {
                Vec q = x;
                q(p) += sp * h;
                q(k) += sk * h;
                q(l) += sl * h;
                acc += static_cast<double>(sp * sk * sl) * eval(q);
              }
          acc /= 8.0 * h * h * h;
          for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) jet.d3(p, k, l, i, j) = acc(i, j);
        }
  }
  return jet;
}

}  // namespace

MetricJet metric_jet(const ChartMetric& metric, const Vec& x, int order, DerivativeSource source,
                     FiniteDifferenceSteps steps) {
  if (order < 0 || order > 3) throw GeometryError("metric jet order must be in [0, 3]");
  const bool use_dual = source == DerivativeSource::Dual ||
                        (source == DerivativeSource::Automatic && metric.has_analytic_derivatives());
  if (use_dual && !metric.has_analytic_derivatives())
    throw GeometryError("metric '" + metric.name() + "' has no analytic derivatives");
  return use_dual ? dual_jet(metric, x, order) : difference_jet(metric, x, order, steps);
}

PointGeometry::PointGeometry(const ChartMetric& metric, const Vec& x, int order, DerivativeSource source,
                             FiniteDifferenceSteps steps)
    : dim_(metric.dim()), order_(order), x_(x) {
  if (order < 1 || order > 3) throw GeometryError("PointGeometry order must be 1, 2 or 3");
  const int m = dim_;
  MetricJet jet = metric_jet(metric, x, order, source, steps);
  g_ = jet.g;
  g_inv_ = g_.inverse();

  // Lowered combination S_{l,ij} = ∂_i g_jl + ∂_j g_il − ∂_l g_ij.
  Tensor3 S(m);
  for (int l = 0; l < m; ++l)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) S(l, i, j) = jet.d1(i, j, l) + jet.d1(j, i, l) - jet.d1(l, i, j);

  gamma_ = Tensor3(m);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double s = 0.0;
        for (int l = 0; l < m; ++l) s += g_inv_(k, l) * S(l, i, j);
        gamma_(k, i, j) = 0.5 * s;
      }
  if (order < 2) return;

  std::vector<Mat> dginv(static_cast<std::size_t>(m));
  for (int p = 0; p < m; ++p) {
    Mat dg(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) dg(i, j) = jet.d1(p, i, j);
    dginv[static_cast<std::size_t>(p)] = -g_inv_ * dg * g_inv_;
  }
  Tensor4 dS(m);  // (p, l, i, j)
  for (int p = 0; p < m; ++p)
    for (int l = 0; l < m; ++l)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) dS(p, l, i, j) = jet.d2(p, i, j, l) + jet.d2(p, j, i, l) - jet.d2(p, l, i, j);

  dgamma_ = Tensor4(m);
  for (int p = 0; p < m; ++p)
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          double s = 0.0;
          for (int l = 0; l < m; ++l) s += dginv[static_cast<std::size_t>(p)](k, l) * S(l, i, j) + g_inv_(k, l) * dS(p, l, i, j);
          dgamma_(p, k, i, j) = 0.5 * s;
        }

  riemann_ = Tensor4(m);
  for (int h = 0; h < m; ++h)
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          double r = dgamma_(i, h, j, k) - dgamma_(j, h, i, k);
          for (int l = 0; l < m; ++l) r += gamma_(h, i, l) * gamma_(l, j, k) - gamma_(h, j, l) * gamma_(l, i, k);
          riemann_(h, k, i, j) = r;
        }
  if (order < 3) return;

  // Second derivatives of the inverse metric and of S.
  std::vector<Mat> dg(static_cast<std::size_t>(m));
  for (int p = 0; p < m; ++p) {
    dg[static_cast<std::size_t>(p)] = Mat(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) dg[static_cast<std::size_t>(p)](i, j) = jet.d1(p, i, j);
  }
  auto ddginv = [&](int q, int p) {
    Mat d2g(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) d2g(i, j) = jet.d2(q, p, i, j);
    const Mat& dq = dginv[static_cast<std::size_t>(q)];
    return Mat(-dq * dg[static_cast<std::size_t>(p)] * g_inv_ - g_inv_ * d2g * g_inv_ -
               g_inv_ * dg[static_cast<std::size_t>(p)] * dq);
  };
  Tensor5 ddgamma(m);  // (q, p, k, i, j) = ∂_q ∂_p Γ^k_ij
  for (int q = 0; q < m; ++q)
    for (int p = 0; p < m; ++p) {
      Mat dd = ddginv(q, p);
      for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) {
            double s = 0.0;
            for (int l = 0; l < m; ++l) {
              double ddS = jet.d3(q, p, i, j, l) + jet.d3(q, p, j, i, l) - jet.d3(q, p, l, i, j);
              s += dd(k, l) * S(l, i, j) + dginv[static_cast<std::size_t>(p)](k, l) * dS(q, l, i, j) +
                   dginv[static_cast<std::size_t>(q)](k, l) * dS(p, l, i, j) + g_inv_(k, l) * ddS;
            }
            ddgamma(q, p, k, i, j) = 0.5 * s;
          }
    }

  Tensor5 dR(m);  // (p, h, k, i, j) = ∂_p R^h_kij
  for (int p = 0; p < m; ++p)
    for (int h = 0; h < m; ++h)
      for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) {
            double r = ddgamma(p, i, h, j, k) - ddgamma(p, j, h, i, k);
            for (int l = 0; l < m; ++l)
              r += dgamma_(p, h, i, l) * gamma_(l, j, k) + gamma_(h, i, l) * dgamma_(p, l, j, k) -
                   dgamma_(p, h, j, l) * gamma_(l, i, k) - gamma_(h, j, l) * dgamma_(p, l, i, k);
            dR(p, h, k, i, j) = r;
          }

  nabla_riemann_ = Tensor5(m);
  for (int p = 0; p < m; ++p)
    for (int h = 0; h < m; ++h)
      for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) {
            double r = dR(p, h, k, i, j);
            for (int l = 0; l < m; ++l)
              r += gamma_(h, p, l) * riemann_(l, k, i, j) - gamma_(l, p, k) * riemann_(h, l, i, j) -
                   gamma_(l, p, i) * riemann_(h, k, l, j) - gamma_(l, p, j) * riemann_(h, k, i, l);
            nabla_riemann_(p, h, k, i, j) = r;
          }
}

void PointGeometry::require_order(int needed, const char* what) const {
  if (order_ < needed)
    throw GeometryError(std::string(what) + " needs PointGeometry of order " + std::to_string(needed));
}

Vec PointGeometry::gamma(const Vec& X, const Vec& Y) const {
  Vec r = Vec::Zero(dim_);
  for (int k = 0; k < dim_; ++k)
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) r(k) += gamma_(k, i, j) * X(i) * Y(j);
  return r;
}

Vec PointGeometry::R(const Vec& X, const Vec& Y, const Vec& Z) const {
  require_order(2, "curvature");
  Vec r = Vec::Zero(dim_);
  for (int h = 0; h < dim_; ++h)
    for (int k = 0; k < dim_; ++k) {
      if (Z(k) == 0.0) continue;
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) r(h) += riemann_(h, k, i, j) * Z(k) * X(i) * Y(j);
    }
  return r;
}

Vec PointGeometry::nabla_R(const Vec& W, const Vec& X, const Vec& Y, const Vec& Z) const {
  require_order(3, "covariant derivative of curvature");
  Vec r = Vec::Zero(dim_);
  for (int l = 0; l < dim_; ++l) {
    if (W(l) == 0.0) continue;
    for (int h = 0; h < dim_; ++h)
      for (int k = 0; k < dim_; ++k)
        for (int i = 0; i < dim_; ++i)
          for (int j = 0; j < dim_; ++j) r(h) += nabla_riemann_(l, h, k, i, j) * W(l) * Z(k) * X(i) * Y(j);
  }
  return r;
}

double PointGeometry::sectional(const Vec& X, const Vec& Y) const {
  const double xx = norm2(X), yy = norm2(Y), xy = inner(X, Y);
  const double denom = xx * yy - xy * xy;
  if (!(denom > 1e-14 * xx * yy))
    throw DegeneratePlaneError("degenerate plane at " + format_point(as_span(x_)));
  return inner(R(X, Y, Y), X) / denom;
}

double PointGeometry::scalar() const {
  require_order(2, "scalar curvature");
  double s = 0.0;
  for (int k = 0; k < dim_; ++k)
    for (int j = 0; j < dim_; ++j) {
      double ric = 0.0;
      for (int i = 0; i < dim_; ++i) ric += riemann_(i, k, i, j);
      s += g_inv_(k, j) * ric;
    }
  return s;
}

Mat PointGeometry::orthonormal_frame(const Vec& first) const {
  Mat E(dim_, dim_);
  int n = 0;
  auto push = [&](Vec v) {
    for (int c = 0; c < n; ++c) v -= inner(E.col(c), v) * E.col(c);
    double nv = std::sqrt(norm2(v));
    if (nv < 1e-10) return;
    E.col(n++) = v / nv;
  };
  if (first.size() == dim_ && first.norm() > 0.0) push(first);
  for (int i = 0; i < dim_ && n < dim_; ++i) push(Vec::Unit(dim_, i));
  return E;
}

Tensor3 christoffel(const ChartMetric& metric, const Vec& x) { return PointGeometry(metric, x, 1).christoffel(); }
Tensor4 curvature(const ChartMetric& metric, const Vec& x) { return PointGeometry(metric, x, 2).riemann(); }
Tensor5 nabla_R(const ChartMetric& metric, const Vec& x) { return PointGeometry(metric, x, 3).nabla_riemann(); }
double sectional(const ChartMetric& metric, const Vec& x, const Vec& X, const Vec& Y) {
  return PointGeometry(metric, x, 2).sectional(X, Y);
}

}  // namespace tbgeom
