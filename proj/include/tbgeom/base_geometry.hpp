#pragma once

#include "tbgeom/chart_metric.hpp"
#include "tbgeom/tensor.hpp"

namespace tbgeom {

/// Central-difference steps used when a metric has no analytic derivatives,
/// indexed by derivative order (first, second, third).
struct FiniteDifferenceSteps {
  double first = 1e-5;
  double second = 1e-4;
  double third = 1e-3;
};

/// Metric components and their partial derivatives up to `order` at one point.
///   d1(l, i, j)       = ∂_l g_ij
///   d2(k, l, i, j)    = ∂_k ∂_l g_ij
///   d3(p, k, l, i, j) = ∂_p ∂_k ∂_l g_ij
struct MetricJet {
  int order = 0;
  Mat g;
  Tensor3 d1;
  Tensor4 d2;
  Tensor5 d3;
};

enum class DerivativeSource { Automatic, Dual, CentralDifference };

MetricJet metric_jet(const ChartMetric& metric, const Vec& x, int order,
                     DerivativeSource source = DerivativeSource::Automatic, FiniteDifferenceSteps steps = {});

/// Riemannian geometry of the base at one chart point. Curvature follows
/// R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z with R(∂_i,∂_j)∂_k = R^h_{kij} ∂_h,
/// so a space form of curvature c has R(X,Y)Z = c(g(Y,Z)X − g(X,Z)Y).
class PointGeometry {
 public:
  /// `order` 1 gives Christoffels, 2 adds curvature, 3 adds ∇R.
  PointGeometry(const ChartMetric& metric, const Vec& x, int order = 3,
                DerivativeSource source = DerivativeSource::Automatic, FiniteDifferenceSteps steps = {});

  int dim() const { return dim_; }
  int order() const { return order_; }
  const Vec& x() const { return x_; }
  const Mat& g() const { return g_; }
  const Mat& g_inv() const { return g_inv_; }
  const Tensor3& christoffel() const { return gamma_; }
  /// (p, k, i, j) = ∂_p Γ^k_ij
  const Tensor4& christoffel_derivative() const { return dgamma_; }
  const Tensor4& riemann() const { return riemann_; }
  /// (l, h, k, i, j) = (∇_l R)^h_{kij}
  const Tensor5& nabla_riemann() const { return nabla_riemann_; }

  double inner(const Vec& a, const Vec& b) const { return a.dot(g_ * b); }
  double norm2(const Vec& a) const { return inner(a, a); }

  /// Γ(X, Y)^k = Γ^k_ij X^i Y^j, i.e. ∇_X Y for Y with constant chart coefficients.
  Vec gamma(const Vec& X, const Vec& Y) const;
  /// R(X,Y)Z
  Vec R(const Vec& X, const Vec& Y, const Vec& Z) const;
  /// (∇_W R)(X,Y)Z
  Vec nabla_R(const Vec& W, const Vec& X, const Vec& Y, const Vec& Z) const;
  /// g(R(X,Y)Y, X) / (|X|²|Y|² − g(X,Y)²)
  double sectional(const Vec& X, const Vec& Y) const;
  double scalar() const;
  /// Columns form a g-orthonormal basis; the first column is parallel to `first` when it is nonzero.
  Mat orthonormal_frame(const Vec& first) const;

 private:
  void require_order(int needed, const char* what) const;

  int dim_ = 0;
  int order_ = 0;
  Vec x_;
  Mat g_, g_inv_;
  Tensor3 gamma_;
  Tensor4 dgamma_;
  Tensor4 riemann_;
  Tensor5 nabla_riemann_;
};

Tensor3 christoffel(const ChartMetric& metric, const Vec& x);
Tensor4 curvature(const ChartMetric& metric, const Vec& x);
Tensor5 nabla_R(const ChartMetric& metric, const Vec& x);
double sectional(const ChartMetric& metric, const Vec& x, const Vec& X, const Vec& Y);

}  // namespace tbgeom
