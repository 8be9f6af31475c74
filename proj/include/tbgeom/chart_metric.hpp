#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tbgeom/dual.hpp"
#include "tbgeom/errors.hpp"
#include "tbgeom/tensor.hpp"

namespace tbgeom {

/// Metric components g_ij(x) of a Riemannian metric on an m-dimensional chart.
///
/// Components are stored row-major in a vector of length m*m. A metric built
/// from a generic callable (`ChartMetric::analytic`) can be evaluated on
/// double and on nested dual numbers up to third order, so every derivative
/// used downstream is exact. A metric built with `ChartMetric::sampled` only
/// evaluates on doubles; derivatives then come from central differences.
class ChartMetric {
 public:
  template <class T>
  using Evaluator = std::function<std::vector<T>(std::span<const T>)>;
  using DomainPredicate = std::function<bool(std::span<const double>)>;

  ChartMetric() = default;

  /// `f` must be callable as `f(std::span<const T>) -> std::vector<T>` for
  /// T in {double, D1, D2, D3}.
  template <class F>
  static ChartMetric analytic(int dim, std::string name, F f, DomainPredicate domain = {}) {
    ChartMetric m;
    m.dim_ = dim;
    m.name_ = std::move(name);
    m.domain_ = std::move(domain);
    auto e = std::make_shared<Evaluators>();
    e->f0 = [f](std::span<const double> x) { return f(x); };
    e->f1 = [f](std::span<const D1> x) { return f(x); };
    e->f2 = [f](std::span<const D2> x) { return f(x); };
    e->f3 = [f](std::span<const D3> x) { return f(x); };
    m.eval_ = std::move(e);
    return m;
  }

  static ChartMetric sampled(int dim, std::string name, Evaluator<double> f, DomainPredicate domain = {});

  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  bool has_analytic_derivatives() const { return eval_ && static_cast<bool>(eval_->f1); }

  /// Set for metrics built by `space_form` / `euclidean`.
  std::optional<double> constant_curvature() const { return constant_curvature_; }
  ChartMetric with_constant_curvature(double c) const {
    ChartMetric m = *this;
    m.constant_curvature_ = c;
    return m;
  }

  bool in_domain(std::span<const double> x) const;
  /// Throws DomainError if x is outside the chart domain or has the wrong size.
  void require_domain(std::span<const double> x) const;

  template <class T>
  std::vector<T> components(std::span<const T> x) const {
    if constexpr (std::is_same_v<T, double>) {
      return eval_->f0(x);
    } else if constexpr (std::is_same_v<T, D1>) {
      return eval_->f1(x);
    } else if constexpr (std::is_same_v<T, D2>) {
      return eval_->f2(x);
    } else {
      static_assert(std::is_same_v<T, D3>, "metric components evaluate up to third-order duals");
      return eval_->f3(x);
    }
  }

  /// g_ij at x as a matrix; checks domain, exact symmetry and positive definiteness.
  Mat matrix(const Vec& x) const;

 private:
  struct Evaluators {
    Evaluator<double> f0;
    Evaluator<D1> f1;
    Evaluator<D2> f2;
    Evaluator<D3> f3;
  };

  int dim_ = 0;
  std::string name_;
  DomainPredicate domain_;
  std::shared_ptr<const Evaluators> eval_;
  std::optional<double> constant_curvature_;
};

/// Flat metric δ_ij.
ChartMetric euclidean(int dim);

/// Constant curvature c realized in the conformal chart
/// g_ij = δ_ij / (1 + (c/4)|x|²)², restricted to 1 + (c/4)|x|² > 0.
ChartMetric space_form(int dim, double c);

/// One monomial coeff * x_1^p_1 ... x_m^p_m.
struct Monomial {
  double coeff = 0.0;
  std::vector<int> powers;
};
using Polynomial = std::vector<Monomial>;

/// Diagonal metric with polynomial entries g_ii(x) = diagonal[i](x).
ChartMetric diagonal_polynomial(int dim, std::vector<Polynomial> diagonal);

/// Builds a metric from {"dim": m, "kind": "space_form"|"diagonal_polynomial"|"euclidean", "params": {...}}.
///
///   space_form:          params {"c": real}
///   diagonal_polynomial: params {"diagonal": [[{"coeff": c, "powers": [p1..pm]}, ...], ...]}
ChartMetric metric_from_json(const nlohmann::json& spec);

}  // namespace tbgeom
