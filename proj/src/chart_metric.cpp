#include "tbgeom/chart_metric.hpp"

#include <cmath>
#include <sstream>

namespace tbgeom {

std::string format_point(std::span<const double> x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x[i];
  }
  os << ')';
  return os.str();
}

ChartMetric ChartMetric::sampled(int dim, std::string name, Evaluator<double> f, DomainPredicate domain) {
  ChartMetric m;
  m.dim_ = dim;
  m.name_ = std::move(name);
  m.domain_ = std::move(domain);
  auto e = std::make_shared<Evaluators>();
  e->f0 = std::move(f);
  m.eval_ = std::move(e);
  return m;
}

bool ChartMetric::in_domain(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) return false;
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return !domain_ || domain_(x);
}

void ChartMetric::require_domain(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw DomainError("chart point " + format_point(x) + " has dimension " + std::to_string(x.size()) +
                      ", metric '" + name_ + "' expects " + std::to_string(dim_));
  if (!in_domain(x)) throw DomainError("chart point " + format_point(x) + " is outside the domain of '" + name_ + "'");
}

Mat ChartMetric::matrix(const Vec& x) const {
  std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  require_domain(xs);
  auto c = components<double>(xs);
  Mat g(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) g(i, j) = c[static_cast<std::size_t>(i * dim_ + j)];
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      if (g(i, j) != g(j, i))
        throw SingularMetricError("metric '" + name_ + "' is not symmetric at " + format_point(xs));
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success)
    throw SingularMetricError("metric '" + name_ + "' is not positive definite (non-invertible) at " +
                              format_point(xs));
  return g;
}

ChartMetric euclidean(int dim) {
  auto f = [dim](auto x) {
    using T = typename decltype(x)::value_type;
    std::vector<T> g(static_cast<std::size_t>(dim * dim), T(0.0));
    for (int i = 0; i < dim; ++i) g[static_cast<std::size_t>(i * dim + i)] = T(1.0);
    return g;
  };
  return ChartMetric::analytic(dim, "euclidean", f).with_constant_curvature(0.0);
}

ChartMetric space_form(int dim, double c) {
  auto f = [dim, c](auto x) {
    using T = std::remove_cv_t<typename decltype(x)::element_type>;
    T r2(0.0);
    for (const T& xi : x) r2 = r2 + xi * xi;
    T q = 1.0 + (c / 4.0) * r2;
    T factor = 1.0 / (q * q);
    std::vector<T> g(static_cast<std::size_t>(dim * dim), T(0.0));
    for (int i = 0; i < dim; ++i) g[static_cast<std::size_t>(i * dim + i)] = factor;
    return g;
  };
  auto domain = [c](std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return 1.0 + (c / 4.0) * r2 > 0.0;
  };
  std::ostringstream name;
  name << "space_form(c=" << c << ")";
  return ChartMetric::analytic(dim, name.str(), f, domain).with_constant_curvature(c);
}

ChartMetric diagonal_polynomial(int dim, std::vector<Polynomial> diagonal) {
  if (static_cast<int>(diagonal.size()) != dim)
    throw ConfigError("diagonal_polynomial needs " + std::to_string(dim) + " diagonal entries, got " +
                      std::to_string(diagonal.size()));
  for (const auto& p : diagonal)
    for (const auto& mono : p) {
      if (static_cast<int>(mono.powers.size()) != dim)
        throw ConfigError("monomial powers must have length " + std::to_string(dim));
      for (int e : mono.powers)
        if (e < 0) throw ConfigError("monomial powers must be non-negative");
    }
  auto f = [dim, diagonal](auto x) {
    using T = std::remove_cv_t<typename decltype(x)::element_type>;
    std::vector<T> g(static_cast<std::size_t>(dim * dim), T(0.0));
    for (int i = 0; i < dim; ++i) {
      T sum(0.0);
      for (const auto& mono : diagonal[static_cast<std::size_t>(i)]) {
        T term(mono.coeff);
        for (int k = 0; k < dim; ++k) term = term * ipow(x[static_cast<std::size_t>(k)], mono.powers[static_cast<std::size_t>(k)]);
        sum = sum + term;
      }
      g[static_cast<std::size_t>(i * dim + i)] = sum;
    }
    return g;
  };
  auto domain = [dim, f](std::span<const double> x) {
    auto g = f(x);
    for (int i = 0; i < dim; ++i)
      if (!(g[static_cast<std::size_t>(i * dim + i)] > 0.0)) return false;
    return true;
  };
  return ChartMetric::analytic(dim, "diagonal_polynomial", f, domain);
}

namespace {

Polynomial polynomial_from_json(const nlohmann::json& j, int dim, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array of monomials");
  Polynomial p;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const auto& t = j[k];
    const std::string here = path + "[" + std::to_string(k) + "]";
    if (!t.is_object() || !t.contains("coeff")) throw ConfigError(here + ": monomial needs 'coeff'");
    Monomial mono;
    mono.coeff = t.at("coeff").get<double>();
    if (t.contains("powers")) {
      mono.powers = t.at("powers").get<std::vector<int>>();
    } else {
      mono.powers.assign(static_cast<std::size_t>(dim), 0);
    }
    if (static_cast<int>(mono.powers.size()) != dim) throw ConfigError(here + ".powers: expected length " + std::to_string(dim));
    p.push_back(std::move(mono));
  }
  return p;
}

}  // namespace

ChartMetric metric_from_json(const nlohmann::json& spec) {
  if (!spec.is_object()) throw ConfigError("base: expected an object");
  if (!spec.contains("dim")) throw ConfigError("base.dim: missing");
  if (!spec.at("dim").is_number_integer() || spec.at("dim").get<int>() < 1)
    throw ConfigError("base.dim: expected a positive integer");
  const int dim = spec.at("dim").get<int>();
  const std::string kind = spec.value("kind", std::string("space_form"));
  const nlohmann::json params = spec.value("params", nlohmann::json::object());
  if (kind == "euclidean") return euclidean(dim);
  if (kind == "space_form") {
    if (!params.contains("c") || !params.at("c").is_number()) throw ConfigError("base.params.c: missing or not a number");
    return space_form(dim, params.at("c").get<double>());
  }
  if (kind == "diagonal_polynomial") {
    if (!params.contains("diagonal")) throw ConfigError("base.params.diagonal: missing");
    const auto& d = params.at("diagonal");
    if (!d.is_array() || static_cast<int>(d.size()) != dim)
      throw ConfigError("base.params.diagonal: expected " + std::to_string(dim) + " polynomials");
    std::vector<Polynomial> diag;
    for (int i = 0; i < dim; ++i)
      diag.push_back(polynomial_from_json(d[static_cast<std::size_t>(i)], dim, "base.params.diagonal[" + std::to_string(i) + "]"));
    return diagonal_polynomial(dim, std::move(diag));
  }
  throw ConfigError("base.kind: unknown metric kind '" + kind + "'");
}

}  // namespace tbgeom
