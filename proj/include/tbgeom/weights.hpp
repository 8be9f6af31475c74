#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tbgeom/dual.hpp"
#include "tbgeom/errors.hpp"

namespace tbgeom {

/// A smooth scalar function of the energy density t, evaluable on double and
/// on nested duals. Evaluators that cannot reach a given depth throw.
class UniFn {
 public:
  UniFn() = default;

  template <class F>
  static UniFn make(F f) {
    UniFn u;
    auto e = std::make_shared<Evaluators>();
    e->f0 = [f](double t) { return f(t); };
    e->f1 = [f](D1 t) { return f(t); };
    e->f2 = [f](D2 t) { return f(t); };
    e->f3 = [f](D3 t) { return f(t); };
    u.eval_ = std::move(e);
    return u;
  }
  static UniFn constant(double c) {
    return make([c](auto t) { return decltype(t)(c); });
  }

  explicit operator bool() const { return static_cast<bool>(eval_); }

  template <class T>
  T operator()(const T& t) const {
    if constexpr (std::is_same_v<T, double>) {
      return eval_->f0(t);
    } else if constexpr (std::is_same_v<T, D1>) {
      return eval_->f1(t);
    } else if constexpr (std::is_same_v<T, D2>) {
      return eval_->f2(t);
    } else {
      static_assert(std::is_same_v<T, D3>);
      return eval_->f3(t);
    }
  }

  double value(double t) const { return (*this)(t); }
  /// f, f′, f″ at t.
  std::array<double, 3> jet2(double t) const {
    D2 r = (*this)(D2(D1(t, 1.0), D1(1.0, 0.0)));
    return {r.re.re, r.re.du, r.du.du};
  }

 private:
  struct Evaluators {
    std::function<double(double)> f0;
    std::function<D1(D1)> f1;
    std::function<D2(D2)> f2;
    std::function<D3(D3)> f3;
  };
  std::shared_ptr<const Evaluators> eval_;
};

/// Admissible energies: [lo, hi) when lo_closed, otherwise (lo, hi).
struct TDomain {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = true;

  bool contains(double t) const { return std::isfinite(t) && (lo_closed ? t >= lo : t > lo) && t < hi; }
  /// A bounded sub-interval suitable for sampling: hi is capped at lo + span.
  std::pair<double, double> sampling_range(double span = 10.0) const;
  std::string describe() const;
};

/// a, a′, a″, b, b′ at one t.
struct WeightJet {
  double t = 0.0;
  double a = 0.0, da = 0.0, dda = 0.0;
  double b = 0.0, db = 0.0;
};

struct DerivedCoefficients {
  double L = 0.0, M = 0.0, N = 0.0;
  double dL = 0.0, dM = 0.0;
  double F1 = 0.0, F2 = 0.0, F3 = 0.0;
  double A_coef = 0.0, B_coef = 0.0;
  /// ω(X^V) = lee_coef · g(X, u)
  double lee_coef = 0.0;
  /// False for ε = +1 at t below kMinTPositiveEpsilon; A, B and lee_coef are then NaN.
  bool complex_defined = true;
};

/// Weights (a, b, ε) of g_A = g ⊕ (a g + b g(·,u) g(·,u)) and of J_A.
class WeightPair {
 public:
  WeightPair() = default;
  WeightPair(std::string name, UniFn a, UniFn b, int epsilon, TDomain domain, nlohmann::json params = {});

  const std::string& name() const { return name_; }
  int epsilon() const { return epsilon_; }
  const TDomain& domain() const { return domain_; }
  const nlohmann::json& params() const { return params_; }
  const UniFn& a_fn() const { return a_; }
  const UniFn& b_fn() const { return b_; }

  double a(double t) const { return a_(t); }
  double b(double t) const { return b_(t); }
  WeightJet jet(double t) const;

  /// True when t is in the domain, a(t) > 0 and a + 2tb > 0.
  bool admissible(double t) const;
  /// Throws DomainError naming the failed condition.
  void require_admissible(double t) const;

  WeightPair with_epsilon(int epsilon) const;

 private:
  std::string name_;
  UniFn a_, b_;
  int epsilon_ = -1;
  TDomain domain_;
  nlohmann::json params_;
};

/// Threshold below which A(t), B(t) switch to their series at t = 0 (ε = −1).
inline constexpr double kSmallT = 1e-6;
/// ε = +1 structures live on T(M) minus the zero section; t must reach this.
inline constexpr double kMinTPositiveEpsilon = 1e-12;

/// A(t) = (1/2t)(1/√a + ε/√(a+2bt)),  B(t) = (1/2t)(√a + ε√(a+2bt)).
std::pair<double, double> ab_coefficients(int epsilon, double t, double a, double b);

DerivedCoefficients derived_coeffs(const WeightPair& w, double t);
DerivedCoefficients derived_coeffs(const WeightJet& j, int epsilon);

/// c(t) = −a′/(2a²) + ((a + t a′)/(a√a)) A(t); constant and equal to the base
/// curvature whenever J_A is integrable over a space form.
double integrability_c(const WeightPair& w, double t);

enum class MonotonicityRule {
  /// ε = −1: a non-decreasing; ε = +1: t·a decreasing.
  Stated,
  /// Both signs: −ε(a + t a′) > 0, the exact condition for the completed b to exist.
  Exact,
};

/// Completes a to an almost Kähler pair: b = a′(2a + t a′)/(2a), which makes
/// the Lee form vanish identically. Preconditions are checked at 1000 points
/// of `domain` (capped to a span of 10 when unbounded).
WeightPair almost_kahler_complete(UniFn a, int epsilon, TDomain domain = {},
                                  MonotonicityRule rule = MonotonicityRule::Stated, std::string name = "");

/// Closed-form solutions of the Kähler system over a space form M(c).
///   case 1: c > 0, κ < 0, ε = +1, t ∈ (0, −1/κ)
///   case 2: κc < 0, ε = −1; t ∈ [0, ∞) for κ > 0, t ∈ [0, −1/κ) for κ < 0
WeightPair kahler_family(int kase, double c, double kappa);

/// b − 2a′(ta′ + a)/a
double kahler_residual_b(const WeightPair& w, double t);
/// a′ − 2ca(2ta′ + a)
double kahler_residual_a(const WeightPair& w, double c, double t);
/// t a′² + 2aa′ − 2ab
double flatness_residual(const WeightPair& w, double t);
/// b − a′(1 + t a′/(2a))
double flat_relation_residual(const WeightPair& w, double t);
/// Left side of the constant-scalar ODE for constant a = k over M(c) in
/// dimension m; constant in t exactly for the constant-scalar solutions.
double constant_scalar_ode_lhs(const WeightPair& w, double c, int m, double t);

/// Built-in families. Parameters (JSON object) by name:
///   sasaki, cheeger_gromoll, g1, scal_a23                     no parameters
///   lck_example        c ≥ 0, k > 0
///   scal_exp           m
///   scal_band          k ∈ (0, 2/3), c, m
///   scal_t2            k, c, m
///   flat_power         a0 > 0, k > 1 or k ≤ 0
///   flat_exp           a0 > 0, branch "plus" | "minus"
///   kahler             case, c, kappa
/// An optional "epsilon" overrides the family's sign.
WeightPair named_family(const std::string& name, const nlohmann::json& params = nlohmann::json::object());
std::vector<std::string> named_family_names();

/// {"name": ..., "params": {...}, "epsilon": ±1} or a custom pair
/// {"name": "custom", "a": fn, "b": fn, "epsilon": ±1, "t_domain": [lo, hi]} where fn is
/// {"kind": "poly", "coeffs": [c0, c1, ...]} or {"kind": "exp_poly", "coeffs": [...]} (exp of the polynomial).
/// {"name": "almost_kahler", "a": fn, "epsilon": ±1} completes a custom a.
WeightPair weights_from_json(const nlohmann::json& spec);

}  // namespace tbgeom
