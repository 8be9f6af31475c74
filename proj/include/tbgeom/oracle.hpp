#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tbgeom/tbundle.hpp"

namespace tbgeom {

/// Normalization of the numeric exterior derivative and of ω∧Ω.
///
///   Calibrated:   dω(X,Y) = ½(Xω(Y) − Yω(X)); dΩ(X,Y,Z) and (ω∧Ω)(X,Y,Z) are plain cyclic sums.
///                 This reproduces the Cheeger–Gromoll dΩ display.
///   Normalized:   1/(k+1) in front of the alternating sum, ⅓ in front of the cyclic wedge.
///   Unnormalized: no prefactors.
/// dΩ = ω∧Ω holds or fails identically under Calibrated and Normalized.
enum class FormConvention { Calibrated, Normalized, Unnormalized };

struct OracleOptions {
  double h = 1e-4;
  /// Step of the outer difference in fd_curvature (round-off there grows like 1/(h·h_outer)); 0 means 10·h.
  double curvature_h = 0.0;
  double outer_step() const { return curvature_h > 0.0 ? curvature_h : 10.0 * h; }
  /// One Richardson step: (4 D(h/2) − D(h)) / 3.
  bool richardson = true;
  FormConvention forms = FormConvention::Calibrated;
  /// Condition number of the induced metric above which `warn` is called.
  double condition_warning = 1e8;
  /// Receives conditioning warnings; null writes them to stderr.
  std::function<void(const std::string&)> warn;
};

/// Point of the chart (x, y) of T(M), stacked as z = (x, y).
Vec stack_point(const TangentPoint& P);
TangentPoint unstack_point(const ChartMetric& base, const Vec& z);

/// g_A written in the coordinates (x, y) of T(M).
class InducedMetric {
 public:
  InducedMetric(ChartMetric base, WeightPair w) : base_(std::move(base)), w_(std::move(w)) {}

  const ChartMetric& base() const { return base_; }
  const WeightPair& weights() const { return w_; }
  /// 2m
  int dim() const { return 2 * base_.dim(); }

  /// G_{∂x∂x} = g + Γ₀ᵀVΓ₀, G_{∂x∂y} = Γ₀ᵀV, G_{∂y∂y} = V with V = a g + b (gu)(gu)ᵀ, (Γ₀)^k_i = Γ^k_ij y^j.
  Mat components(const Vec& z) const;
  /// Columns δ_1..δ_m, ∂/∂y^1..∂/∂y^m in coordinates at z.
  Mat frame(const Vec& z) const;
  /// J_A in coordinates at z.
  Mat complex_structure(const Vec& z) const;

 private:
  ChartMetric base_;
  WeightPair w_;
};

InducedMetric induce(const ChartMetric& base, const WeightPair& w);

/// Directional derivative of a vector-valued map along `dir` by central differences (Richardson per `opt`).
Vec fd_directional(const std::function<Vec(const Vec&)>& f, const Vec& z, const Vec& dir,
                   const OracleOptions& opt = {});

/// Christoffel symbols (c, a, b) of the induced metric from differenced components.
Tensor3 fd_connection(const InducedMetric& im, const Vec& z, const OracleOptions& opt = {});
/// R^d_{cab} (index order (d, c, a, b)) from differenced fd_connection.
Tensor4 fd_curvature(const InducedMetric& im, const Vec& z, const OracleOptions& opt = {});
/// G^{bc} R^a_{cab} of fd_curvature.
double fd_scalar_curvature(const InducedMetric& im, const Vec& z, const OracleOptions& opt = {});

/// A k-form on the chart (x, y): value at z on k coordinate vectors.
struct Form {
  int degree = 0;
  std::function<double(const Vec& z, const std::vector<Vec>& vectors)> eval;
};

/// dφ at z on k+1 constant coordinate fields (brackets vanish), normalized per `opt.forms`.
double fd_exterior_derivative(const Form& form, const Vec& z, const std::vector<Vec>& vectors,
                              const OracleOptions& opt = {});
/// (ω∧Ω)(X,Y,Z) for a 1-form and a 2-form, normalized to match fd_exterior_derivative.
double wedge_1_2(const Form& omega, const Form& Omega, const Vec& z, const Vec& X, const Vec& Y, const Vec& Z,
                 FormConvention conv = FormConvention::Calibrated);

/// Ω_A(U, V) = g_A(U, J_A V) in coordinates.
Form kahler_form_field(const InducedMetric& im);
/// ω with ω(X^H) = 0, ω(X^V) = lee_coef g(X, u), in coordinates.
Form lee_form_field(const InducedMetric& im);
/// The function t = ½ g(y, y) as a 0-form.
Form energy_function(const InducedMetric& im);
/// Exact 1-form df of a 0-form, with df(X) taken by central differences.
Form fd_differential(const Form& f, const OracleOptions& opt = {});

/// N_J(U,V) = [JU,JV] − J[JU,V] − J[U,JV] − [U,V] for constant coordinate fields U, V.
Vec fd_nijenhuis(const InducedMetric& im, const Vec& z, const Vec& U, const Vec& V, const OracleOptions& opt = {});

// Adapted-frame views of the oracle at P: inputs and outputs are split vectors.

/// ∇_U W with W extended by constant adapted coefficients (W = W.h^i δ_i + W.v^i ∂/∂y^i).
SplitVector oracle_connection(const InducedMetric& im, const SplitVector& U, const SplitVector& W,
                              const OracleOptions& opt = {});
/// R̃(U, V)W from fd_curvature.
SplitVector oracle_curvature(const InducedMetric& im, const SplitVector& U, const SplitVector& V,
                             const SplitVector& W, const OracleOptions& opt = {});
/// R̃(U, V)W from a precomputed fd_curvature tensor and the frame at the same point.
SplitVector apply_curvature(const Tensor4& R, const Mat& frame, const SplitVector& U, const SplitVector& V,
                            const SplitVector& W);
SplitVector oracle_nijenhuis(const InducedMetric& im, const SplitVector& U, const SplitVector& V,
                             const OracleOptions& opt = {});

}  // namespace tbgeom
