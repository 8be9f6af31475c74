#pragma once

#include <optional>
#include <vector>

#include "tbgeom/base_geometry.hpp"
#include "tbgeom/weights.hpp"

namespace tbgeom {

/// A point (x, u) of T(M) with t = ½ g_x(u, u).
struct TangentPoint {
  Vec x;
  Vec u;
  double t = 0.0;

  static TangentPoint make(const ChartMetric& base, const Vec& x, const Vec& u);
  bool same_as(const TangentPoint& o, double tol = 1e-14) const;
};

/// Tangent vector of T(M) at `at`: h^i δ_i + v^i ∂/∂y^i.
struct SplitVector {
  Vec h;
  Vec v;
  TangentPoint at;

  static SplitVector horizontal(const TangentPoint& p, const Vec& X);
  static SplitVector vertical(const TangentPoint& p, const Vec& X);
  static SplitVector zero(const TangentPoint& p);
  /// Stacked (h, v).
  Vec stacked() const;
  static SplitVector from_stacked(const TangentPoint& p, const Vec& hv);

  SplitVector& operator+=(const SplitVector& o);
  SplitVector& operator-=(const SplitVector& o);
  SplitVector& operator*=(double s);
  friend SplitVector operator+(SplitVector a, const SplitVector& b) { return a += b; }
  friend SplitVector operator-(SplitVector a, const SplitVector& b) { return a -= b; }
  friend SplitVector operator*(double s, SplitVector a) { return a *= s; }
  friend SplitVector operator*(SplitVector a, double s) { return a *= s; }
  friend SplitVector operator-(SplitVector a) { return a *= -1.0; }
  double max_abs() const;
};

/// Slot patterns of R̃(U, V)W with U, V, W horizontal (H) or vertical (V) lifts.
enum class SlotPattern { HHH, HHV, HVH, HVV, VVH, VVV };

/// g_A-orthonormal frame E_1..E_2m built on a base orthonormal frame with e_1 = u/|u|.
struct AdaptedBasis {
  Mat e;                          // base frame, columns
  std::vector<SplitVector> E;     // E_1..E_m horizontal, E_{m+1}..E_{2m} vertical
};

/// Geometry of (T(M), g_A, J_A) at one point, in the adapted frame.
///
/// Connection and curvature act on lifts X^H, X^V of base vectors. Fields are
/// extended by lifting base fields with constant chart coefficients, so that
/// ∇_X Y = Γ(X, Y) at the base point.
class AdaptedGeometry {
 public:
  /// `order` as for PointGeometry: 1 is enough for g_A, J_A and forms; 3 for curvature.
  AdaptedGeometry(const ChartMetric& base, const WeightPair& w, const Vec& x, const Vec& u, int order = 3);

  const TangentPoint& point() const { return P_; }
  const PointGeometry& base() const { return pg_; }
  const WeightPair& weights() const { return w_; }
  const WeightJet& jet() const { return jet_; }
  const DerivedCoefficients& coeffs() const { return k_; }
  int dim() const { return pg_.dim(); }
  double t() const { return P_.t; }
  /// False for ε = +1 on the zero section, where J_A is undefined.
  bool has_complex_structure() const { return j_defined_; }

  SplitVector H(const Vec& X) const { return SplitVector::horizontal(P_, X); }
  SplitVector V(const Vec& X) const { return SplitVector::vertical(P_, X); }
  /// g(X, u)
  double gu(const Vec& X) const { return pg_.inner(X, P_.u); }

  double metric(const SplitVector& U, const SplitVector& W) const;
  /// 2m×2m matrix of g_A on stacked (h, v) coefficients.
  Mat metric_matrix() const;
  SplitVector J(const SplitVector& U) const;
  /// 2m×2m matrix of J_A on stacked (h, v) coefficients.
  Mat J_matrix() const;
  /// max |g_A(JU, JV) − g_A(U, V)| over `pairs` random pairs drawn with `seed`.
  double compatibility_residual(int pairs = 100, unsigned seed = 1) const;

  /// Ω_A(U, V) = g_A(U, J_A V)
  double kahler_form(const SplitVector& U, const SplitVector& W) const;
  /// ω(X^H) = 0, ω(X^V) = lee_coef g(X, u)
  double lee_form(const SplitVector& U) const;

  SplitVector nijenhuis_hh(const Vec& X, const Vec& Y) const;
  /// Vertical–vertical slot; `as_printed` reproduces the published display.
  SplitVector nijenhuis_vv(const Vec& X, const Vec& Y, bool as_printed = false) const;

  /// ∇^A_U W for U, W combinations of constant-coefficient lifts.
  SplitVector connection(const SplitVector& U, const SplitVector& W) const;
  /// The four lift displays; `kind` is "HH", "HV", "VH" or "VV".
  SplitVector connection_lift(const char* kind, const Vec& X, const Vec& Y) const;

  /// R̃(X^?, Y^?)Z^? for one slot pattern.
  SplitVector curvature_display(SlotPattern p, const Vec& X, const Vec& Y, const Vec& Z) const;
  /// R̃(U, V)W for arbitrary split vectors (trilinear extension of the displays).
  SplitVector curvature(const SplitVector& U, const SplitVector& W, const SplitVector& Z) const;
  /// g_A(R̃(U, V)W, S)
  double curvature4(const SplitVector& U, const SplitVector& V, const SplitVector& W, const SplitVector& S) const;

  /// g_A(U,U) g_A(V,V) − g_A(U,V)²
  double area(const SplitVector& U, const SplitVector& W) const;
  /// Closed forms for g-orthonormal X, Y: pattern "HH", "HV" or "VV".
  double area_display(const char* kind, const Vec& X, const Vec& Y) const;

  /// g_A(R̃(U,V)V, U) / Q̃(U, V)
  double sectional(const SplitVector& U, const SplitVector& W) const;
  /// Closed forms for g-orthonormal X, Y: pattern "HH", "HV" or "VV".
  double sectional_display(const char* kind, const Vec& X, const Vec& Y) const;

  AdaptedBasis adapted_basis() const;
  /// K̃(E_α, E_β) on the adapted basis from the closed forms (indices 0-based, α ≠ β).
  double basis_sectional_display(int alpha, int beta) const;

  /// scal + ((2 − 3a)/2) Σ_{i<j}|R(e_i,e_j)u|² + ((1 − m)/a)(mF₂ + 4tF₃), as published.
  double scalar_curvature_published() const;
  /// scal − (a/2) Σ_{i<j}|R(e_i,e_j)u|² + ((1 − m)/a)(mF₂ + 4tF₃)
  double scalar_curvature() const;
  /// Σ_{α≠β} K̃(E_α, E_β) over the adapted basis.
  double scalar_curvature_basis_sum() const;

  /// Converts between adapted (h, v) and coordinate (dx, dy) components.
  Vec to_coordinates(const SplitVector& U) const;
  SplitVector from_coordinates(const Vec& c) const;
  /// Columns: δ_1..δ_m, ∂/∂y^1..∂/∂y^m in coordinates.
  Mat frame() const;

 private:
  void require_here(const SplitVector& U) const;
  void require_complex() const;
  void require_curvature() const;
  Vec R(const Vec& X, const Vec& Y, const Vec& Z) const { return pg_.R(X, Y, Z); }
  Vec DR(const Vec& W, const Vec& X, const Vec& Y, const Vec& Z) const { return pg_.nabla_R(W, X, Y, Z); }
  double sum_Ru_squared() const;

  WeightPair w_;
  PointGeometry pg_;
  TangentPoint P_;
  WeightJet jet_;
  DerivedCoefficients k_;
  bool j_defined_ = true;
  double sa_ = 1.0;  // √a
};

/// Space-form value of the scalar curvature, (m−1)[mc − a t c² − (mF₂ + 4tF₃)/a].
double space_form_scalar(const WeightPair& w, double c, int m, double t);
/// The published space-form display (m−1)[mc + t(2 − 3a)c² − (mF₂ + 4tF₃)/a].
double space_form_scalar_published(const WeightPair& w, double c, int m, double t);

/// Sufficient condition a(t) ≤ 2/(3Ct) for K̃(X^H, Y^H) > 0 when c ∈ (0, C).
bool horizontal_sectional_bound(const WeightPair& w, double C, double t);

// Free-function forms of the operations.
double metric_gA(const WeightPair& w, const ChartMetric& base, const TangentPoint& P, const SplitVector& U,
                 const SplitVector& V);
SplitVector almost_complex_JA(const WeightPair& w, const ChartMetric& base, const TangentPoint& P,
                              const SplitVector& U);
double compatibility_check(const WeightPair& w, const ChartMetric& base, const TangentPoint& P);
double scalar_curvature(const WeightPair& w, const ChartMetric& base, const TangentPoint& P);

}  // namespace tbgeom
