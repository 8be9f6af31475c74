#pragma once

#include <functional>
#include <vector>

#include "tbgeom/oracle.hpp"

namespace tbgeom {

/// Which hypersurface: T_rM = {g(v,v) = r²} inside (T(M), g_S, J_S), or
/// T₁M = {g(u,u) = 1} inside (T(M), g_A, J_A).
enum class SphereFlavor { SasakiR, GAUnit };

/// A point (x, u) with g_x(u, u) = r².
struct SphereBundlePoint {
  TangentPoint P;
  double r = 1.0;

  /// Throws DomainError unless |g(u,u) − r²| ≤ 1e-12.
  static SphereBundlePoint make(const ChartMetric& base, const Vec& x, const Vec& u, double r);
  /// Rescales u to length r.
  static SphereBundlePoint normalized(const ChartMetric& base, const Vec& x, const Vec& u, double r);
};

struct ContactResiduals {
  double phi_squared = 0.0;    // φ² + I − η⊗ξ
  double phi_xi = 0.0;         // φξ
  double eta_phi = 0.0;        // η∘φ
  double eta_xi = 0.0;         // η(ξ) − 1
  double compatibility = 0.0;  // G(φU,φV) − G(U,V) + η(U)η(V)
  double max() const;
};

/// (φ, ξ, η, G) on the tangent space of the hypersurface at one point.
/// Tangent vectors are coefficient vectors on `basis`, whose 2m−1 columns are
/// stacked (h, v) adapted components.
struct ContactStructure {
  TangentPoint P;
  Mat basis;
  Mat phi;
  Vec xi;
  Vec eta;
  Mat G;
  bool rescaled = false;

  int dim() const { return static_cast<int>(basis.cols()); }
  SplitVector vector(const Vec& c) const;
  /// Least-squares coefficients of a tangent split vector.
  Vec coefficients(const SplitVector& U) const;
  ContactResiduals algebraic_residuals() const;
};

class SphereBundle {
 public:
  /// T_rM with the Sasaki ambient.
  static SphereBundle tangent_sphere(const ChartMetric& base, double r);
  /// T₁M with the g_A ambient; a and b are frozen at t = ½.
  static SphereBundle unit(const ChartMetric& base, const WeightPair& w);

  SphereFlavor flavor() const { return flavor_; }
  double r() const { return r_; }
  /// Weight a at t = r²/2 (1 for T_rM).
  double a() const { return a_; }
  int epsilon() const { return w_.epsilon(); }
  const ChartMetric& base() const { return base_; }
  const WeightPair& ambient_weights() const { return w_; }

  SphereBundlePoint point(const Vec& x, const Vec& u) const;

  /// δ_1..δ_m, then Z_i = ∂_{v^i} − r⁻² g_{i⋆} v^k ∂_{v^k} (T_rM) or Y_i = ∂_{y^i} − g_{i0} y^h ∂_{y^h} (T₁M).
  std::vector<SplitVector> generators(const SphereBundlePoint& p) const;
  /// Gram matrix of the generators under the ambient metric.
  Mat induced_metric(const SphereBundlePoint& p) const;
  /// Block formula: g, 0, and g_ij − r⁻²g_{i⋆}g_{j⋆} (T_rM) or a(g_ij − g_{i0}g_{j0}) (T₁M).
  Mat induced_metric_display(const SphereBundlePoint& p) const;

  /// φU = tan(JU), η(U) = g(JU, N), ξ = −JN; rescaled: ξ·2r, η/(2r), G/(4r²) on T_rM and
  /// ξ·(−2ε√a), η·(−ε/(2√a)), G/(4a) on T₁M.
  ContactStructure contact_structure(const SphereBundlePoint& p, bool rescaled) const;

  /// dη(U, V) by differencing an extension of η off the hypersurface (½ convention).
  double d_eta(const SphereBundlePoint& p, const SplitVector& U, const SplitVector& V, bool rescaled,
               const OracleOptions& opt = {}) const;
  /// max |dη(U,V) − G(U, φV)| over pairs of tangent basis vectors (rescaled structure).
  double contact_metric_residual(const SphereBundlePoint& p, const OracleOptions& opt = {}) const;

  /// Adapted coefficients at z of a vector field on T(M).
  using Field = std::function<Vec(const Vec& z)>;
  Field generator_field(int index) const;
  /// ξ extended by the unit normal of the level sets of g(y,y).
  Field xi_field(bool rescaled) const;
  /// z ↦ φ(z) applied to `field(z)`.
  Field phi_field(Field field) const;

  /// Levi-Civita connection of the induced metric: tan(∇^ambient_U W), with the closed-form ambient connection.
  SplitVector connection(const SphereBundlePoint& p, const SplitVector& U, const Field& W,
                         const OracleOptions& opt = {}) const;
  /// Same, with the finite-difference ambient connection.
  SplitVector connection_oracle(const SphereBundlePoint& p, const SplitVector& U, const Field& W,
                                const OracleOptions& opt = {}) const;

  /// ∇_{g_i} g_j for generators g (0..m−1 horizontal δ, m..2m−1 the vertical Y) by the component displays
  ///   ∇_{δ_i}δ_j = Γ^k_ij δ_k − ½R^k_{0ij}Y_k,  ∇_{Y_i}δ_j = (a/2)R^k_{j0i}δ_k,
  ///   ∇_{δ_i}Y_j = Γ^k_ij Y_k + (a/2)R^k_{i0j}δ_k,  ∇_{Y_i}Y_j = −g_{j0}Y_i.
  SplitVector connection_display(const SphereBundlePoint& p, int i, int j) const;

  /// max over tangent basis vectors U of |∇_U ξ + φU| (rescaled structure, G-norm).
  double k_contact_residual(const SphereBundlePoint& p, const OracleOptions& opt = {}) const;
  /// max over tangent basis pairs of |(∇_U φ)V − G(U,V)ξ + η(V)U| (rescaled structure).
  double sasakian_residual(const SphereBundlePoint& p, const OracleOptions& opt = {}) const;
  /// max over basis pairs of |(∇_U φ)V|; zero iff φ is parallel.
  double phi_parallel_residual(const SphereBundlePoint& p, const OracleOptions& opt = {}) const;

 private:
  SphereBundle(ChartMetric base, WeightPair w, SphereFlavor flavor, double r);
  AdaptedGeometry ambient(const Vec& x, const Vec& u, int order) const;
  SplitVector unit_normal(const AdaptedGeometry& ag) const;
  SplitVector tangential(const AdaptedGeometry& ag, const SplitVector& W) const;
  // Rescaling factors for (ξ, η, G).
  double xi_scale() const;
  double eta_scale() const;
  double metric_scale() const;

  ChartMetric base_;
  WeightPair w_;
  SphereFlavor flavor_;
  double r_ = 1.0;
  double a_ = 1.0;
};

struct IsometryResiduals {
  double metric = 0.0;  // rescaled G_r(dF U, dF V) − rescaled G_A(U, V)
  double phi = 0.0;     // dF∘φ_A − φ_r∘dF
  double xi = 0.0;      // dF(ξ_A) − ξ_r, rescaled
  double max() const { return std::max({metric, phi, xi}); }
};

/// F(x, u) = (x, r u) from T₁M (g_A ambient) to T_rM (Sasaki ambient); residuals are maxima over
/// generators at the given points of T₁M.
IsometryResiduals isometry_F_check(const ChartMetric& base, const WeightPair& w,
                                   const std::vector<SphereBundlePoint>& points, double r);

struct KContactVerdict {
  double k_contact_residual = 0.0;
  double sasakian_residual = 0.0;
  bool k_contact = false;
  bool sasakian = false;
};

KContactVerdict k_contact_verdict(const SphereBundle& t1, const std::vector<SphereBundlePoint>& points,
                                  double tol = 1e-8, const OracleOptions& opt = {});

/// max_k |R^k_{0i0} − (1/a)(δ^k_i − g_{i0}y^k)| over i at a point of T₁M.
double symmetrization_residual(const ChartMetric& base, double a, const SphereBundlePoint& p);

}  // namespace tbgeom
