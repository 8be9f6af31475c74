#include "tbgeom/sphere_bundle.hpp"

#include <cmath>
#include <sstream>

namespace tbgeom {

namespace {

Vec head(const Vec& z) { return z.head(z.size() / 2); }
Vec tail(const Vec& z) { return z.tail(z.size() / 2); }

double max_abs(const Mat& M) { return M.size() == 0 ? 0.0 : M.lpNorm<Eigen::Infinity>(); }

// dF(h, v) = (h, r v), attached at F(P).
SplitVector push_forward(const SplitVector& U, double r, const TangentPoint& Q) { return {U.h, r * U.v, Q}; }

}  // namespace

double ContactResiduals::max() const { return std::max({phi_squared, phi_xi, eta_phi, eta_xi, compatibility}); }

SphereBundlePoint SphereBundlePoint::make(const ChartMetric& base, const Vec& x, const Vec& u, double r) {
  SphereBundlePoint p{TangentPoint::make(base, x, u), r};
  const double n2 = 2.0 * p.P.t;
  if (!(r > 0.0) || std::abs(n2 - r * r) > 1e-12) {
    std::ostringstream os;
    os << "point with g(u,u) = " << n2 << " is not on the sphere bundle of radius " << r;
    throw DomainError(os.str());
  }
  return p;
}

SphereBundlePoint SphereBundlePoint::normalized(const ChartMetric& base, const Vec& x, const Vec& u, double r) {
  const double n = std::sqrt(u.dot(base.matrix(x) * u));
  if (!(n > 0.0)) throw DomainError("cannot normalize the zero vector onto a sphere bundle");
  return make(base, x, u * (r / n), r);
}

SplitVector ContactStructure::vector(const Vec& c) const { return SplitVector::from_stacked(P, basis * c); }

Vec ContactStructure::coefficients(const SplitVector& U) const { return basis.transpose() * U.stacked(); }

ContactResiduals ContactStructure::algebraic_residuals() const {
  const int n = dim();
  const Mat I = Mat::Identity(n, n);
  ContactResiduals r;
  r.phi_squared = max_abs(phi * phi + I - xi * eta.transpose());
  r.phi_xi = max_abs(phi * xi);
  r.eta_phi = max_abs(eta.transpose() * phi);
  r.eta_xi = std::abs(eta.dot(xi) - 1.0);
  r.compatibility = max_abs(phi.transpose() * G * phi - G + eta * eta.transpose());
  return r;
}

SphereBundle::SphereBundle(ChartMetric base, WeightPair w, SphereFlavor flavor, double r)
    : base_(std::move(base)), w_(std::move(w)), flavor_(flavor), r_(r) {
  if (!(r > 0.0)) throw DomainError("sphere bundle radius must be positive");
  a_ = w_.a(0.5 * r * r);
}

SphereBundle SphereBundle::tangent_sphere(const ChartMetric& base, double r) {
  return SphereBundle(base, named_family("sasaki"), SphereFlavor::SasakiR, r);
}

SphereBundle SphereBundle::unit(const ChartMetric& base, const WeightPair& w) {
  w.require_admissible(0.5);
  return SphereBundle(base, w, SphereFlavor::GAUnit, 1.0);
}

SphereBundlePoint SphereBundle::point(const Vec& x, const Vec& u) const {
  return SphereBundlePoint::normalized(base_, x, u, r_);
}

AdaptedGeometry SphereBundle::ambient(const Vec& x, const Vec& u, int order) const {
  return AdaptedGeometry(base_, w_, x, u, order);
}

SplitVector SphereBundle::unit_normal(const AdaptedGeometry& ag) const {
  SplitVector N = ag.V(ag.point().u);
  return (1.0 / std::sqrt(ag.metric(N, N))) * N;
}

SplitVector SphereBundle::tangential(const AdaptedGeometry& ag, const SplitVector& W) const {
  const SplitVector N = unit_normal(ag);
  return W - ag.metric(W, N) * N;
}

double SphereBundle::xi_scale() const {
  return flavor_ == SphereFlavor::SasakiR ? 2.0 * r_ : -2.0 * epsilon() * std::sqrt(a_);
}

double SphereBundle::eta_scale() const {
  return flavor_ == SphereFlavor::SasakiR ? 1.0 / (2.0 * r_) : -epsilon() / (2.0 * std::sqrt(a_));
}

double SphereBundle::metric_scale() const {
  return flavor_ == SphereFlavor::SasakiR ? 1.0 / (4.0 * r_ * r_) : 1.0 / (4.0 * a_);
}

std::vector<SplitVector> SphereBundle::generators(const SphereBundlePoint& p) const {
  const int m = base_.dim();
  const Mat g = base_.matrix(p.P.x);
  const Vec& u = p.P.u;
  std::vector<SplitVector> out;
  for (int i = 0; i < m; ++i) out.push_back(SplitVector::horizontal(p.P, Vec::Unit(m, i)));
  for (int i = 0; i < m; ++i)
    out.push_back(SplitVector::vertical(p.P, Vec::Unit(m, i) - (g.row(i).dot(u) / (r_ * r_)) * u));
  return out;
}

Mat SphereBundle::induced_metric(const SphereBundlePoint& p) const {
  const AdaptedGeometry ag = ambient(p.P.x, p.P.u, 1);
  const auto gens = generators(p);
  const auto n = static_cast<int>(gens.size());
  Mat G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = ag.metric(gens[static_cast<std::size_t>(i)], gens[static_cast<std::size_t>(j)]);
  return G;
}

Mat SphereBundle::induced_metric_display(const SphereBundlePoint& p) const {
  const int m = base_.dim();
  const Mat g = base_.matrix(p.P.x);
  const Vec gu = g * p.P.u;
  Mat G = Mat::Zero(2 * m, 2 * m);
  G.topLeftCorner(m, m) = g;
  if (flavor_ == SphereFlavor::SasakiR)
    G.bottomRightCorner(m, m) = g - gu * gu.transpose() / (r_ * r_);
  else
    G.bottomRightCorner(m, m) = a_ * (g - gu * gu.transpose());
  return G;
}

ContactStructure SphereBundle::contact_structure(const SphereBundlePoint& p, bool rescaled) const {
  const AdaptedGeometry ag = ambient(p.P.x, p.P.u, 1);
  const auto gens = generators(p);
  const int m = base_.dim();
  Mat span(2 * m, 2 * m);
  for (int i = 0; i < 2 * m; ++i) span.col(i) = gens[static_cast<std::size_t>(i)].stacked();
  Eigen::JacobiSVD<Mat> svd(span, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int rank = 0;
  while (rank < s.size() && s(rank) > 1e-10 * s(0)) ++rank;

  ContactStructure cs;
  cs.P = ag.point();
  cs.basis = svd.matrixU().leftCols(rank);
  cs.rescaled = rescaled;
  const SplitVector N = unit_normal(ag);
  cs.phi.resize(rank, rank);
  cs.eta.resize(rank);
  cs.G.resize(rank, rank);
  for (int k = 0; k < rank; ++k) {
    const SplitVector U = cs.vector(Vec::Unit(rank, k));
    const SplitVector JU = ag.J(U);
    cs.eta(k) = ag.metric(JU, N);
    cs.phi.col(k) = cs.coefficients(JU - cs.eta(k) * N);
    for (int l = 0; l < rank; ++l) cs.G(k, l) = ag.metric(U, cs.vector(Vec::Unit(rank, l)));
  }
  cs.xi = cs.coefficients(-ag.J(N));
  if (rescaled) {
    cs.xi *= xi_scale();
    cs.eta *= eta_scale();
    cs.G *= metric_scale();
  }
  return cs;
}

double SphereBundle::d_eta(const SphereBundlePoint& p, const SplitVector& U, const SplitVector& V, bool rescaled,
                           const OracleOptions& opt) const {
  const double scale = rescaled ? eta_scale() : 1.0;
  Form eta{1, [this, scale](const Vec& z, const std::vector<Vec>& v) {
             const AdaptedGeometry ag = ambient(head(z), tail(z), 1);
             const SplitVector X = ag.from_coordinates(v[0]);
             return scale * ag.metric(ag.J(X), unit_normal(ag));
           }};
  const AdaptedGeometry ag = ambient(p.P.x, p.P.u, 1);
  return fd_exterior_derivative(eta, stack_point(p.P), {ag.to_coordinates(U), ag.to_coordinates(V)}, opt);
}

double SphereBundle::contact_metric_residual(const SphereBundlePoint& p, const OracleOptions& opt) const {
  const ContactStructure cs = contact_structure(p, true);
  const int n = cs.dim();
  double worst = 0.0;
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      const double lhs = d_eta(p, cs.vector(Vec::Unit(n, k)), cs.vector(Vec::Unit(n, l)), true, opt);
      const double rhs = cs.G.row(k).dot(cs.phi.col(l));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  return worst;
}

SphereBundle::Field SphereBundle::generator_field(int index) const {
  const int m = base_.dim();
  if (index < 0 || index >= 2 * m) throw GeometryError("generator index out of range");
  return [this, index, m](const Vec& z) {
    Vec s = Vec::Zero(2 * m);
    if (index < m) {
      s(index) = 1.0;
    } else {
      const Vec y = tail(z);
      const Mat g = base_.matrix(head(z));
      s.tail(m) = Vec::Unit(m, index - m) - (g.row(index - m).dot(y) / (r_ * r_)) * y;
    }
    return s;
  };
}

SphereBundle::Field SphereBundle::xi_field(bool rescaled) const {
  const double scale = rescaled ? xi_scale() : 1.0;
  return [this, scale](const Vec& z) {
    const AdaptedGeometry ag = ambient(head(z), tail(z), 1);
    return Vec(-scale * ag.J(unit_normal(ag)).stacked());
  };
}

SphereBundle::Field SphereBundle::phi_field(Field field) const {
  return [this, field](const Vec& z) {
    const AdaptedGeometry ag = ambient(head(z), tail(z), 1);
    const SplitVector JW = ag.J(SplitVector::from_stacked(ag.point(), field(z)));
    const SplitVector N = unit_normal(ag);
    return Vec((JW - ag.metric(JW, N) * N).stacked());
  };
}

SplitVector SphereBundle::connection(const SphereBundlePoint& p, const SplitVector& U, const Field& W,
                                     const OracleOptions& opt) const {
  const AdaptedGeometry ag = ambient(p.P.x, p.P.u, 2);
  const Vec z = stack_point(p.P);
  const Vec ds = fd_directional(W, z, ag.to_coordinates(U), opt);
  const SplitVector r =
      SplitVector::from_stacked(p.P, ds) + ag.connection(U, SplitVector::from_stacked(p.P, W(z)));
  return tangential(ag, r);
}

SplitVector SphereBundle::connection_oracle(const SphereBundlePoint& p, const SplitVector& U, const Field& W,
                                            const OracleOptions& opt) const {
  const InducedMetric im(base_, w_);
  const Vec z = stack_point(p.P);
  const AdaptedGeometry ag = ambient(p.P.x, p.P.u, 1);
  const Vec Uc = ag.to_coordinates(U);
  auto Wc = [&](const Vec& q) { return Vec(im.frame(q) * W(q)); };
  Vec r = fd_directional(Wc, z, Uc, opt);
  const Vec W0 = Wc(z);
  const Tensor3 Gam = fd_connection(im, z, opt);
  const int n = im.dim();
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) r(c) += Gam(c, a, b) * Uc(a) * W0(b);
  return tangential(ag, ag.from_coordinates(r));
}

SplitVector SphereBundle::connection_display(const SphereBundlePoint& p, int i, int j) const {
  const int m = base_.dim();
  PointGeometry pg(base_, p.P.x, 2);
  const Vec& u = p.P.u;
  const double r2 = r_ * r_;
  auto Y = [&](const Vec& c) { return SplitVector::vertical(p.P, c - (pg.inner(c, u) / r2) * u); };
  auto H = [&](const Vec& c) { return SplitVector::horizontal(p.P, c); };
  const bool vi = i >= m, vj = j >= m;
  const Vec ei = Vec::Unit(m, vi ? i - m : i), ej = Vec::Unit(m, vj ? j - m : j);
  if (!vi && !vj) return H(pg.gamma(ei, ej)) + Y(-0.5 * pg.R(ei, ej, u));
  if (vi && !vj) return H(0.5 * a_ * pg.R(u, ei, ej));
  if (!vi && vj) return Y(pg.gamma(ei, ej)) + H(0.5 * a_ * pg.R(u, ej, ei));
  return -pg.inner(ej, u) * Y(ei);
}

namespace {

// Tangent extension of constant adapted coefficients b: b − g(b, N)N on the level set through z.
SphereBundle::Field tangent_extension(const SphereBundle& sb, const Vec& b) {
  return [&sb, b](const Vec& z) {
    const auto m = z.size() / 2;
    AdaptedGeometry ag(sb.base(), sb.ambient_weights(), z.head(m), z.tail(m), 1);
    const SplitVector B = SplitVector::from_stacked(ag.point(), b);
    SplitVector N = ag.V(ag.point().u);
    N *= 1.0 / std::sqrt(ag.metric(N, N));
    return Vec((B - ag.metric(B, N) * N).stacked());
  };
}

// (∇_U φ)V for basis vectors U = b_k, V = b_l.
SplitVector nabla_phi(const SphereBundle& sb, const SphereBundlePoint& p, const ContactStructure& cs, int k, int l,
                      const OracleOptions& opt) {
  const int n = cs.dim();
  const SplitVector U = cs.vector(Vec::Unit(n, k));
  const auto V = tangent_extension(sb, cs.basis.col(l));
  const SplitVector d_phiV = sb.connection(p, U, sb.phi_field(V), opt);
  const SplitVector dV = sb.connection(p, U, V, opt);
  return d_phiV - cs.vector(cs.phi * cs.coefficients(dV));
}

}  // namespace

double SphereBundle::k_contact_residual(const SphereBundlePoint& p, const OracleOptions& opt) const {
  const ContactStructure cs = contact_structure(p, true);
  const int n = cs.dim();
  const Field xi = xi_field(true);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    const Vec e = Vec::Unit(n, k);
    const SplitVector r = connection(p, cs.vector(e), xi, opt) + cs.vector(cs.phi * e);
    worst = std::max(worst, r.max_abs());
  }
  return worst;
}

double SphereBundle::sasakian_residual(const SphereBundlePoint& p, const OracleOptions& opt) const {
  const ContactStructure cs = contact_structure(p, true);
  const int n = cs.dim();
  double worst = 0.0;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      const Vec ek = Vec::Unit(n, k), el = Vec::Unit(n, l);
      const SplitVector expect = cs.G(k, l) * cs.vector(cs.xi) - cs.eta(l) * cs.vector(ek);
      worst = std::max(worst, (nabla_phi(*this, p, cs, k, l, opt) - expect).max_abs());
    }
  return worst;
}

double SphereBundle::phi_parallel_residual(const SphereBundlePoint& p, const OracleOptions& opt) const {
  const ContactStructure cs = contact_structure(p, true);
  const int n = cs.dim();
  double worst = 0.0;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) worst = std::max(worst, nabla_phi(*this, p, cs, k, l, opt).max_abs());
  return worst;
}

IsometryResiduals isometry_F_check(const ChartMetric& base, const WeightPair& w,
                                   const std::vector<SphereBundlePoint>& points, double r) {
  const SphereBundle t1 = SphereBundle::unit(base, w);
  const SphereBundle tr = SphereBundle::tangent_sphere(base, r);
  IsometryResiduals res;
  for (const auto& p : points) {
    const SphereBundlePoint q = SphereBundlePoint::make(base, p.P.x, r * p.P.u, r);
    const ContactStructure A = t1.contact_structure(p, true);
    const ContactStructure R = tr.contact_structure(q, true);
    const auto gens = t1.generators(p);
    auto GA = [&](const SplitVector& U, const SplitVector& V) {
      return A.coefficients(U).dot(A.G * A.coefficients(V));
    };
    auto GR = [&](const SplitVector& U, const SplitVector& V) {
      return R.coefficients(U).dot(R.G * R.coefficients(V));
    };
    for (const auto& U : gens) {
      const SplitVector FU = push_forward(U, r, q.P);
      for (const auto& V : gens)
        res.metric = std::max(res.metric, std::abs(GR(FU, push_forward(V, r, q.P)) - GA(U, V)));
      const SplitVector phiA = A.vector(A.phi * A.coefficients(U));
      const SplitVector phiR = R.vector(R.phi * R.coefficients(FU));
      res.phi = std::max(res.phi, (push_forward(phiA, r, q.P) - phiR).max_abs());
    }
    res.xi = std::max(res.xi, (push_forward(A.vector(A.xi), r, q.P) - R.vector(R.xi)).max_abs());
  }
  return res;
}

KContactVerdict k_contact_verdict(const SphereBundle& t1, const std::vector<SphereBundlePoint>& points, double tol,
                                  const OracleOptions& opt) {
  KContactVerdict v;
  for (const auto& p : points) {
    v.k_contact_residual = std::max(v.k_contact_residual, t1.k_contact_residual(p, opt));
    v.sasakian_residual = std::max(v.sasakian_residual, t1.sasakian_residual(p, opt));
  }
  v.k_contact = v.k_contact_residual <= tol;
  v.sasakian = v.k_contact && v.sasakian_residual <= tol;
  return v;
}

double symmetrization_residual(const ChartMetric& base, double a, const SphereBundlePoint& p) {
  PointGeometry pg(base, p.P.x, 2);
  const Vec& u = p.P.u;
  const int m = pg.dim();
  double worst = 0.0;
  for (int i = 0; i < m; ++i) {
    const Vec ei = Vec::Unit(m, i);
    const Vec r = pg.R(ei, u, u) - (ei - pg.inner(ei, u) * u) / a;
    worst = std::max(worst, r.lpNorm<Eigen::Infinity>());
  }
  return worst;
}

}  // namespace tbgeom
