#include "tbgeom/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <iomanip>
#include <random>
#include <set>
#include <span>
#include <sstream>

#include "tbgeom/sphere_bundle.hpp"

namespace tbgeom {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Catalogue

const std::vector<SuiteInfo>& suite_catalogue() {
  static const std::vector<SuiteInfo> cat = {
      {"base_checks", "base curvature convention and symmetries", 1e-8,
       "R antisymmetry, pair symmetry, first Bianchi; constant-curvature form on space forms"},
      {"lck", "locally conformal almost Kähler identity dΩ = ω∧Ω", 1e-5,
       "finite-difference dΩ against ω∧Ω on random triples, and dω = 0"},
      {"almost_kahler", "almost Kähler completion of a given weight a", 1e-5,
       "dΩ = 0 for the completed pair; Cheeger–Gromoll as a negative control"},
      {"kahler", "Kähler weight families", 1e-5,
       "oracle Nijenhuis on all slots, integrability constant, dΩ = 0"},
      {"connection", "Levi-Civita connection of g_A in the adapted frame", 1e-5,
       "closed-form ∇ against the coordinate finite-difference connection"},
      {"curvature", "curvature symmetries of g_A", 1e-8,
       "closed-form R̃ antisymmetries, pair symmetry and first Bianchi"},
      {"flat_g1", "flatness of g_1 over a flat base", 1e-6,
       "closed-form and finite-difference R̃ vanish; F1 = F2 = F3 = 0"},
      {"sectional", "sectional curvature displays", 1e-8,
       "HH/HV/VV and adapted-basis displays against the definition; HV non-negative"},
      {"scalar", "scalar curvature of g_A", 1e-6,
       "closed form against the adapted-basis double sum (relative)"},
      {"sphere_bundle", "contact metric structure on the unit tangent bundle", 1e-8,
       "algebraic identities, contact-metric condition, induced metric and connection displays"},
      {"isometry", "T₁M with g_A and T_rM with Sasaki are isometric for r = √a", 1e-10,
       "pullback metric, φ and ξ under F(x,u) = (x, ru); r = √a/2 as a negative control"},
      {"k_contact", "K-contact and Sasakian unit tangent bundle over curvature 1/a", 1e-8,
       "∇ξ + φ = 0 and (∇φ)V = G(U,V)ξ − η(V)U"},
      {"oracle_cross", "closed forms against the coordinate oracle", 1e-4,
       "connection and curvature against finite differences of the induced metric"},
  };
  return cat;
}

const SuiteInfo& suite_info(const std::string& name) {
  for (const auto& s : suite_catalogue())
    if (s.name == name) return s;
  throw ConfigError("unknown suite '" + name + "'");
}

// ---------------------------------------------------------------------------
// Config

namespace {

double number_at(const json& j, const char* key, const std::string& path) {
  if (!j.at(key).is_number()) throw ConfigError(path + ": expected a number");
  return j.at(key).get<double>();
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  static const std::set<std::string> known = {"base",     "weights",    "suites",   "samples", "seed",
                                              "h",        "tolerances", "sampling", "output",  "$schema"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw ConfigError(k + ": unknown field");
  RunConfig c;
  if (!j.contains("base")) throw ConfigError("base: missing");
  if (!j.contains("weights")) throw ConfigError("weights: missing");
  c.base = j.at("base");
  c.weights = j.at("weights");
  // Build once so that errors surface with their field paths.
  metric_from_json(c.base);
  weights_from_json(c.weights);
  if (j.contains("suites")) {
    const auto& s = j.at("suites");
    if (!s.is_array()) throw ConfigError("suites: expected an array of suite names");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string path = "suites[" + std::to_string(i) + "]";
      if (!s[i].is_string()) throw ConfigError(path + ": expected a string");
      const auto name = s[i].get<std::string>();
      try {
        suite_info(name);
      } catch (const ConfigError&) {
        throw ConfigError(path + ": unknown suite '" + name + "'");
      }
      c.suites.push_back(name);
    }
  }
  if (j.contains("samples")) {
    if (!j.at("samples").is_number_integer() || j.at("samples").get<long long>() < 1)
      throw ConfigError("samples: expected an integer >= 1");
    c.samples = j.at("samples").get<int>();
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer() || j.at("seed").get<long long>() < 0)
      throw ConfigError("seed: expected a non-negative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("h")) {
    c.h = number_at(j, "h", "h");
    if (!(c.h > 0.0) || c.h > 0.1) throw ConfigError("h: expected 0 < h <= 0.1");
  }
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    if (!t.is_object()) throw ConfigError("tolerances: expected an object");
    for (const auto& [k, v] : t.items()) {
      const std::string path = "tolerances." + k;
      try {
        suite_info(k);
      } catch (const ConfigError&) {
        throw ConfigError(path + ": unknown suite");
      }
      if (!v.is_number() || !(v.get<double>() > 0.0)) throw ConfigError(path + ": expected a positive number");
      c.tolerances[k] = v.get<double>();
    }
  }
  if (j.contains("sampling")) {
    const auto& s = j.at("sampling");
    if (!s.is_object()) throw ConfigError("sampling: expected an object");
    for (const auto& [k, v] : s.items()) {
      const std::string path = "sampling." + k;
      if (k != "box" && k != "t_min" && k != "t_max") throw ConfigError(path + ": unknown field");
      if (!v.is_number()) throw ConfigError(path + ": expected a number");
    }
    c.sampling.box = s.value("box", c.sampling.box);
    c.sampling.t_min = s.value("t_min", c.sampling.t_min);
    c.sampling.t_max = s.value("t_max", c.sampling.t_max);
    if (!(c.sampling.box > 0.0)) throw ConfigError("sampling.box: expected a positive number");
    if (!(c.sampling.t_min >= 0.0)) throw ConfigError("sampling.t_min: expected a non-negative number");
    if (!(c.sampling.t_max > c.sampling.t_min)) throw ConfigError("sampling.t_max: expected t_max > t_min");
  }
  if (j.contains("output")) {
    if (!j.at("output").is_string()) throw ConfigError("output: expected a path string");
    c.output = j.at("output").get<std::string>();
  }
  return c;
}

json RunConfig::to_json() const {
  json tol = json::object();
  for (const auto& [k, v] : tolerances) tol[k] = v;
  return {{"base", base},
          {"weights", weights},
          {"suites", resolved_suites()},
          {"samples", samples},
          {"seed", seed},
          {"h", h},
          {"tolerances", tol},
          {"sampling", {{"box", sampling.box}, {"t_min", sampling.t_min}, {"t_max", sampling.t_max}}},
          {"output", output}};
}

std::vector<std::string> RunConfig::resolved_suites() const {
  if (!suites.empty()) return suites;
  std::vector<std::string> all;
  for (const auto& s : suite_catalogue()) all.push_back(s.name);
  return all;
}

double RunConfig::tolerance(const std::string& suite) const {
  auto it = tolerances.find(suite);
  return it != tolerances.end() ? it->second : suite_info(suite).default_tolerance;
}

// ---------------------------------------------------------------------------
// Suites

namespace {

json to_array(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

struct Context {
  const RunConfig& config;
  ChartMetric base;
  WeightPair w;
  OracleOptions opt;
  std::mt19937_64 rng;
  SuiteResult& out;
  int m = 0;

  Vec uniform(double s) {
    std::uniform_real_distribution<double> U(-s, s);
    Vec r(m);
    for (int i = 0; i < m; ++i) r(i) = U(rng);
    return r;
  }
  Vec gaussian() {
    std::normal_distribution<double> N;
    Vec r(m);
    for (int i = 0; i < m; ++i) r(i) = N(rng);
    return r;
  }
  Vec chart_point() {
    for (int tries = 0; tries < 1000; ++tries) {
      Vec x = uniform(config.sampling.box);
      if (base.in_domain(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())))) return x;
    }
    throw DomainError("no chart point found inside the sampling box");
  }
  // Point of T(M) with t in the configured range, restricted to the weight domain.
  TangentPoint tangent_point(const WeightPair& weights) {
    auto [dlo, dhi] = weights.domain().sampling_range();
    double lo = std::max(config.sampling.t_min, dlo), hi = std::min(config.sampling.t_max, dhi);
    if (std::isfinite(weights.domain().hi)) hi = std::min(hi, lo + 0.9 * (weights.domain().hi - lo));
    if (!(hi > lo)) throw DomainError("sampling range for t does not meet the weight domain " +
                                      weights.domain().describe());
    std::uniform_real_distribution<double> T(lo, hi);
    for (int tries = 0; tries < 1000; ++tries) {
      const Vec x = chart_point();
      const double t = T(rng);
      Vec u = gaussian();
      u *= std::sqrt(2.0 * t / u.dot(base.matrix(x) * u));
      if (weights.epsilon() == 1 && u.norm() < 1e-6) continue;
      if (!weights.admissible(t)) continue;
      return TangentPoint::make(base, x, u);
    }
    throw DomainError("no admissible sample point for weights '" + weights.name() + "'");
  }
  SplitVector split(const TangentPoint& P) { return {uniform(1.0), uniform(1.0), P}; }

  void record(const Vec& x, const Vec& u, const std::map<std::string, double>& comp) {
    double r = 0.0;
    for (const auto& [k, v] : comp) {
      const double a = std::isfinite(v) ? std::abs(v) : std::numeric_limits<double>::infinity();
      r = std::max(r, a);
      auto it = out.components.find(k);
      if (it == out.components.end())
        out.components[k] = a;
      else
        it->second = std::max(it->second, a);
    }
    out.residuals.push_back(r);
    out.points.push_back({{"x", to_array(x)}, {"u", to_array(u)}});
  }
  void record(const TangentPoint& P, const std::map<std::string, double>& comp) { record(P.x, P.u, comp); }
  void note(const std::string& key, double v) {
    auto it = out.info.find(key);
    if (it == out.info.end())
      out.info[key] = v;
    else
      it->second = std::max(it->second, v);
  }
};

double vmax(const Vec& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

void suite_base_checks(Context& c) {
  const auto kc = c.base.constant_curvature();
  for (int s = 0; s < c.config.samples; ++s) {
    const Vec x = c.chart_point();
    PointGeometry pg(c.base, x, 2);
    const Vec X = c.uniform(1), Y = c.uniform(1), Z = c.uniform(1), W = c.uniform(1);
    std::map<std::string, double> r;
    r["antisymmetry"] = vmax(pg.R(X, Y, Z) + pg.R(Y, X, Z));
    r["metric_skew"] = pg.inner(pg.R(X, Y, Z), W) + pg.inner(pg.R(X, Y, W), Z);
    r["pair_symmetry"] = pg.inner(pg.R(X, Y, Z), W) - pg.inner(pg.R(Z, W, X), Y);
    r["bianchi"] = vmax(pg.R(X, Y, Z) + pg.R(Y, Z, X) + pg.R(Z, X, Y));
    if (kc) r["constant_curvature"] = vmax(pg.R(X, Y, Z) - *kc * (pg.inner(Y, Z) * X - pg.inner(X, Z) * Y));
    c.record(x, Vec::Zero(c.m), r);
  }
}

void suite_lck(Context& c) {
  const InducedMetric im(c.base, c.w);
  const Form Om = kahler_form_field(im), om = lee_form_field(im);
  for (int s = 0; s < c.config.samples; ++s) {
    const TangentPoint P = c.tangent_point(c.w);
    const AdaptedGeometry ag(c.base, c.w, P.x, P.u, 1);
    const Vec z = stack_point(P);
    const Vec A = ag.to_coordinates(c.split(P)), B = ag.to_coordinates(c.split(P)),
              C = ag.to_coordinates(c.split(P));
    const double dO = fd_exterior_derivative(Om, z, {A, B, C}, c.opt);
    c.record(P, {{"lck_identity", dO - wedge_1_2(om, Om, z, A, B, C, c.opt.forms)},
                 {"lee_closed", fd_exterior_derivative(om, z, {A, B}, c.opt)}});
    c.note("max_abs_dOmega", std::abs(dO));
  }
}

double max_dOmega(Context& c, const WeightPair& w, int samples, bool record) {
  const InducedMetric im(c.base, w);
  const Form Om = kahler_form_field(im);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const TangentPoint P = c.tangent_point(w);
    const AdaptedGeometry ag(c.base, w, P.x, P.u, 1);
    const double d = fd_exterior_derivative(
        Om, stack_point(P),
        {ag.to_coordinates(c.split(P)), ag.to_coordinates(c.split(P)), ag.to_coordinates(c.split(P))}, c.opt);
    worst = std::max(worst, std::abs(d));
    if (record) c.record(P, {{"dOmega", d}, {"lee_coef", ag.coeffs().lee_coef}});
  }
  return worst;
}

void suite_almost_kahler(Context& c) {
  const WeightPair w = c.w.name() == "almost_kahler"
                           ? c.w
                           : almost_kahler_complete(c.w.a_fn(), c.w.epsilon(), c.w.domain(), MonotonicityRule::Exact);
  max_dOmega(c, w, c.config.samples, true);
  ControlResult ctl;
  ctl.description = "Cheeger–Gromoll is never almost Kähler: max |dΩ| over samples";
  ctl.threshold = 1e-2;
  ctl.residual = max_dOmega(c, named_family("cheeger_gromoll"), c.config.samples, false);
  ctl.failed_as_expected = ctl.residual >= ctl.threshold;
  c.out.control = ctl;
}

void suite_kahler(Context& c) {
  const InducedMetric im(c.base, c.w);
  const Form Om = kahler_form_field(im);
  std::optional<double> c0;
  if (c.w.params().contains("c") && c.w.params().at("c").is_number()) c0 = c.w.params().at("c").get<double>();
  for (int s = 0; s < c.config.samples; ++s) {
    const TangentPoint P = c.tangent_point(c.w);
    const AdaptedGeometry ag(c.base, c.w, P.x, P.u, 1);
    const SplitVector U = c.split(P), V = c.split(P), W = c.split(P);
    std::map<std::string, double> r;
    r["nijenhuis"] = oracle_nijenhuis(im, U, V, c.opt).max_abs();
    const double ci = integrability_c(c.w, P.t);
    if (!c0) c0 = ci;
    r["integrability_constant"] = ci - *c0;
    r["kahler_b_relation"] = kahler_residual_b(c.w, P.t);
    r["kahler_a_relation"] = kahler_residual_a(c.w, *c0, P.t);
    r["dOmega"] =
        fd_exterior_derivative(Om, stack_point(P), {ag.to_coordinates(U), ag.to_coordinates(V), ag.to_coordinates(W)},
                               c.opt);
    c.record(P, r);
  }
}

void suite_connection(Context& c) {
  const InducedMetric im(c.base, c.w);
  for (int s = 0; s < c.config.samples; ++s) {
    const TangentPoint P = c.tangent_point(c.w);
    const AdaptedGeometry ag(c.base, c.w, P.x, P.u, 2);
    const Vec X = c.uniform(1), Y = c.uniform(1);
    std::map<std::string, double> r;
    for (const char* k : {"HH", "HV", "VH", "VV"}) {
      const SplitVector U = k[0] == 'H' ? ag.H(X) : ag.V(X);
      const SplitVector W = k[1] == 'H' ? ag.H(Y) : ag.V(Y);
      r[std::string("nabla_") + k] = (ag.connection(U, W) - oracle_connection(im, U, W, c.opt)).max_abs();
    }
    c.record(P, r);
  }
}

void suite_curvature(Context& c) {
  for (int s = 0; s < c.config.samples; ++s) {
    const TangentPoint P = c.tangent_point(c.w);
    const AdaptedGeometry ag(c.base, c.w, P.x, P.u, 3);
    const SplitVector U = c.split(P), V = c.split(P), W = c.split(P), S = c.split(P);
    const double scale = std::max(1.0, ag.curvature(U, V, W).max_abs());
    std::map<std::string, double> r;
    r["antisymmetry"] = (ag.curvature(U, V, W) + ag.curvature(V, U, W)).max_abs() / scale;
    r["metric_skew"] = (ag.curvature4(U, V, W, S) + ag.curvature4(U, V, S, W)) / scale;
    r["pair_symmetry"] = (ag.curvature4(U, V, W, S) - ag.curvature4(W, S, U, V)) / scale;
    r["bianchi"] = (ag.curvature(U, V, W) + ag.curvature(V, W, U) + ag.curvature(W, U, V)).max_abs() / scale;
    c.record(P, r);
  }
}

void suite_flat_g1(Context& c) {
  const InducedMetric im(c.base, c.w);
  for (int s = 0; s < c.config.samples; ++s) {
    const TangentPoint P = c.tangent_point(c.w);
    const AdaptedGeometry ag(c.base, c.w, P.x, P.u, 3);
    const Vec z = stack_point(P);
    const Tensor4 R = fd_curvature(im, z, c.opt);
    double oracle = 0.0;
    for (double v : R.data()) oracle = std::max(oracle, std::abs(v));
    double closed = 0.0;
    const auto B = ag.adapted_basis();
    for (const auto& U : B.E)
      for (const auto& V : B.E)
        for (const auto& W : B.E) closed = std::max(closed, ag.curvature(U, V, W).max_abs());
    const auto& k = ag.coeffs();
    c.record(P, {{"closed_curvature", closed},
                 {"oracle_curvature", oracle},
                 {"F", std::max({std::abs(k.F1), std::abs(k.F2), std::abs(k.F3)})}});
  }
}

void suite_sectional(Context& c) {
  const auto kc = c.base.constant_curvature();
  for (int s = 0; s < c.config.samples; ++s) {
    const TangentPoint P = c.tangent_point(c.w);
    const AdaptedGeometry ag(c.base, c.w, P.x, P.u, 3);
    const Mat e = ag.base().orthonormal_frame(c.uniform(1));
    const Vec X = e.col(0), Y = e.col(1);
    std::map<std::string, double> r;
    for (const char* k : {"HH", "HV", "VV"}) {
      const SplitVector U = k[0] == 'H' ? ag.H(X) : ag.V(X);
      const SplitVector W = k[1] == 'H' ? ag.H(Y) : ag.V(Y);
      const double K = ag.sectional(U, W);
      r[std::string("display_") + k] = (ag.sectional_display(k, X, Y) - K) / std::max(1.0, std::abs(K));
    }
    const double khv = ag.sectional(ag.H(X), ag.V(Y));
    r["HV_negative_part"] = std::max(0.0, -khv - 1e-12);
    if (kc) {
      const double a = c.w.a(P.t), gx = ag.gu(X), gy = ag.gu(Y);
      r["space_form_HH"] = ag.sectional(ag.H(X), ag.H(Y)) - (*kc - 0.75 * a * *kc * *kc * (gx * gx + gy * gy));
    }
    const auto B = ag.adapted_basis();
    const int n = 2 * c.m;
    double basis = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double K = ag.sectional(B.E[static_cast<std::size_t>(i)], B.E[static_cast<std::size_t>(j)]);
        basis = std::max(basis, std::abs(ag.basis_sectional_display(i, j) - K) / std::max(1.0, std::abs(K)));
      }
    r["basis_display"] = basis;
    c.record(P, r);
  }
}

void suite_scalar(Context& c) {
  for (int s = 0; s < c.config.samples; ++s) {
    const TangentPoint P = c.tangent_point(c.w);
    const AdaptedGeometry ag(c.base, c.w, P.x, P.u, 3);
    const double closed = ag.scalar_curvature();
    const double scale = std::max(1.0, std::abs(closed));
    c.record(P, {{"basis_sum", (closed - ag.scalar_curvature_basis_sum()) / scale}});
    c.note("published_display_deviation", std::abs(closed - ag.scalar_curvature_published()) / scale);
  }
}

std::vector<SphereBundlePoint> sphere_points(Context& c, const SphereBundle& sb) {
  std::vector<SphereBundlePoint> pts;
  for (int s = 0; s < c.config.samples; ++s) {
    Vec u = c.gaussian();
    while (u.norm() < 1e-6) u = c.gaussian();
    pts.push_back(sb.point(c.chart_point(), u));
  }
  return pts;
}

void suite_sphere_bundle(Context& c) {
  const SphereBundle t1 = SphereBundle::unit(c.base, c.w);
  for (const auto& p : sphere_points(c, t1)) {
    std::map<std::string, double> r;
    r["algebraic_raw"] = t1.contact_structure(p, false).algebraic_residuals().max();
    r["algebraic_rescaled"] = t1.contact_structure(p, true).algebraic_residuals().max();
    r["contact_metric"] = t1.contact_metric_residual(p, c.opt);
    r["induced_metric"] = (t1.induced_metric(p) - t1.induced_metric_display(p)).lpNorm<Eigen::Infinity>();
    const auto gens = t1.generators(p);
    double conn = 0.0;
    for (int i = 0; i < 2 * c.m; ++i)
      for (int j = 0; j < 2 * c.m; ++j)
        conn = std::max(conn, (t1.connection(p, gens[static_cast<std::size_t>(i)], t1.generator_field(j), c.opt) -
                               t1.connection_display(p, i, j))
                                  .max_abs());
    r["connection_display"] = conn;
    c.record(p.P, r);
  }
}

void suite_isometry(Context& c) {
  const SphereBundle t1 = SphereBundle::unit(c.base, c.w);
  const double r = std::sqrt(t1.a());
  const auto pts = sphere_points(c, t1);
  for (const auto& p : pts) {
    const auto res = isometry_F_check(c.base, c.w, {p}, r);
    c.record(p.P, {{"metric", res.metric}, {"phi", res.phi}, {"xi", res.xi}});
  }
  ControlResult ctl;
  ctl.description = "F with r = √a/2 is not an isometry: max residual over samples";
  ctl.threshold = 0.1;
  ctl.residual = isometry_F_check(c.base, c.w, pts, 0.5 * r).max();
  ctl.failed_as_expected = ctl.residual >= ctl.threshold;
  c.out.control = ctl;
}

void suite_k_contact(Context& c) {
  const SphereBundle t1 = SphereBundle::unit(c.base, c.w);
  if (const auto kc = c.base.constant_curvature()) c.note("predicted_sasakian", std::abs(*kc * t1.a() - 1.0) < 1e-12);
  for (const auto& p : sphere_points(c, t1))
    c.record(p.P, {{"k_contact", t1.k_contact_residual(p, c.opt)}, {"sasakian", t1.sasakian_residual(p, c.opt)}});
}

void suite_oracle_cross(Context& c) {
  const InducedMetric im(c.base, c.w);
  for (int s = 0; s < c.config.samples; ++s) {
    const TangentPoint P = c.tangent_point(c.w);
    const AdaptedGeometry ag(c.base, c.w, P.x, P.u, 3);
    const Vec z = stack_point(P);
    const SplitVector U = c.split(P), V = c.split(P), W = c.split(P);
    const Tensor4 R = fd_curvature(im, z, c.opt);
    const SplitVector Rc = ag.curvature(U, V, W);
    c.record(P, {{"connection", (ag.connection(U, V) - oracle_connection(im, U, V, c.opt)).max_abs()},
                 {"curvature", (Rc - apply_curvature(R, im.frame(z), U, V, W)).max_abs() /
                                   std::max(1.0, Rc.max_abs())}});
  }
}

using SuiteFn = void (*)(Context&);

SuiteFn suite_fn(const std::string& name) {
  static const std::map<std::string, SuiteFn> fns = {
      {"base_checks", suite_base_checks}, {"lck", suite_lck},
      {"almost_kahler", suite_almost_kahler}, {"kahler", suite_kahler},
      {"connection", suite_connection}, {"curvature", suite_curvature},
      {"flat_g1", suite_flat_g1}, {"sectional", suite_sectional},
      {"scalar", suite_scalar}, {"sphere_bundle", suite_sphere_bundle},
      {"isometry", suite_isometry}, {"k_contact", suite_k_contact},
      {"oracle_cross", suite_oracle_cross},
  };
  return fns.at(name);
}

std::uint64_t suite_seed(std::uint64_t seed, const std::string& name) {
  std::seed_seq seq(name.begin(), name.end());
  std::vector<std::uint32_t> words(2);
  seq.generate(words.begin(), words.end());
  const std::uint64_t salt = (std::uint64_t{words[0]} << 32) | words[1];
  std::seed_seq mix{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
  mix.generate(words.begin(), words.end());
  return (std::uint64_t{words[0]} << 32) | words[1];
}

}  // namespace

SuiteResult run_suite(const RunConfig& config, const std::string& name) {
  const SuiteInfo& info = suite_info(name);
  const auto start = std::chrono::steady_clock::now();
  SuiteResult res;
  res.name = name;
  res.anchor = info.anchor;
  res.tolerance = config.tolerance(name);
  res.seed = suite_seed(config.seed, name);
  try {
    OracleOptions opt;
    opt.h = config.h;
    opt.warn = [&res](const std::string&) { res.info["conditioning_warnings"] += 1.0; };
    Context c{config, metric_from_json(config.base), weights_from_json(config.weights), opt,
              std::mt19937_64(res.seed), res};
    c.m = c.base.dim();
    suite_fn(name)(c);
    res.max_residual = 0.0;
    for (double r : res.residuals) res.max_residual = std::max(res.max_residual, r);
    res.pass = res.max_residual <= res.tolerance && (!res.control || res.control->failed_as_expected);
  } catch (const std::exception& e) {
    res.error = e.what();
    res.pass = false;
  }
  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

Report run(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::future<SuiteResult>> jobs;
  for (const auto& name : config.resolved_suites())
    jobs.push_back(std::async(std::launch::async, [&config, name] { return run_suite(config, name); }));
  Report rep;
  rep.config = config;
  for (auto& j : jobs) rep.suites.push_back(j.get());
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

int exit_status(const Report& report) { return report.all_pass() ? 0 : 1; }

// ---------------------------------------------------------------------------
// Report

json residual_histogram(const std::vector<double>& residuals) {
  std::map<int, int> bins;
  for (double r : residuals) {
    int k;
    if (!std::isfinite(r))
      k = 1000;
    else if (r <= 1e-16)
      k = -16;
    else
      k = static_cast<int>(std::ceil(std::log10(r)));
    ++bins[k];
  }
  json out = json::array();
  for (const auto& [k, n] : bins) {
    json upper = k == 1000 ? json("inf") : json(std::pow(10.0, k));
    out.push_back({{"upper", upper}, {"count", n}});
  }
  return out;
}

json SuiteResult::to_json(bool timing) const {
  json comp = json::object(), inf = json::object();
  for (const auto& [k, v] : components) comp[k] = v;
  for (const auto& [k, v] : info) inf[k] = v;
  std::vector<int> indices(residuals.size());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = static_cast<int>(i);
  json j = {{"name", name},
            {"anchor", anchor},
            {"pass", pass},
            {"tolerance", tolerance},
            {"max_residual", max_residual},
            {"components", comp},
            {"info", inf},
            {"histogram", residual_histogram(residuals)},
            {"residuals", residuals},
            {"provenance", {{"seed", seed}, {"indices", indices}, {"points", points}}},
            {"control", nullptr},
            {"error", error.empty() ? json(nullptr) : json(error)}};
  if (control)
    j["control"] = {{"description", control->description},
                    {"residual", control->residual},
                    {"threshold", control->threshold},
                    {"failed_as_expected", control->failed_as_expected}};
  if (timing) j["wall_time_s"] = wall_time;
  return j;
}

bool Report::all_pass() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.pass; });
}

json Report::to_json(bool timing) const {
  json j = {{"schema", 1}, {"tool", "tbverify"}, {"config", config.to_json()}, {"all_pass", all_pass()}};
  json s = json::array();
  for (const auto& r : suites) s.push_back(r.to_json(timing));
  j["suites"] = s;
  if (timing) j["wall_time_s"] = wall_time;
  return j;
}

std::string Report::to_csv() const {
  std::ostringstream os;
  os << "suite,sample_index,residual,tolerance,pass\n";
  os << std::setprecision(17);
  for (const auto& s : suites)
    for (std::size_t i = 0; i < s.residuals.size(); ++i)
      os << s.name << ',' << i << ',' << s.residuals[i] << ',' << s.tolerance << ','
         << (s.residuals[i] <= s.tolerance ? "true" : "false") << '\n';
  return os.str();
}

std::string Report::summary() const {
  std::ostringstream os;
  os << std::setprecision(3);
  for (const auto& s : suites) {
    os << (s.pass ? "PASS " : "FAIL ") << std::left << std::setw(14) << s.name;
    if (!s.error.empty()) {
      os << " error: " << s.error << '\n';
      continue;
    }
    os << " max " << std::scientific << s.max_residual << " tol " << s.tolerance;
    if (s.control)
      os << "  control " << s.control->residual << (s.control->failed_as_expected ? " (fails as expected)" : " (did NOT fail)");
    os << std::defaultfloat << "  [" << s.anchor << "]\n";
  }
  os << (all_pass() ? "all suites passed" : "some suites failed") << '\n';
  return os.str();
}

}  // namespace tbgeom
