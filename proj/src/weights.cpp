#include "tbgeom/weights.hpp"

#include <cmath>
#include <sstream>

namespace tbgeom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class T>
T polyval(const std::vector<double>& coeffs, const T& t) {
  T r(0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r = r * t + *it;
  return r;
}

double param(const nlohmann::json& p, const char* key, const std::string& family) {
  if (!p.contains(key) || !p.at(key).is_number())
    throw ConfigError("weights.params." + std::string(key) + ": '" + family + "' needs a numeric '" + key + "'");
  return p.at(key).get<double>();
}

double param_or(const nlohmann::json& p, const char* key, double fallback) {
  return p.contains(key) && p.at(key).is_number() ? p.at(key).get<double>() : fallback;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

std::pair<double, double> TDomain::sampling_range(double span) const {
  double top = std::isfinite(hi) ? hi : lo + span;
  return {lo, std::min(top, lo + span)};
}

std::string TDomain::describe() const {
  std::ostringstream os;
  os << (lo_closed ? '[' : '(') << lo << ", ";
  if (std::isfinite(hi))
    os << hi;
  else
    os << "inf";
  os << ')';
  return os.str();
}

WeightPair::WeightPair(std::string name, UniFn a, UniFn b, int epsilon, TDomain domain, nlohmann::json params)
    : name_(std::move(name)), a_(std::move(a)), b_(std::move(b)), epsilon_(epsilon), domain_(domain),
      params_(std::move(params)) {
  if (epsilon_ != 1 && epsilon_ != -1) throw ConfigError("epsilon must be +1 or -1");
  if (!a_ || !b_) throw ConfigError("weight pair '" + name_ + "' needs both a and b");
}

WeightJet WeightPair::jet(double t) const {
  WeightJet j;
  j.t = t;
  auto av = a_.jet2(t);
  j.a = av[0];
  j.da = av[1];
  j.dda = av[2];
  D1 bv = b_(D1(t, 1.0));
  j.b = bv.re;
  j.db = bv.du;
  return j;
}

bool WeightPair::admissible(double t) const {
  if (!domain_.contains(t)) return false;
  const double a = a_(t), b = b_(t);
  return a > 0.0 && a + 2.0 * t * b > 0.0;
}

void WeightPair::require_admissible(double t) const {
  std::ostringstream os;
  os.precision(17);
  if (!domain_.contains(t)) {
    os << "t = " << t << " is outside the domain " << domain_.describe() << " of weights '" << name_ << "'";
    throw DomainError(os.str());
  }
  const double a = a_(t), b = b_(t);
  if (!(a > 0.0)) {
    os << "weights '" << name_ << "': a(" << t << ") = " << a << " is not positive";
    throw DomainError(os.str());
  }
  if (!(a + 2.0 * t * b > 0.0)) {
    os << "weights '" << name_ << "': a + 2tb = " << a + 2.0 * t * b << " <= 0 at t = " << t;
    throw DomainError(os.str());
  }
}

WeightPair WeightPair::with_epsilon(int epsilon) const {
  WeightPair w = *this;
  if (epsilon != 1 && epsilon != -1) throw ConfigError("epsilon must be +1 or -1");
  w.epsilon_ = epsilon;
  return w;
}

std::pair<double, double> ab_coefficients(int epsilon, double t, double a, double b) {
  if (epsilon == -1 && t < kSmallT) {
    const double sa = std::sqrt(a);
    const double A = b / (2.0 * a * sa) - 3.0 * t * b * b / (4.0 * a * a * sa);
    const double B = -b / (2.0 * sa) + t * b * b / (4.0 * a * sa);
    return {A, B};
  }
  if (t < kMinTPositiveEpsilon)
    throw DomainError("J_A with epsilon = +1 is undefined on the zero section (t = " + std::to_string(t) + ")");
  const double s = a + 2.0 * b * t;
  const double A = (1.0 / std::sqrt(a) + epsilon / std::sqrt(s)) / (2.0 * t);
  const double B = (std::sqrt(a) + epsilon * std::sqrt(s)) / (2.0 * t);
  return {A, B};
}

DerivedCoefficients derived_coeffs(const WeightJet& j, int epsilon) {
  const double t = j.t, a = j.a, da = j.da, dda = j.dda, b = j.b, db = j.db;
  const double s = a + 2.0 * t * b;
  if (!(a > 0.0) || !(s > 0.0)) throw DomainError("derived coefficients need a > 0 and a + 2tb > 0");
  const double ds = da + 2.0 * b + 2.0 * t * db;
  DerivedCoefficients d;
  d.L = da / (2.0 * a);
  d.dL = dda / (2.0 * a) - da * da / (2.0 * a * a);
  d.M = (2.0 * b - da) / (2.0 * s);
  d.dM = (2.0 * db - dda) / (2.0 * s) - (2.0 * b - da) * ds / (2.0 * s * s);
  d.N = (a * db - 2.0 * da * b) / (2.0 * a * s);
  d.F1 = d.dL - d.L * d.L - d.N * (1.0 + 2.0 * t * d.L);
  d.F2 = d.L - d.M * (1.0 + 2.0 * t * d.L);
  d.F3 = d.N - (d.dM + d.M * d.M + 2.0 * t * d.M * d.N);
  if (epsilon == 1 && t < kMinTPositiveEpsilon) {
    d.complex_defined = false;
    d.A_coef = d.B_coef = d.lee_coef = std::numeric_limits<double>::quiet_NaN();
    return d;
  }
  auto [A, B] = ab_coefficients(epsilon, t, a, b);
  d.A_coef = A;
  d.B_coef = B;
  const double sa = std::sqrt(a);
  d.lee_coef = (da / (2.0 * sa) + B) / sa;
  return d;
}

DerivedCoefficients derived_coeffs(const WeightPair& w, double t) {
  w.require_admissible(t);
  return derived_coeffs(w.jet(t), w.epsilon());
}

double integrability_c(const WeightPair& w, double t) {
  w.require_admissible(t);
  const WeightJet j = w.jet(t);
  auto [A, B] = ab_coefficients(w.epsilon(), t, j.a, j.b);
  (void)B;
  return -j.da / (2.0 * j.a * j.a) + (j.a + t * j.da) / (j.a * std::sqrt(j.a)) * A;
}

WeightPair almost_kahler_complete(UniFn a, int epsilon, TDomain domain, MonotonicityRule rule, std::string name) {
  if (epsilon != 1 && epsilon != -1) throw ConfigError("epsilon must be +1 or -1");
  auto bf = [a](auto t) {
    using T = decltype(t);
    if constexpr (dual_depth_v<T> >= 3) {
      throw GeometryError("completed almost Kähler weight b supports derivatives up to second order");
      return T{};
    } else {
      Dual<T> r = a(Dual<T>(t, T(1.0)));
      const T& av = r.re;
      const T& ap = r.du;
      return ap * (2.0 * av + t * ap) / (2.0 * av);
    }
  };
  UniFn b = UniFn::make(bf);
  if (name.empty()) name = "almost_kahler";
  WeightPair w(name, a, b, epsilon, domain, {{"rule", rule == MonotonicityRule::Stated ? "stated" : "exact"}});

  auto [lo, hi] = domain.sampling_range();
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    double t = lo + (hi - lo) * (i + 0.5) / n;
    if (i == 0 && domain.lo_closed) t = lo;
    auto av = a.jet2(t);
    const double val = av[0], der = av[1];
    const double ta_slope = val + t * der;
    auto fail = [t](const std::string& what, double v) {
      std::ostringstream os;
      os.precision(17);
      os << "almost_kahler_complete: " << what << " (value " << v << " at t = " << t << ")";
      throw DomainError(os.str());
    };
    if (!(val > 0.0)) fail("a must be positive", val);
    if (epsilon == -1 && rule == MonotonicityRule::Stated && der < 0.0)
      fail("epsilon = -1 requires a increasing", der);
    if (epsilon == -1 && rule == MonotonicityRule::Exact && !(ta_slope > 0.0))
      fail("epsilon = -1 requires t*a increasing", ta_slope);
    if (epsilon == 1 && !(ta_slope < 0.0)) fail("epsilon = +1 requires t*a decreasing", ta_slope);
    const double bt = w.b(t);
    if (!(val + 2.0 * t * bt > 0.0)) fail("a + 2tb must be positive", val + 2.0 * t * bt);
  }
  return w;
}

WeightPair kahler_family(int kase, double c, double kappa) {
  nlohmann::json params = {{"case", kase}, {"c", c}, {"kappa", kappa}};
  if (kase == 1) {
    require(c > 0.0 && kappa < 0.0, "kahler case 1 needs c > 0 and kappa < 0");
    auto a = [c, kappa](auto t) {
      using std::sqrt;
      return (1.0 + sqrt(1.0 + kappa * t)) / (4.0 * c * t);
    };
    auto b = [c, kappa](auto t) {
      using std::sqrt;
      return -kappa * (1.0 + sqrt(1.0 + kappa * t)) / (8.0 * c * t * (1.0 + kappa * t));
    };
    return WeightPair("kahler_case1", UniFn::make(a), UniFn::make(b), 1, TDomain{0.0, -1.0 / kappa, false}, params);
  }
  if (kase == 2) {
    require(kappa * c < 0.0, "kahler case 2 needs kappa * c < 0");
    auto a = [c, kappa](auto t) {
      using std::sqrt;
      return -kappa / (4.0 * c * (1.0 + sqrt(1.0 + kappa * t)));
    };
    auto b = [c, kappa](auto t) {
      using std::sqrt;
      return kappa * kappa / (8.0 * c * (1.0 + kappa * t) * (1.0 + sqrt(1.0 + kappa * t)));
    };
    TDomain dom{0.0, kappa > 0.0 ? kInf : -1.0 / kappa, true};
    return WeightPair("kahler_case2", UniFn::make(a), UniFn::make(b), -1, dom, params);
  }
  throw DomainError("kahler_family case must be 1 or 2");
}

double kahler_residual_b(const WeightPair& w, double t) {
  const WeightJet j = w.jet(t);
  return j.b - 2.0 * j.da * (t * j.da + j.a) / j.a;
}

double kahler_residual_a(const WeightPair& w, double c, double t) {
  const WeightJet j = w.jet(t);
  return j.da - 2.0 * c * j.a * (2.0 * t * j.da + j.a);
}

double flatness_residual(const WeightPair& w, double t) {
  const WeightJet j = w.jet(t);
  return t * j.da * j.da + 2.0 * j.a * j.da - 2.0 * j.a * j.b;
}

double flat_relation_residual(const WeightPair& w, double t) {
  const WeightJet j = w.jet(t);
  return j.b - j.da * (1.0 + t * j.da / (2.0 * j.a));
}

double constant_scalar_ode_lhs(const WeightPair& w, double c, int m, double t) {
  const WeightJet j = w.jet(t);
  const double k = j.a, b = j.b;
  const double q = c * c * (2.0 - 3.0 * k) * k;
  return q * k * k * t + b * (k * (m + 4.0 * q * t * t) + 2.0 * t * (m - 2.0 + 2.0 * q * t * t) * b) +
         2.0 * k * t * j.db;
}

namespace {

WeightPair make_named(const std::string& name, const nlohmann::json& p) {
  if (name == "sasaki")
    return WeightPair(name, UniFn::constant(1.0), UniFn::constant(0.0), -1, {}, p);
  if (name == "cheeger_gromoll") {
    auto f = [](auto t) { return 1.0 / (1.0 + 2.0 * t); };
    return WeightPair(name, UniFn::make(f), UniFn::make(f), -1, {}, p);
  }
  if (name == "flat_exp" || name == "g1") {
    const double a0 = name == "g1" ? 1.0 : param_or(p, "a0", 1.0);
    const std::string branch = p.value("branch", std::string("plus"));
    require(a0 > 0.0, name + " needs a0 > 0");
    if (branch == "plus") {
      auto f = [a0](auto t) {
        using std::exp;
        using std::sqrt;
        auto r = sqrt(1.0 + 2.0 * t);
        return a0 * exp(2.0 * r) / ((1.0 + r) * (1.0 + r));
      };
      return WeightPair(name, UniFn::make(f), UniFn::make(f), -1, {}, p);
    }
    if (branch == "minus") {
      auto f = [a0](auto t) {
        using std::exp;
        using std::sqrt;
        auto r = sqrt(1.0 + 2.0 * t);
        return a0 * exp(-2.0 * r) / (1.0 + t - r);
      };
      return WeightPair(name, UniFn::make(f), UniFn::make(f), -1, TDomain{0.0, kInf, false}, p);
    }
    throw ConfigError("weights.params.branch: expected 'plus' or 'minus'");
  }
  if (name == "flat_power") {
    const double a0 = param_or(p, "a0", 1.0);
    const double k = param(p, "k", name);
    require(a0 > 0.0, "flat_power needs a0 > 0");
    require(k > 1.0 || k <= 0.0, "flat_power needs k > 1 or k <= 0");
    const double e = 2.0 * (k - 1.0);
    auto a = [a0, e](auto t) {
      using std::pow;
      return a0 * pow(t, e);
    };
    auto b = [a0, e, k](auto t) {
      using std::pow;
      return k * a0 * e * pow(t, e - 1.0);
    };
    return WeightPair(name, UniFn::make(a), UniFn::make(b), -1, TDomain{0.0, kInf, false}, p);
  }
  if (name == "lck_example") {
    const double c = param(p, "c", name), k = param(p, "k", name);
    require(c >= 0.0 && k > 0.0, "lck_example needs c >= 0 and k > 0");
    auto f = [c, k](auto t) {
      using std::exp;
      using std::sqrt;
      auto r = sqrt(1.0 + 2.0 * t);
      auto e = exp(2.0 * r);
      return e / (2.0 * (c * e * t + (1.0 + t + r) * k));
    };
    return WeightPair(name, UniFn::make(f), UniFn::make(f), -1, {}, p);
  }
  if (name == "scal_a23")
    return WeightPair(name, UniFn::constant(2.0 / 3.0), UniFn::constant(0.0), -1, {}, p);
  if (name == "scal_exp") {
    const double m = param(p, "m", name);
    auto b = [m](auto t) {
      using std::exp;
      using std::log;
      return exp(-1.5 * ((m - 2.0) * t + m * log(t) / 3.0));
    };
    return WeightPair(name, UniFn::constant(2.0 / 3.0), UniFn::make(b), -1, TDomain{0.0, kInf, false}, p);
  }
  if (name == "scal_band") {
    const double k = param(p, "k", name), c = param(p, "c", name), m = param(p, "m", name);
    require(k > 0.0 && k < 2.0 / 3.0, "scal_band needs k in (0, 2/3)");
    auto b = [k, c, m](auto t) {
      return c * c * k * k * (3.0 * k - 2.0) * t / (2.0 + m + 2.0 * c * c * (2.0 - 3.0 * k) * k * t * t);
    };
    return WeightPair(name, UniFn::constant(k), UniFn::make(b), -1, {}, p);
  }
  if (name == "scal_t2") {
    const double k = param(p, "k", name), c = param(p, "c", name), m = param(p, "m", name);
    // positive root of m(2+m) − 2k(2+m)t − 2c²m t² = 0
    double t2 = kInf;
    const double qa = -2.0 * c * c * m, qb = -2.0 * k * (2.0 + m), qc = m * (2.0 + m);
    if (qa != 0.0) {
      const double disc = qb * qb - 4.0 * qa * qc;
      const double r1 = (-qb - std::sqrt(disc)) / (2.0 * qa), r2 = (-qb + std::sqrt(disc)) / (2.0 * qa);
      for (double r : {r1, r2})
        if (r > 0.0) t2 = std::min(t2, r);
    } else if (qb < 0.0) {
      t2 = -qc / qb;
    }
    auto b = [k, c, m](auto t) {
      return (k * (2.0 + m) + c * c * m * t) / (m * (2.0 + m) - 2.0 * k * (2.0 + m) * t - 2.0 * c * c * m * t * t);
    };
    nlohmann::json q = p;
    q["t2"] = t2;
    return WeightPair(name, UniFn::constant(1.0), UniFn::make(b), -1, TDomain{0.0, t2, true}, q);
  }
  if (name == "kahler") {
    return kahler_family(static_cast<int>(param(p, "case", name)), param(p, "c", name), param(p, "kappa", name));
  }
  throw ConfigError("weights.name: unknown family '" + name + "'");
}

UniFn fn_from_json(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("coeffs") || !j.at("coeffs").is_array())
    throw ConfigError(path + ": expected {\"kind\": \"poly\"|\"exp_poly\", \"coeffs\": [...]}");
  const auto coeffs = j.at("coeffs").get<std::vector<double>>();
  const std::string kind = j.value("kind", std::string("poly"));
  if (kind == "poly") return UniFn::make([coeffs](auto t) { return polyval(coeffs, t); });
  if (kind == "exp_poly")
    return UniFn::make([coeffs](auto t) {
      using std::exp;
      return exp(polyval(coeffs, t));
    });
  throw ConfigError(path + ".kind: unknown function kind '" + kind + "'");
}

TDomain domain_from_json(const nlohmann::json& spec) {
  TDomain d;
  if (!spec.contains("t_domain")) return d;
  const auto& td = spec.at("t_domain");
  if (!td.is_array() || td.size() != 2) throw ConfigError("weights.t_domain: expected [lo, hi]");
  d.lo = td[0].get<double>();
  d.hi = td[1].is_null() ? kInf : td[1].get<double>();
  d.lo_closed = spec.value("t_domain_closed", true);
  if (!(d.hi > d.lo)) throw ConfigError("weights.t_domain: hi must exceed lo");
  return d;
}

}  // namespace

WeightPair named_family(const std::string& name, const nlohmann::json& params) {
  const nlohmann::json p = params.is_null() ? nlohmann::json::object() : params;
  WeightPair w = make_named(name, p);
  if (p.contains("epsilon")) w = w.with_epsilon(p.at("epsilon").get<int>());
  // Positivity over the family's own domain, sampled.
  auto [lo, hi] = w.domain().sampling_range();
  for (int i = 0; i < 50; ++i) {
    double t = lo + (hi - lo) * (i + 0.5) / 50.0;
    if (!w.admissible(t)) w.require_admissible(t);
  }
  return w;
}

std::vector<std::string> named_family_names() {
  return {"sasaki",   "cheeger_gromoll", "g1",      "lck_example", "scal_a23", "scal_exp",
          "scal_band", "scal_t2",        "flat_power", "flat_exp", "kahler"};
}

WeightPair weights_from_json(const nlohmann::json& spec) {
  if (!spec.is_object()) throw ConfigError("weights: expected an object");
  if (!spec.contains("name") || !spec.at("name").is_string()) throw ConfigError("weights.name: missing");
  const std::string name = spec.at("name").get<std::string>();
  int eps = 0;
  if (spec.contains("epsilon")) {
    if (!spec.at("epsilon").is_number_integer()) throw ConfigError("weights.epsilon: expected +1 or -1");
    eps = spec.at("epsilon").get<int>();
    if (eps != 1 && eps != -1) throw ConfigError("weights.epsilon: expected +1 or -1");
  }
  if (name == "custom") {
    if (!spec.contains("a") || !spec.contains("b")) throw ConfigError("weights: custom pair needs 'a' and 'b'");
    WeightPair w("custom", fn_from_json(spec.at("a"), "weights.a"), fn_from_json(spec.at("b"), "weights.b"),
                 eps == 0 ? -1 : eps, domain_from_json(spec), spec);
    return w;
  }
  if (name == "almost_kahler") {
    if (!spec.contains("a")) throw ConfigError("weights: almost_kahler needs 'a'");
    const std::string rule = spec.value("rule", std::string("stated"));
    if (rule != "stated" && rule != "exact") throw ConfigError("weights.rule: expected 'stated' or 'exact'");
    return almost_kahler_complete(fn_from_json(spec.at("a"), "weights.a"), eps == 0 ? -1 : eps, domain_from_json(spec),
                                  rule == "stated" ? MonotonicityRule::Stated : MonotonicityRule::Exact);
  }
  nlohmann::json params = spec.value("params", nlohmann::json::object());
  if (eps != 0) params["epsilon"] = eps;
  return named_family(name, params);
}

}  // namespace tbgeom
