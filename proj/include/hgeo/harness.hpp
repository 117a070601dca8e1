#pragma once
// Verification suites behind the `verify` CLI. Every sampled check runs in
// fixed-size blocks seeded by (seed, check name, block index), so reports do
// not depend on the thread count.

#include <atomic>
#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "hgeo/devmap.hpp"
#include "json.hpp"

namespace hgeo::harness {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchema = 1;

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> s{"all",  "qform",          "nonintersect", "equivariance", "hitchin",
                                          "flatness", "transversality", "roots",        "stiefel",      "n2"};
  return s;
}

struct SuiteConfig {
  std::string suite = "all";
  int n = 2;
  std::string field = "both";  // r | c | both
  long samples = 10000;
  std::uint64_t seed = 1;
  double tol_cluster = 1e-6;
  double tol_real = 1e-6;
  std::string report_path;
  std::string csv_path;
  int threads = 1;

  std::vector<Field> fields() const {
    if (field == "r") return {Field::R};
    if (field == "c") return {Field::C};
    return {Field::R, Field::C};
  }
  RootOptions root_options() const {
    RootOptions o;
    o.tol_cluster = tol_cluster;
    o.tol_real = tol_real;
    return o;
  }
  // throws DomainError on a bad config
  void validate() const {
    if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
      throw DomainError("unknown suite '" + suite + "'");
    if (n < 1) throw DomainError("--n must be >= 1");
    if (samples < 0) throw DomainError("--samples must be >= 0");
    if (field != "r" && field != "c" && field != "both") throw DomainError("--field must be r, c or both");
    if (!(tol_cluster > 0) || !(tol_real > 0)) throw DomainError("tolerances must be positive");
    if (threads < 1) throw DomainError("--threads must be >= 1");
  }
  json echo() const {
    return {{"suite", suite},     {"n", n},           {"field", field},       {"samples", samples},
            {"seed", seed},       {"tol_cluster", tol_cluster}, {"tol_real", tol_real}, {"threads", threads}};
  }
};

struct CheckRecord {
  std::string name;
  std::string status;  // pass | fail | skip | info
  double worst_value = 0;
  json worst_witness;
  double elapsed_ms = 0;
  long samples = 0;
  long failures = 0;
  std::string detail;
};

struct SuiteReport {
  SuiteConfig config;
  std::vector<CheckRecord> records;
  double elapsed_ms = 0;

  bool passed() const {
    return std::none_of(records.begin(), records.end(), [](auto& r) { return r.status == "fail"; });
  }
  json to_json(bool with_timing = true) const {
    json recs = json::array();
    for (auto& r : records) {
      json j = {{"name", r.name},       {"status", r.status},   {"worst_value", r.worst_value},
                {"worst_witness", r.worst_witness}, {"samples", r.samples}, {"failures", r.failures},
                {"detail", r.detail}};
      if (with_timing) j["elapsed_ms"] = r.elapsed_ms;
      recs.push_back(j);
    }
    json j = {{"schema", kSchema},   {"tool", "verify"},        {"version", kVersion},
              {"suite", config.suite}, {"config", config.echo()}, {"seed", config.seed},
              {"pass", passed()},      {"records", recs}};
    if (with_timing) j["elapsed_ms"] = elapsed_ms;
    return j;
  }
};

// ---------------------------------------------------------------------------
// serialisation helpers

inline json cjson(cplx z) { return json::array({z.real(), z.imag()}); }
inline json cjson(const CVec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(cjson(v(i)));
  return a;
}
inline json zjson(const UHPoint& z) { return json::array({z.x, z.y}); }
inline json gjson(const SL2R& g) { return json::array({g.a(), g.b(), g.c(), g.d()}); }
inline json pjson(const HPoly& p) {
  return {{"basis", p.basis() == Basis::XY ? "XY" : "ZW"}, {"coeffs", cjson(p.coeffs())}};
}
inline json rp1json(const RP1Point& a) { return json::array({a.a, a.b}); }

// ---------------------------------------------------------------------------
// block-parallel sampling

struct Worst {
  bool higher_is_worse = true;
  bool has = false;
  double value = 0;
  json witness;
  long count = 0;
  long failures = 0;
  std::vector<std::string> rows;  // optional CSV rows, kept in sample order
  std::map<std::string, long> tally;  // named event counts, appended to the detail

  void count_if(bool cond, const std::string& key) {
    if (cond) ++tally[key];
  }

  bool worse(double v) const {
    if (!has) return true;
    if (std::isnan(v)) return !std::isnan(value);
    return higher_is_worse ? v > value : v < value;
  }
  template <class W>
  void offer(double v, bool failed, W&& witness_fn) {
    ++count;
    failures += failed;
    if (worse(v)) {
      has = true;
      value = v;
      witness = witness_fn();
    }
  }
  void merge(const Worst& o) {
    count += o.count;
    failures += o.failures;
    if (o.has && worse(o.value)) {
      has = true;
      value = o.value;
      witness = o.witness;
    }
    rows.insert(rows.end(), o.rows.begin(), o.rows.end());
    for (auto& [k, v] : o.tally) tally[k] += v;
  }
};

inline constexpr long kBlock = 64;

inline std::uint64_t name_hash(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : s) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
  return h;
}

// fn(Rng&, Worst&) is called once per sample
template <class Fn>
Worst sampled(const SuiteConfig& cfg, const std::string& name, long samples, bool higher_is_worse, Fn fn) {
  const long nb = (samples + kBlock - 1) / kBlock;
  std::vector<Worst> parts(nb);
  const std::uint64_t base = mix_seed(cfg.seed, name_hash(name));
  std::atomic<long> next{0};
  auto worker = [&] {
    for (long b; (b = next++) < nb;) {
      Worst& w = parts[b];
      w.higher_is_worse = higher_is_worse;
      Rng rng(mix_seed(base, static_cast<std::uint64_t>(b)));
      const long len = std::min(kBlock, samples - b * kBlock);
      for (long i = 0; i < len; ++i) {
        try {
          fn(rng, w);
        } catch (const std::exception& e) {
          ++w.count;
          ++w.failures;
          if (!w.has || !w.witness.contains("error")) {
            w.has = true;
            w.value = std::numeric_limits<double>::quiet_NaN();
            w.witness = {{"error", e.what()}, {"block", b}, {"index", i}};
          }
        }
      }
    }
  };
  const int nt = static_cast<int>(std::min<long>(cfg.threads, std::max<long>(nb, 1)));
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  Worst out;
  out.higher_is_worse = higher_is_worse;
  for (auto& p : parts) out.merge(p);
  return out;
}

class Recorder {
 public:
  explicit Recorder(SuiteReport& rep) : rep_(rep) {}

  // runs body() and appends its record with timing
  void check(const std::string& name, const std::function<CheckRecord()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckRecord r;
    try {
      r = body();
    } catch (const std::exception& e) {
      r.status = "fail";
      r.worst_value = std::numeric_limits<double>::quiet_NaN();
      r.worst_witness = {{"error", e.what()}};
    }
    r.name = name;
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rep_.records.push_back(std::move(r));
  }
  void skip(const std::string& name, const std::string& why) {
    CheckRecord r;
    r.name = name;
    r.status = "skip";
    r.detail = why;
    rep_.records.push_back(std::move(r));
  }

 private:
  SuiteReport& rep_;
};

// A sampled check passes when no sample failed; zero samples is a skip.
inline CheckRecord from_worst(const Worst& w, const std::string& detail) {
  CheckRecord r;
  r.samples = w.count;
  r.failures = w.failures;
  r.detail = detail;
  for (auto& [k, v] : w.tally) r.detail += "; " + k + "=" + std::to_string(v);
  if (w.count == 0) {
    r.status = "skip";
    r.detail += " (no samples)";
    return r;
  }
  r.status = w.failures == 0 ? "pass" : "fail";
  r.worst_value = w.value;
  r.worst_witness = w.witness;
  return r;
}

inline CheckRecord deterministic(bool ok, double value, json witness, const std::string& detail) {
  CheckRecord r;
  r.status = ok ? "pass" : "fail";
  r.worst_value = value;
  r.worst_witness = std::move(witness);
  r.detail = detail;
  return r;
}

// ---------------------------------------------------------------------------
// random inputs

inline UHPoint random_uh(Rng& rng) {
  return UHPoint(rng.uniform(-3.0, 3.0), std::exp(rng.uniform(std::log(0.2), std::log(5.0))));
}

inline double rel_diff(const CMat& a, const CMat& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

inline const char* fname(Field f) { return field_name(f); }

// ---------------------------------------------------------------------------
// suites

namespace suites {

inline void exact_checks(const SuiteConfig& cfg, Recorder& rec) {
  const int top = std::max(20, cfg.n);
  rec.check("exact.sne_inequality", [&] {
    int bad = 0;
    json w;
    for (int m = 1; m <= top; ++m) {
      const SneReport s = sne_inequality(m);
      bool ok = s.holds;
      for (int i = 1; i <= m; ++i) ok = ok && sne_integer_identity(m, i);
      if (!ok && !bad++) w = {{"n", m}};
    }
    for (long m = 1; m <= 50; ++m)
      for (long i = 1; i <= m; ++i)
        if (!sne_integer_identity(m, i) && !bad++) w = {{"n", m}, {"i", i}};
    return deterministic(bad == 0, bad, w, "2 r_{2i-1} > r_{2i} + r_{2i-2}, exact, n <= " + std::to_string(top));
  });
  rec.check("exact.transverse_certificate", [&] {
    int bad = 0;
    json w;
    for (int m = 1; m <= top; ++m)
      if (!certify_transverse_exact(m).certificate() && !bad++) w = {{"n", m}};
    return deterministic(bad == 0, bad, w,
                         "strict per-k inequality with gap identity, ratio inequality non-strict, n <= " +
                             std::to_string(top));
  });
  rec.check("exact.ratio_inequality_strict", [&] {
    int eq = 0;
    json w = json::array();
    for (int m = 1; m <= top; ++m) {
      const auto r = certify_transverse_exact(m);
      for (size_t k = 0; k < r.ratio.size(); ++k)
        if (r.ratio[k] != exact::Rel::Greater) {
          ++eq;
          if (w.size() < 5) w.push_back({{"n", m}, {"k", k}, {"rel", exact::rel_name(r.ratio[k])}});
        }
    }
    CheckRecord c = deterministic(true, eq, w, "informational: count of ratio cases that are not strict");
    c.status = "info";
    return c;
  });
}

inline void qform(const SuiteConfig& cfg, Recorder& rec) {
  const int n = cfg.n;
  const Lambda lam = default_lambda(n);
  const double mineig = transversality_min_eigenvalue(lam);
  rec.check("qform.min_eigenvalue", [&] {
    return deterministic(mineig > 0, mineig, {{"n", n}}, "smallest eigenvalue of Re q(P, g0 P) on unit P");
  });
  rec.check("qform.transversality_margin", [&] {
    Worst w = sampled(cfg, "qform.transversality_margin", cfg.samples, false, [&](Rng& rng, Worst& acc) {
      const HPoly P = random_unit_zw(rng, n);
      const double m = transversality_margin(lam, P);
      acc.offer(m, !(m > 0.0) || m < mineig * (1 - 1e-9) - 1e-15, [&] { return pjson(P); });
    });
    CheckRecord r = from_worst(w, "min Re q(P, g0 P) over random unit P; exact lower bound " + std::to_string(mineig));
    return r;
  });
  rec.check("qform.flow_monotone", [&] {
    std::vector<double> grid;
    for (int i = -10; i <= 10; ++i) grid.push_back(0.2 * i);
    Worst w = sampled(cfg, "qform.flow_monotone", cfg.samples / 10, false, [&](Rng& rng, Worst& acc) {
      const HPoly P = sample_C_lambda(lam, n, Field::C, 1, rng.engine()())[0];
      const FlowReport f = flow_monotone(lam, P, grid);
      acc.offer(f.min_fprime, !f.pass(), [&] { return json{{"P", pjson(P)}, {"fd_rel_err", f.max_fd_rel_err}}; });
    });
    return from_worst(w, "t -> q(g_t P, g_t P) strictly increasing through 0 on the null cone");
  });
}

inline void nonintersect(const SuiteConfig& cfg, Recorder& rec) {
  const int n = cfg.n;
  const Lambda lam = default_lambda(n);
  for (Field f : cfg.fields()) {
    const std::string name = std::string("nonintersect.") + fname(f);
    if (f == Field::R && n == 1) {
      rec.skip(name, "the real null cone is {0} for n = 1");
      continue;
    }
    rec.check(name, [&] {
      Worst w = sampled(cfg, name, cfg.samples, false, [&](Rng& rng, Worst& acc) {
        const HPoly P = sample_C_lambda(lam, n, f, 1, rng.engine()())[0];
        const KMembership k = in_K(P, cfg.root_options());
        const bool bad = k.member || k.ambiguous || k.roots.ambiguous;
        acc.count_if(k.member, "members");
        acc.count_if(k.ambiguous, "verdict_ambiguous");
        acc.count_if(k.roots.ambiguous, "root_ambiguous");
        acc.offer(n - k.mult - (k.roots.ambiguous ? 0.5 : 0.0), bad, [&] {
          return json{{"P", pjson(P)}, {"mult", k.mult}, {"member", k.member}, {"ambiguous", k.ambiguous},
                      {"root_ambiguous", k.roots.ambiguous}};
        });
      });
      return from_worst(w, "null-cone samples: no real root of multiplicity >= n and no ambiguous root report; "
                           "value = n - max real multiplicity (minus 0.5 when ambiguous)");
    });
  }
}

inline void equivariance(const SuiteConfig& cfg, Recorder& rec) {
  const int n = cfg.n;
  const Lambda lam = default_lambda(n);
  rec.check("equivariance.left_action", [&] {
    Worst w = sampled(cfg, "equivariance.left_action", cfg.samples, true, [&](Rng& rng, Worst& acc) {
      const SL2R g = random_sl2(rng);
      const UHPoint z = random_uh(rng);
      const double r = left_action_frame_check(g, z);
      acc.offer(r, !(r <= 1e-10), [&] { return json{{"g", gjson(g)}, {"z", zjson(z)}}; });
    });
    return from_worst(w, "pullback of h^{1/2} dz^{1/2} under g^{-1}, relative residual <= 1e-10");
  });
  for (Field f : cfg.fields()) {
    const std::string fs = fname(f);
    if (f == Field::R && n == 1) {
      rec.skip("equivariance.developing." + fs, "C'_R is {0} for n = 1");
      rec.skip("equivariance.avoid_K." + fs, "C'_R is {0} for n = 1");
      rec.skip("equivariance.cone_identity." + fs, "C'_R is {0} for n = 1");
      continue;
    }
    rec.check("equivariance.developing." + fs, [&] {
      Worst w = sampled(cfg, "equivariance.developing." + fs, cfg.samples, true, [&](Rng& rng, Worst& acc) {
        const SL2R g = random_sl2(rng);
        const UHPoint z = random_uh(rng);
        const CVec t = random_cone_prime(rng, n, f);
        const double d = equivariance_check(g, z, t, f);
        acc.offer(d, !(d <= 1e-8), [&] { return json{{"g", gjson(g)}, {"z", zjson(z)}, {"t", cjson(t)}}; });
      });
      return from_worst(w, "FS distance D(g.(z,t)) vs g.D(z,t) <= 1e-8");
    });
    rec.check("equivariance.avoid_K." + fs, [&] {
      Worst w = sampled(cfg, "equivariance.avoid_K." + fs, cfg.samples, false, [&](Rng& rng, Worst& acc) {
        const UHPoint z = random_uh(rng);
        const CVec t = random_cone_prime(rng, n, f);
        const HPoly P = developing(z, t, f);
        const KMembership k = in_K(P * (1.0 / P.norm()), cfg.root_options());
        // the same point reached from z = i by the upper triangular g with g(i) = z
        const double sy = std::sqrt(z.y);
        const SL2R g = SL2R::from(sy, z.x / sy, 0.0, 1.0 / sy);
        const HPoly Pi = act(g, developing(kBasePoint, t, f));
        const KMembership ki = in_K(Pi * (1.0 / Pi.norm()), cfg.root_options());
        const bool bad = k.member || k.ambiguous || k.member != ki.member;
        acc.count_if(k.member, "members");
        acc.count_if(k.ambiguous, "verdict_ambiguous");
        acc.count_if(k.member != ki.member, "route_mismatch");
        acc.offer(n - k.mult, bad, [&] {
          return json{{"z", zjson(z)}, {"t", cjson(t)}, {"mult", k.mult}, {"mult_from_i", ki.mult}};
        });
      });
      return from_worst(w, "developed points avoid K, and agree with the z = i prediction; value = n - mult");
    });
    rec.check("equivariance.cone_identity." + fs, [&] {
      Worst w = sampled(cfg, "equivariance.cone_identity." + fs, cfg.samples, true, [&](Rng& rng, Worst& acc) {
        const CVec t = random_cone_prime(rng, n, f);
        const HPoly P = to_basis(developing(kBasePoint, t, f), Basis::ZW);
        const double q = std::abs(q_lambda(lam, P, P)) / P.coeffs().squaredNorm();
        acc.offer(q, !(q <= 1e-10), [&] { return json{{"t", cjson(t)}}; });
      });
      return from_worst(w, "|q(P,P)| / |P|^2 <= 1e-10 for P = D(i, t)");
    });
  }
  rec.check("equivariance.developing_routes", [&] {
    Worst w = sampled(cfg, "equivariance.developing_routes", cfg.samples, true, [&](Rng& rng, Worst& acc) {
      const UHPoint z = random_uh(rng);
      const CVec t = random_cone_prime(rng, n, Field::C);
      const CVec a = developing(z, t).coeffs();
      const double d1 = (developing_product_form(z, t).coeffs() - a).norm() / a.norm();
      const double d2 = (developing_via_transport(z, t).coeffs() - a).norm() / a.norm();
      const double d = std::max(d1, d2);
      acc.offer(d, !(d <= 1e-8), [&] { return json{{"z", zjson(z)}, {"t", cjson(t)}}; });
    });
    return from_worst(w, "substitution, product form and transport routes agree to 1e-8 (relative)");
  });
  rec.check("equivariance.transport_groupoid", [&] {
    Worst w = sampled(cfg, "equivariance.transport_groupoid", 64, true, [&](Rng& rng, Worst& acc) {
      const UHPoint a = random_uh(rng), b = random_uh(rng), e = random_uh(rng);
      // normalised by |A||B|, the scale of the rounding in the product
      auto defect = [](const CMat& A, const CMat& B, const CMat& C) {
        return (A * B - C).norm() / (A.norm() * B.norm());
      };
      const double d2 = defect(transport2(a, b), transport2(b, e), transport2(a, e));
      const double ds = defect(transport_sym(a, b, n), transport_sym(b, e, n), transport_sym(a, e, n));
      const double d = std::max(d2, ds);
      acc.offer(d, !(d <= 1e-12), [&] { return json{{"z", {zjson(a), zjson(b), zjson(e)}}}; });
    });
    return from_worst(w, "T(a,b) T(b,c) = T(a,c), defect relative to |T(a,b)| |T(b,c)| <= 1e-12 (fixed 64 triples)");
  });
  rec.check("equivariance.transport_ode", [&] {
    Worst w = sampled(cfg, "equivariance.transport_ode", 20, true, [&](Rng& rng, Worst& acc) {
      const UHPoint a = random_uh(rng), b = random_uh(rng);
      double d = 0;
      for (int m : {1, n}) {
        const CMat ode = transport_segment(HiggsData::fuchsian(m), b, a);
        d = std::max(d, rel_diff(transport_holo(a, b, m), ode));
      }
      acc.offer(d, !(d <= 1e-6), [&] { return json{{"z0", zjson(a)}, {"z", zjson(b)}}; });
    });
    return from_worst(w, "closed-form transport vs adaptive ODE, n = 1 and n, relative 1e-6 (fixed 20 pairs)");
  });
}

inline void hitchin(const SuiteConfig& cfg, Recorder& rec) {
  const int n = cfg.n;
  const HiggsData d = HiggsData::fuchsian(n);
  rec.check("hitchin.calibration", [&] {
    const HitchinCalibration cal = calibrate_hitchin(d, UHPoint(0.3, 1.7));
    const bool ok = cal.best.sign == kHitchinConvention.sign && cal.best.factor == kHitchinConvention.factor &&
                    cal.best_residual <= 1e-8 && cal.runner_up > 1e-2;
    return deterministic(ok, cal.best_residual,
                         {{"sign", cal.best.sign}, {"factor", cal.best.factor}, {"runner_up", cal.runner_up}},
                         "unique (sign, factor) making the residual vanish equals the frozen convention");
  });
  rec.check("hitchin.residual", [&] {
    Worst w = sampled(cfg, "hitchin.residual", 100, true, [&](Rng& rng, Worst& acc) {
      const UHPoint z = random_uh(rng);
      const double r = hitchin_residual(d, z);
      acc.offer(r, !(r <= 1e-8), [&] { return json{{"z", zjson(z)}}; });
    });
    return from_worst(w, "Hitchin residual <= 1e-8 at 100 random z (fixed count)");
  });
  rec.check("hitchin.curvature_fd", [&] {
    Worst w = sampled(cfg, "hitchin.curvature_fd", 100, true, [&](Rng& rng, Worst& acc) {
      const UHPoint z = random_uh(rng);
      const CMat a = curvature_term(d, z), b = curvature_term_fd(d, z, 1e-4 * z.y);
      const double r = (a - b).norm() / a.norm();
      acc.offer(r, !(r <= 1e-5), [&] { return json{{"z", zjson(z)}}; });
    });
    return from_worst(w, "closed-form curvature vs finite differences of log H, relative 1e-5");
  });
  rec.check("hitchin.negative_control", [&] {
    HiggsData bad = d;
    bad.m[0] += 2;
    const double r = hitchin_residual(bad, UHPoint(0.0, 1.0));
    return deterministic(r > 1e-2, r, {{"z", zjson(UHPoint(0, 1))}}, "exponent m_1 + 2 must leave a residual > 1e-2");
  });
  rec.check("hitchin.real_structure", [&] {
    Worst w = sampled(cfg, "hitchin.real_structure", cfg.samples, true, [&](Rng& rng, Worst& acc) {
      const UHPoint z = random_uh(rng);
      const CVec s = rng.cgauss(d.rank());
      const double r = (real_structure_tau(d, z, real_structure_tau(d, z, s)) - s).norm() / s.norm();
      // fixed points built from tau0-fixed t
      CVec t = rng.cgauss(d.rank());
      t = 0.5 * (t + tau0(t));
      const CVec sp = real_point(d, z, t);
      const double fx = (real_structure_tau(d, z, sp) - sp).norm() / std::max(1e-300, sp.norm());
      const double v = std::max(r, fx);
      acc.offer(v, !(v <= 1e-12), [&] { return json{{"z", zjson(z)}, {"s", cjson(s)}}; });
    });
    return from_worst(w, "tau is an involution and fixes h^{a_k} t_k with t = tau0(t), 1e-12");
  });
}

inline void flatness(const SuiteConfig& cfg, Recorder& rec) {
  std::vector<int> ns{1, 2, 3};
  if (std::find(ns.begin(), ns.end(), cfg.n) == ns.end()) ns.push_back(cfg.n);
  for (int m : ns) {
    const std::string name = "flatness.holonomy.n" + std::to_string(m);
    rec.check(name, [&] {
      const HiggsData d = HiggsData::fuchsian(m);
      Worst w = sampled(cfg, name, 20, true, [&](Rng& rng, Worst& acc) {
        const UHPoint z(rng.uniform(-2.0, 2.0), rng.uniform(0.5, 3.0));
        const double rad = rng.uniform(0.05, 0.5) * z.y;
        const double r = flatness_residual(d, z, rad);
        acc.offer(r, !(r <= 1e-6), [&] { return json{{"z", zjson(z)}, {"radius", rad}}; });
      });
      return from_worst(w, "|Hol - Id| <= 1e-6 around 20 random circles");
    });
  }
  rec.check("flatness.parallel_sections", [&] {
    const HiggsData d = HiggsData::fuchsian(1);
    Worst w = sampled(cfg, "flatness.parallel_sections", std::min(cfg.samples, 1000L), true,
                      [&](Rng& rng, Worst& acc) {
                        const UHPoint z = random_uh(rng);
                        const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
                        const double r = covariant_derivative_fd(
                            d, [&](cplx u) { return step1_section(a, b, u); }, z, 1e-5 * z.y);
                        acc.offer(r, !(r <= 1e-7), [&] { return json{{"z", zjson(z)}, {"a", a}, {"b", b}}; });
                      });
    return from_worst(w, "n = 1 real sections have |nabla s| <= 1e-7 (central differences)");
  });
  rec.check("flatness.tau_compatibility", [&] {
    const HiggsData d = HiggsData::fuchsian(cfg.n);
    Worst w = sampled(cfg, "flatness.tau_compatibility", 20, true, [&](Rng& rng, Worst& acc) {
      const UHPoint a = random_uh(rng), b = random_uh(rng);
      CVec t = rng.cgauss(d.rank());
      t = 0.5 * (t + tau0(t));
      const CVec s = real_point(d, a, t);
      const CVec s1 = transport_segment(d, a, b) * s;
      const double r = (real_structure_tau(d, b, s1) - s1).norm() / s1.norm();
      acc.offer(r, !(r <= 1e-7), [&] { return json{{"from", zjson(a)}, {"to", zjson(b)}, {"t", cjson(t)}}; });
    });
    return from_worst(w, "transport keeps tau-fixed vectors tau-fixed, 1e-7");
  });
}

inline void transversality(const SuiteConfig& cfg, Recorder& rec) {
  const int n = cfg.n;
  const HiggsData d = HiggsData::fuchsian(n);
  for (Field f : cfg.fields()) {
    const std::string name = std::string("transversality.") + fname(f);
    if (f == Field::R && n == 1) {
      rec.skip(name, "C'_R is {0} for n = 1");
      continue;
    }
    rec.check(name, [&] {
      Worst w = sampled(cfg, name, cfg.samples, false, [&](Rng& rng, Worst& acc) {
        const UHPoint z = random_uh(rng);
        const CVec t = random_cone_prime(rng, n, f);
        const JacobianReport j = tautological_jacobian(d, f, z, t);
        acc.offer(j.min_sv, !(j.min_sv > 1e-6) || j.reality_defect > 1e-10,
                  [&] { return json{{"z", zjson(z)}, {"t", cjson(t)}, {"reality_defect", j.reality_defect}}; });
      });
      return from_worst(w, "min singular value of the tautological-section Jacobian > 1e-6");
    });
  }
  rec.check("transversality.negative_control", [&] {
    HiggsData flat = d;
    for (auto& r : flat.r) r = 0.0;
    Worst w = sampled(cfg, "transversality.negative_control", std::min(cfg.samples, 100L), true,
                      [&](Rng& rng, Worst& acc) {
                        const UHPoint z = random_uh(rng);
                        const CVec t = random_cone_prime(rng, n, Field::C);
                        const double s = tautological_jacobian(flat, Field::C, z, t).min_sv;
                        acc.offer(s, !(s <= 1e-8), [&] { return json{{"z", zjson(z)}, {"t", cjson(t)}}; });
                      });
    return from_worst(w, "with phi = 0 the Jacobian must drop rank (detector sanity)");
  });
}

inline std::string csv_c(cplx z) {
  std::ostringstream o;
  o.precision(17);
  o << z.real() << ',' << z.imag();
  return o.str();
}

inline void roots(const SuiteConfig& cfg, Recorder& rec, std::vector<std::string>* csv) {
  const int n = cfg.n;
  for (Field f : cfg.fields()) {
    const std::string name = std::string("roots.sample_K.") + fname(f);
    rec.check(name, [&] {
      Worst w = sampled(cfg, name, cfg.samples, false, [&](Rng& rng, Worst& acc) {
        const HPoly P = sample_K(n, 1, rng.engine()(), f)[0];
        const KMembership a = in_K(P, cfg.root_options());
        acc.offer(a.mult - n, !a.member || a.ambiguous, [&] { return json{{"P", pjson(P)}}; });
      });
      return from_worst(w, "sampled members of K are detected; value = mult - n");
    });
    // A verdict that becomes ambiguous after the action is undecided, not
    // contradicted: act() amplifies coefficient rounding by up to |g|^(2d).
    const std::string iname = std::string("roots.K_invariance.") + fname(f);
    rec.check(iname, [&] {
      Worst w = sampled(cfg, iname, cfg.samples, false, [&](Rng& rng, Worst& acc) {
        const HPoly P = sample_K(n, 1, rng.engine()(), f)[0];
        const SL2R g = random_sl2(rng);
        const HPoly gP = act(g, P);
        const KMembership a = in_K(P, cfg.root_options()), b = in_K(gP * (1.0 / gP.norm()), cfg.root_options());
        const bool decided = !a.ambiguous && !b.ambiguous;
        acc.count_if(!decided, "undecided");
        acc.offer(decided ? double(a.member == b.member) : 1.0, decided && a.member != b.member,
                  [&] { return json{{"P", pjson(P)}, {"g", gjson(g)}, {"mult_P", a.mult}, {"mult_gP", b.mult}}; });
      });
      return from_worst(w, "in_K(g.P) = in_K(P) for |g| <= 5 whenever both verdicts are unambiguous; value 0 = contradiction");
    });
  }
  for (Field f : cfg.fields()) {
    const std::string name = std::string("roots.circle_closure.") + fname(f);
    rec.check(name, [&] {
      Worst w = sampled(cfg, name, cfg.samples / 10, false, [&](Rng& rng, Worst& acc) {
        const HPoly P = sample_K(n, 1, rng.engine()(), f)[0];
        const HPoly Q = circle_act(rng.uniform(0.0, 2 * kPi), P);
        const KMembership k = in_K(Q, cfg.root_options());
        acc.offer(k.mult - n, !k.member || k.ambiguous, [&] { return json{{"P", pjson(P)}}; });
      });
      return from_worst(w, "the circle action keeps K in K; value = mult - n");
    });
  }
  rec.check("roots.omega_open", [&] {
    Worst w = sampled(cfg, "roots.omega_open", cfg.samples / 10, false, [&](Rng& rng, Worst& acc) {
      // half the draws sit near K: an n-fold real root split by 1e-3
      CVec c = rng.cgauss(2 * n);
      if (rng.uniform(0.0, 1.0) < 0.5) {
        const HPoly K0 = sample_K(n, 1, rng.engine()(), Field::C)[0];
        c = K0.coeffs() + 1e-3 * c / c.norm();
      }
      const HPoly P(Basis::XY, c / c.norm());
      const KMembership a = in_K(P, cfg.root_options());
      if (a.ambiguous || a.member) {
        acc.count_if(true, "not_unambiguous_omega");
        return;
      }
      const CVec e = rng.cgauss(2 * n);
      const HPoly Q(Basis::XY, P.coeffs() + 1e-9 * e / e.norm());
      const KMembership b = in_K(Q, cfg.root_options());
      acc.offer(n - b.mult, b.member, [&] { return json{{"P", pjson(P)}}; });
    });
    return from_worst(w, "unambiguous members of Omega stay outside K under 1e-9 coefficient noise; value = n - mult");
  });
  rec.check("roots.generic", [&] {
    Worst w = sampled(cfg, "roots.generic", cfg.samples, false, [&](Rng& rng, Worst& acc) {
      CVec c = rng.cgauss(2 * n);
      const HPoly P(Basis::XY, c / c.norm());
      const KMembership k = in_K(P, cfg.root_options());
      acc.offer(n - k.mult, k.member || k.ambiguous, [&] { return json{{"P", pjson(P)}}; });
    });
    return from_worst(w, "Gaussian complex forms are not in K");
  });
  rec.check("roots.developing", [&] {
    const Field f = cfg.fields().back();
    const Field fu = (f == Field::R && n == 1) ? Field::C : f;
    Worst w = sampled(cfg, "roots.developing", cfg.samples, false, [&](Rng& rng, Worst& acc) {
      const UHPoint z = random_uh(rng);
      const CVec t = random_cone_prime(rng, n, fu);
      const HPoly P = developing(z, t, fu);
      const KMembership k = in_K(P * (1.0 / P.norm()), cfg.root_options());
      if (csv) {
        for (size_t j = 0; j < k.roots.clusters.size(); ++j) {
          const auto& c = k.roots.clusters[j];
          std::ostringstream o;
          o.precision(17);
          o << fname(fu) << ',' << z.x << ',' << z.y;
          for (Eigen::Index i = 0; i < t.size(); ++i) o << ',' << csv_c(t(i));
          o << ',' << j << ',' << csv_c(c.center(0)) << ',' << csv_c(c.center(1)) << ',' << c.size << ','
            << (c.is_real ? 1 : 0);
          acc.rows.push_back(o.str());
        }
      }
      acc.offer(n - k.mult, k.member || k.ambiguous, [&] { return json{{"z", zjson(z)}, {"t", cjson(t)}}; });
    });
    if (csv) {
      std::ostringstream h;
      h << "field,z_re,z_im";
      for (int i = 1; i <= 2 * n; ++i) h << ",t" << i << "_re,t" << i << "_im";
      h << ",root,u1_re,u1_im,u2_re,u2_im,mult,is_real";
      csv->push_back(h.str());
      csv->insert(csv->end(), w.rows.begin(), w.rows.end());
    }
    return from_worst(w, "root multisets of developed points; none in K");
  });
}

inline void stiefel(const SuiteConfig& cfg, Recorder& rec) {
  const int n = cfg.n;
  rec.check("stiefel.conjugation", [&] {
    Worst w = sampled(cfg, "stiefel.conjugation", 100, true, [&](Rng& rng, Worst& acc) {
      const double th = rng.uniform(0.0, 2 * kPi);
      double d = 0;
      int wn = 1;
      for (int m = 1; m <= std::max(6, n); ++m) {
        const RepMatrices rm = rep_matrices(th, m);
        const CMat A = basis_change_A(m);
        const double e = (A * rm.phi_prime * A.inverse() - rm.phi_embedded()).cwiseAbs().maxCoeff();
        if (e > d) {
          d = e;
          wn = m;
        }
      }
      acc.offer(d, !(d <= 1e-10), [&] { return json{{"theta", th}, {"n", wn}}; });
    });
    return from_worst(w, "A phi'(theta) A^{-1} = phi(theta) to 1e-10 for n <= max(6, n)");
  });
  for (Field f : cfg.fields()) {
    const std::string fs = fname(f);
    if (f == Field::R && n == 1) {
      rec.skip("stiefel.cone_map." + fs, "C'_R is {0} for n = 1");
      continue;
    }
    rec.check("stiefel.cone_map." + fs, [&] {
      const CMat A = basis_change_A(n), Ai = A.inverse();
      Worst w = sampled(cfg, "stiefel.cone_map." + fs, std::min(cfg.samples, 1000L), true, [&](Rng& rng, Worst& acc) {
        const CVec t = random_cone_prime(rng, n, f);
        const ConeCheck c = in_cone(StiefelPoint::from_interleaved(A * t, f));
        const StiefelPoint p = random_cone_point(rng, n, f);
        const ConePrimeCheck cp = in_cone_prime(Ai * p.interleaved(), f);
        const double v = std::max({c.worst(), cp.residual, cp.tau_residual});
        acc.offer(v, !(v <= 1e-9), [&] { return json{{"t", cjson(t)}, {"p", cjson(p.interleaved())}}; });
      });
      return from_worst(w, "A maps C' into C and A^{-1} maps C into C' (residuals <= 1e-9)");
    });
  }
  rec.check("stiefel.diag_fiber_equivariance", [&] {
    Worst w = sampled(cfg, "stiefel.diag_fiber_equivariance", std::min(cfg.samples, 1000L), true,
                      [&](Rng& rng, Worst& acc) {
                        const StiefelPoint p = random_cone_point(rng, n, Field::C);
                        const CMat U = random_unitary(rng, n, Field::C);
                        const Mat2 B = rotation(rng.uniform(0.0, 2 * kPi));
                        const StiefelPoint q = act_group(p, U, B);
                        const Mat2 lhs = diag_fiber_map(q.as_matrix()).h;
                        const Mat2 Bi = B.inverse();
                        const Mat2 rhs = Bi.transpose() * diag_fiber_map(p.as_matrix()).h * Bi;
                        const double e = (lhs - rhs).cwiseAbs().maxCoeff();
                        const double fi = std::abs(invariant_f(U * p.v, U * p.w) - invariant_f(p.v, p.w));
                        const double v = std::max(e, fi);
                        acc.offer(v, !(v <= 1e-10), [&] { return json{{"p", cjson(p.interleaved())}}; });
                      });
    return from_worst(w, "h(U A B^{-1}) = B^{-T} h(A) B^{-1} and f(Uv, Uw) = f(v, w), 1e-10");
  });
}

inline void n2(const SuiteConfig& cfg, Recorder& rec) {
  auto rand_params = [](Rng& rng) {
    N2Params p;
    p.theta_p = rng.uniform(kThetaLo, kThetaHi);
    p.r = std::exp(rng.uniform(std::log(0.2), std::log(5.0)));
    p.phi = rng.uniform(0.05, kPi - 0.05);
    return p;
  };
  rec.check("n2.roundtrip_params", [&] {
    Worst w = sampled(cfg, "n2.roundtrip_params", cfg.samples, true, [&](Rng& rng, Worst& acc) {
      const N2Params p = rand_params(rng);
      const N2Params q = n2_inverse(n2_forward(p));
      const double e = std::max({std::abs(p.theta_p - q.theta_p), std::abs(p.r - q.r) / p.r, std::abs(p.phi - q.phi)});
      acc.offer(e, !(e <= 1e-9), [&] { return json{{"theta_p", p.theta_p}, {"r", p.r}, {"phi", p.phi}}; });
    });
    return from_worst(w, "inverse(forward(p)) = p to 1e-9");
  });
  rec.check("n2.roundtrip_roots", [&] {
    Worst w = sampled(cfg, "n2.roundtrip_roots", cfg.samples, true, [&](Rng& rng, Worst& acc) {
      std::array<double, 3> x{rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)};
      std::sort(x.begin(), x.end());
      if (x[1] - x[0] < 1e-3 || x[2] - x[1] < 1e-3) x = {-1.0, 0.5, 2.0};
      // any three distinct points; a quarter of the samples include infinity
      std::array<RP1Point, 3> a{RP1Point::affine(x[0]), RP1Point::affine(x[1]), RP1Point::affine(x[2])};
      if (rng.uniform(0.0, 1.0) < 0.25) a[static_cast<int>(rng.uniform(0.0, 3.0))] = RP1Point::affine(INFINITY);
      const int count = n2_admissible_count(a);
      const N2Params u = n2_inverse_unordered(a);
      const N2Roots c = n2_forward(u);
      // forward returns the admissible labelling; it must be a permutation of a
      double e = 0.0;
      for (const RP1Point& r : {c.a1, c.a2, c.a3}) {
        double best = 1.0;
        for (auto& q : a) best = std::min(best, r.distance(q));
        e = std::max(e, best);
      }
      // and inverting the labelled forward image gives u back
      const N2Params v = n2_inverse(c);
      e = std::max({e, std::abs(u.theta_p - v.theta_p), std::abs(u.r - v.r) / u.r, std::abs(u.phi - v.phi)});
      acc.offer(e, !(e <= 1e-9) || count != 1,
                [&] { return json{{"a", {rp1json(a[0]), rp1json(a[1]), rp1json(a[2])}}, {"labellings", count}}; });
    });
    return from_worst(w, "every distinct real triple has exactly one admissible labelling and forward(inverse(a)) = a (chordal, 1e-9)");
  });
  rec.check("n2.developing_roots", [&] {
    Worst w = sampled(cfg, "n2.developing_roots", std::min(cfg.samples, 1000L), true, [&](Rng& rng, Worst& acc) {
      const N2Params p = rand_params(rng);
      const HPoly P = developing(p.z(), n2_omega1_vector(p.theta_p), Field::R);
      const RootReport rr = real_root_multiplicity(P * (1.0 / P.norm()));
      const N2Roots a = n2_forward(p);
      double e = rr.clusters.size() == 3 ? 0.0 : 1.0;
      for (const RP1Point& r : {a.a1, a.a2, a.a3}) {
        double best = 1.0;
        for (auto& c : rr.clusters) {
          if (!c.is_real) continue;
          CP1 u;
          u << r.a, r.b;
          best = std::min(best, chordal(u, c.center));
        }
        e = std::max(e, best);
      }
      acc.offer(e, !(e <= 1e-8), [&] { return json{{"theta_p", p.theta_p}, {"r", p.r}, {"phi", p.phi}}; });
    });
    return from_worst(w, "roots of the developed F_1 polynomial equal the forward map, 1e-8");
  });
  rec.check("n2.omega2", [&] {
    Worst w = sampled(cfg, "n2.omega2", cfg.samples, true, [&](Rng& rng, Worst& acc) {
      const UHPoint z = random_uh(rng);
      const double th = rng.uniform(0.0, kPi);
      const RP1Point a = omega2_forward(z, th);
      double back = omega2_inverse(z, a);
      double e = std::abs(back - th);
      e = std::min(e, kPi - e);
      // the developed polynomial has the roots z, zbar and a
      const HPoly P = developing(z, n2_omega2_vector(th), Field::R);
      const RootReport rr = real_root_multiplicity(P * (1.0 / P.norm()));
      double er = 1.0;
      for (auto& c : rr.clusters) {
        if (!c.is_real) continue;
        CP1 u;
        u << a.a, a.b;
        er = std::min(er, chordal(u, c.center));
      }
      const double v = std::max(e, er * 1e-1);
      acc.offer(v, !(e <= 1e-9 && er <= 1e-8), [&] { return json{{"z", zjson(z)}, {"theta", th}}; });
    });
    return from_worst(w, "theta recovered mod pi from the real root (1e-9); root matches the developed form (1e-8)");
  });
}

}  // namespace suites

inline SuiteReport run(const SuiteConfig& cfg, std::vector<std::string>* csv = nullptr) {
  cfg.validate();
  SuiteReport rep;
  rep.config = cfg;
  Recorder rec(rep);
  const auto t0 = std::chrono::steady_clock::now();
  const std::string& s = cfg.suite;
  const bool all = s == "all";
  if (all || s == "qform") {
    suites::exact_checks(cfg, rec);
    suites::qform(cfg, rec);
  }
  if (all || s == "nonintersect") suites::nonintersect(cfg, rec);
  if (all || s == "equivariance") suites::equivariance(cfg, rec);
  if (all || s == "hitchin") {
    if (!all) suites::exact_checks(cfg, rec);
    suites::hitchin(cfg, rec);
  }
  if (all || s == "flatness") suites::flatness(cfg, rec);
  if (all || s == "transversality") suites::transversality(cfg, rec);
  if (all || s == "roots") suites::roots(cfg, rec, csv);
  if (all || s == "stiefel") suites::stiefel(cfg, rec);
  if (all || s == "n2") suites::n2(cfg, rec);
  std::sort(rep.records.begin(), rep.records.end(), [](auto& a, auto& b) { return a.name < b.name; });
  rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// Structural validation of a report produced by to_json().
inline std::string schema_errors(const json& j) {
  if (!j.is_object()) return "not an object";
  if (!j.contains("schema") || !j["schema"].is_number_integer() || j["schema"] != kSchema) return "bad schema";
  for (const char* k : {"tool", "version", "suite"})
    if (!j.contains(k) || !j[k].is_string()) return std::string("bad ") + k;
  if (!j.contains("config") || !j["config"].is_object()) return "bad config";
  if (!j.contains("pass") || !j["pass"].is_boolean()) return "bad pass";
  if (!j.contains("records") || !j["records"].is_array()) return "bad records";
  std::string prev;
  for (auto& r : j["records"]) {
    if (!r.is_object() || !r.contains("name") || !r["name"].is_string()) return "record without name";
    if (!r.contains("status") || !r["status"].is_string()) return "record without status";
    if (!r.contains("worst_value") || !r.contains("worst_witness")) return "record without worst fields";
    const std::string st = r["status"];
    if (st != "pass" && st != "fail" && st != "skip" && st != "info") return "bad status " + st;
    const std::string nm = r["name"];
    if (nm < prev) return "records not sorted";
    prev = nm;
  }
  return "";
}

}  // namespace hgeo::harness
