#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ghc/checks.hpp"
#include "ghc/derivative.hpp"
#include "ghc/error.hpp"
#include "ghc/families.hpp"
#include "ghc/interval.hpp"
#include "ghc/limit.hpp"
#include "ghc/parser.hpp"
#include "ghc/serialize.hpp"

#ifndef GHC_FIXTURE_DIR
#define GHC_FIXTURE_DIR "fixtures/paper"
#endif

namespace ghc {

struct ScenarioRow {
  std::string check;
  std::string expected;
  std::string observed;
  bool pass = false;
  // Informational rows are reported but do not affect the verdict.
  bool informational = false;
};

struct ScenarioReport {
  std::string name;
  std::vector<ScenarioRow> rows;

  bool pass() const {
    return std::all_of(rows.begin(), rows.end(),
                       [](const ScenarioRow& r) { return r.informational || r.pass; });
  }

  std::string table() const {
    std::size_t w = 5;
    for (const auto& r : rows) w = std::max(w, r.check.size());
    std::string out = name + "\n";
    for (const auto& r : rows) {
      const char* tag = r.informational ? "INFO" : (r.pass ? "PASS" : "FAIL");
      out += "  " + std::string(tag) + "  " + r.check + std::string(w - r.check.size(), ' ') +
             "  expected " + r.expected + "  observed " + r.observed + "\n";
    }
    out += std::string(pass() ? "PASS" : "FAIL") + " " + name + "\n";
    return out;
  }
};

inline void to_json(json& j, const ScenarioRow& r) {
  j = json{{"check", r.check},
           {"expected", r.expected},
           {"observed", r.observed},
           {"status", r.informational ? "info" : (r.pass ? "pass" : "fail")}};
}

inline void to_json(json& j, const ScenarioReport& r) {
  j = json{{"scenario", r.name}, {"pass", r.pass()}, {"rows", r.rows}};
}

struct ReproduceOptions {
  std::string fixture_dir = GHC_FIXTURE_DIR;
  ShrinkSchedule sched{};
  double tol = 1e-3;
  std::uint64_t seed = 0x5EED;
};

namespace detail {

inline bool close(const Interval& a, const Interval& b, double eps) {
  return std::fabs(a.lower() - b.lower()) <= eps && std::fabs(a.upper() - b.upper()) <= eps;
}

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string yes_no(bool b) { return b ? "true" : "false"; }

class Scenario {
 public:
  Scenario(std::string name, const ReproduceOptions& opt) : opt_(opt) { rep_.name = std::move(name); }

  IVF fixture(const std::string& file) const { return load_ivf(opt_.fixture_dir + "/" + file); }

  DerivativeQuery query(const IVF& f, Point x, Point h) const {
    return DerivativeQuery{f, std::move(x), std::move(h), opt_.sched, opt_.tol};
  }

  void row(std::string check, std::string expected, std::string observed, bool pass) {
    rep_.rows.push_back({std::move(check), std::move(expected), std::move(observed), pass, false});
  }

  void info(std::string check, std::string expected, std::string observed) {
    rep_.rows.push_back({std::move(check), std::move(expected), std::move(observed), true, true});
  }

  void exact(std::string check, const Interval& expected, const Interval& got) {
    row(std::move(check), to_string(expected), to_string(got), expected == got);
  }

  void approx(std::string check, const Interval& expected, const DerivativeResult& r) {
    row(std::move(check), to_string(expected) + " exists",
        to_string(r.value) + " " + to_string(r.estimate.verdict()),
        r.exists && close(r.value, expected, opt_.tol));
  }

  void missing(std::string check, const DerivativeResult& r, bool need_divergent = false) {
    row(std::move(check), need_divergent ? "exists=false divergent" : "exists=false",
        "exists=" + yes_no(r.exists) + " " + to_string(r.estimate.verdict()) + " last " +
            to_string(r.value),
        !r.exists && (!need_divergent || r.estimate.divergent));
  }

  const ReproduceOptions& opt() const { return opt_; }
  ScenarioReport take() { return std::move(rep_); }

 private:
  const ReproduceOptions& opt_;
  ScenarioReport rep_;
};

inline Point random_direction(Rng& rng, std::size_t n, double lo, double hi) {
  Point h(n);
  rng.direction(h);
  const double m = rng.uniform(lo, hi);
  for (auto& c : h) c *= m;
  return h;
}

inline Point random_point(Rng& rng, std::size_t n, double r) {
  Point x(n);
  for (auto& c : x) c = rng.uniform(-r, r);
  return x;
}

inline void example_abs_clarke(Scenario& s) {
  const IVF f = s.fixture("abs_c.ivf");
  s.approx("upper_clarke(0; h=1)", Interval(2, 5), upper_clarke(s.query(f, {0.0}, {1.0})));
  s.approx("upper_clarke(0; h=-3)", Interval(6, 15), upper_clarke(s.query(f, {0.0}, {-3.0})));
  s.approx("directional(0; h=1)", Interval(2, 5), directional(s.query(f, {0.0}, {1.0})));
}

inline void remark_2_1(Scenario& s) {
  const Interval a(4, 10), b(-3, 2), c(-7.5, -6);
  const Interval d = gh_diff(b, a);
  s.exact("B gh- A", Interval(-8, -7), d);
  s.exact("A + (B gh- A)", Interval(-4, 3), add(a, d));
  s.row("A + (B gh- A) != B", "true", yes_no(add(a, d) != b), add(a, d) != b);
  s.exact("A + C", Interval(-3.5, 4), add(a, c));
  s.row("(B gh- A) <= C", "true", yes_no(dominates(d, c)), dominates(d, c));
  const Dominance v = dominance(b, add(a, c));
  s.row("dominance(B, A + C)", "incomparable", to_string(v), v == Dominance::Incomparable);
}

inline void remark_2_2(Scenario& s) {
  const IVF f = s.fixture("sqrt.ivf");
  int holds = 0;
  for (int i = 0; i < 10; ++i) {
    const Point x{0.5 + i};
    holds += check_gh_continuous(f, x, s.opt().tol, s.opt().sched).holds ? 1 : 0;
  }
  s.row("continuous at 0.5, 1.5, ..., 9.5", "10/10", std::to_string(holds) + "/10", holds == 10);
  const LipschitzReport rep = check_lipschitz(f, 4000, s.opt().seed);
  s.row("lipschitz likely", "false",
        yes_no(rep.is_lipschitz_likely) + " (slope " + fmt(rep.slope) + ")",
        !rep.is_lipschitz_likely);
}

inline void remark_3_3(Scenario& s) {
  const IVF f = s.fixture("remark33.ivf");
  s.exact("F(0)", Interval(5, 10), f({0.0}));
  s.approx("upper_clarke(0; h=2)", Interval(2, 4), upper_clarke(s.query(f, {0.0}, {2.0})));
  s.missing("directional(0; h=1)", directional(s.query(f, {0.0}, {1.0})));
}

inline void remark_3_4(Scenario& s) {
  const IVF f = s.fixture("remark34.ivf");
  s.exact("F(1,1)", Interval(6, 16), f({1.0, 1.0}));
  s.approx("directional((0,0); h=(1,1))", Interval(3, 8),
           directional(s.query(f, {0.0, 0.0}, {1.0, 1.0})));
  s.missing("upper_clarke((0,0); h=(1,1))", upper_clarke(s.query(f, {0.0, 0.0}, {1.0, 1.0})),
            true);
  const DerivativeResult r10 = upper_clarke(s.query(f, {0.0, 0.0}, {1.0, 0.0}));
  s.info("upper_clarke((0,0); h=(1,0))", "exists=false",
         "exists=" + yes_no(r10.exists) + " " + to_string(r10.estimate.verdict()));
  const DerivativeResult lo = lower_clarke(s.query(f, {0.0, 0.0}, {1.0, 1.0}));
  s.info("lower_clarke((0,0); h=(1,1))", "exists=false",
         "exists=" + yes_no(lo.exists) + " " + to_string(lo.estimate.verdict()));
}

inline void example_3_1(Scenario& s) {
  const CheckVerdict v = check_sublinear(s.fixture("ex40.ivf"), 4000, s.opt().seed);
  s.row("sublinear |x| [-3,2]", "holds", v.holds ? "holds" : "fails", v.holds);
  s.info("stronger form F(x+y) <= F(x) + F(y)", "not required",
         yes_no(v.stronger_form_holds.value_or(false)));
  for (const auto& c : {Interval(2, 5), Interval(0, 1), Interval(-1, 0.5)}) {
    const IVF g = IVF::scale_form(parse_expr("abs(x1)"), c, DomainBox::cube(1, -10, 10));
    const CheckVerdict w = check_sublinear(g, 2000, s.opt().seed);
    s.row("sublinear |x| " + to_string(c), "holds", w.holds ? "holds" : "fails", w.holds);
  }
}

inline void example_3_2(Scenario& s) {
  const CheckVerdict v = check_sublinear(s.fixture("quad_norm.ivf"), 4000, s.opt().seed);
  s.row("sublinear sqrt(x'Qx) [-1,2]", "holds", v.holds ? "holds" : "fails", v.holds);
  Rng rng(s.opt().seed);
  for (int i = 0; i < 5; ++i) {
    // Random SPD matrix L L^T + I/4 and C with a positive upper endpoint.
    const double l11 = rng.uniform(-1, 1), l21 = rng.uniform(-1, 1), l22 = rng.uniform(-1, 1);
    const double q11 = l11 * l11 + 0.25, q12 = l11 * l21, q22 = l21 * l21 + l22 * l22 + 0.25;
    const double c1 = rng.uniform(-3, 1);
    const double c2 = std::max(c1, 0.0) + rng.uniform(0.1, 2);
    const std::string q = "[[" + format_real(q11) + ", " + format_real(q12) + "], [" +
                          format_real(q12) + ", " + format_real(q22) + "]]";
    const IVF g = IVF::scale_form(parse_expr("sqrt(quad(" + q + "))"), Interval(c1, c2),
                                  DomainBox::cube(2, -5, 5));
    const CheckVerdict w = check_sublinear(g, 2000, s.opt().seed + i);
    s.row("sublinear random SPD #" + std::to_string(i), "holds", w.holds ? "holds" : "fails",
          w.holds);
  }
}

inline void remark_3_6(Scenario& s) {
  const IVF f = s.fixture("ex40.ivf");
  const CheckVerdict sub = check_sublinear(f, 4000, s.opt().seed);
  s.row("sublinear", "holds", sub.holds ? "holds" : "fails", sub.holds);
  const CheckVerdict cvx = check_convex(f, 4000, s.opt().seed);
  s.row("convex", "fails", cvx.holds ? "holds" : "fails", !cvx.holds);
  if (cvx.counterexample) {
    const bool again = replay(f, *cvx.counterexample);
    s.row("counterexample replays", "true", yes_no(again), again);
  } else {
    s.row("counterexample replays", "true", "no counterexample", false);
  }
  const CheckVerdict cvx2 = check_convex(s.fixture("ex40_negC.ivf"), 4000, s.opt().seed);
  s.row("convex (endpoint form)", "fails", cvx2.holds ? "holds" : "fails", !cvx2.holds);
}

inline void theorem_3_1(Scenario& s) {
  IvfGenerator gen(Family::Lipschitz, s.opt().seed);
  Rng rng(s.opt().seed ^ 0x31);
  int total = 0, exists = 0, bounded = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 50; ++i) {
    const GeneratedIvf g = gen.next();
    const std::size_t n = g.f.dims();
    const Point x = random_point(rng, n, 1.5);
    for (int d = 0; d < 8; ++d) {
      const Point h = random_direction(rng, n, 0.25, 2.0);
      const DerivativeResult r = upper_clarke(s.query(g.f, x, h));
      ++total;
      exists += r.exists;
      const double excess = norm(r.value) - g.lipschitz_bound * euclidean_norm(h);
      worst = std::max(worst, excess);
      bounded += excess <= 3e-3;
    }
  }
  s.row("upper_clarke exists", std::to_string(total) + "/" + std::to_string(total),
        std::to_string(exists) + "/" + std::to_string(total), exists == total);
  s.row("norm <= K'|h| + 3e-3", std::to_string(total) + "/" + std::to_string(total),
        std::to_string(bounded) + "/" + std::to_string(total) + " (max excess " + fmt(worst) + ")",
        bounded == total);
}

inline void theorem_3_2(Scenario& s) {
  IvfGenerator gen(Family::ConvexLipschitz, s.opt().seed);
  Rng rng(s.opt().seed ^ 0x32);
  int total = 0, convergent = 0, small = 0;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const GeneratedIvf g = gen.next();
    const std::size_t n = g.f.dims();
    const Point x = random_point(rng, n, 1.5);
    for (int d = 0; d < 8; ++d) {
      const Point h = random_direction(rng, n, 0.25, 2.0);
      ++total;
      try {
        const double gap = norm(clarke_directional_gap(s.query(g.f, x, h)));
        ++convergent;
        worst = std::max(worst, gap);
        small += gap <= 3e-3;
      } catch (const error& e) {
        if (e.code() != errc::nonexistence) throw;
      }
    }
  }
  s.row("convergent cases", ">= 95%",
        std::to_string(convergent) + "/" + std::to_string(total),
        convergent * 100 >= 95 * total);
  s.row("gap <= 3e-3 when convergent", "100%",
        std::to_string(small) + "/" + std::to_string(convergent) + " (max " + fmt(worst) + ")",
        small == convergent);
}

inline void theorem_3_3(Scenario& s) {
  IvfGenerator gen(Family::Lipschitz, s.opt().seed);
  Rng rng(s.opt().seed ^ 0x33);
  ShrinkSchedule sched = s.opt().sched;
  if (sched.samples_per_level == 0) sched.samples_per_level = 512;
  sched.lambda_samples = std::min<std::size_t>(sched.lambda_samples, 6);
  int homog_fail = 0, sub_fail = 0, missing = 0, pairs = 0;
  for (int i = 0; i < 20; ++i) {
    const GeneratedIvf g = gen.next();
    const std::size_t n = g.f.dims();
    const Point x = random_point(rng, n, 1.5);
    auto phi = [&](const Point& h) {
      const DerivativeResult r = upper_clarke(DerivativeQuery{g.f, x, h, sched, s.opt().tol});
      if (!r.exists) ++missing;
      return r.value;
    };
    const Point h = random_direction(rng, n, 0.5, 1.0);
    const Interval base = phi(h);
    for (double alpha : {0.0, 0.5, 1.0, 2.0, 10.0}) {
      Point ah = h;
      for (auto& c : ah) c *= alpha;
      const Interval got = phi(ah);
      if (norm(gh_diff(got, scalar_mul(alpha, base))) > (1.0 + alpha) * 3e-3) ++homog_fail;
    }
    for (int p = 0; p < 100; ++p) {
      const Point h1 = random_direction(rng, n, 0.1, 1.0);
      const Point h2 = random_direction(rng, n, 0.1, 1.0);
      Point h12(n);
      for (std::size_t k = 0; k < n; ++k) h12[k] = h1[k] + h2[k];
      ++pairs;
      if (strictly_dominates_beyond(add(phi(h1), phi(h2)), phi(h12), 3e-3)) ++sub_fail;
    }
  }
  s.row("homogeneity alpha in {0,0.5,1,2,10}", "0 failures", std::to_string(homog_fail),
        homog_fail == 0);
  s.row("subadditivity (not succ) over pairs", "0 failures",
        std::to_string(sub_fail) + " of " + std::to_string(pairs), sub_fail == 0);
  s.row("estimates exist", "0 missing", std::to_string(missing), missing == 0);
}

inline const std::map<std::string, void (*)(Scenario&)>& scenario_table() {
  static const std::map<std::string, void (*)(Scenario&)> table = {
      {"example-abs-clarke", example_abs_clarke},
      {"remark-2-1", remark_2_1},
      {"remark-2-2", remark_2_2},
      {"remark-3-3", remark_3_3},
      {"remark-3-4", remark_3_4},
      {"example-3-1", example_3_1},
      {"example-3-2", example_3_2},
      {"remark-3-6", remark_3_6},
      {"theorem-3-1", theorem_3_1},
      {"theorem-3-2", theorem_3_2},
      {"theorem-3-3", theorem_3_3},
  };
  return table;
}

}  // namespace detail

inline std::vector<std::string> scenario_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : detail::scenario_table()) out.push_back(name);
  return out;
}

/// Runs a named scenario from the bundled fixtures. Unknown names throw
/// errc::invalid_argument.
inline ScenarioReport reproduce(const std::string& name, const ReproduceOptions& opt = {}) {
  const auto& table = detail::scenario_table();
  const auto it = table.find(name);
  if (it == table.end()) {
    throw error(errc::invalid_argument, "unknown scenario '" + name + "'");
  }
  detail::Scenario s(name, opt);
  it->second(s);
  return s.take();
}

}  // namespace ghc
