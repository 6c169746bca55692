#pragma once

#include <json.hpp>

#include "ghc/checks.hpp"
#include "ghc/derivative.hpp"
#include "ghc/error.hpp"
#include "ghc/interval.hpp"
#include "ghc/limit.hpp"

namespace ghc {

using json = nlohmann::json;

inline void to_json(json& j, const Interval& a) { j = json{{"lo", a.lower()}, {"hi", a.upper()}}; }

inline void from_json(const json& j, Interval& a) {
  try {
    a = Interval(j.at("lo").get<double>(), j.at("hi").get<double>());
  } catch (const json::exception& e) {
    throw error(errc::parse, std::string("bad interval JSON: ") + e.what());
  }
}

inline void to_json(json& j, const ShrinkSchedule& s) {
  j = json{{"delta0", s.delta0},
           {"ratio", s.ratio},
           {"max_levels", s.max_levels},
           {"min_levels", s.min_levels},
           {"samples_per_level", s.samples_per_level},
           {"lambda_samples", s.lambda_samples},
           {"seed", s.seed},
           {"divergence_cap", s.divergence_cap}};
}

// Missing keys keep their defaults.
inline void from_json(const json& j, ShrinkSchedule& s) {
  s.delta0 = j.value("delta0", s.delta0);
  s.ratio = j.value("ratio", s.ratio);
  s.max_levels = j.value("max_levels", s.max_levels);
  s.min_levels = j.value("min_levels", s.min_levels);
  s.samples_per_level = j.value("samples_per_level", s.samples_per_level);
  s.lambda_samples = j.value("lambda_samples", s.lambda_samples);
  s.seed = j.value("seed", s.seed);
  s.divergence_cap = j.value("divergence_cap", s.divergence_cap);
}

inline void to_json(json& j, const LimitEstimate& e) {
  j = json{{"value", e.value},
           {"verdict", to_string(e.verdict())},
           {"converged", e.converged},
           {"divergent", e.divergent},
           {"residual", std::isfinite(e.residual) ? json(e.residual) : json(nullptr)},
           {"monotone", e.monotone},
           {"levels", e.level_trace},
           {"radii", e.radii},
           {"accepted", e.accepted},
           {"rejected", e.rejected},
           {"witness", e.witness}};
}

inline void to_json(json& j, const DerivativeResult& r) {
  const auto& e = r.estimate;
  j = json{{"kind", to_string(r.kind)},
           {"exists", r.exists},
           {"value", r.value},
           {"residual", std::isfinite(e.residual) ? json(e.residual) : json(nullptr)},
           {"levels", e.level_trace},
           {"verdict", to_string(e.verdict())},
           {"monotone", e.monotone},
           {"includes_base_point", r.includes_base_point},
           {"accepted", e.accepted},
           {"rejected", e.rejected}};
}

inline void to_json(json& j, const Counterexample& c) {
  j = json{{"check", c.check},     {"points", c.points}, {"scalars", c.scalars},
           {"lhs", c.lhs},         {"rhs", c.rhs},       {"slack", c.slack}};
}

inline void from_json(const json& j, Counterexample& c) {
  try {
    c.check = j.at("check").get<std::string>();
    c.points = j.at("points").get<std::vector<Point>>();
    c.scalars = j.value("scalars", std::vector<double>{});
    c.slack = j.value("slack", 0.0);
    if (j.contains("lhs")) c.lhs = j.at("lhs").get<Interval>();
    if (j.contains("rhs")) c.rhs = j.at("rhs").get<Interval>();
  } catch (const json::exception& e) {
    throw error(errc::parse, std::string("bad counterexample JSON: ") + e.what());
  }
}

inline void to_json(json& j, const CheckVerdict& v) {
  j = json{{"check", v.check}, {"holds", v.holds}, {"trials", v.trials}};
  j["counterexample"] = v.counterexample ? json(*v.counterexample) : json(nullptr);
  if (v.stronger_form_holds) j["stronger_form_holds"] = *v.stronger_form_holds;
}

inline void to_json(json& j, const LipschitzReport& r) {
  j = json{{"check", "lipschitz"},
           {"k_estimate", r.k_estimate},
           {"witness_pair", r.witness_pair},
           {"is_lipschitz_likely", r.is_lipschitz_likely},
           {"samples", r.samples},
           {"slope", r.slope},
           {"decade_distances", r.decade_distances},
           {"decade_ratios", r.decade_ratios}};
}

}  // namespace ghc
