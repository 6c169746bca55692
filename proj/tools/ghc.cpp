#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ghc/ghc.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 2, kDomain = 3, kNonexistence = 4, kViolation = 5 };

int exit_code(ghc::errc c) {
  switch (c) {
    case ghc::errc::domain:
    case ghc::errc::evaluation:
    case ghc::errc::boundary_starvation:
    case ghc::errc::arithmetic_overflow:
      return kDomain;
    case ghc::errc::nonexistence:
      return kNonexistence;
    default:
      return kUsage;
  }
}

struct Options {
  std::string file;
  std::string at;
  std::string dir;
  std::string format;
  std::string replay;
  std::string fixtures = GHC_FIXTURE_DIR;
  std::string scenario;
  std::optional<double> tol;
  double delta0 = 0.5;
  double ratio = 0.5;
  int levels = 20;
  std::size_t samples = 0;
  std::size_t lambda_samples = 8;
  std::size_t trials = 4000;
  std::optional<std::uint64_t> seed;
  bool lower = false;
};

ghc::Point parse_point(const std::string& text, std::size_t dims, const char* what) {
  ghc::Point p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (item.empty() || used != item.size()) {
      throw ghc::error(ghc::errc::parse, std::string("bad ") + what + " component '" + item + "'");
    }
    p.push_back(v);
  }
  if (p.size() != dims) {
    throw ghc::error(ghc::errc::parse, std::string(what) + " has " + std::to_string(p.size()) +
                                           " components, the domain has " + std::to_string(dims));
  }
  return p;
}

std::uint64_t seed_of(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("GHC_SEED")) {
    try {
      return std::stoull(env, nullptr, 0);
    } catch (const std::exception&) {
      throw ghc::error(ghc::errc::parse, std::string("bad GHC_SEED '") + env + "'");
    }
  }
  return 0x5EED;
}

ghc::ShrinkSchedule schedule_of(const Options& o) {
  ghc::ShrinkSchedule s;
  s.delta0 = o.delta0;
  s.ratio = o.ratio;
  s.max_levels = o.levels;
  s.min_levels = std::min(s.min_levels, o.levels);
  s.samples_per_level = o.samples;
  s.lambda_samples = o.lambda_samples;
  s.seed = seed_of(o);
  return s;
}

bool text_mode(const Options& o, bool text_default) {
  return o.format.empty() ? text_default : o.format == "text";
}

void add_schedule_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--tol", o.tol, "tolerance (1e-3 for estimators, 1e-6 for sublinear)");
  cmd->add_option("--delta0", o.delta0, "initial shrink radius")->capture_default_str();
  cmd->add_option("--ratio", o.ratio, "shrink ratio in (0,1)")->capture_default_str();
  cmd->add_option("--levels", o.levels, "maximum shrink levels")->capture_default_str();
  cmd->add_option("--samples", o.samples, "points per level (0 = by dimension)")
      ->capture_default_str();
  cmd->add_option("--lambda-samples", o.lambda_samples, "step sizes per level")
      ->capture_default_str();
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "random seed (overrides GHC_SEED)");
  cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "text"}));
}

void print_json(const ghc::json& j) { std::cout << j.dump(2) << "\n"; }

int run_eval(const Options& o) {
  const ghc::IVF f = ghc::load_ivf(o.file);
  const ghc::Point x = parse_point(o.at, f.dims(), "point");
  const ghc::Interval v = f.eval(x);
  if (text_mode(o, true)) {
    std::cout << ghc::to_string(v) << "\n";
  } else {
    print_json(ghc::json{{"at", x}, {"value", v}});
  }
  return kOk;
}

int run_derivative(const Options& o, ghc::DerivativeKind kind) {
  const ghc::IVF f = ghc::load_ivf(o.file);
  ghc::DerivativeQuery q{f, parse_point(o.at, f.dims(), "point"),
                         parse_point(o.dir, f.dims(), "direction"), schedule_of(o),
                         o.tol.value_or(1e-3)};
  ghc::DerivativeResult r;
  switch (kind) {
    case ghc::DerivativeKind::Directional: r = ghc::directional(q); break;
    case ghc::DerivativeKind::UpperClarke: r = ghc::upper_clarke(q); break;
    case ghc::DerivativeKind::LowerClarke: r = ghc::lower_clarke(q); break;
  }
  if (text_mode(o, false)) {
    std::cout << ghc::to_string(r.kind) << " " << ghc::to_string(r.value) << " "
              << ghc::to_string(r.estimate.verdict()) << (r.exists ? "" : " (does not exist)")
              << "\n";
  } else {
    print_json(r);
  }
  return r.exists ? kOk : kNonexistence;
}

ghc::json read_replay(const std::string& payload) {
  std::string text = payload;
  if (std::filesystem::is_regular_file(payload)) {
    std::ifstream in(payload);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    ghc::json j = ghc::json::parse(text);
    if (j.contains("counterexample")) j = j["counterexample"];
    if (j.is_null()) throw ghc::error(ghc::errc::parse, "replay payload has no counterexample");
    return j;
  } catch (const ghc::json::exception& e) {
    throw ghc::error(ghc::errc::parse, std::string("replay payload is not JSON: ") + e.what());
  }
}

int run_check(const Options& o, const std::string& which) {
  const ghc::IVF f = ghc::load_ivf(o.file);
  const std::uint64_t seed = seed_of(o);
  const bool text = text_mode(o, false);
  if (!o.replay.empty()) {
    const auto ce = read_replay(o.replay).get<ghc::Counterexample>();
    const bool again = ghc::replay(f, ce);
    if (text) {
      std::cout << ce.check << " violation " << (again ? "reproduced" : "not reproduced") << "\n";
    } else {
      print_json(ghc::json{{"replay", ce}, {"reproduced", again}});
    }
    return again ? kViolation : kOk;
  }
  if (which == "lipschitz") {
    const ghc::LipschitzReport r = ghc::check_lipschitz(f, o.trials, seed);
    if (text) {
      std::cout << "lipschitz k_estimate " << ghc::detail::fmt(r.k_estimate) << " likely "
                << (r.is_lipschitz_likely ? "true" : "false") << "\n";
    } else {
      print_json(r);
    }
    return r.is_lipschitz_likely ? kOk : kViolation;
  }
  ghc::CheckVerdict v;
  if (which == "convex") {
    v = ghc::check_convex(f, o.trials, seed);
  } else if (which == "sublinear") {
    v = ghc::check_sublinear(f, o.trials, seed, o.tol.value_or(1e-6));
  } else {
    if (o.at.empty()) throw ghc::error(ghc::errc::parse, "check continuous needs --at");
    v = ghc::check_gh_continuous(f, parse_point(o.at, f.dims(), "point"), o.tol.value_or(1e-3),
                                 schedule_of(o));
  }
  if (text) {
    std::cout << v.check << " " << (v.holds ? "holds" : "fails") << " (" << v.trials
              << " trials)\n";
    if (v.counterexample) std::cout << ghc::json(*v.counterexample).dump() << "\n";
  } else {
    print_json(v);
  }
  return v.holds ? kOk : kViolation;
}

int run_reproduce(const Options& o) {
  ghc::ReproduceOptions ro;
  ro.fixture_dir = o.fixtures;
  ro.sched = schedule_of(o);
  ro.tol = o.tol.value_or(1e-3);
  ro.seed = seed_of(o);
  const ghc::ScenarioReport r = ghc::reproduce(o.scenario, ro);
  if (text_mode(o, true)) {
    std::cout << r.table();
  } else {
    print_json(r);
  }
  return r.pass() ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gH-difference interval calculus toolkit"};
  app.require_subcommand(1);
  Options o;

  auto* eval = app.add_subcommand("eval", "evaluate F at a point");
  eval->add_option("file", o.file, ".ivf file")->required();
  eval->add_option("--at", o.at, "comma-separated point")->required();
  add_common(eval, o);

  auto* clarke = app.add_subcommand("clarke", "upper (or lower) gH-Clarke derivative");
  auto* dirderiv = app.add_subcommand("dirderiv", "gH-directional derivative");
  for (auto* cmd : {clarke, dirderiv}) {
    cmd->add_option("file", o.file, ".ivf file")->required();
    cmd->add_option("--at", o.at, "base point")->required();
    cmd->add_option("--dir", o.dir, "direction")->required();
    add_schedule_flags(cmd, o);
    add_common(cmd, o);
  }
  clarke->add_flag("--lower", o.lower, "lower gH-Clarke derivative");

  auto* check = app.add_subcommand("check", "property checks");
  check->require_subcommand(1);
  std::string which;
  for (const char* name : {"convex", "lipschitz", "continuous", "sublinear"}) {
    auto* sub = check->add_subcommand(name);
    sub->add_option("file", o.file, ".ivf file")->required();
    sub->add_option("--at", o.at, "base point (continuous)");
    sub->add_option("--trials", o.trials, "sampled trials")->capture_default_str();
    sub->add_option("--replay", o.replay, "counterexample JSON (text or file) to re-evaluate");
    add_schedule_flags(sub, o);
    add_common(sub, o);
    sub->callback([&which, name] { which = name; });
  }

  auto* repro = app.add_subcommand("reproduce", "run a bundled scenario");
  repro->add_option("name", o.scenario, "scenario name")->required();
  repro->add_option("--fixtures", o.fixtures, "fixture directory")->capture_default_str();
  add_schedule_flags(repro, o);
  add_common(repro, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*eval) return run_eval(o);
    if (*clarke) {
      return run_derivative(o, o.lower ? ghc::DerivativeKind::LowerClarke
                                       : ghc::DerivativeKind::UpperClarke);
    }
    if (*dirderiv) return run_derivative(o, ghc::DerivativeKind::Directional);
    if (*check) return run_check(o, which);
    if (*repro) return run_reproduce(o);
  } catch (const ghc::error& e) {
    std::cerr << "ghc: " << ghc::to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code(e.code());
  }
  return kUsage;
}
