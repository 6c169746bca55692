#pragma once

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "ghc/interval.hpp"
#include "ghc/sampling.hpp"

namespace ghc::test {

// Multiples of 1/32 with |v| <= 1e6. Sums, differences and pairwise
// products of such values are exact in binary64.
inline double dyadic(Rng& rng, double bound = 1e6) {
  const auto m = static_cast<long long>(std::floor(rng.uniform(-bound * 32.0, bound * 32.0 + 1.0)));
  return static_cast<double>(m) / 32.0;
}

inline Interval dyadic_interval(Rng& rng, double bound = 1e6) {
  double a = dyadic(rng, bound), b = dyadic(rng, bound);
  if (rng.uniform() < 0.1) b = a;
  return a <= b ? Interval(a, b) : Interval(b, a);
}

struct CommandResult {
  int status = -1;
  std::string out;
};

// Runs a shell command and captures stdout.
inline CommandResult run(const std::string& cmd) {
  CommandResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

}  // namespace ghc::test
