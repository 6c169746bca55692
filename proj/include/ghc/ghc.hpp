#pragma once

#include "ghc/error.hpp"
#include "ghc/interval.hpp"
#include "ghc/expr.hpp"
#include "ghc/ivf.hpp"
#include "ghc/parser.hpp"
#include "ghc/sampling.hpp"
#include "ghc/limit.hpp"
#include "ghc/derivative.hpp"
#include "ghc/checks.hpp"
#include "ghc/families.hpp"
#include "ghc/serialize.hpp"
#include "ghc/reproduce.hpp"
