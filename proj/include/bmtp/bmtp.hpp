#pragma once

// Umbrella header: the whole library in one include.

#include "bmtp/bench.hpp"
#include "bmtp/disprove.hpp"
#include "bmtp/engine.hpp"
#include "bmtp/generalize.hpp"
#include "bmtp/heuristics.hpp"
#include "bmtp/rewrite.hpp"
#include "bmtp/syntax.hpp"
#include "bmtp/term.hpp"
#include "bmtp/theory.hpp"
