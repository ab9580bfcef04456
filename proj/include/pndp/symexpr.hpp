#pragma once

// Symbolic expression core: construction, calculus, simplification, sampling.
#include "pndp/calculus.hpp"
#include "pndp/expr.hpp"
#include "pndp/rational.hpp"
#include "pndp/sampling.hpp"
#include "pndp/simplify.hpp"
