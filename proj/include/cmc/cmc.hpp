#pragma once

#include "cmc/curve.hpp"
#include "cmc/errors.hpp"
#include "cmc/expr.hpp"
#include "cmc/generator.hpp"
#include "cmc/geometry.hpp"
#include "cmc/io.hpp"
#include "cmc/jet.hpp"
#include "cmc/parallel.hpp"
#include "cmc/quadrature.hpp"
#include "cmc/rotational.hpp"
#include "cmc/surface.hpp"
#include "cmc/validation.hpp"
