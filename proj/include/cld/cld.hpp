#pragma once

// Umbrella header.

#include "cld/acceptance.hpp"
#include "cld/checkerboard.hpp"
#include "cld/copula.hpp"
#include "cld/errors.hpp"
#include "cld/estimation.hpp"
#include "cld/finite_diff.hpp"
#include "cld/generator.hpp"
#include "cld/grid.hpp"
#include "cld/io.hpp"
#include "cld/kendall.hpp"
#include "cld/local_dependence.hpp"
#include "cld/mics.hpp"
#include "cld/normal.hpp"
#include "cld/quadrature.hpp"
#include "cld/rng.hpp"
#include "cld/roots.hpp"
