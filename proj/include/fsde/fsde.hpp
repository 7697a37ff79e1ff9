#pragma once

// Umbrella header.

#include "fsde/classical.hpp"
#include "fsde/common.hpp"
#include "fsde/config.hpp"
#include "fsde/fbm.hpp"
#include "fsde/fft.hpp"
#include "fsde/harness.hpp"
#include "fsde/heat.hpp"
#include "fsde/io.hpp"
#include "fsde/linalg.hpp"
#include "fsde/operators.hpp"
#include "fsde/quadrature.hpp"
#include "fsde/solver.hpp"
#include "fsde/specfun.hpp"
#include "fsde/stats.hpp"
#include "fsde/stochint.hpp"
#include "fsde/verify.hpp"
