#pragma once

// Umbrella header: the whole pipeline in dependency order.

#include "alqhd/errors.hpp"    // IWYU pragma: export
#include "alqhd/rng.hpp"       // IWYU pragma: export
#include "alqhd/grid.hpp"      // IWYU pragma: export
#include "alqhd/expr.hpp"      // IWYU pragma: export
#include "alqhd/objectives.hpp"  // IWYU pragma: export
#include "alqhd/qhd.hpp"       // IWYU pragma: export
#include "alqhd/zoom.hpp"      // IWYU pragma: export
#include "alqhd/alm.hpp"       // IWYU pragma: export
#include "alqhd/baseline.hpp"  // IWYU pragma: export
#include "alqhd/pauli.hpp"     // IWYU pragma: export
#include "alqhd/resources.hpp" // IWYU pragma: export
#include "alqhd/powergrid.hpp" // IWYU pragma: export
