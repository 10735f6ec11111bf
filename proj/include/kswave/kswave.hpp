#pragma once

/// Umbrella header: travelling waves of a chemotaxis-consumption system with
/// small, independently scaled diffusion in both species.
///
///   u_t = d_u u_xx - k w
///   w_t = d_w w_xx - (chi (w/u) u_x)_x,     d_u = mu eps, d_w = eps
///
/// The library provides the closed-form wave of the d_u = 0 member and its
/// sharp-interface d_w -> 0 limit, the slow/fast travelling-frame systems
/// with their branch structure, the assembled singular orbit, perturbed
/// heteroclinic shooting with an end-state convergence study, and an explicit
/// finite-volume scheme for the full system.

#include "errors.hpp"     // IWYU pragma: export
#include "exact.hpp"      // IWYU pragma: export
#include "integrate.hpp"  // IWYU pragma: export
#include "io.hpp"         // IWYU pragma: export
#include "model.hpp"      // IWYU pragma: export
#include "pde.hpp"        // IWYU pragma: export
#include "perturbed.hpp"  // IWYU pragma: export
#include "scenarios.hpp"  // IWYU pragma: export
#include "singular.hpp"   // IWYU pragma: export
