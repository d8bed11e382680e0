#pragma once

#include "lpqtem/grid.hpp"
#include "lpqtem/kernel.hpp"

#include <cstdint>
#include <random>

namespace lpq {

using Rng = std::mt19937_64;

// Uniform [-1, 1] coefficients on the window, rescaled so the rendered grid sup equals `sup`.
VSignal random_vsignal(const Generator& g, const Window& w, const Grid& grid, double sup, Rng& rng);
CoefSeq random_coefficients(const Window& w, Rng& rng);
GridFunction random_grid_function(const Grid& grid, Rng& rng);

}  // namespace lpq
