#pragma once

namespace lpq {

// Selects the OpenMP kernels or the plain loops. Results are identical up to
// rounding in either mode because reductions keep a fixed order.
enum class Exec { serial, parallel };

int max_threads();

}  // namespace lpq
