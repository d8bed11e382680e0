#include "lpqtem/signals.hpp"

#include "lpqtem/errors.hpp"

namespace lpq {

CoefSeq random_coefficients(const Window& w, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CoefSeq c(w);
  for (auto& v : c.values()) v = u(rng);
  return c;
}

GridFunction random_grid_function(const Grid& grid, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GridFunction f(grid);
  for (auto& v : f.values()) v = u(rng);
  return f;
}

VSignal random_vsignal(const Generator& g, const Window& w, const Grid& grid, double sup, Rng& rng) {
  if (!(sup > 0)) throw InputError("random_vsignal: target sup must be positive");
  VSignal f(g, random_coefficients(w, rng));
  const GridFunction r = render(f, grid, Exec::serial);
  double m = 0.0;
  for (double v : r.values()) m = std::max(m, std::abs(v));
  if (m == 0.0) throw InputError("random_vsignal: signal vanishes on the grid");
  f.coefficients() *= sup / m;
  return f;
}

}  // namespace lpq
