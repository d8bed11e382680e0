#include <doctest.h>

#include "lpqtem/errors.hpp"
#include "lpqtem/mixed_norm.hpp"
#include "lpqtem/reference.hpp"
#include "lpqtem/signals.hpp"

#include <cmath>

using namespace lpq;
using doctest::Approx;

namespace {

GridFunction sample(const Grid& g, double (*fn)(double, double)) {
  GridFunction f(g);
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) f.at(i, j) = fn(g.x.at(i), g.y.at(j));
  return f;
}

const double kExps[] = {1.0, 1.5, 2.0, 3.0, kInf};

}  // namespace

TEST_CASE("conjugate exponents") {
  CHECK(MixedNormParams::conjugate_of(1.0) == kInf);
  CHECK(MixedNormParams::conjugate_of(kInf) == 1.0);
  CHECK(MixedNormParams::conjugate_of(2.0) == 2.0);
  CHECK(MixedNormParams::conjugate_of(4.0) == Approx(4.0 / 3.0).epsilon(1e-15));
  const MixedNormParams pq(3.0, 1.5);
  CHECK(1.0 / pq.p() + 1.0 / pq.p_conj() == Approx(1.0).epsilon(1e-15));
  CHECK(1.0 / pq.q() + 1.0 / pq.q_conj() == Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(MixedNormParams(0.5, 2.0), InputError);
  CHECK_THROWS_AS(MixedNormParams(2.0, std::nan("")), InputError);
}

TEST_CASE("constant on the unit square has norm one for every exponent pair") {
  const Grid g = Grid::uniform(0, 1, 0, 1, 32);
  const GridFunction one(g, 1.0);
  for (double p : kExps)
    for (double q : kExps) CHECK(mixed_function_norm(one, {p, q}) == Approx(1.0).epsilon(1e-13));
}

TEST_CASE("polynomial integrands are integrated exactly") {
  const Grid g = Grid::uniform(0, 1, 0, 1, 16);
  // (int int x^2 y^2)^(1/2) = 1/3
  CHECK(mixed_function_norm(sample(g, [](double x, double y) { return x * y; }), {2, 2}) ==
        Approx(1.0 / 3.0).epsilon(1e-14));
  // outer L1 of inner sup: int x^2 dx = 1/3; outer sup of inner L1: max x^2 / 2 = 1/2
  const GridFunction f = sample(g, [](double x, double y) { return x * x * y; });
  CHECK(mixed_function_norm(f, {1, kInf}) == Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(mixed_function_norm(f, {kInf, 1}) == Approx(0.5).epsilon(1e-14));
}

TEST_CASE("separable functions factor") {
  const Grid g = Grid::uniform(0, 2, 0, 3, 32);
  // g(x) = 1 + x, h(y) = y: exact L^2 norms sqrt(26/3) and 3
  const GridFunction f = sample(g, [](double x, double y) { return (1 + x) * y; });
  CHECK(mixed_function_norm(f, {2, 2}) == Approx(std::sqrt(26.0 / 3.0) * 3.0).epsilon(1e-13));
  // L^1 of g is 4, L^inf of h is 3
  CHECK(mixed_function_norm(f, {1, kInf}) == Approx(12.0).epsilon(1e-13));
  CHECK(mixed_function_norm(f, {kInf, 1}) == Approx(3.0 * 4.5).epsilon(1e-13));
}

TEST_CASE("odd interval counts fall back to the trapezoid rule") {
  const Axis a{0.0, 1.0, 3};
  const auto w = quadrature_weights(a);
  REQUIRE(w.size() == 4);
  CHECK(w[0] == Approx(1.0 / 6.0));
  CHECK(w[1] == Approx(1.0 / 3.0));
  double s = 0;
  for (double v : w) s += v;
  CHECK(s == Approx(1.0).epsilon(1e-15));
  const auto ws = quadrature_weights(Axis{0.0, 1.0, 4});
  CHECK(ws[1] == Approx(4.0 / 12.0));
  CHECK(ws[2] == Approx(2.0 / 12.0));
}

TEST_CASE("random grid function matches a plain L2 oracle") {
  const Grid g = Grid::uniform(0, 1, 0, 1, 63);  // 64 x 64 points, odd interval count
  Rng rng(11);
  const GridFunction f = random_grid_function(g, rng);
  // independent trapezoid L2 with explicit weights
  double s = 0.0;
  const double h = 1.0 / 63;
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) {
      const double wi = (i == 0 || i == 63) ? h / 2 : h, wj = (j == 0 || j == 63) ? h / 2 : h;
      s += wi * wj * f.at(i, j) * f.at(i, j);
    }
  CHECK(mixed_function_norm(f, {2, 2}) == Approx(std::sqrt(s)).epsilon(1e-12));
}

TEST_CASE("agrees with the direct serial route for every exponent pair") {
  const Grid g = Grid::uniform(0, 4, 0, 3, 8);
  Rng rng(5);
  const GridFunction f = random_grid_function(g, rng);
  for (double p : kExps)
    for (double q : kExps)
      CHECK(mixed_function_norm(f, {p, q}) ==
            Approx(reference::mixed_norm_direct(f, {p, q})).epsilon(1e-12));
}

TEST_CASE("homogeneity") {
  const Grid g = Grid::uniform(0, 2, 0, 2, 16);
  Rng rng(3);
  const GridFunction f = random_grid_function(g, rng);
  for (double a : {-3.0, 0.5, 1e-150, 1e150})
    for (double p : kExps)
      CHECK(mixed_function_norm(a * f, {p, 1.5}) ==
            Approx(std::abs(a) * mixed_function_norm(f, {p, 1.5})).epsilon(1e-13));
}

TEST_CASE("no overflow for huge values") {
  const Grid g = Grid::uniform(0, 1, 0, 1, 8);
  const GridFunction f(g, 1e300);
  CHECK(mixed_function_norm(f, {3, 3}) == Approx(1e300).epsilon(1e-12));
}

TEST_CASE("rejects bad input") {
  const Grid g = Grid::uniform(0, 1, 0, 1, 4);
  GridFunction f(g, 1.0);
  f.at(2, 2) = std::nan("");
  CHECK_THROWS_AS(mixed_function_norm(f, {2, 2}), InputError);
  const GridFunction a(g, 1.0), b(Grid::uniform(0, 2, 0, 1, 4), 1.0);
  CHECK_THROWS_AS(duality_pairing(a, b), InputError);
  CHECK_THROWS_AS(mixed_sequence_norm(CoefSeq(Window{0, -1, 0, 0}), {2, 2}), InputError);
}

TEST_CASE("sequence norms") {
  const Window w{0, 2, 0, 3};
  CoefSeq c(w, 0.0);
  c(1, 2) = -1.0;
  for (double p : kExps)
    for (double q : kExps) CHECK(mixed_sequence_norm(c, {p, q}) == Approx(1.0));
  const CoefSeq ones(w, 1.0);
  CHECK(mixed_sequence_norm(ones, {2, 2}) == Approx(std::sqrt(12.0)));
  CHECK(mixed_sequence_norm(ones, {1, kInf}) == Approx(3.0));
  CHECK(mixed_sequence_norm(ones, {kInf, 1}) == Approx(4.0));

  Rng rng(9);
  const CoefSeq r = random_coefficients(Window{0, 7, 0, 7}, rng);
  CHECK(mixed_sequence_norm(r, {kInf, kInf}) == Approx(r.max_abs()).epsilon(1e-15));
  double outer = 0.0;
  for (int a = 0; a < 8; ++a) {
    double inner = 0.0;
    for (int b = 0; b < 8; ++b) inner += std::pow(std::abs(r(a, b)), 1.5);
    outer += std::pow(std::pow(inner, 1.0 / 1.5), 3.0);
  }
  CHECK(mixed_sequence_norm(r, {3, 1.5}) == Approx(std::cbrt(outer)).epsilon(1e-14));
}

TEST_CASE("duality pairing") {
  const Grid g = Grid::uniform(0, 2, 0, 1, 16);
  Rng rng(4);
  const GridFunction f = random_grid_function(g, rng);
  CHECK(duality_pairing(f, GridFunction(g, 0.0)) == 0.0);
  // a smooth bump paired with itself equals the quadrature of its square
  const GridFunction bump =
      sample(g, [](double x, double y) { return std::exp(-8 * ((x - 1) * (x - 1) + (y - .5) * (y - .5))); });
  CHECK(duality_pairing(bump, bump) == Approx(std::pow(mixed_function_norm(bump, {2, 2}), 2)).epsilon(1e-13));
  // x*y over [0,2]x[0,1] integrates to 1
  CHECK(duality_pairing(sample(g, [](double x, double) { return x; }),
                        sample(g, [](double, double y) { return y; })) == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Hoelder and triangle inequalities over random draws") {
  const Grid g = Grid::uniform(0, 3, 0, 2, 8);
  Rng rng(21);
  int holder = 0, triangle = 0, trials = 0;
  for (double p : kExps)
    for (double q : kExps)
      for (int t = 0; t < 8; ++t) {
        const GridFunction f = random_grid_function(g, rng), h = random_grid_function(g, rng);
        const MixedNormParams pq(p, q);
        ++trials;
        if (std::abs(duality_pairing(f, h)) <=
            mixed_function_norm(f, pq) * mixed_function_norm(h, pq.conjugate()) * (1 + 1e-9))
          ++holder;
        if (mixed_function_norm(f + h, pq) <=
            (mixed_function_norm(f, pq) + mixed_function_norm(h, pq)) * (1 + 1e-9))
          ++triangle;
      }
  CHECK(trials == 200);
  CHECK(holder == trials);
  CHECK(triangle == trials);
}

TEST_CASE("Minkowski integral inequality on nonnegative functions") {
  const Grid g = Grid::uniform(0, 2, 0, 2, 8);
  const auto wy = quadrature_weights(g.y);
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    GridFunction f = random_grid_function(g, rng);
    for (auto& v : f.values()) v = std::abs(v);
    const double p = 1.0 + t * 0.25;
    // left: L^p in x of the y-integral; right: y-integral of L^p-in-x norms
    GridFunction inner(Grid{g.x, Axis{0, 1, 1}});
    for (int i = 0; i < g.nx(); ++i) {
      double s = 0;
      for (int j = 0; j < g.ny(); ++j) s += wy[j] * f.at(i, j);
      inner.at(i, 0) = inner.at(i, 1) = s;
    }
    const double left = mixed_function_norm(inner, {p, kInf});
    double right = 0.0;
    for (int j = 0; j < g.ny(); ++j) {
      GridFunction col(Grid{g.x, Axis{0, 1, 1}});
      for (int i = 0; i < g.nx(); ++i) col.at(i, 0) = col.at(i, 1) = f.at(i, j);
      right += wy[j] * mixed_function_norm(col, {p, kInf});
    }
    CHECK(left <= right * (1 + 1e-9));
  }
}
