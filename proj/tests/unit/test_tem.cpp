#include <doctest.h>

#include "lpqtem/errors.hpp"
#include "lpqtem/quadrature.hpp"
#include "lpqtem/signals.hpp"
#include "lpqtem/tem.hpp"

#include <cmath>
#include <random>

using namespace lpq;
using doctest::Approx;

namespace {

TemConfig ctem(double c = 1.0, double b = 1.5, double delta = 0.25) {
  TemConfig t;
  t.c_bound = c;
  t.b_level = b;
  t.delta = delta;
  return t;
}

TemConfig iftem(double alpha, double c = 1.0, double b = 1.5, double delta = 0.25) {
  TemConfig t = ctem(c, b, delta);
  t.mode = TemMode::integrate_and_fire;
  t.alpha = alpha;
  return t;
}

const Horizon kH{0.0, 8.0, 1.0 / 32};

// int_a^b f(u) e^{alpha (u - b)} du on 64 GL-16 panels
double leaky_integral(const Fn1& f, double alpha, double a, double b) {
  static const GaussRule gl = gauss_legendre(16);
  double s = 0;
  for (int i = 0; i < 64; ++i) {
    const double lo = a + (b - a) * i / 64, hi = a + (b - a) * (i + 1) / 64;
    s += gauss_integrate(gl, lo, hi, [&](double u) { return f(u) * std::exp(alpha * (u - b)); });
  }
  return s;
}

}  // namespace

TEST_CASE("partition of unity") {
  SUBCASE("one device covering the window") {
    const DeviceSet d({5.0}, 10.0, 0.0, 10.0);
    CHECK(d.A_gamma() == 1);
    CHECK(d.B_gamma() == 1);
    const auto w = d.partition_of_unity(3.3);
    REQUIRE(w.size() == 1);
    CHECK(w[0].second == 1.0);
    // clipped to the window
    CHECK(d.pou_l1(0) == Approx(10.0).epsilon(1e-14));
    CHECK(d.pou_integral(0, [](double y) { return y; }, -kInf, kInf) == Approx(20.0).epsilon(1e-14));
  }
  SUBCASE("two overlapping balls") {
    const DeviceSet d({1.0, 2.0}, 1.0, 0.0, 3.0);
    const auto w = d.partition_of_unity(1.5);
    REQUIRE(w.size() == 2);
    CHECK(w[0].second == 0.5);
    CHECK(w[1].second == 0.5);
    CHECK(d.partition_of_unity(0.5).size() == 1);
    CHECK(d.A_gamma() == 1);
    CHECK(d.B_gamma() == 2);
    // u_0 = 1 on [0,1), 1/2 on [1,2]
    CHECK(d.pou_l1(0) == Approx(1.5).epsilon(1e-14));
    CHECK(d.pou_integral(0, [](double y) { return y * y / 2; }, -kInf, kInf) ==
          Approx(0.5 + 0.5 * 1.5).epsilon(1e-14));
  }
  SUBCASE("default layout") {
    const DeviceSet d = DeviceSet::regular(13, 1.0, 0.25, 0.5, 0.0, 12.0);
    CHECK(d.A_gamma() == 1);
    CHECK(d.B_gamma() == 1);
  }
  SUBCASE("random layouts sum to one") {
    Rng rng(41);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> y;
      for (int j = 0; j < 25; ++j) y.push_back(u(rng));
      y.push_back(0.5);
      y.push_back(9.5);
      try {
        const DeviceSet d(y, 0.9, 0.0, 10.0);
        double l1 = 0;
        for (int j = 0; j < int(d.size()); ++j) l1 += d.pou_l1(j);
        for (int i = 0; i <= 200; ++i) {
          const double p = 10.0 * i / 200;
          double s = 0;
          for (auto [j, wj] : d.partition_of_unity(p)) {
            CHECK(wj > 0);
            CHECK(std::abs(p - y[j]) <= 0.9);
            s += wj;
          }
          CHECK(s == Approx(1.0).epsilon(1e-14));
        }
        // total mass of the partition is the length of the union of balls
        CHECK(l1 >= 10.0 - 1e-12);
      } catch (const GapError&) {
      }
    }
  }
  SUBCASE("gap") {
    CHECK_THROWS_AS(DeviceSet({1.0, 5.0}, 1.0, 0.0, 6.0), GapError);
    const DeviceSet d({1.0}, 1.0, 0.0, 2.0);
    CHECK_THROWS_AS(d.partition_of_unity(2.5), GapError);
  }
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(ctem(1.0, 1.0).validate(), InputError);
  CHECK_THROWS_AS(ctem(1.0, 1.5, 0.0).validate(), InputError);
  CHECK_THROWS_AS(iftem(-0.1).validate(), InputError);
  CHECK(tem_mode_from_string(to_string(TemMode::integrate_and_fire)) == TemMode::integrate_and_fire);
  CHECK_THROWS_AS(tem_mode_from_string("spiking"), InputError);
  CHECK(iftem(0.0).theta() == Approx(0.5 * 0.25).epsilon(1e-15));
  CHECK(iftem(0.5).theta() == Approx(0.5 * (1 - std::exp(-0.125)) / 0.5).epsilon(1e-14));
}

TEST_CASE("crossing machine: constant inputs") {
  const TemConfig cfg = ctem();
  const DeviceEvents z = ctem_encode([](double) { return 0.0; }, cfg, kH);
  double prev = 0;
  for (double t : z.times) {
    CHECK(t - prev == Approx(0.125).epsilon(1e-12));
    prev = t;
  }
  CHECK(z.times.back() >= kH.hi);
  for (double v : z.values) CHECK(std::abs(v) <= 1e-11);

  for (double c : {-0.9, 0.4, 1.0}) {
    const DeviceEvents e = ctem_encode([c](double) { return c; }, cfg, kH);
    prev = 0;
    for (std::size_t i = 0; i < e.times.size(); ++i) {
      CHECK(e.times[i] - prev == Approx((1.5 + c) / cfg.lambda_slope()).epsilon(1e-11));
      CHECK(e.values[i] == Approx(c).epsilon(1e-10));
      prev = e.times[i];
    }
  }
}

TEST_CASE("crossing machine: samples are first crossings") {
  const TemConfig cfg = ctem();
  const auto f = [](double t) { return 0.7 * std::sin(2.3 * t) + 0.2 * std::cos(5.1 * t); };
  const DeviceEvents e = ctem_encode(f, cfg, kH);
  double prev = 0;
  for (std::size_t i = 0; i < e.times.size(); ++i) {
    const double t = e.times[i];
    CHECK(std::abs(f(t) - e.values[i]) <= 1e-10);
    CHECK(t - prev <= cfg.delta);
    for (int m = 1; m < 200; ++m) {
      const double u = prev + (t - prev) * m / 200;
      if (t - u < 1e-9) break;
      CHECK(f(u) > -cfg.b_level + cfg.lambda_slope() * (u - prev) - 1e-9);
    }
    prev = t;
  }
  CHECK(!e.tangency);
}

TEST_CASE("integrate-and-fire machine: constant inputs") {
  const TemConfig cfg = iftem(0.0);
  const double theta = cfg.theta();
  const DeviceEvents z = iftem_encode([](double) { return 0.0; }, cfg, kH);
  for (std::size_t i = 1; i < z.times.size(); ++i)
    CHECK(z.times[i] - z.times[i - 1] == Approx(theta / 1.5).epsilon(1e-11));
  for (double c : {-0.8, 0.6}) {
    const DeviceEvents e = iftem_encode([c](double) { return c; }, cfg, kH);
    double prev = 0;
    for (std::size_t i = 0; i < e.times.size(); ++i) {
      const double gap = e.times[i] - prev;
      CHECK(gap == Approx(theta / (1.5 + c)).epsilon(1e-11));
      CHECK(e.values[i] == Approx(c * gap).epsilon(1e-10));
      prev = e.times[i];
    }
  }
}

TEST_CASE("integrate-and-fire machine: leaky integrals against quadrature") {
  const auto f = [](double t) { return 0.9 * std::sin(1.7 * t + 0.3); };
  for (double alpha : {0.0, 0.5, 2.0}) {
    const TemConfig cfg = iftem(alpha);
    const DeviceEvents e = iftem_encode(f, cfg, kH);
    double prev = 0;
    for (std::size_t i = 0; i < e.times.size(); ++i) {
      CHECK(std::abs(e.values[i] - leaky_integral(f, alpha, prev, e.times[i])) <= 1e-9);
      CHECK(e.times[i] - prev <= cfg.delta * (1 + 1e-12));
      prev = e.times[i];
    }
  }
}

TEST_CASE("integrate-and-fire without leak matches the closed-form integral") {
  const double A = 0.9, w = 1.7;
  const auto f = [&](double t) { return A * std::sin(w * t); };
  const TemConfig cfg = iftem(0.0);
  const double theta = cfg.theta(), b = cfg.b_level;
  const DeviceEvents e = iftem_encode(f, cfg, kH);
  double prev = 0;
  for (double t : e.times) {
    auto F = [&](double x) { return A * (std::cos(w * prev) - std::cos(w * x)) / w + b * (x - prev) - theta; };
    double lo = prev, hi = prev + cfg.delta;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (F(mid) < 0 ? lo : hi) = mid;
    }
    CHECK(std::abs(t - 0.5 * (lo + hi)) <= 1e-12);
    prev = t;
  }
}

TEST_CASE("density of random signals") {
  const Generator g(2, 2);
  const Grid grid = Grid::uniform(0, 10, 0, 8, 16);
  const Window w = default_coefficient_window(g, grid);
  const DeviceSet dev = DeviceSet::regular(4, 1.0, 0.5, 0.5, 2.0, 6.0);
  Rng rng(43);
  for (TemConfig cfg : {ctem(), iftem(0.0), iftem(0.5)}) {
    int bad = 0;
    for (int i = 0; i < 50; ++i) {
      const VSignal f = random_vsignal(g, w, grid, 0.8, rng);
      const TemOutput out = encode_signal(f, dev, cfg, kH);
      const DensityReport r = density_report(out, cfg.delta);
      bad += !r.ok;
      for (std::size_t j = 0; j < dev.size(); ++j) {
        const TimeSlice s = f.slice(dev.positions()[j]);
        const auto& ev = out.devices[j];
        if (cfg.mode == TemMode::crossing)
          for (std::size_t m = 0; m < ev.times.size(); ++m)
            bad += std::abs(s(ev.times[m]) - ev.values[m]) > 1e-10;
      }
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("density report edge cases") {
  TemOutput empty;
  CHECK(!density_report(empty, 0.25).ok);
  TemOutput one;
  one.horizon = {0, 1, 0.1};
  one.devices.push_back({{0.2, 0.45, 0.7, 1.0}, {0, 0, 0, 0}, false});
  auto r = density_report(one, 0.3);
  CHECK(r.ok);
  CHECK(r.count == 4);
  CHECK(r.max_gap == Approx(0.3).epsilon(1e-12));
  CHECK(!density_report(one, 0.29).ok);
}

TEST_CASE("larger thresholds fire less") {
  const auto f = [](double t) { return 0.5 * std::cos(t); };
  std::size_t prev = 1u << 30;
  for (double th : {0.05, 0.1, 0.2}) {
    TemConfig cfg = iftem(0.0);
    cfg.theta_override = th;
    const std::size_t n = iftem_encode(f, cfg, kH).times.size();
    CHECK(n < prev);
    prev = n;
  }
}

TEST_CASE("amplitude bound is a precondition") {
  const Generator g(2, 2);
  const Grid grid = Grid::uniform(0, 10, 0, 8, 16);
  const Window w = default_coefficient_window(g, grid);
  const DeviceSet dev = DeviceSet::regular(4, 1.0, 0.5, 0.5, 2.0, 6.0);
  Rng rng(47);
  CoefSeq c(w);
  c(5, 4) = 2.6;  // devices sit at half-integers: slice sup 1.3
  const VSignal f(g, c);
  CHECK_THROWS_AS(encode_signal(f, dev, ctem(), kH), PreconditionError);
  CHECK_THROWS_AS(encode_signal(f, dev, iftem(0.5), kH), PreconditionError);
}
