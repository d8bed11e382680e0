#include "lpqtem/selftest.hpp"

#include "lpqtem/errors.hpp"
#include "lpqtem/frames.hpp"
#include "lpqtem/io.hpp"
#include "lpqtem/quadrature.hpp"
#include "lpqtem/reconstruct.hpp"
#include "lpqtem/runner.hpp"
#include "lpqtem/signals.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

namespace lpq {

namespace {

class Suite {
 public:
  Suite(std::string name, std::ostream& log) : log_(log) { r_.name = std::move(name); }

  void check(const std::string& what, const std::function<bool()>& fn) {
    ++r_.total;
    bool ok = false;
    std::string why;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      why = e.what();
    }
    if (ok) {
      ++r_.passed;
    } else {
      log_ << "  FAIL " << r_.name << ": " << what << (why.empty() ? "" : " (" + why + ")") << "\n";
    }
  }
  SuiteResult done() {
    log_ << r_.name << ": " << r_.passed << "/" << r_.total << " passed\n";
    return r_;
  }

 private:
  std::ostream& log_;
  SuiteResult r_;
};

struct Fixture {
  explicit Fixture(int spu)
      : g(2, 2),
        d(g),
        grid(Grid::uniform(0, 32, 0, 12, spu)),
        K(build_shift_invariant_kernel(g, d, default_coefficient_window(g, grid))),
        dev(DeviceSet::regular(13, 1.0, 0.25, 0.5, 0, 12)),
        horizon{0.0, 32.0, 1.0 / spu} {}
  Generator g;
  DualGenerator d;
  Grid grid;
  SpanKernel K;
  DeviceSet dev;
  Horizon horizon;
};

double rel_error(const VSignal& a, const VSignal& b, const Grid& grid) {
  const MixedNormParams pq(2, 2);
  const VSignal diff(a.generator(), a.coefficients() - b.coefficients());
  return mixed_function_norm(render(diff, grid), pq) / mixed_function_norm(render(a, grid), pq);
}

}  // namespace

std::vector<SuiteResult> run_selftest(const SelftestOptions& opt, std::ostream& log) {
  const int spu = opt.reduced ? 16 : 32;
  const Fixture fx(spu);
  std::vector<SuiteResult> out;
  Rng rng(20240607);

  {
    Suite s("mixed_norm", log);
    std::uniform_real_distribution<double> ex(1.0, 4.0);
    for (int t = 0; t < 10; ++t) {
      const GridFunction f = random_grid_function(fx.grid, rng), g = random_grid_function(fx.grid, rng);
      const MixedNormParams pq(ex(rng), ex(rng));
      s.check("Hoelder", [&] {
        return std::abs(duality_pairing(f, g)) <=
               mixed_function_norm(f, pq) * mixed_function_norm(g, pq.conjugate()) * (1 + 1e-9);
      });
      s.check("Minkowski", [&] {
        return mixed_function_norm(f + g, pq) <=
               (mixed_function_norm(f, pq) + mixed_function_norm(g, pq)) * (1 + 1e-9);
      });
    }
    out.push_back(s.done());
  }
  {
    Suite s("generator", log);
    DualGenerator d(fx.g);
    if (opt.corrupt_dual) {
      d.mutable_t().corrupt(0, 1e-3);
    }
    s.check("biorthogonality residual <= 1e-8", [&] { return d.biorthogonality_residual() <= 1e-8; });
    s.check("dual tail <= 1e-10", [&] { return d.tail_bound() <= 1e-10; });
    s.check("dual integrates to 1", [&] {
      return std::abs(d.t().integral(1e3) - 1.0) <= 1e-10 && std::abs(d.s().integral(1e3) - 1.0) <= 1e-10;
    });
    out.push_back(s.done());
  }
  {
    Suite s("kernel", log);
    const Projector T(fx.K, fx.grid);
    for (int t = 0; t < 3; ++t) {
      const VSignal f = random_vsignal(fx.g, fx.K.window(), fx.grid, 0.8, rng);
      s.check("Tf = f on V", [&] {
        return (T.apply(render(f, fx.grid)).coefficients() - f.coefficients()).max_abs() <= 1e-8;
      });
      const GridFunction h = random_grid_function(fx.grid, rng);
      s.check("T idempotent", [&] {
        const VSignal a = T.apply(h);
        const VSignal b = T.apply(render(a, fx.grid));
        return (a.coefficients() - b.coefficients()).max_abs() <= 1e-8;
      });
    }
    out.push_back(s.done());
  }
  {
    Suite s("tem", log);
    for (int t = 0; t < 2; ++t) {
      const VSignal f = random_vsignal(fx.g, fx.K.window(), fx.grid, 0.8, rng);
      for (const auto mode : {TemMode::crossing, TemMode::integrate_and_fire}) {
        TemConfig cfg;
        cfg.mode = mode;
        cfg.alpha = mode == TemMode::crossing ? 0.0 : 0.5;
        const TemOutput o = encode_signal(f, fx.dev, cfg, fx.horizon);
        s.check(to_string(mode) + " delta-dense", [&] { return density_report(o, cfg.delta).ok; });
        s.check(to_string(mode) + " sample recovery", [&] {
          double worst = 0.0;
          for (std::size_t j = 0; j < o.devices.size(); ++j) {
            const TimeSlice sl = f.slice(fx.dev.positions()[j]);
            const auto& ev = o.devices[j];
            double prev = fx.horizon.lo;
            for (std::size_t i = 0; i < ev.times.size(); ++i) {
              const double ti = ev.times[i];
              double truth;
              if (mode == TemMode::crossing) {
                truth = sl(ti);
              } else {
                const GaussRule gl = gauss_legendre(12);
                truth = 0.0;
                for (double a = prev; a < ti;) {
                  const double b = std::min(ti, std::floor(a) + 1.0);
                  truth += gauss_integrate(gl, a, b, [&](double u) {
                    return sl(u) * std::exp(cfg.alpha * (u - ti));
                  });
                  a = b;
                }
              }
              worst = std::max(worst, std::abs(truth - ev.values[i]));
              prev = ti;
            }
          }
          return worst <= (mode == TemMode::crossing ? 1e-10 : 1e-9);
        });
      }
    }
    out.push_back(s.done());
  }
  {
    Suite s("reconstruct", log);
    const VSignal f = random_vsignal(fx.g, fx.K.window(), fx.grid, 0.8, rng);
    for (const auto mode : {TemMode::crossing, TemMode::integrate_and_fire}) {
      TemConfig cfg;
      cfg.mode = mode;
      const TemOutput o = encode_signal(f, fx.dev, cfg, fx.horizon);
      IterationOptions io;
      io.grid = fx.grid;
      io.truth = f;
      const auto res = mode == TemMode::crossing ? ctem_iterate(o, fx.K, fx.dev, io)
                                                 : iftem_iterate(o, fx.K, fx.dev, io);
      s.check(to_string(mode) + " converges", [&] { return res.second.converged; });
      s.check(to_string(mode) + " ratios below 1", [&] {
        for (double r : res.second.ratios)
          if (!(r < 1)) return false;
        return !res.second.ratios.empty();
      });
    }
    out.push_back(s.done());
  }
  {
    Suite s("frames", log);
    FrameOptions fo;
    fo.order = 8;
    const FrameFamily ff(fx.K, fo);
    s.check("r0 < 1", [&] { return ff.r0() < 1.0; });
    const VSignal f = random_vsignal(fx.g, fx.K.window(), fx.grid, 0.8, rng);
    s.check("dual pair reconstruction <= 1e-3",
            [&] { return rel_error(f, dual_pair_reconstruct(f, ff), fx.grid) <= 1e-3; });
    s.check("lattice separation", [&] { return lattice_overlap_count(ff, 0.5 * ff.delta()) <= 1; });
    out.push_back(s.done());
  }
  {
    Suite s("cli_runner", log);
    ExperimentConfig cfg;
    cfg.samples_per_unit = spu;
    s.check("config round trip", [&] { return parse_config(serialize_config(cfg)) == cfg; });
    s.check("deterministic encoding", [&] {
      const Setup a(cfg), b(cfg);
      const auto text = [&](const Setup& st) {
        std::ostringstream os;
        write_events_csv(os, encode_signal(experiment_signal(st), st.dev, cfg.tem, cfg.horizon()));
        return os.str();
      };
      return text(a) == text(b);
    });
    out.push_back(s.done());
  }
  return out;
}

}  // namespace lpq
