#include "lpqtem/runner.hpp"

#include "lpqtem/errors.hpp"
#include "lpqtem/frames.hpp"
#include "lpqtem/io.hpp"
#include "lpqtem/reconstruct.hpp"
#include "lpqtem/signals.hpp"

#include <json.hpp>

#include <cmath>
#include <ostream>
#include <sstream>

namespace lpq {

using json = nlohmann::ordered_json;

namespace {

// Frame-suite signals come from their own stream so adding suites never shifts the others.
constexpr std::uint64_t kFrameStream = 0x9e3779b97f4a7c15ULL;

json real(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void echo(const ExperimentConfig& cfg, std::ostream& log) {
  log << "config:\n" << serialize_config(cfg);
}

template <class W>
std::string to_text(W&& write) {
  std::ostringstream os;
  write(os);
  return os.str();
}

}  // namespace

Setup::Setup(const ExperimentConfig& c)
    : cfg(c),
      g(c.order_t, c.order_s),
      d(dual_generator_auto(g, c.ring_size)),
      grid(c.grid()),
      K(build_shift_invariant_kernel(g, d, default_coefficient_window(g, grid))),
      dev(c.devices()) {}

VSignal experiment_signal(const Setup& s) {
  Rng rng(s.cfg.seed);
  return random_vsignal(s.g, s.K.window(), s.grid, 0.8 * s.cfg.tem.c_bound, rng);
}

int run_encode(const ExperimentConfig& cfg, std::ostream& log) {
  cfg.validate();
  echo(cfg, log);
  const Setup s(cfg);
  const VSignal f = experiment_signal(s);
  const TemOutput out = encode_signal(f, s.dev, cfg.tem, cfg.horizon());
  const DensityReport dr = density_report(out, cfg.tem.delta);
  const std::string dir = cfg.output_dir;
  write_file(dir, "signal.csv", to_text([&](std::ostream& os) { write_vsignal_csv(os, f); }));
  write_file(dir, "events.csv", to_text([&](std::ostream& os) { write_events_csv(os, out); }));
  log << "encoded " << dr.count << " fires on " << s.dev.size() << " devices, max gap "
      << format_real(dr.max_gap) << "\n";
  if (!dr.ok) throw PreconditionError("encoding is not delta-dense: max gap " + format_real(dr.max_gap));
  return kExitOk;
}

int run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
  cfg.validate();
  echo(cfg, log);
  const Setup s(cfg);
  const VSignal f = experiment_signal(s);
  const TemOutput out = encode_signal(f, s.dev, cfg.tem, cfg.horizon());
  const DensityReport dr = density_report(out, cfg.tem.delta);

  const KernelStats stats(s.K);
  const double dp = cfg.delta_prime;
  const bool crossing = cfg.tem.mode == TemMode::crossing;
  const double bound = crossing ? estimate_r1(stats, cfg.tem.delta, dp)
                                : estimate_r2(stats, cfg.tem.delta, dp, cfg.tem.alpha);

  IterationOptions opt;
  opt.n_max = cfg.n_max;
  opt.tol = cfg.tol;
  opt.params = cfg.params();
  opt.grid = s.grid;
  opt.truth = f;
  opt.predicted_bound = bound;
  std::pair<VSignal, ReconstructionReport> res = [&] {
    try {
      return crossing ? ctem_iterate(out, s.K, s.dev, opt) : iftem_iterate(out, s.K, s.dev, opt);
    } catch (const PreconditionError& e) {
      throw PreconditionError(std::string("reconstruction: ") + e.what());
    }
  }();
  const ReconstructionReport& rep = res.second;

  json sum;
  sum["mode"] = to_string(cfg.tem.mode);
  sum["seed"] = cfg.seed;
  sum["devices"] = s.dev.size();
  sum["fires"] = dr.count;
  sum["max_gap"] = real(dr.max_gap);
  sum["delta_dense"] = dr.ok;
  sum["iterations"] = rep.iterations;
  sum["converged"] = rep.converged;
  sum["diverged"] = rep.diverged;
  sum["r_hat"] = real(rep.r_hat);
  sum["predicted_bound"] = real(bound);
  sum["bound"] = crossing ? "r1" : "r2";
  sum["kernel_W_norm"] = real(stats.W_norm());
  sum["omega_W_norm"] = real(stats.omega_W_norm(std::hypot(cfg.tem.delta, dp)));
  sum["reference_norm"] = real(rep.reference_norm);
  sum["final_relative_error"] =
      real(rep.reference_norm > 0 ? rep.errors.back() / rep.reference_norm : 0.0);
  sum["log_slope"] = real(rep.log_slope);
  sum["log_r2"] = real(rep.log_r2);
  sum["tol"] = cfg.tol;

  const std::string dir = cfg.output_dir;
  write_file(dir, "signal.csv", to_text([&](std::ostream& os) { write_vsignal_csv(os, f); }));
  write_file(dir, "events.csv", to_text([&](std::ostream& os) { write_events_csv(os, out); }));
  write_file(dir, "convergence.csv", to_text([&](std::ostream& os) { write_convergence_csv(os, rep); }));
  write_file(dir, "reconstruction.csv",
             to_text([&](std::ostream& os) { write_vsignal_csv(os, res.first); }));
  write_file(dir, "dual.csv", to_text([&](std::ostream& os) { write_dual_csv(os, s.d); }));
  write_file(dir, "summary.json", sum.dump(2) + "\n");

  log << to_string(cfg.tem.mode) << ": " << rep.iterations << " iterations, r_hat "
      << format_real(rep.r_hat) << ", predicted bound " << format_real(bound)
      << (rep.converged ? ", converged\n" : ", not converged\n");
  return rep.converged ? kExitOk : kExitNonConvergence;
}

int run_frames(const ExperimentConfig& cfg, std::ostream& log) {
  cfg.validate();
  echo(cfg, log);
  const Setup s(cfg);
  const KernelStats stats(s.K);
  Rng rng(cfg.seed ^ kFrameStream);
  std::vector<VSignal> signals;
  for (int i = 0; i < cfg.frame_signals; ++i)
    signals.push_back(random_vsignal(s.g, s.K.window(), s.grid, 0.8 * cfg.tem.c_bound, rng));
  std::vector<double> fnorm;
  for (const auto& f : signals) fnorm.push_back(mixed_function_norm(render(f, s.grid), cfg.params()));

  json report = json::array();
  bool all_inside = true;
  for (double delta : cfg.frame_deltas) {
    const R0Bound rb = r0_bound(stats, delta);
    std::optional<double> r0;
    for (int N : cfg.frame_orders) {
      FrameOptions fo;
      fo.delta = delta;
      fo.order = N;
      fo.params = cfg.params();
      fo.r0 = r0;
      const FrameFamily ff(s.K, fo);
      r0 = ff.r0();
      double lo = INFINITY, hi = 0.0, err = 0.0;
      for (std::size_t i = 0; i < signals.size(); ++i) {
        const FrameBoundsResult fb = frame_bounds_check(signals[i], ff, s.grid, rb.omega);
        lo = std::min(lo, fb.ratio);
        hi = std::max(hi, fb.ratio);
        all_inside = all_inside && fb.inside;
        const VSignal fh = dual_pair_reconstruct(signals[i], ff);
        const VSignal diff(s.g, signals[i].coefficients() - fh.coefficients());
        err = std::max(err, mixed_function_norm(render(diff, s.grid), cfg.params()) / fnorm[i]);
      }
      json rec;
      rec["delta"] = delta;
      rec["r0"] = real(ff.r0());
      rec["N"] = N;
      rec["lower_ratio"] = real(lo);
      rec["upper_ratio"] = real(hi);
      rec["recon_error"] = real(err);
      rec["omega_W_norm"] = real(rb.omega);
      rec["r0_bound_product_branch"] = real(rb.product_branch);
      rec["r0_bound_omega_branch"] = real(rb.omega_branch);
      rec["band"] = {real(1.0 - rb.omega - 0.05), real(1.0 + rb.omega + 0.05)};
      report.push_back(rec);
      log << "frames delta " << delta << " N " << N << ": r0 " << format_real(ff.r0())
          << ", ratios [" << format_real(lo) << ", " << format_real(hi) << "], recon error "
          << format_real(err) << "\n";
    }
  }
  write_file(cfg.output_dir, "frame_report.json", report.dump(2) + "\n");
  if (!all_inside) throw InvariantError("analysis ratio left the frame band");
  return kExitOk;
}

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PreconditionError& e) {
    err << "precondition error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace lpq
