#include "lpqtem/reconstruct.hpp"

#include "lpqtem/bspline.hpp"
#include "lpqtem/errors.hpp"
#include "lpqtem/quadrature.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace lpq {

namespace {

CoefSeq from_matrix(const Window& w, const Eigen::MatrixXd& m) {
  CoefSeq c(w);
  for (int i = 0; i < w.n1(); ++i)
    for (int j = 0; j < w.n2(); ++j) c.values()[std::size_t(i) * w.n2() + j] = m(i, j);
  return c;
}

std::vector<std::size_t> device_offsets(const TemOutput& out) {
  std::vector<std::size_t> off{0};
  for (const auto& d : out.devices) off.push_back(off.back() + d.times.size());
  return off;
}

void check_devices(const TemOutput& out, const DeviceSet& dev) {
  if (out.devices.size() != dev.size())
    throw InputError("TEM output and device set disagree on the device count");
}

}  // namespace

std::vector<double> sample_cells(const DeviceEvents& ev, const Horizon& h) {
  std::vector<double> c;
  c.push_back(h.lo);
  for (std::size_t i = 0; i + 1 < ev.times.size(); ++i) {
    const double m = 0.5 * (ev.times[i] + ev.times[i + 1]);
    c.push_back(std::clamp(m, h.lo, h.hi));
  }
  c.push_back(h.hi);
  return c;
}

GridFunction apply_S(const TemOutput& out, const DeviceSet& dev, const Grid& grid) {
  check_devices(out, dev);
  std::vector<std::vector<double>> cells;
  for (const auto& d : out.devices) {
    if (d.times.empty()) throw InputError("apply_S: device without samples");
    cells.push_back(sample_cells(d, out.horizon));
  }
  GridFunction s(grid);
  for (int j = 0; j < grid.ny(); ++j) {
    const auto w = dev.partition_of_unity(grid.y.at(j));
    for (int i = 0; i < grid.nx(); ++i) {
      const double x = grid.x.at(i);
      if (x < out.horizon.lo || x > out.horizon.hi) continue;
      double v = 0.0;
      for (const auto& [d, u] : w) {
        const auto& c = cells[d];
        std::size_t m = std::upper_bound(c.begin(), c.end(), x) - c.begin();
        m = std::min(m, c.size() - 1);
        v += u * out.devices[d].values[m - 1];
      }
      s.at(i, j) = v;
    }
  }
  return s;
}

CrossingOperator::CrossingOperator(const SpanKernel& k, const TemOutput& out, const DeviceSet& dev)
    : k_(k), out_(out), dev_(dev) {
  check_devices(out, dev);
  if (out.cfg.mode != TemMode::crossing) throw InputError("CrossingOperator needs C-TEM output");
  offsets_ = device_offsets(out);
  const Window& w = k.window();
  const SplineDual1D& dt = k.dual().t();
  const SplineDual1D& ds = k.dual().s();
  for (const auto& d : out.devices) {
    const auto c = sample_cells(d, out.horizon);
    Eigen::MatrixXd m(d.times.size(), w.n1());
    for (std::size_t i = 0; i < d.times.size(); ++i)
      for (int k1 = w.k1_lo; k1 <= w.k1_hi; ++k1)
        m(i, k1 - w.k1_lo) = dt.integral(c[i + 1] - k1) - dt.integral(c[i] - k1);
    jt_.push_back(std::move(m));
  }
  js_.resize(dev.size(), w.n2());
  for (int j = 0; j < int(dev.size()); ++j)
    for (int k2 = w.k2_lo; k2 <= w.k2_hi; ++k2)
      js_(j, k2 - w.k2_lo) = dev.pou_integral(
          j, [&](double y) { return ds.integral(y - k2); }, dev.window_lo(), dev.window_hi());
}

std::vector<double> CrossingOperator::data() const {
  std::vector<double> v;
  for (const auto& d : out_.devices) v.insert(v.end(), d.values.begin(), d.values.end());
  return v;
}

std::vector<double> CrossingOperator::sample(const VSignal& g) const {
  std::vector<double> v(size());
  for (std::size_t j = 0; j < out_.devices.size(); ++j) {
    const TimeSlice s = g.slice(dev_.positions()[j]);
    const auto& t = out_.devices[j].times;
    for (std::size_t i = 0; i < t.size(); ++i) v[offsets_[j] + i] = s(t[i]);
  }
  return v;
}

CoefSeq CrossingOperator::apply(const std::vector<double>& samples) const {
  if (samples.size() != size()) throw InputError("CrossingOperator: sample count mismatch");
  const Window& w = k_.window();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(w.n1(), w.n2());
  for (std::size_t j = 0; j < jt_.size(); ++j) {
    const Eigen::Map<const Eigen::VectorXd> v(samples.data() + offsets_[j], jt_[j].rows());
    c += (jt_[j].transpose() * v) * js_.row(j);
  }
  CoefSeq out = from_matrix(w, c);
  return k_.is_identity() ? out : k_.apply(out);
}

IntegrateFireOperator::IntegrateFireOperator(const SpanKernel& k, const TemOutput& out,
                                             const DeviceSet& dev)
    : k_(k), out_(out), dev_(dev) {
  check_devices(out, dev);
  if (out.cfg.mode != TemMode::integrate_and_fire)
    throw InputError("IntegrateFireOperator needs IF-TEM output");
  offsets_ = device_offsets(out);
  const Window& w = k.window();
  const Generator& g = k.generator();
  const double al = out.cfg.alpha, r = g.radius_t(), ko = bspline_knot_offset(g.order_t());
  static const GaussRule gl = gauss_legendre(6);
  for (const auto& d : out.devices) {
    Eigen::MatrixXd gm = Eigen::MatrixXd::Zero(d.times.size(), w.n1());
    Eigen::MatrixXd dm(d.times.size(), w.n1());
    double a = out.horizon.lo;
    for (std::size_t i = 0; i < d.times.size(); ++i) {
      const double b = d.times[i];
      for (int k1 = w.k1_lo; k1 <= w.k1_hi; ++k1) {
        dm(i, k1 - w.k1_lo) = k.dual().t()(0.5 * (a + b) - k1);
        const double lo = std::max(a, k1 - r), hi = std::min(b, k1 + r);
        if (!(hi > lo)) continue;
        // split at the generator's knots so each piece is a polynomial times an exponential
        std::vector<double> cuts{lo};
        for (double kn = std::ceil(lo - ko) + ko; kn < hi; kn += 1.0)
          if (kn > lo) cuts.push_back(kn);
        cuts.push_back(hi);
        double s = 0.0;
        for (std::size_t m = 0; m + 1 < cuts.size(); ++m)
          s += gauss_integrate(gl, cuts[m], cuts[m + 1], [&](double u) {
            return g.t(u - k1) * std::exp(al * (u - b));
          });
        gm(i, k1 - w.k1_lo) = s;
      }
      a = b;
    }
    gt_.push_back(std::move(gm));
    dt_.push_back(std::move(dm));
  }
  ds_.resize(dev.size(), w.n2());
  for (int j = 0; j < int(dev.size()); ++j) {
    const double l1 = dev.pou_l1(j), y = dev.positions()[j];
    for (int k2 = w.k2_lo; k2 <= w.k2_hi; ++k2) ds_(j, k2 - w.k2_lo) = l1 * k.dual().s()(y - k2);
  }
}

std::vector<double> IntegrateFireOperator::data() const {
  std::vector<double> v;
  for (const auto& d : out_.devices) v.insert(v.end(), d.values.begin(), d.values.end());
  return v;
}

std::vector<double> IntegrateFireOperator::sample(const VSignal& g) const {
  std::vector<double> v(size());
  for (std::size_t j = 0; j < out_.devices.size(); ++j) {
    const TimeSlice s = g.slice(dev_.positions()[j]);
    const Eigen::Map<const Eigen::VectorXd> a(s.coefficients().data(), s.coefficients().size());
    const Eigen::VectorXd r = gt_[j] * a;
    for (Eigen::Index i = 0; i < r.size(); ++i) v[offsets_[j] + i] = r(i);
  }
  return v;
}

CoefSeq IntegrateFireOperator::apply(const std::vector<double>& integrals) const {
  if (integrals.size() != size()) throw InputError("IntegrateFireOperator: integral count mismatch");
  const Window& w = k_.window();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(w.n1(), w.n2());
  for (std::size_t j = 0; j < dt_.size(); ++j) {
    const Eigen::Map<const Eigen::VectorXd> v(integrals.data() + offsets_[j], dt_[j].rows());
    c += (dt_[j].transpose() * v) * ds_.row(j);
  }
  CoefSeq out = from_matrix(w, c);
  return k_.is_identity() ? out : k_.apply(out);
}

VSignal apply_R(const SpanKernel& k, const TemOutput& out, const DeviceSet& dev) {
  if (out.cfg.mode == TemMode::crossing) {
    const CrossingOperator op(k, out, dev);
    return VSignal(k.generator(), op.apply(op.data()));
  }
  const IntegrateFireOperator op(k, out, dev);
  return VSignal(k.generator(), op.apply(op.data()));
}

namespace {

template <class Op>
std::pair<VSignal, ReconstructionReport> iterate(const Op& op, const SpanKernel& k,
                                                 const IterationOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  if (opt.n_max < 0) throw InputError("n_max must be >= 0");
  ReconstructionReport rep;
  rep.blind = !opt.truth;
  rep.predicted_bound = opt.predicted_bound;
  const Generator& g = k.generator();
  const Window& w = k.window();
  if (opt.truth && !(opt.truth->coefficients().window() == w))
    throw InputError("ground truth must live on the kernel's coefficient window");

  auto norm_of = [&](const CoefSeq& c) {
    return mixed_function_norm(render(VSignal(g, c), opt.grid, opt.exec), opt.params, opt.exec);
  };
  const std::vector<double> data = op.data();
  VSignal fn(g, CoefSeq(w));
  int increases = 0;

  if (!rep.blind) {
    rep.reference_norm = norm_of(opt.truth->coefficients());
    rep.errors.push_back(rep.reference_norm);
    rep.converged = rep.reference_norm == 0.0;
  }
  for (int n = 0; n < opt.n_max && !rep.converged; ++n) {
    std::vector<double> r = op.sample(fn);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = data[i] - r[i];
    const CoefSeq step = op.apply(r);
    fn.coefficients() += step;
    rep.iterations = n + 1;
    double e;
    if (rep.blind) {
      e = norm_of(step);
      if (n == 0) rep.reference_norm = e;
    } else {
      e = norm_of(opt.truth->coefficients() - fn.coefficients());
    }
    if (!rep.errors.empty()) increases = e > rep.errors.back() ? increases + 1 : 0;
    rep.errors.push_back(e);
    if (e <= opt.tol * rep.reference_norm && (!rep.blind || n > 0 || e == 0.0)) rep.converged = true;
    if (increases >= 3) {
      rep.diverged = true;
      break;
    }
  }

  const auto& e = rep.errors;
  for (std::size_t i = 0; i + 1 < e.size(); ++i)
    if (e[i] > 0) rep.ratios.push_back(e[i + 1] / e[i]);
  if (e.size() >= 2 && e.front() > 0) {
    const double n = double(e.size() - 1);
    rep.r_hat = e.back() > 0 ? std::pow(e.back() / e.front(), 1.0 / n) : 0.0;
  }
  // log-linear fit over the strictly positive part
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i] > 0) xs.push_back(double(i)), ys.push_back(std::log(e[i]));
  if (xs.size() >= 3) {
    const double m = double(xs.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) sx += xs[i], sy += ys[i];
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
      syy += (ys[i] - my) * (ys[i] - my);
    }
    rep.log_slope = sxy / sxx;
    rep.log_r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(fn), std::move(rep)};
}

}  // namespace

std::pair<VSignal, ReconstructionReport> ctem_iterate(const TemOutput& out, const SpanKernel& k,
                                                      const DeviceSet& dev,
                                                      const IterationOptions& opt) {
  const CrossingOperator op(k, out, dev);
  return iterate(op, k, opt);
}

std::pair<VSignal, ReconstructionReport> iftem_iterate(const TemOutput& out, const SpanKernel& k,
                                                       const DeviceSet& dev,
                                                       const IterationOptions& opt) {
  const IntegrateFireOperator op(k, out, dev);
  return iterate(op, k, opt);
}

double estimate_r1(const KernelStats& s, double delta, double delta_prime) {
  if (delta < 0 || delta_prime < 0) throw InputError("estimate_r1: negative gap");
  return s.W_norm() * s.omega_W_norm(std::hypot(delta, delta_prime));
}

double estimate_r2(const KernelStats& s, double delta, double delta_prime, double alpha) {
  if (delta < 0 || delta_prime < 0 || alpha < 0) throw InputError("estimate_r2: negative input");
  const double k = s.W_norm(), w = s.omega_W_norm(std::hypot(delta, delta_prime));
  return k * (w * (2 * k + w) + -std::expm1(-alpha * delta) * (k + w) * (k + w));
}

}  // namespace lpq
