#include "lpqtem/tem.hpp"

#include "lpqtem/errors.hpp"
#include "lpqtem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

namespace lpq {

DeviceSet::DeviceSet(std::vector<double> positions, double delta_prime, double window_lo,
                     double window_hi)
    : y_(std::move(positions)), dp_(delta_prime), lo_(window_lo), hi_(window_hi) {
  if (y_.empty()) throw InputError("DeviceSet: no devices");
  if (!(dp_ > 0)) throw InputError("DeviceSet: delta_prime must be positive");
  if (!(hi_ > lo_)) throw InputError("DeviceSet: empty window");
  for (double y : y_)
    if (!std::isfinite(y)) throw InputError("DeviceSet: non-finite position");

  std::vector<double> probes;
  const int n = int(std::ceil((hi_ - lo_) * 256));
  for (int i = 0; i <= n; ++i) probes.push_back(lo_ + (hi_ - lo_) * i / n);
  for (double y : y_)
    for (double e : {y - dp_, y + dp_})
      for (double d : {-1e-9, 0.0, 1e-9})
        if (e + d >= lo_ && e + d <= hi_) probes.push_back(e + d);
  a_ = 1 << 30;
  double worst = lo_;
  for (double p : probes) {
    const int c = cover_count(p);
    if (c < a_) a_ = c, worst = p;
  }
  b_ = 0;
  for (double p : probes) {
    int c = 0;
    for (double y : y_) c += std::abs(p - y) < dp_;
    b_ = std::max(b_, c);
  }
  if (a_ < 1) {
    std::ostringstream os;
    os << "gap condition fails: y = " << worst << " is farther than delta' = " << dp_
       << " from every device";
    throw GapError(os.str());
  }
}

DeviceSet DeviceSet::regular(int count, double spacing, double offset, double delta_prime,
                             double window_lo, double window_hi) {
  if (count < 1) throw InputError("DeviceSet: count must be positive");
  std::vector<double> y(count);
  for (int j = 0; j < count; ++j) y[j] = window_lo + offset + spacing * j;
  return DeviceSet(std::move(y), delta_prime, window_lo, window_hi);
}

int DeviceSet::cover_count(double y) const {
  int c = 0;
  for (double d : y_) c += std::abs(y - d) <= dp_;
  return c;
}

std::vector<std::pair<int, double>> DeviceSet::partition_of_unity(double y) const {
  const int c = cover_count(y);
  if (c == 0) {
    std::ostringstream os;
    os << "partition of unity: y = " << y << " is not covered by any device ball";
    throw GapError(os.str());
  }
  std::vector<std::pair<int, double>> w;
  for (int j = 0; j < int(y_.size()); ++j)
    if (std::abs(y - y_[j]) <= dp_) w.emplace_back(j, 1.0 / c);
  return w;
}

std::vector<double> DeviceSet::pieces(int j, double lo, double hi) const {
  const double a = std::max(lo, y_[j] - dp_), b = std::min(hi, y_[j] + dp_);
  std::vector<double> p;
  if (!(b > a)) return p;
  p.push_back(a);
  p.push_back(b);
  for (double d : y_)
    for (double e : {d - dp_, d + dp_})
      if (e > a && e < b) p.push_back(e);
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  return p;
}

double DeviceSet::pou_integral(int j, const std::function<double(double)>& F, double lo,
                               double hi) const {
  const auto p = pieces(j, lo, hi);
  double s = 0.0;
  for (std::size_t m = 0; m + 1 < p.size(); ++m) {
    const int c = cover_count(0.5 * (p[m] + p[m + 1]));
    s += (F(p[m + 1]) - F(p[m])) / c;
  }
  return s;
}

double DeviceSet::pou_l1(int j) const {
  return pou_integral(j, [](double y) { return y; }, lo_, hi_);
}

std::string to_string(TemMode m) {
  return m == TemMode::crossing ? "crossing" : "integrate-and-fire";
}

TemMode tem_mode_from_string(const std::string& s) {
  if (s == "crossing") return TemMode::crossing;
  if (s == "integrate-and-fire") return TemMode::integrate_and_fire;
  throw InputError("unknown TEM mode '" + s + "' (crossing | integrate-and-fire)");
}

void TemConfig::validate() const {
  if (!(c_bound >= 0)) throw InputError("tem.c_bound must be >= 0");
  if (!(b_level > c_bound)) throw InputError("tem.b_level must exceed tem.c_bound");
  if (!(delta > 0)) throw InputError("tem.delta must be positive");
  if (!(alpha >= 0)) throw InputError("tem.alpha must be >= 0");
  if (theta_override && !(*theta_override > 0)) throw InputError("theta override must be positive");
}

double TemConfig::kappa(double dt) const {
  if (alpha == 0.0) return dt;
  return -std::expm1(-alpha * dt) / alpha;
}

double TemConfig::theta() const {
  return theta_override ? *theta_override : (b_level - c_bound) * kappa(delta);
}

namespace {

double node(const Horizon& h, long m) { return h.lo + double(m) * h.step; }

long first_node_after(const Horizon& h, double t) {
  long m = long(std::floor((t - h.lo) / h.step));
  while (node(h, m) <= t) ++m;
  return m;
}

template <class G>
double bisect(G&& g, double lo, double hi) {
  // g(lo) > 0 >= g(hi)
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (g(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Largest gap the IF machine can produce: solve (b - c) kappa(g) = theta.
double if_max_gap(const TemConfig& cfg) {
  if (!cfg.theta_override) return cfg.delta;
  const double r = cfg.theta() / (cfg.b_level - cfg.c_bound);
  if (cfg.alpha == 0.0) return r;
  const double z = 1.0 - cfg.alpha * r;
  if (!(z > 0)) throw PreconditionError("IF-TEM threshold unreachable under the amplitude bound");
  return -std::log(z) / cfg.alpha;
}

const GaussRule& gl6() {
  static const GaussRule r = gauss_legendre(6);
  return r;
}

}  // namespace

DeviceEvents ctem_encode(const Fn1& f, const TemConfig& cfg, const Horizon& h) {
  cfg.validate();
  const double b = cfg.b_level, lam = cfg.lambda_slope(), delta = cfg.delta;
  DeviceEvents ev;
  double prev = h.lo;
  while (true) {
    auto D = [&](double t) { return f(t) - (-b + lam * (t - prev)); };
    const double cap = prev + delta;
    double lo = prev, hi = cap;
    bool exact = false;
    for (long m = first_node_after(h, prev);; ++m) {
      const double t = std::min(node(h, m), cap);
      const double d = D(t);
      if (d <= 0) {
        hi = t;
        exact = d == 0;
        if (exact && t < cap && D(std::min(node(h, m + 1), cap)) > 0) ev.tangency = true;
        break;
      }
      lo = t;
      if (t >= cap) throw InvariantError("C-TEM: no crossing within delta; amplitude bound violated");
    }
    const double root = exact ? hi : bisect(D, lo, hi);
    ev.times.push_back(root);
    prev = root;
    if (root >= h.hi) break;
  }
  ev.values = ctem_decode(ev.times, h.lo, cfg);
  return ev;
}

double iftem_next_fire(const Fn1& f, const TemConfig& cfg, double prev, const Horizon& h) {
  const double b = cfg.b_level, al = cfg.alpha, theta = cfg.theta();
  const double cap = prev + if_max_gap(cfg);
  // y(t) = e^{-a(t - last)} y_last + int_last^t (f(u) + b) e^{a(u - t)} du
  auto advance = [&](double last, double ylast, double t) {
    const double leak = gauss_integrate(gl6(), last, t,
                                        [&](double u) { return f(u) * std::exp(al * (u - t)); });
    return std::exp(-al * (t - last)) * ylast + leak + b * cfg.kappa(t - last);
  };
  double last = prev, y = 0.0;
  for (long m = first_node_after(h, prev);; ++m) {
    const double t = std::min(node(h, m), cap);
    const double yt = advance(last, y, t);
    if (yt >= theta) {
      if (yt == theta) return t;
      return bisect([&](double tau) { return theta - advance(last, y, tau); }, last, t);
    }
    if (t >= cap) throw InvariantError("IF-TEM: threshold not reached within delta");
    last = t;
    y = yt;
  }
}

DeviceEvents iftem_encode(const Fn1& f, const TemConfig& cfg, const Horizon& h) {
  cfg.validate();
  DeviceEvents ev;
  double prev = h.lo;
  while (prev < h.hi) {
    prev = iftem_next_fire(f, cfg, prev, h);
    ev.times.push_back(prev);
  }
  ev.values = iftem_decode(ev.times, h.lo, cfg);
  return ev;
}

std::vector<double> ctem_decode(const std::vector<double>& times, double seed, const TemConfig& cfg) {
  std::vector<double> v(times.size());
  double prev = seed;
  for (std::size_t i = 0; i < times.size(); ++i) {
    v[i] = -cfg.b_level + cfg.lambda_slope() * (times[i] - prev);
    prev = times[i];
  }
  return v;
}

std::vector<double> iftem_decode(const std::vector<double>& times, double seed, const TemConfig& cfg) {
  std::vector<double> v(times.size());
  double prev = seed;
  for (std::size_t i = 0; i < times.size(); ++i) {
    v[i] = cfg.theta() - cfg.b_level * cfg.kappa(times[i] - prev);
    prev = times[i];
  }
  return v;
}

TemOutput encode_signal(const VSignal& f, const DeviceSet& dev, const TemConfig& cfg,
                        const Horizon& h, Exec exec) {
  cfg.validate();
  TemOutput out;
  out.cfg = cfg;
  out.horizon = h;
  const int n = int(dev.size());
  out.devices.resize(n);
  std::vector<std::exception_ptr> errs(n);
#pragma omp parallel for schedule(dynamic, 1) if (exec == Exec::parallel)
  for (int j = 0; j < n; ++j) {
    try {
      const TimeSlice s = f.slice(dev.positions()[j]);
      const long nodes = long(std::lround((h.hi - h.lo) / h.step));
      double sup = 0.0;
      for (long m = 0; m <= nodes; ++m) sup = std::max(sup, std::abs(s(node(h, m))));
      if (sup > cfg.c_bound * (1 + 1e-12)) {
        std::ostringstream os;
        os << "device " << j << ": sup|f| = " << sup << " exceeds c_bound = " << cfg.c_bound;
        throw PreconditionError(os.str());
      }
      const Fn1 fn = [&s](double t) { return s(t); };
      out.devices[j] = cfg.mode == TemMode::crossing ? ctem_encode(fn, cfg, h) : iftem_encode(fn, cfg, h);
    } catch (...) {
      errs[j] = std::current_exception();
    }
  }
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

DensityReport density_report(const TemOutput& out, double delta) {
  DensityReport r;
  for (const auto& d : out.devices) {
    double prev = out.horizon.lo;
    for (double t : d.times) {
      r.max_gap = std::max(r.max_gap, t - prev);
      prev = t;
      ++r.count;
    }
  }
  r.ok = r.count > 0 && r.max_gap <= delta * (1 + 1e-12);
  return r;
}

}  // namespace lpq
