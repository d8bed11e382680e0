#include "lpqtem/frames.hpp"

#include "lpqtem/errors.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace lpq {

namespace {

LatticeAxis make_axis(int k_lo, int k_hi, double radius, double delta,
                      const std::function<double(double)>& G,
                      const std::function<double(double)>& Gd) {
  if (!(delta > 0)) throw InputError("lattice spacing must be positive");
  LatticeAxis ax;
  ax.delta = delta;
  // cells meeting the open union of the generator supports
  ax.i_lo = int(std::floor((k_lo - radius) / delta - 0.5)) + 1;
  ax.i_hi = int(std::ceil((k_hi + radius) / delta + 0.5)) - 1;
  const int n = k_hi - k_lo + 1;
  ax.P.resize(n, ax.size());
  ax.Pd.resize(n, ax.size());
  for (int c = 0; c < ax.size(); ++c) {
    const double lo = (ax.i_lo + c) * delta - 0.5 * delta, hi = lo + delta;
    for (int k = 0; k < n; ++k) {
      ax.P(k, c) = G(hi - (k_lo + k)) - G(lo - (k_lo + k));
      ax.Pd(k, c) = Gd(hi - (k_lo + k)) - Gd(lo - (k_lo + k));
    }
  }
  return ax;
}

double inv(double r) { return std::isinf(r) ? 0.0 : 1.0 / r; }

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

Eigen::MatrixXd to_matrix(const CoefSeq& c) {
  const Window& w = c.window();
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      c.values().data(), w.n1(), w.n2());
}

CoefSeq from_matrix(const Window& w, const Eigen::MatrixXd& m) {
  CoefSeq c(w);
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      c.values().data(), w.n1(), w.n2()) = m;
  return c;
}

SpanKernel averaged_kernel(const SpanKernel& k, const LatticeAxis& lt, const LatticeAxis& ls) {
  KronTerm m;
  m.at = lt.Pd * lt.P.transpose() / lt.delta;
  m.as = ls.Pd * ls.P.transpose() / ls.delta;
  const SpanKernel mk(k.generator(), k.dual(), k.window(), {m});
  if (k.is_identity()) return mk;
  return compose(compose(k, mk), k);
}

}  // namespace

LatticeAxis lattice_axis_t(const SpanKernel& k, double delta) {
  const Window& w = k.window();
  const Generator& g = k.generator();
  const SplineDual1D& d = k.dual().t();
  return make_axis(w.k1_lo, w.k1_hi, g.radius_t(), delta,
                   [&](double x) { return g.integral_t(x); }, [&](double x) { return d.integral(x); });
}

LatticeAxis lattice_axis_s(const SpanKernel& k, double delta) {
  const Window& w = k.window();
  const Generator& g = k.generator();
  const SplineDual1D& d = k.dual().s();
  return make_axis(w.k2_lo, w.k2_hi, g.radius_s(), delta,
                   [&](double y) { return g.integral_s(y); }, [&](double y) { return d.integral(y); });
}

SpanKernel build_Kdelta(const SpanKernel& k, double delta) {
  if (!(delta > 0)) throw InputError("build_Kdelta: delta must be positive");
  return averaged_kernel(k, lattice_axis_t(k, delta), lattice_axis_s(k, delta));
}

SpanKernel neumann_plus(const SpanKernel& k, const SpanKernel& kdelta, int N, double r0) {
  if (N < 0) throw InputError("neumann_plus: order must be >= 0");
  if (!(r0 < 1.0)) {
    std::ostringstream os;
    os << "contraction violated: r0 = " << r0 << " >= 1";
    throw ContractionError(os.str());
  }
  const auto& dt = kdelta.terms();
  if (k.is_identity() && dt.size() == 1 && !dt[0].identity && dt[0].weight == 1.0) {
    // sum_{n<=N} (I - M)^n = sum_j (-1)^j C(N+1, j+1) M^j, M = Mt kron Ms
    std::vector<KronTerm> terms;
    const int n1 = k.window().n1(), n2 = k.window().n2();
    Eigen::MatrixXd pt = Eigen::MatrixXd::Identity(n1, n1), ps = Eigen::MatrixXd::Identity(n2, n2);
    for (int j = 0; j <= N; ++j) {
      KronTerm t;
      t.weight = (j % 2 ? -1.0 : 1.0) * binomial(N + 1, j + 1);
      t.identity = j == 0;
      if (j > 0) {
        pt = pt * dt[0].at;
        ps = ps * dt[0].as;
        t.at = pt;
        t.as = ps;
      }
      terms.push_back(std::move(t));
    }
    return SpanKernel(k.generator(), k.dual(), k.window(), std::move(terms));
  }
  // generic route: explicit powers of K - K_delta
  const SpanKernel D = difference(k, kdelta);
  std::vector<KronTerm> terms = k.terms();
  SpanKernel p = D;
  for (int n = 1; n <= N; ++n) {
    terms.insert(terms.end(), p.terms().begin(), p.terms().end());
    if (n < N) p = compose(p, D);
  }
  return SpanKernel(k.generator(), k.dual(), k.window(), std::move(terms));
}

double measured_r0(const SpanKernel& k, const SpanKernel& kdelta, const WResolution& res, Exec exec) {
  return kron_W_norm(difference(k, kdelta), res, exec);
}

R0Bound r0_bound(const KernelStats& stats, double delta) {
  R0Bound b;
  const double K = stats.W_norm();
  b.omega = stats.omega_W_norm(std::sqrt(2.0) * delta);
  b.omega_branch = b.omega;
  const double kw = K * b.omega;
  b.product_branch = kw == 1.0 ? INFINITY : kw * (1.0 + (K + b.omega) / (1.0 - kw));
  return b;
}

FrameFamily::FrameFamily(const SpanKernel& k, const FrameOptions& opt, Exec exec)
    : k_(k),
      opt_(opt),
      lt_(lattice_axis_t(k, opt.delta)),
      ls_(lattice_axis_s(k, opt.delta)),
      kd_(averaged_kernel(k, lt_, ls_)),
      kp_(zero_kernel_like(k)) {
  r0_ = opt.r0 ? *opt.r0 : measured_r0(k, kd_, opt.res, exec);
  kp_ = neumann_plus(k, kd_, opt.order, r0_);
  const double ip = inv(opt.params.p()), iq = inv(opt.params.q());
  analysis_scale_ = std::pow(opt.delta, -2.0 + ip + iq);
  atom_scale_ = std::pow(opt.delta, -ip - iq);
}

Eigen::MatrixXd FrameFamily::analysis(const VSignal& f) const {
  if (!(f.coefficients().window() == k_.window()))
    throw InputError("frame analysis: signal window differs from the kernel window");
  return analysis_scale_ * (lt_.P.transpose() * to_matrix(f.coefficients()) * ls_.P);
}

VSignal FrameFamily::synthesis(const Eigen::MatrixXd& a) const {
  if (a.rows() != lt_.size() || a.cols() != ls_.size())
    throw InputError("frame synthesis: coefficient array does not match the lattice");
  const CoefSeq c = from_matrix(k_.window(), atom_scale_ * (lt_.Pd * a * ls_.Pd.transpose()));
  return VSignal(k_.generator(), kp_.apply(c));
}

VSignal FrameFamily::atom(int i, int j) const {
  if (i < lt_.i_lo || i > lt_.i_hi || j < ls_.i_lo || j > ls_.i_hi)
    throw InputError("frame atom: lattice point outside the family");
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(lt_.size(), ls_.size());
  e(i - lt_.i_lo, j - ls_.i_lo) = 1.0;
  return synthesis(e);
}

DualSignal FrameFamily::dual_atom(int i, int j) const {
  if (i < lt_.i_lo || i > lt_.i_hi || j < ls_.i_lo || j > ls_.i_hi)
    throw InputError("dual atom: lattice point outside the family");
  const Eigen::MatrixXd e =
      analysis_scale_ * lt_.P.col(i - lt_.i_lo) * ls_.P.col(j - ls_.i_lo).transpose();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(e.rows(), e.cols());
  for (const auto& t : k_.terms())
    out += t.identity ? Eigen::MatrixXd(t.weight * e) : Eigen::MatrixXd(t.weight * t.at.transpose() * e * t.as);
  return DualSignal(k_.dual(), from_matrix(k_.window(), out));
}

double FrameFamily::dual_atom_bound(const KernelStats& stats) const {
  const double K = stats.W_norm(), w = stats.omega_W_norm(std::sqrt(2.0) * opt_.delta);
  const double e = inv(opt_.params.p_conj()) * inv(opt_.params.q_conj());
  return std::pow(K, e) * std::pow(K + w, 1.0 - e);
}

double lattice_sequence_norm(const Eigen::MatrixXd& a, const MixedNormParams& pq) {
  const Window w{0, int(a.rows()) - 1, 0, int(a.cols()) - 1};
  return mixed_sequence_norm(from_matrix(w, a), pq);
}

FrameBoundsResult frame_bounds_check(const VSignal& f, const FrameFamily& ff, const Grid& grid,
                                     double omega, double slack, Exec exec) {
  FrameBoundsResult r;
  r.lower = 1.0 - omega - slack;
  r.upper = 1.0 + omega + slack;
  const double fn = mixed_function_norm(render(f, grid, exec), ff.params(), exec);
  if (fn == 0.0) {
    r.zero_signal = true;
    return r;
  }
  r.ratio = lattice_sequence_norm(ff.analysis(f), ff.params()) / fn;
  r.inside = r.ratio >= r.lower && r.ratio <= r.upper;
  return r;
}

VSignal dual_pair_reconstruct(const VSignal& f, const FrameFamily& ff) {
  return ff.synthesis(ff.analysis(f));
}

int lattice_overlap_count(const FrameFamily& ff, double r) {
  const double d = ff.delta();
  const int reach = int(std::ceil(r / d)) + 1;
  constexpr int probes = 32;
  int best = 0;
  for (int a = 0; a <= probes; ++a)
    for (int b = 0; b <= probes; ++b) {
      const double cx = d * a / probes, cy = d * b / probes;
      int n = 0;
      for (int i = -reach; i <= reach + 1; ++i)
        for (int j = -reach; j <= reach + 1; ++j)
          if (std::hypot(i * d - cx, j * d - cy) < r) ++n;
      best = std::max(best, n);
    }
  return best;
}

}  // namespace lpq
