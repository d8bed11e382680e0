#include "lpqtem/kernel_stats.hpp"

#include "lpqtem/bspline.hpp"
#include "lpqtem/errors.hpp"
#include "lpqtem/mixed_norm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lpq {

namespace {

// Integrands here are only piecewise smooth (absolute values, suprema), where
// Simpson's alternating weights give erratic errors; the trapezoid rule converges steadily.
std::vector<double> trapezoid_weights(const Axis& a) {
  std::vector<double> w(a.points(), a.step());
  w.front() = w.back() = 0.5 * a.step();
  return w;
}

Axis axis_span(double lo, double hi, int spu) {
  return {lo, hi, std::max(1, int(std::lround((hi - lo) * spu)))};
}

// Points of a pair domain, flattened: block A (a_sup x a_int, row-major) and,
// unless the domain is a plain box, block B (b_int x b_sup, row-major).
struct PairGrid {
  PairDomain dom;
  bool shared = false;
  int a1 = 0, a2 = 0, b1 = 0, b2 = 0;
  std::vector<double> wa, wb;  // integration weights of a_int and b_int
  std::vector<double> first, second;

  explicit PairGrid(const PairDomain& d) : dom(d) {
    shared = d.a_sup.lo == d.b_int.lo && d.a_sup.hi == d.b_int.hi &&
             d.a_sup.intervals == d.b_int.intervals && d.a_int.lo == d.b_sup.lo &&
             d.a_int.hi == d.b_sup.hi && d.a_int.intervals == d.b_sup.intervals;
    a1 = d.a_sup.points();
    a2 = d.a_int.points();
    b1 = d.b_int.points();
    b2 = d.b_sup.points();
    wa = trapezoid_weights(d.a_int);
    wb = trapezoid_weights(d.b_int);
    for (int i = 0; i < a1; ++i)
      for (int j = 0; j < a2; ++j) {
        first.push_back(d.a_sup.at(i));
        second.push_back(d.a_int.at(j));
      }
    if (!shared)
      for (int i = 0; i < b1; ++i)
        for (int j = 0; j < b2; ++j) {
          first.push_back(d.b_int.at(i));
          second.push_back(d.b_sup.at(j));
        }
  }

  std::size_t size() const { return first.size(); }

  // W0 value from nonnegative samples laid out like the points.
  double reduce(const double* v) const {
    double best = 0.0;
    for (int i = 0; i < a1; ++i) {
      double s = 0.0;
      const double* row = v + std::size_t(i) * a2;
      for (int j = 0; j < a2; ++j) s += wa[j] * row[j];
      best = std::max(best, s);
    }
    const double* blk = shared ? v : v + std::size_t(a1) * a2;
    std::vector<double> cols(b2, 0.0);
    for (int i = 0; i < b1; ++i) {
      const double* row = blk + std::size_t(i) * b2;
      for (int j = 0; j < b2; ++j) cols[j] += wb[i] * row[j];
    }
    for (double c : cols) best = std::max(best, c);
    return best;
  }
};

// Candidate abscissae for the extremes of a piecewise polynomial over [c-r, c+r].
void candidates(double c, double r, double knot_offset, int interior, std::vector<double>& out) {
  out.clear();
  out.push_back(c);
  if (r <= 0.0) return;
  out.push_back(c - r);
  out.push_back(c + r);
  for (int i = 1; i <= interior; ++i) out.push_back(c - r + 2.0 * r * i / (interior + 1));
  for (double k = std::ceil(c - r - knot_offset) + knot_offset; k < c + r; k += 1.0)
    if (k > c - r) out.push_back(k);
}

struct Extremes {
  std::vector<double> lo, hi;  // [alloc][point]
  std::vector<double> center;
};

// Extremes of f over per-allocation boxes around each pair-grid point.
Extremes box_extremes(const Fn2& f, const PairGrid& pg, const std::vector<double>& r1,
                      const std::vector<double>& r2, double knot_offset, int interior, Exec exec) {
  const std::size_t n = pg.size(), na = r1.size() * r2.size();
  Extremes e;
  e.lo.assign(na * n, 0.0);
  e.hi.assign(na * n, 0.0);
  e.center.assign(n, 0.0);
#pragma omp parallel for schedule(dynamic, 64) if (exec == Exec::parallel)
  for (std::ptrdiff_t p = 0; p < std::ptrdiff_t(n); ++p) {
    std::vector<double> cu, cv;
    const double u = pg.first[p], v = pg.second[p];
    e.center[p] = f(u, v);
    for (std::size_t i = 0; i < r1.size(); ++i) {
      candidates(u, r1[i], knot_offset, interior, cu);
      for (std::size_t j = 0; j < r2.size(); ++j) {
        candidates(v, r2[j], knot_offset, interior, cv);
        double mn = e.center[p], mx = e.center[p];
        for (double a : cu)
          for (double b : cv) {
            const double val = f(a, b);
            mn = std::min(mn, val);
            mx = std::max(mx, val);
          }
        const std::size_t al = i * r2.size() + j;
        e.lo[al * n + p] = mn;
        e.hi[al * n + p] = mx;
      }
    }
  }
  return e;
}

}  // namespace

PairDomain PairDomain::periodic(int spu, double reach) {
  if (spu < 1 || reach < 0) throw InputError("PairDomain: bad resolution");
  const Axis unit{0.0, 1.0, spu};
  const Axis wide = axis_span(-reach, 1.0 + reach, spu);
  return {unit, wide, wide, unit};
}

PairDomain PairDomain::box(const Axis& first, const Axis& second) {
  return {first, second, first, second};
}

double w0_norm(const Fn2& f, const PairDomain& dom) {
  const PairGrid pg(dom);
  std::vector<double> v(pg.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::abs(f(pg.first[i], pg.second[i]));
  return pg.reduce(v.data());
}

double nested_W_norm(const Kernel& k, const PairDomain& outer, const PairDomain& inner, Exec exec) {
  const PairGrid po(outer), pi(inner);
  std::vector<double> inner_vals(po.size());
#pragma omp parallel for schedule(dynamic, 4) if (exec == Exec::parallel)
  for (std::ptrdiff_t p = 0; p < std::ptrdiff_t(po.size()); ++p) {
    std::vector<double> v(pi.size());
    for (std::size_t q = 0; q < pi.size(); ++q)
      v[q] = std::abs(k(po.first[p], pi.first[q], po.second[p], pi.second[q]));
    inner_vals[p] = pi.reduce(v.data());
  }
  return po.reduce(inner_vals.data());
}

double kron_W_norm(const SpanKernel& k, const WResolution& res, Exec exec) {
  const Window& w = k.window();
  const Generator& g = k.generator();
  const int spu = res.samples_per_unit;
  const double rt = g.radius_t(), rs = g.radius_s();
  const PairDomain outer = PairDomain::box(axis_span(w.k1_lo - rt, w.k1_hi + rt, spu),
                                           axis_span(w.k1_lo - res.reach, w.k1_hi + res.reach, spu));
  const PairDomain inner = PairDomain::box(axis_span(w.k2_lo - rs, w.k2_hi + rs, spu),
                                           axis_span(w.k2_lo - res.reach, w.k2_hi + res.reach, spu));
  const PairGrid po(outer), pi(inner);
  const auto& terms = k.terms();
  const std::size_t nr = terms.size();
  std::vector<double> ft(nr * po.size()), gs(nr * pi.size());
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::ptrdiff_t p = 0; p < std::ptrdiff_t(po.size()); ++p)
    for (std::size_t r = 0; r < nr; ++r)
      ft[r * po.size() + p] = terms[r].weight * k.factor_t(terms[r], po.first[p], po.second[p]);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::ptrdiff_t q = 0; q < std::ptrdiff_t(pi.size()); ++q)
    for (std::size_t r = 0; r < nr; ++r)
      gs[r * pi.size() + q] = k.factor_s(terms[r], pi.first[q], pi.second[q]);

  std::vector<double> inner_vals(po.size());
  const std::size_t nq = pi.size();
#pragma omp parallel for schedule(dynamic, 8) if (exec == Exec::parallel)
  for (std::ptrdiff_t p = 0; p < std::ptrdiff_t(po.size()); ++p) {
    std::vector<double> v(nq, 0.0);
    bool any = false;
    for (std::size_t r = 0; r < nr; ++r) {
      const double a = ft[r * po.size() + p];
      if (a == 0.0) continue;
      any = true;
      const double* gr = gs.data() + r * nq;
      for (std::size_t q = 0; q < nq; ++q) v[q] += a * gr[q];
    }
    if (!any) {
      inner_vals[p] = 0.0;
      continue;
    }
    for (double& x : v) x = std::abs(x);
    inner_vals[p] = pi.reduce(v.data());
  }
  return po.reduce(inner_vals.data());
}

double lattice_W_norm(const SpanKernel& k, const WResolution& res) {
  const PairDomain dom = PairDomain::periodic(res.samples_per_unit, res.reach);
  const double nt = w0_norm([&](double x, double s) { return k.lattice_t(x, s); }, dom);
  const double ns = w0_norm([&](double y, double t) { return k.lattice_s(y, t); }, dom);
  return nt * ns;
}

double lattice_omega_W_norm(const SpanKernel& k, double delta, const WResolution& res, Exec exec) {
  if (delta < 0) throw InputError("omega: delta must be >= 0");
  if (delta == 0) return 0.0;
  const int L = std::max(2, res.allocation_levels);
  std::vector<double> rc(L), rsn(L);
  for (int i = 0; i < L; ++i) {
    const double th = 0.5 * std::numbers::pi * i / (L - 1);
    rc[i] = i == L - 1 ? 0.0 : delta * std::cos(th);
    rsn[i] = i == 0 ? 0.0 : delta * std::sin(th);
  }
  const PairDomain dom = PairDomain::periodic(res.samples_per_unit, std::ceil(res.reach + delta));
  const PairGrid po(dom), pi(dom);
  const Generator& g = k.generator();
  // Time shifts take the cosine share of each disk, space shifts the sine share.
  const Extremes et = box_extremes([&](double x, double s) { return k.lattice_t(x, s); }, po, rc,
                                   rc, bspline_knot_offset(g.order_t()), res.interior_samples, exec);
  const Extremes es = box_extremes([&](double y, double t) { return k.lattice_s(y, t); }, pi, rsn,
                                   rsn, bspline_knot_offset(g.order_s()), res.interior_samples, exec);
  const std::size_t na = std::size_t(L) * L, np = po.size(), nq = pi.size();

  std::vector<double> inner_vals(np);
#pragma omp parallel for schedule(dynamic, 4) if (exec == Exec::parallel)
  for (std::ptrdiff_t p = 0; p < std::ptrdiff_t(np); ++p) {
    std::vector<double> v(nq, 0.0), c(nq);
    const double a0 = et.center[p];
    for (std::size_t q = 0; q < nq; ++q) c[q] = a0 * es.center[q];
    for (std::size_t al = 0; al < na; ++al) {
      const double alo = et.lo[al * np + p], ahi = et.hi[al * np + p];
      const double* blo = es.lo.data() + al * nq;
      const double* bhi = es.hi.data() + al * nq;
      for (std::size_t q = 0; q < nq; ++q) {
        const double m1 = std::max(std::abs(alo * blo[q] - c[q]), std::abs(alo * bhi[q] - c[q]));
        const double m2 = std::max(std::abs(ahi * blo[q] - c[q]), std::abs(ahi * bhi[q] - c[q]));
        v[q] = std::max(v[q], std::max(m1, m2));
      }
    }
    inner_vals[p] = pi.reduce(v.data());
  }
  return po.reduce(inner_vals.data());
}

double lattice_omega_W_norm_probe(const SpanKernel& k, double delta, const WResolution& res,
                                  ShiftProbe probe, Exec exec) {
  if (delta < 0) throw InputError("omega: delta must be >= 0");
  if (delta == 0) return 0.0;
  std::vector<double> cx{0.0}, cy{0.0};
  for (int r = 1; r <= probe.radii; ++r)
    for (int a = 0; a < probe.directions; ++a) {
      const double rho = delta * r / probe.radii;
      const double th = 2.0 * std::numbers::pi * a / probe.directions;
      cx.push_back(rho * std::cos(th));
      cy.push_back(rho * std::sin(th));
    }
  const std::size_t ns = cx.size(), nn = ns * ns;
  const PairDomain dom = PairDomain::periodic(res.samples_per_unit, std::ceil(res.reach + delta));
  const PairGrid po(dom), pi(dom);
  const std::size_t np = po.size(), nq = pi.size();
  // tt[p][i1][i2] = Kt(x + x'(i1), s + s'(i2)); ts likewise with the sine components.
  std::vector<double> tt(np * nn), ts(nq * nn);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::ptrdiff_t p = 0; p < std::ptrdiff_t(np); ++p)
    for (std::size_t i1 = 0; i1 < ns; ++i1)
      for (std::size_t i2 = 0; i2 < ns; ++i2)
        tt[p * nn + i1 * ns + i2] = k.lattice_t(po.first[p] + cx[i1], po.second[p] + cx[i2]);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::ptrdiff_t q = 0; q < std::ptrdiff_t(nq); ++q)
    for (std::size_t i1 = 0; i1 < ns; ++i1)
      for (std::size_t i2 = 0; i2 < ns; ++i2)
        ts[q * nn + i1 * ns + i2] = k.lattice_s(pi.first[q] + cy[i1], pi.second[q] + cy[i2]);
  std::vector<double> inner_vals(np);
#pragma omp parallel for schedule(dynamic, 4) if (exec == Exec::parallel)
  for (std::ptrdiff_t p = 0; p < std::ptrdiff_t(np); ++p) {
    std::vector<double> v(nq);
    const double* a = tt.data() + p * nn;
    for (std::size_t q = 0; q < nq; ++q) {
      const double* b = ts.data() + q * nn;
      const double c = a[0] * b[0];
      double m = 0.0;
      for (std::size_t i = 0; i < nn; ++i) m = std::max(m, std::abs(a[i] * b[i] - c));
      v[q] = m;
    }
    inner_vals[p] = pi.reduce(v.data());
  }
  return po.reduce(inner_vals.data());
}

KernelStats::KernelStats(const SpanKernel& k, WResolution res)
    : k_(k), res_(res), w_norm_(lattice_W_norm(k, res)) {}

double KernelStats::omega_W_norm(double delta) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = omega_.find(delta);
    if (it != omega_.end()) return it->second;
  }
  const double v = lattice_omega_W_norm(k_, delta, res_);
  std::lock_guard<std::mutex> lock(mu_);
  omega_.emplace(delta, v);
  return v;
}

}  // namespace lpq
