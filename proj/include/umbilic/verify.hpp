#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "umbilic/graph.hpp"
#include "umbilic/warp.hpp"

namespace umbilic {

using SurfaceFn = std::function<Vec(const Vec&)>;
using MetricFn = std::function<Mat(const Vec&)>;

// Flat ambient for the projection oracle: the model quadric cross an
// optional height axis. All inner products below are in this metric.
struct FlatAmbient {
  SpaceForm space = SpaceForm::Sphere;
  int model_coords = 0;  // n+1
  bool with_height = true;

  int coords() const { return model_coords + (with_height ? 1 : 0); }

  double inner(const Vec& u, const Vec& v) const {
    double ip = u.dot(v);
    if (space == SpaceForm::Hyperbolic) ip -= 2.0 * u[0] * v[0];
    return ip;
  }

  // metric applied componentwise: only the model time coordinate flips
  Vec lower(Vec v) const {
    if (space == SpaceForm::Hyperbolic) v[0] = -v[0];
    return v;
  }

  // gradient direction of the quadric constraint at x; never tangent to it
  Vec radial(const Vec& x) const {
    Vec r = x;
    if (with_height) r[r.size() - 1] = 0.0;
    return r;
  }
};

inline FlatAmbient product_ambient(SpaceForm sf, int n) { return FlatAmbient{sf, n + 1, true}; }
inline FlatAmbient model_ambient(SpaceForm sf, int n) { return FlatAmbient{sf, n + 1, false}; }

struct ShapeResult {
  Mat shape;        // g^{-1} h in the stencil basis
  Vec eigenvalues;  // ascending
  Mat first;        // g_ab
  Mat second;       // symmetrized h_ab
  Mat tangents;     // ambient columns x_a at the center
  Vec normal;
};

namespace detail {

inline void check_first_form(const Mat& g) {
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e10) {
    throw verify_error("degenerate first fundamental form, condition " +
                       format_sci(lo > 0.0 ? hi / lo : kInf));
  }
}

inline Mat fd_tangents(const SurfaceFn& x, int dim, double h, const Vec& at) {
  Mat t;
  for (int a = 0; a < dim; ++a) {
    Vec up = at, dn = at;
    up[a] += h;
    dn[a] -= h;
    const Vec xp = x(up);
    const Vec xm = x(dn);
    if (a == 0) t.resize(xp.size(), dim);
    t.col(a) = (xp - xm) / (2.0 * h);
  }
  return t;
}

// unit kernel vector of the orthogonality system; rows are metric-lowered
// tangents plus, in the flat case, the quadric radial direction
inline Vec kernel_normal(const Mat& rows, const std::function<double(const Vec&, const Vec&)>& ip,
                         const Vec& ref) {
  Eigen::JacobiSVD<Mat> svd(rows, Eigen::ComputeFullV);
  Vec k = svd.matrixV().col(rows.cols() - 1);
  const double q = ip(k, k);
  if (!(q > 0.0)) throw verify_error("normal direction not spacelike");
  k /= std::sqrt(q);
  if (ip(k, ref) < 0.0) k = -k;
  return k;
}

inline Vec flat_normal_at(const FlatAmbient& amb, const SurfaceFn& x, int dim, double h,
                          const Vec& at, const Vec& ref) {
  const Mat t = fd_tangents(x, dim, h, at);
  const Vec center = x(at);
  Mat rows(dim + 1, amb.coords());
  for (int a = 0; a < dim; ++a) rows.row(a) = amb.lower(t.col(a)).transpose();
  rows.row(dim) = amb.lower(amb.radial(center)).transpose();
  return kernel_normal(rows, [&amb](const Vec& u, const Vec& v) { return amb.inner(u, v); }, ref);
}

}  // namespace detail

// Shape operator by flat-ambient projection: the product connection is the
// tangential part of the flat derivative, so h_ab = -<D_a N, x_b> needs no
// Christoffel symbols. All stencils are second-order central differences.
inline ShapeResult shape_operator_flat(const FlatAmbient& amb, const SurfaceFn& x, int dim,
                                       double h, const Vec& ref_normal) {
  ShapeResult out;
  const Vec origin = Vec::Zero(dim);
  out.tangents = detail::fd_tangents(x, dim, h, origin);
  Mat g(dim, dim);
  for (int a = 0; a < dim; ++a) {
    for (int b = a; b < dim; ++b) {
      g(a, b) = g(b, a) = amb.inner(out.tangents.col(a), out.tangents.col(b));
    }
  }
  detail::check_first_form(g);
  out.normal = detail::flat_normal_at(amb, x, dim, h, origin, ref_normal);

  Mat hh(dim, dim);
  for (int a = 0; a < dim; ++a) {
    Vec up = origin, dn = origin;
    up[a] += h;
    dn[a] -= h;
    const Vec np = detail::flat_normal_at(amb, x, dim, h, up, ref_normal);
    const Vec nm = detail::flat_normal_at(amb, x, dim, h, dn, ref_normal);
    const Vec dN = (np - nm) / (2.0 * h);
    for (int b = 0; b < dim; ++b) hh(a, b) = -amb.inner(dN, out.tangents.col(b));
  }
  out.second = 0.5 * (hh + hh.transpose());
  out.first = g;
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(out.second, g);
  out.eigenvalues = ges.eigenvalues();
  out.shape = g.ldlt().solve(out.second);
  return out;
}

// Shape operator in a coordinate chart with a sampled metric: Christoffel
// symbols from central differences of the metric, then the covariant
// derivative of the unit normal field along the surface.
inline ShapeResult shape_operator_chart(const MetricFn& metric, const SurfaceFn& zeta, int dim,
                                        double h, const Vec& ref_normal) {
  ShapeResult out;
  const Vec origin = Vec::Zero(dim);
  const Vec z0 = zeta(origin);
  const int m = static_cast<int>(z0.size());
  const Mat G0 = metric(z0);
  detail::check_first_form(G0);  // chart degeneracy guard

  out.tangents = detail::fd_tangents(zeta, dim, h, origin);
  Mat g(dim, dim);
  for (int a = 0; a < dim; ++a) {
    for (int b = a; b < dim; ++b) {
      g(a, b) = g(b, a) = out.tangents.col(a).dot(G0 * out.tangents.col(b));
    }
  }
  detail::check_first_form(g);

  auto normal_at = [&](const Vec& at) {
    const Mat t = detail::fd_tangents(zeta, dim, h, at);
    const Mat Gz = metric(zeta(at));
    Mat rows(dim, m);
    for (int a = 0; a < dim; ++a) rows.row(a) = (Gz * t.col(a)).transpose();
    return detail::kernel_normal(
        rows, [&Gz](const Vec& u, const Vec& v) { return u.dot(Gz * v); }, ref_normal);
  };
  out.normal = normal_at(origin);

  // dG[i] with per-axis steps scaled to unit physical length
  std::vector<Mat> dG(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double hi = h / std::sqrt(G0(i, i));
    Vec zp = z0, zm = z0;
    zp[i] += hi;
    zm[i] -= hi;
    dG[static_cast<std::size_t>(i)] = (metric(zp) - metric(zm)) / (2.0 * hi);
  }
  const Mat Ginv = G0.inverse();
  std::vector<Mat> gamma(static_cast<std::size_t>(m), Mat::Zero(m, m));
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        double acc = 0.0;
        for (int l = 0; l < m; ++l) {
          acc += Ginv(k, l) * (dG[static_cast<std::size_t>(i)](j, l) +
                               dG[static_cast<std::size_t>(j)](i, l) -
                               dG[static_cast<std::size_t>(l)](i, j));
        }
        gamma[static_cast<std::size_t>(k)](i, j) = 0.5 * acc;
      }
    }
  }

  Mat hh(dim, dim);
  for (int a = 0; a < dim; ++a) {
    Vec up = origin, dn = origin;
    up[a] += h;
    dn[a] -= h;
    const Vec np = normal_at(up);
    const Vec nm = normal_at(dn);
    const Vec dnu = (np - nm) / (2.0 * h);
    Vec cov = dnu;
    for (int k = 0; k < m; ++k) {
      cov[k] += out.tangents.col(a).dot(gamma[static_cast<std::size_t>(k)] * out.normal);
    }
    for (int b = 0; b < dim; ++b) hh(a, b) = -cov.dot(G0 * out.tangents.col(b));
  }
  out.second = 0.5 * (hh + hh.transpose());
  out.first = g;
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(out.second, g);
  out.eigenvalues = ges.eigenvalues();
  out.shape = g.ldlt().solve(out.second);
  return out;
}

// One verification site: a local parametrization centered on the point, the
// analytic unit normal there (fixes the kernel sign), and the expected
// umbilical value when one is known (NaN = spread check only).
struct OracleSample {
  SurfaceFn immersion;
  Vec ref_normal;
  double analytic_k = std::numeric_limits<double>::quiet_NaN();
  bool near_seam = false;
  double s = 0.0;
  Vec chart;
};

struct SampleRecord {
  double s = 0.0;
  Vec chart;
  Vec eigenvalues;
  double mean = 0.0;
  double spread = 0.0;
};

struct UmbilicReport {
  std::string oracle;
  double step = 0.0;
  double tol = 0.0;
  std::vector<SampleRecord> samples;  // interior sites only
  double max_spread = 0.0;
  double analytic_comparison = 0.0;
  bool passed = false;
  int excluded_near_seam = 0;
};

namespace detail {

template <typename SolveFn>
inline UmbilicReport run_report(const char* oracle, const std::vector<OracleSample>& sites,
                                double h, double tol, SolveFn solve) {
  UmbilicReport rep;
  rep.oracle = oracle;
  rep.step = h;
  rep.tol = tol;
  std::vector<const OracleSample*> interior;
  for (const OracleSample& s : sites) {
    if (s.near_seam) {
      ++rep.excluded_near_seam;
    } else {
      interior.push_back(&s);
    }
  }
  if (interior.empty()) throw invalid_spec("verification grid has no interior sites");
  rep.samples.resize(interior.size());
  parallel_for(interior.size(), [&](std::size_t i) {
    const OracleSample& s = *interior[i];
    const ShapeResult r = solve(s);
    SampleRecord rec;
    rec.s = s.s;
    rec.chart = s.chart;
    rec.eigenvalues = r.eigenvalues;
    rec.mean = r.eigenvalues.mean();
    rec.spread = r.eigenvalues.maxCoeff() - r.eigenvalues.minCoeff();
    rep.samples[i] = rec;
  });
  rep.max_spread = 0.0;
  rep.analytic_comparison = 0.0;
  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    rep.max_spread = std::max(rep.max_spread, rep.samples[i].spread);
    const double k = interior[i]->analytic_k;
    if (std::isfinite(k)) {
      rep.analytic_comparison = std::max(rep.analytic_comparison, std::abs(rep.samples[i].mean - k));
    }
  }
  rep.passed = rep.max_spread <= tol && rep.analytic_comparison <= tol;
  return rep;
}

}  // namespace detail

inline UmbilicReport umbilicity_report_flat(const FlatAmbient& amb,
                                            const std::vector<OracleSample>& sites, int dim,
                                            double h, double tol) {
  return detail::run_report("flat", sites, h, tol, [&](const OracleSample& s) {
    return shape_operator_flat(amb, s.immersion, dim, h, s.ref_normal);
  });
}

inline UmbilicReport umbilicity_report_chart(const MetricFn& metric,
                                             const std::vector<OracleSample>& sites, int dim,
                                             double h, double tol) {
  return detail::run_report("chart", sites, h, tol, [&](const OracleSample& s) {
    return shape_operator_chart(metric, s.immersion, dim, h, s.ref_normal);
  });
}

namespace detail {

// Arc length along the profile meridian: ds/dsigma = Theta. Stencils in
// this variable keep uniform second-order accuracy however steep phi gets,
// because the meridian is a unit-speed curve of the ambient.
inline double meridian_s(const Profile& pr, double s0, double sigma) {
  const double lo = pr.s_range.lo;
  const double hi = pr.s_range.hi;
  auto f = [&](double s) { return pr.theta(std::clamp(s, lo, hi)); };
  const int steps = 16;
  const double dt = sigma / steps;
  double s = s0;
  for (int i = 0; i < steps; ++i) {
    const double k1 = f(s);
    const double k2 = f(s + 0.5 * dt * k1);
    const double k3 = f(s + 0.5 * dt * k2);
    const double k4 = f(s + dt * k3);
    s += dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
  }
  return std::clamp(s, lo, hi);
}

// Same curve inside the warped product: ds/dsigma = Theta/omega(t),
// dt/dsigma = sgn rho. Unit speed in the warped metric.
inline void warped_meridian(const Profile& pr, const Warp& w, double sgn, double s0, double t0,
                            double sigma, double& s_out, double& t_out) {
  const double lo = pr.s_range.lo;
  const double hi = pr.s_range.hi;
  auto fs = [&](double s, double t) {
    return pr.theta(std::clamp(s, lo, hi)) / w.omega(t);
  };
  auto ft = [&](double s) { return sgn * pr.rho(std::clamp(s, lo, hi)); };
  const int steps = 16;
  const double dt = sigma / steps;
  double s = s0, t = t0;
  for (int i = 0; i < steps; ++i) {
    const double a1 = fs(s, t), b1 = ft(s);
    const double a2 = fs(s + 0.5 * dt * a1, t + 0.5 * dt * b1), b2 = ft(s + 0.5 * dt * a1);
    const double a3 = fs(s + 0.5 * dt * a2, t + 0.5 * dt * b2), b3 = ft(s + 0.5 * dt * a2);
    const double a4 = fs(s + dt * a3, t + dt * b3), b4 = ft(s + dt * a3);
    s += dt * (a1 + 2.0 * a2 + 2.0 * a3 + a4) / 6.0;
    t += dt * (b1 + 2.0 * b2 + 2.0 * b3 + b4) / 6.0;
  }
  s_out = std::clamp(s, lo, hi);
  t_out = t;
}

// per-axis chart steps giving unit physical length on the leaf
inline Vec chart_scales(const FamilySpec& fs, double s, const Vec& y, double extra = 1.0) {
  const Mat gh = chart_fiber_metric(fs, y);
  const double ms = leaf_scale(fs, s);
  Vec d(fs.chart_dim());
  for (int j = 0; j < fs.chart_dim(); ++j) d[j] = 1.0 / (extra * ms * std::sqrt(gh(j, j)));
  return d;
}

inline std::vector<Vec> oracle_chart_grid(const FamilySpec& fs, int per_axis, double extent,
                                          double polar_margin) {
  const int m = fs.chart_dim();
  const bool polar = fs.kind == FamilyKind::SphereSpherical || fs.kind == FamilyKind::SphereHyperbolic;
  std::vector<std::vector<double>> axes(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    auto& ax = axes[static_cast<std::size_t>(j)];
    ax.resize(static_cast<std::size_t>(per_axis));
    for (int i = 0; i < per_axis; ++i) {
      if (polar && j == m - 1) {
        ax[static_cast<std::size_t>(i)] = 2.0 * kPi * i / per_axis;
      } else if (polar) {
        ax[static_cast<std::size_t>(i)] =
            polar_margin + (kPi - 2.0 * polar_margin) * i / (per_axis - 1);
      } else {
        ax[static_cast<std::size_t>(i)] = -extent + 2.0 * extent * i / (per_axis - 1);
      }
    }
  }
  std::vector<Vec> out;
  std::size_t total = 1;
  for (const auto& ax : axes) total *= ax.size();
  out.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Vec y(m);
    std::size_t rem = flat;
    for (int j = m - 1; j >= 0; --j) {
      const std::size_t nj = axes[static_cast<std::size_t>(j)].size();
      y[j] = axes[static_cast<std::size_t>(j)][rem % nj];
      rem /= nj;
    }
    out.push_back(y);
  }
  return out;
}

}  // namespace detail

struct OracleGrid {
  int s_samples = 24;
  int chart_samples = 12;     // per chart axis
  double chart_extent = 2.0;  // flat leaf charts
  double polar_margin = 0.4;  // keeps polar-angle stencils off the axis
  double seam_exclusion = 1e-3;
  double perturb = 0.0;  // height noise amplitude for negative controls
};

// Verification sites on a graph, parametrized by meridian arc length cross
// scaled chart offsets. Centers with rho within seam_exclusion of 1 are
// flagged and skipped by the report; the verticality check covers them.
inline std::vector<OracleSample> graph_flat_samples(const Profile& pr, const OracleGrid& grid = {}) {
  const FamilySpec& fs = pr.family;
  bool trunc = false;
  // Verification span stops where rho, and with it the curvature, drops
  // below what central differences can resolve; the mesh exporters keep
  // their much deeper tail.
  const Interval er = pr.export_range(1e-2, 25.0, 0.0, &trunc);
  const double span = er.length();
  const bool pole = fs.kind == FamilyKind::SphereSpherical || fs.kind == FamilyKind::SphereHyperbolic;
  const double margin_lo = pr.seam_lo ? 0.0 : (pole ? 0.05 * span : 0.01 * span);
  const double margin_hi = (pr.seam_hi && !trunc) ? 0.0 : 0.01 * span;
  const std::vector<Vec> charts =
      detail::oracle_chart_grid(fs, grid.chart_samples, grid.chart_extent, grid.polar_margin);

  std::vector<OracleSample> sites;
  sites.reserve(static_cast<std::size_t>(grid.s_samples) * charts.size());
  for (int i = 0; i < grid.s_samples; ++i) {
    // the i = N-1 product can land one ulp past the interval end
    const double sc = std::min(er.lo + margin_lo +
                                   (span - margin_lo - margin_hi) * i / (grid.s_samples - 1),
                               er.hi - margin_hi);
    const bool near = pr.rho(sc) >= 1.0 - grid.seam_exclusion;
    for (const Vec& yc : charts) {
      OracleSample site;
      site.s = sc;
      site.chart = yc;
      site.near_seam = near;
      site.analytic_k = grid.perturb == 0.0 ? pr.drho(sc)
                                            : std::numeric_limits<double>::quiet_NaN();
      if (!near) {
        const GraphPoint gp = eval_graph(pr, sc, yc);
        site.ref_normal = gp.normal;
      }
      const Vec d = detail::chart_scales(fs, sc, yc);
      const double amp = grid.perturb;
      site.immersion = [pr, fs, sc, yc, d, amp](const Vec& u) {
        const double su = detail::meridian_s(pr, sc, u[0]);
        Vec yu = yc;
        for (int j = 0; j < d.size(); ++j) yu[j] += d[j] * u[j + 1];
        const ModelPoint p = eval_family(fs, su, yu);
        Vec x(p.x.size() + 1);
        x.head(p.x.size()) = p.x;
        double t = pr.phi(su);
        if (amp != 0.0) t += amp * std::sin(3.0 * su + 2.0 * yu.sum());
        x[p.x.size()] = t;
        return x;
      };
      sites.push_back(std::move(site));
    }
  }
  return sites;
}

// Sites on one leaf of the family, treated as a hypersurface of the model
// alone (no height factor). Pins the orientation convention: eigenvalues
// must come out equal to lambda(s) with respect to the transit direction.
inline std::vector<OracleSample> leaf_samples(const FamilySpec& fs, double s0,
                                              const OracleGrid& grid = {}) {
  const std::vector<Vec> charts =
      detail::oracle_chart_grid(fs, grid.chart_samples, grid.chart_extent, grid.polar_margin);
  std::vector<OracleSample> sites;
  sites.reserve(charts.size());
  for (const Vec& yc : charts) {
    OracleSample site;
    site.s = s0;
    site.chart = yc;
    site.analytic_k = lambda_of(fs, s0);
    site.ref_normal = family_normal(fs, s0, yc);
    const Vec d = detail::chart_scales(fs, s0, yc);
    site.immersion = [fs, s0, yc, d](const Vec& u) {
      Vec yu = yc;
      for (int j = 0; j < d.size(); ++j) yu[j] += d[j] * u[j];
      return eval_family(fs, s0, yu).x;
    };
    sites.push_back(std::move(site));
  }
  return sites;
}

// Horizontal section Q x {t}: totally geodesic, eigenvalues 0.
inline std::vector<OracleSample> horizontal_section_samples(SpaceForm sf, int n, double height,
                                                            const OracleGrid& grid = {}) {
  const FamilySpec fs =
      make_family(sf == SpaceForm::Sphere ? FamilyKind::SphereSpherical : FamilyKind::SphereHyperbolic, n);
  const std::vector<Vec> charts =
      detail::oracle_chart_grid(fs, grid.chart_samples, grid.chart_extent, grid.polar_margin);
  std::vector<OracleSample> sites;
  const int m = grid.s_samples;
  for (int i = 0; i < m; ++i) {
    const double sc = 0.3 + (1.2 - 0.3) * i / std::max(1, m - 1);
    for (const Vec& yc : charts) {
      OracleSample site;
      site.s = sc;
      site.chart = yc;
      site.analytic_k = 0.0;
      Vec ref = Vec::Zero(n + 2);
      ref[n + 1] = 1.0;
      site.ref_normal = ref;
      const Vec d = detail::chart_scales(fs, sc, yc);
      site.immersion = [fs, sc, yc, d, n, height](const Vec& u) {
        Vec yu = yc;
        for (int j = 0; j < d.size(); ++j) yu[j] += d[j] * u[j + 1];
        const ModelPoint p = eval_family(fs, sc + u[0], yu);
        Vec x(n + 2);
        x.head(n + 1) = p.x;
        x[n + 1] = height;
        return x;
      };
      sites.push_back(std::move(site));
    }
  }
  return sites;
}

// Vertical cylinder over the equidistant s = 0 leaf: totally geodesic and
// constant angle Theta = 0.
inline std::vector<OracleSample> cylinder_samples(int n, const OracleGrid& grid = {}) {
  const FamilySpec fs = make_family(FamilyKind::Equidistant, n);
  const std::vector<Vec> charts =
      detail::oracle_chart_grid(fs, grid.chart_samples, grid.chart_extent, grid.polar_margin);
  std::vector<OracleSample> sites;
  for (int i = 0; i < grid.s_samples; ++i) {
    const double tc = -1.0 + 2.0 * i / std::max(1, grid.s_samples - 1);
    for (const Vec& yc : charts) {
      OracleSample site;
      site.s = 0.0;
      site.chart = yc;
      site.analytic_k = 0.0;
      Vec ref(n + 2);
      ref.head(n + 1) = fs.e;
      ref[n + 1] = 0.0;
      site.ref_normal = ref;
      const Vec d = detail::chart_scales(fs, 0.0, yc);
      site.immersion = [fs, tc, yc, d, n](const Vec& u) {
        Vec yu = yc;
        for (int j = 0; j < d.size(); ++j) yu[j] += d[j] * u[j + 1];
        const ModelPoint p = eval_family(fs, 0.0, yu);
        Vec x(n + 2);
        x.head(n + 1) = p.x;
        x[n + 1] = tc + u[0];
        return x;
      };
      sites.push_back(std::move(site));
    }
  }
  return sites;
}

// metric of Q x R (omega = 1) in family chart coordinates (s, y, t)
inline MetricFn product_metric(const FamilySpec& fs) {
  return [fs](const Vec& z) {
    const int m = fs.n + 1;
    Mat G = Mat::Zero(m, m);
    G(0, 0) = 1.0;
    const double ms = leaf_scale(fs, z[0]);
    const Mat gh = chart_fiber_metric(fs, z.segment(1, fs.chart_dim()));
    G.block(1, 1, fs.chart_dim(), fs.chart_dim()) = ms * ms * gh;
    G(m - 1, m - 1) = 1.0;
    return G;
  };
}

// metric of the warped product in the same coordinates: dt^2 + omega(t)^2 g
inline MetricFn warped_metric(const FamilySpec& fs, const Warp& w) {
  return [fs, w](const Vec& z) {
    const int m = fs.n + 1;
    const double om = w.omega(z[m - 1]);
    Mat G = Mat::Zero(m, m);
    G(0, 0) = om * om;
    const double ms = leaf_scale(fs, z[0]);
    const Mat gh = chart_fiber_metric(fs, z.segment(1, fs.chart_dim()));
    G.block(1, 1, fs.chart_dim(), fs.chart_dim()) = om * om * ms * ms * gh;
    G(m - 1, m - 1) = 1.0;
    return G;
  };
}

// Chart-coordinate sites on the warped image of one graph piece
// t = F_inv(sgn phi(s) + tau). Centers whose product height leaves J are
// dropped; near-seam centers are flagged as in the flat case.
inline std::vector<OracleSample> warped_graph_chart_samples(const Profile& pr, const Warp& w,
                                                            double sgn, double tau,
                                                            const OracleGrid& grid = {}) {
  const FamilySpec& fs = pr.family;
  bool trunc = false;
  // same verification floor as the flat sampler: the tail leaf scale
  // degrades the chart metric conditioning
  const Interval er = pr.export_range(1e-2, 25.0, 0.0, &trunc);
  const double span = er.length();
  const bool pole = fs.kind == FamilyKind::SphereSpherical || fs.kind == FamilyKind::SphereHyperbolic;
  const double margin_lo = pr.seam_lo ? 0.0 : (pole ? 0.05 * span : 0.01 * span);
  const double margin_hi = (pr.seam_hi && !trunc) ? 0.0 : 0.01 * span;
  const std::vector<Vec> charts =
      detail::oracle_chart_grid(fs, grid.chart_samples, grid.chart_extent, grid.polar_margin);
  const double j_margin = 10.0 * 1e-3;

  std::vector<OracleSample> sites;
  for (int i = 0; i < grid.s_samples; ++i) {
    const double sc = std::min(er.lo + margin_lo +
                                   (span - margin_lo - margin_hi) * i / (grid.s_samples - 1),
                               er.hi - margin_hi);
    const double u_prod = sgn * pr.phi(sc) + tau;
    if (!(u_prod > w.J.lo + j_margin && u_prod < w.J.hi - j_margin)) continue;
    const double twc = w.F_inv(u_prod);
    const bool near = pr.rho(sc) >= 1.0 - grid.seam_exclusion;
    const double omc = w.omega(twc);
    for (const Vec& yc : charts) {
      OracleSample site;
      site.s = sc;
      site.chart = yc;
      site.near_seam = near;
      Vec ref = Vec::Zero(fs.n + 1);
      ref[0] = -sgn * pr.rho(sc) / omc;
      ref[fs.n] = pr.theta(sc);
      site.ref_normal = ref;
      const Vec d = detail::chart_scales(fs, sc, yc, omc);
      site.immersion = [pr, w, sgn, sc, twc, yc, d](const Vec& u) {
        double su = 0.0, tu = 0.0;
        detail::warped_meridian(pr, w, sgn, sc, twc, u[0], su, tu);
        Vec z(pr.family.n + 1);
        z[0] = su;
        for (int j = 0; j < d.size(); ++j) z[j + 1] = yc[j] + d[j] * u[j + 1];
        z[pr.family.n] = tu;
        return z;
      };
      sites.push_back(std::move(site));
    }
  }
  return sites;
}

// Vertical leaf {t} x Q inside the warped product: umbilical with value
// omega'(t)/omega(t) relative to the downward reference -dt.
inline std::vector<OracleSample> warped_leaf_chart_samples(const FamilySpec& fs, const Warp& w,
                                                           double t_leaf,
                                                           const OracleGrid& grid = {}) {
  const std::vector<Vec> charts =
      detail::oracle_chart_grid(fs, grid.chart_samples, grid.chart_extent, grid.polar_margin);
  const double omc = w.omega(t_leaf);
  std::vector<OracleSample> sites;
  for (int i = 0; i < grid.s_samples; ++i) {
    const double sc = 0.3 + (1.2 - 0.3) * i / std::max(1, grid.s_samples - 1);
    for (const Vec& yc : charts) {
      OracleSample site;
      site.s = sc;
      site.chart = yc;
      site.analytic_k = w.domega(t_leaf) / omc;
      Vec ref = Vec::Zero(fs.n + 1);
      ref[fs.n] = -1.0;
      site.ref_normal = ref;
      const Vec d = detail::chart_scales(fs, sc, yc, omc);
      site.immersion = [fs, t_leaf, sc, yc, d, omc](const Vec& u) {
        Vec z(fs.n + 1);
        z[0] = sc + u[0] / omc;
        for (int j = 0; j < d.size(); ++j) z[j + 1] = yc[j] + d[j] * u[j + 1];
        z[fs.n] = t_leaf;
        return z;
      };
      sites.push_back(std::move(site));
    }
  }
  return sites;
}

// Residual of the meridian direction T as an eigenvector of the numerical
// shape operator with the analytic eigenvalue. T must be nonzero, i.e. the
// point must not be horizontal.
inline double t_principal_direction_check(const Profile& pr, const GraphPoint& gp,
                                          double h = 1e-3) {
  const FamilySpec& fs = pr.family;
  const double t_norm2 = product_inner(fs.space, gp.T, gp.T);
  if (!(t_norm2 > 1e-16)) throw verify_error("horizontal point: T vanishes");

  const Vec yc = gp.chart;
  const double sc = gp.s;
  const Vec d = detail::chart_scales(fs, sc, yc);
  SurfaceFn immersion = [pr, fs, sc, yc, d](const Vec& u) {
    const double su = detail::meridian_s(pr, sc, u[0]);
    Vec yu = yc;
    for (int j = 0; j < d.size(); ++j) yu[j] += d[j] * u[j + 1];
    const ModelPoint p = eval_family(fs, su, yu);
    Vec x(p.x.size() + 1);
    x.head(p.x.size()) = p.x;
    x[p.x.size()] = pr.phi(su);
    return x;
  };
  const FlatAmbient amb = product_ambient(fs.space, fs.n);
  const ShapeResult r = shape_operator_flat(amb, immersion, fs.n, h, gp.normal);

  Vec b(fs.n);
  for (int a = 0; a < fs.n; ++a) b[a] = amb.inner(gp.T, r.tangents.col(a));
  const Vec alpha = r.first.ldlt().solve(b);
  const double kn = gp.curvatures[gp.curvatures.size() - 1];
  const Vec resid = r.shape * alpha - kn * alpha;
  const double num = std::sqrt(std::max(0.0, resid.dot(r.first * resid)));
  const double den = std::sqrt(std::max(0.0, alpha.dot(r.first * alpha)));
  if (!(den > 1e-8)) throw verify_error("horizontal point: T vanishes");
  return num / den;
}

}  // namespace umbilic
