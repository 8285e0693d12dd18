#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "umbilic/interpolant.hpp"
#include "umbilic/spaceform.hpp"
#include "umbilic/util.hpp"

namespace umbilic {

// Parallel families of equidistant leaves, indexed by a signed distance s.
// Each geometric kind fixes the ambient space form, the transit direction,
// and the common principal curvature lambda(s) of the leaf at distance s
// with respect to the unit normal eta_s pointing in the direction of
// increasing s. Custom tables carry lambda only and have no point evaluation.
enum class FamilyKind {
  SphereSpherical,   // concentric geodesic spheres about a point of S^n
  SphereHyperbolic,  // concentric geodesic spheres about a point of H^n
  Horosphere,        // concentric horospheres about an ideal point of H^n
  Equidistant,       // equidistants of a totally geodesic H^{n-1} in H^n
  CustomLambda,      // tabulated lambda(s), no model realization
};

inline const char* family_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::SphereSpherical: return "sphere-spherical";
    case FamilyKind::SphereHyperbolic: return "sphere-hyperbolic";
    case FamilyKind::Horosphere: return "horosphere";
    case FamilyKind::Equidistant: return "equidistant";
    case FamilyKind::CustomLambda: return "custom";
  }
  return "?";
}

inline FamilyKind parse_family(const std::string& s) {
  if (s == "sphere-spherical") return FamilyKind::SphereSpherical;
  if (s == "sphere-hyperbolic") return FamilyKind::SphereHyperbolic;
  if (s == "horosphere") return FamilyKind::Horosphere;
  if (s == "equidistant") return FamilyKind::Equidistant;
  if (s == "custom") return FamilyKind::CustomLambda;
  throw invalid_spec("unknown family kind '" + s + "'");
}

// Anchors and leaf chart frame for one family. The frame spans the leaf
// chart directions; anchors are the data the closed-form leaf maps need.
// The profile constant c is not part of the family; it selects one
// hypersurface over it and lives with the profile solver.
struct FamilySpec {
  FamilyKind kind = FamilyKind::SphereSpherical;
  SpaceForm space = SpaceForm::Sphere;
  int n = 2;               // ambient space form dimension
  Vec o;                   // base point on the quadric
  Vec ell;                 // null vector with <o,ell> = -1 (horosphere)
  Vec e;                   // unit spacelike axis with <o,e> = 0 (equidistant)
  std::vector<Vec> frame;  // orthonormal chart frame, see eval_family
  MonotoneCubic lambda_table;  // CustomLambda only
  Interval s_range{0.0, 0.0};  // admissible leaf parameters

  int chart_dim() const { return n - 1; }
  bool has_model() const { return kind != FamilyKind::CustomLambda; }
};

// Canonical anchors: o on the coordinate axis 0, transit axis on the last
// coordinate, chart frame from the kernel of the anchor constraints.
inline FamilySpec make_family(FamilyKind kind, int n) {
  if (kind == FamilyKind::CustomLambda) {
    throw invalid_spec("make_family: custom tables are built from samples, not anchors");
  }
  if (n < 2) throw invalid_spec("make_family: ambient dimension must be at least 2");
  FamilySpec fs;
  fs.kind = kind;
  fs.n = n;
  fs.space = (kind == FamilyKind::SphereSpherical) ? SpaceForm::Sphere : SpaceForm::Hyperbolic;
  Vec o = Vec::Zero(n + 1);
  o[0] = 1.0;
  fs.o = o;
  switch (kind) {
    case FamilyKind::SphereSpherical:
      fs.frame = orthonormal_complement(fs.space, {o}, n);
      // profiles only ever use the near hemisphere; seam parameters satisfy
      // a <= pi/2, so the far cap is out of bounds by construction
      fs.s_range = Interval{0.0, 0.5 * kPi};
      break;
    case FamilyKind::SphereHyperbolic:
      fs.frame = orthonormal_complement(fs.space, {o}, n);
      fs.s_range = Interval{0.0, kInf};
      break;
    case FamilyKind::Horosphere: {
      Vec u = Vec::Zero(n + 1);
      u[n] = 1.0;
      fs.ell = o + u;  // null, <o,ell> = -1
      fs.frame = orthonormal_complement(fs.space, {o, fs.ell}, n - 1);
      fs.s_range = Interval{-kInf, kInf};
      break;
    }
    case FamilyKind::Equidistant: {
      Vec e = Vec::Zero(n + 1);
      e[n] = 1.0;
      fs.e = e;
      fs.frame = orthonormal_complement(fs.space, {o, e}, n - 1);
      fs.s_range = Interval{-kInf, kInf};
      break;
    }
    case FamilyKind::CustomLambda:
      break;
  }
  return fs;
}

inline FamilySpec make_custom_family(std::vector<double> s, std::vector<double> lambda) {
  FamilySpec fs;
  fs.kind = FamilyKind::CustomLambda;
  fs.n = 0;
  fs.lambda_table = MonotoneCubic(std::move(s), std::move(lambda));
  fs.s_range = Interval{fs.lambda_table.x_front(), fs.lambda_table.x_back()};
  return fs;
}

inline void require_in_range(const FamilySpec& fs, double s) {
  // geometric kinds degenerate at the range ends; tabulated kinds are
  // trustworthy on the closed table range
  const bool ok = fs.kind == FamilyKind::CustomLambda
                      ? (s >= fs.s_range.lo && s <= fs.s_range.hi)
                      : (s > fs.s_range.lo && s < fs.s_range.hi);
  if (!ok) {
    throw invalid_spec(std::string(family_name(fs.kind)) + ": leaf parameter " + format_sci(s) +
                       " outside the family range");
  }
}

// Common principal curvature of the leaf at distance s, with respect to the
// unit normal eta_s of increasing s. Sign fixed by the first variation of
// the leaf metric: d/ds g_s = -2 lambda g_s.
inline double lambda_of(const FamilySpec& fs, double s) {
  require_in_range(fs, s);
  switch (fs.kind) {
    case FamilyKind::SphereSpherical: return -1.0 / std::tan(s);
    case FamilyKind::SphereHyperbolic: return -1.0 / std::tanh(s);
    case FamilyKind::Horosphere: return 1.0;
    case FamilyKind::Equidistant: return -std::tanh(s);
    case FamilyKind::CustomLambda: return fs.lambda_table(s);
  }
  return 0.0;
}

// Scale factor of the leaf metric: g_s = leaf_scale(s)^2 * ghat on the chart.
inline double leaf_scale(const FamilySpec& fs, double s) {
  switch (fs.kind) {
    case FamilyKind::SphereSpherical: return std::sin(s);
    case FamilyKind::SphereHyperbolic: return std::sinh(s);
    case FamilyKind::Horosphere: return std::exp(-s);
    case FamilyKind::Equidistant: return std::cosh(s);
    case FamilyKind::CustomLambda:
      throw invalid_spec("custom family: no leaf geometry");
  }
  return 0.0;
}

namespace detail {

// Polar chart on the unit sphere of the frame span: n-1 angles for a frame
// of n vectors.
inline Vec polar_direction(const std::vector<Vec>& frame, const Vec& theta) {
  const int m = static_cast<int>(frame.size());
  if (static_cast<int>(theta.size()) != m - 1) {
    throw invalid_spec("family chart: expected " + std::to_string(m - 1) + " angles");
  }
  Vec u = Vec::Zero(frame.front().size());
  double run = 1.0;  // product of sines of the earlier angles
  for (int i = 0; i < m - 1; ++i) {
    u += run * std::cos(theta[i]) * frame[static_cast<std::size_t>(i)];
    run *= std::sin(theta[i]);
  }
  u += run * frame[static_cast<std::size_t>(m - 1)];
  return u;
}

}  // namespace detail

// Leaf map f_s on the chart. Charts: both sphere kinds take polar angles on
// the unit sphere of the frame; the horosphere kind uses the parabolic chart
// b(xi) = o + xi.w + (|xi|^2/2) ell of the s = 0 horosphere; the equidistant
// kind uses the graph chart p(xi) = sqrt(1+|xi|^2) o + xi.w of the core
// totally geodesic H^{n-1}.
inline ModelPoint eval_family(const FamilySpec& fs, double s, const Vec& y) {
  if (!fs.has_model()) throw invalid_spec("custom family: no point evaluation");
  require_in_range(fs, s);
  switch (fs.kind) {
    case FamilyKind::SphereSpherical: {
      const Vec u = detail::polar_direction(fs.frame, y);
      return ModelPoint(fs.space, std::cos(s) * fs.o + std::sin(s) * u);
    }
    case FamilyKind::SphereHyperbolic: {
      const Vec u = detail::polar_direction(fs.frame, y);
      return ModelPoint(fs.space, std::cosh(s) * fs.o + std::sinh(s) * u);
    }
    case FamilyKind::Horosphere: {
      if (static_cast<int>(y.size()) != fs.chart_dim()) {
        throw invalid_spec("family chart: expected " + std::to_string(fs.chart_dim()) + " coordinates");
      }
      Vec b = fs.o + 0.5 * y.squaredNorm() * fs.ell;
      for (int i = 0; i < fs.chart_dim(); ++i) b += y[i] * fs.frame[static_cast<std::size_t>(i)];
      return ModelPoint(fs.space, std::exp(-s) * b + std::sinh(s) * fs.ell);
    }
    case FamilyKind::Equidistant: {
      if (static_cast<int>(y.size()) != fs.chart_dim()) {
        throw invalid_spec("family chart: expected " + std::to_string(fs.chart_dim()) + " coordinates");
      }
      Vec p = std::sqrt(1.0 + y.squaredNorm()) * fs.o;
      for (int i = 0; i < fs.chart_dim(); ++i) p += y[i] * fs.frame[static_cast<std::size_t>(i)];
      return ModelPoint(fs.space, std::cosh(s) * p + std::sinh(s) * fs.e);
    }
    case FamilyKind::CustomLambda:
      break;
  }
  throw invalid_spec("eval_family: unreachable");
}

// Unit normal of the leaf at f_s(y), pointing toward increasing s. Equals
// the s-derivative of the leaf map, which is already unit because the chart
// point rides a unit-speed geodesic crossing every leaf orthogonally.
inline Vec family_normal(const FamilySpec& fs, double s, const Vec& y) {
  if (!fs.has_model()) throw invalid_spec("custom family: no normal field");
  require_in_range(fs, s);
  switch (fs.kind) {
    case FamilyKind::SphereSpherical: {
      const Vec u = detail::polar_direction(fs.frame, y);
      return -std::sin(s) * fs.o + std::cos(s) * u;
    }
    case FamilyKind::SphereHyperbolic: {
      const Vec u = detail::polar_direction(fs.frame, y);
      return std::sinh(s) * fs.o + std::cosh(s) * u;
    }
    case FamilyKind::Horosphere: {
      Vec b = fs.o + 0.5 * y.squaredNorm() * fs.ell;
      for (int i = 0; i < fs.chart_dim(); ++i) b += y[i] * fs.frame[static_cast<std::size_t>(i)];
      return -std::exp(-s) * b + std::cosh(s) * fs.ell;
    }
    case FamilyKind::Equidistant: {
      Vec p = std::sqrt(1.0 + y.squaredNorm()) * fs.o;
      for (int i = 0; i < fs.chart_dim(); ++i) p += y[i] * fs.frame[static_cast<std::size_t>(i)];
      return std::sinh(s) * p + std::cosh(s) * fs.e;
    }
    case FamilyKind::CustomLambda:
      break;
  }
  throw invalid_spec("family_normal: unreachable");
}

// Conserved pairing that labels the leaf containing a point.
inline double level_value(const FamilySpec& fs, const Vec& x) {
  switch (fs.kind) {
    case FamilyKind::SphereSpherical: return model_inner(fs.space, x, fs.o);
    case FamilyKind::SphereHyperbolic: return model_inner(fs.space, x, fs.o);
    case FamilyKind::Horosphere: return model_inner(fs.space, x, fs.ell);
    case FamilyKind::Equidistant: return model_inner(fs.space, x, fs.e);
    case FamilyKind::CustomLambda:
      throw invalid_spec("custom family: no level function");
  }
  return 0.0;
}

// Value level_value must take on the leaf at parameter s.
inline double level_target(const FamilySpec& fs, double s) {
  switch (fs.kind) {
    case FamilyKind::SphereSpherical: return std::cos(s);
    case FamilyKind::SphereHyperbolic: return -std::cosh(s);
    case FamilyKind::Horosphere: return -std::exp(-s);
    case FamilyKind::Equidistant: return std::sinh(s);
    case FamilyKind::CustomLambda:
      throw invalid_spec("custom family: no level function");
  }
  return 0.0;
}

// Bundled evaluation of one leaf point: position, transit normal, and the
// common principal curvature of the leaf there.
struct FamilyPointEval {
  ModelPoint point;
  Vec normal;
  double lambda = 0.0;
};

inline FamilyPointEval eval_family_full(const FamilySpec& fs, double s, const Vec& y) {
  return FamilyPointEval{eval_family(fs, s, y), family_normal(fs, s, y), lambda_of(fs, s)};
}

// Leaves are umbilical: every principal curvature equals lambda_of.
inline Vec principal_curvatures_of_leaf(const FamilySpec& fs, double s) {
  return Vec::Constant(fs.chart_dim(), lambda_of(fs, s));
}

// Metric ghat of the chart fiber, so that the leaf metric is
// leaf_scale(s)^2 * ghat(y). Polar charts give the round metric in polar
// angles, the parabolic chart is flat, the graph chart carries the induced
// H^{n-1} metric.
inline Mat chart_fiber_metric(const FamilySpec& fs, const Vec& y) {
  const int m = fs.chart_dim();
  Mat g = Mat::Zero(m, m);
  switch (fs.kind) {
    case FamilyKind::SphereSpherical:
    case FamilyKind::SphereHyperbolic: {
      double run = 1.0;
      for (int i = 0; i < m; ++i) {
        g(i, i) = run;
        run *= std::sin(y[i]) * std::sin(y[i]);
      }
      break;
    }
    case FamilyKind::Horosphere:
      g = Mat::Identity(m, m);
      break;
    case FamilyKind::Equidistant: {
      g = Mat::Identity(m, m) - y * y.transpose() / (1.0 + y.squaredNorm());
      break;
    }
    case FamilyKind::CustomLambda:
      throw invalid_spec("custom family: no leaf geometry");
  }
  return g;
}

}  // namespace umbilic
