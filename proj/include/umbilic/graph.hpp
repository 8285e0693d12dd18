#pragma once

#include <cmath>

#include "umbilic/profile.hpp"

namespace umbilic {

// Ambient points and vectors of the product (space form) x R are stored as
// n+2 coordinates: the flat model coordinates followed by the height t.
inline double product_inner(SpaceForm sf, const Vec& u, const Vec& v) {
  const int m = static_cast<int>(u.size()) - 1;
  double dot = u.head(m).dot(v.head(m));
  if (sf == SpaceForm::Hyperbolic) dot -= 2.0 * u[0] * v[0];
  return dot + u[m] * v[m];
}

struct ProductPoint {
  ModelPoint base;
  double t = 0.0;
};

// One evaluated point of the graph {(f_s(y), phi(s))}: position, unit
// normal, angle function, height gradient T, and the (all equal) principal
// curvatures. Vectors normal and T live in the n+2 ambient coordinates.
struct GraphPoint {
  ModelPoint base;
  double t = 0.0;
  Vec normal;
  double theta = 1.0;
  Vec T;
  Vec curvatures;
  double s = 0.0;
  Vec chart;
  double rho = 0.0;
};

// All principal curvatures of the graph equal rho' = -lambda rho; the
// meridian direction contributes rho' directly and the leaf directions
// contribute -rho lambda, which the defining equation makes the same number.
inline Vec analytic_curvatures(const Profile& pr, double s) {
  return Vec::Constant(pr.family.n, pr.drho(s));
}

// Evaluates the graph at leaf parameter s and leaf chart point y.
// The two sphere kinds degenerate at s = 0 to the family center with a
// vertical normal; seam parameters (rho = 1) are allowed and produce the
// exact horizontal-normal row used for gluing.
inline GraphPoint eval_graph(const Profile& pr, double s, const Vec& y) {
  const FamilySpec& fs = pr.family;
  if (!fs.has_model()) throw invalid_spec("custom family: no graph realization");
  pr.require_in(s);
  GraphPoint g;
  g.s = s;
  g.chart = y;
  g.curvatures = analytic_curvatures(pr, s);
  g.t = pr.phi(s);

  const bool at_pole = (fs.kind == FamilyKind::SphereSpherical ||
                        fs.kind == FamilyKind::SphereHyperbolic) &&
                       s <= pr.s_range.lo;
  if (at_pole) {
    g.base = ModelPoint(fs.space, fs.o);
    g.rho = 0.0;
    g.theta = 1.0;
    g.normal = Vec::Zero(fs.n + 2);
    g.normal[fs.n + 1] = 1.0;
    g.T = Vec::Zero(fs.n + 2);
    return g;
  }

  const bool at_seam = (pr.seam_hi && s >= pr.s_range.hi) || (pr.seam_lo && s <= pr.s_range.lo);
  g.base = eval_family(fs, s, y);
  const Vec eta = family_normal(fs, s, y);
  g.rho = at_seam ? 1.0 : pr.rho(s);
  g.theta = at_seam ? 0.0 : pr.theta(s);

  g.normal = Vec::Zero(fs.n + 2);
  g.normal.head(fs.n + 1) = -g.rho * eta;
  g.normal[fs.n + 1] = g.theta;

  // T = dt - theta N, the gradient of the height function on the graph
  g.T = Vec::Zero(fs.n + 2);
  g.T.head(fs.n + 1) = g.theta * g.rho * eta;
  g.T[fs.n + 1] = 1.0 - g.theta * g.theta;
  return g;
}

}  // namespace umbilic
