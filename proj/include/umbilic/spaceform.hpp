#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "umbilic/util.hpp"

namespace umbilic {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Curvature +1 model: unit sphere S^n in Euclidean R^{n+1}.
// Curvature -1 model: upper hyperboloid <x,x> = -1, x_0 > 0, in Lorentzian
// R^{n,1} with the time coordinate at index 0.
enum class SpaceForm { Sphere, Hyperbolic };

inline int curvature_sign(SpaceForm sf) { return sf == SpaceForm::Sphere ? +1 : -1; }

inline const char* space_name(SpaceForm sf) { return sf == SpaceForm::Sphere ? "s" : "h"; }

// Euclidean or Lorentzian pairing on model coordinates.
inline double model_inner(SpaceForm sf, const Vec& u, const Vec& v) {
  double dot = u.dot(v);
  if (sf == SpaceForm::Hyperbolic) dot -= 2.0 * u[0] * v[0];
  return dot;
}

// Projects raw coordinates back onto the quadric. Closed-form evaluations are
// renormalized through here so drift never accumulates across compositions.
inline Vec normalize_coords(SpaceForm sf, const Vec& raw) {
  const double q = model_inner(sf, raw, raw);
  if (sf == SpaceForm::Sphere) {
    if (!(q > 0.0)) throw invalid_spec("normalize: zero vector cannot be projected to the sphere");
    return raw / std::sqrt(q);
  }
  if (!(q < 0.0)) throw invalid_spec("normalize: vector is not timelike, cannot project to the hyperboloid");
  if (!(raw[0] > 0.0)) throw invalid_spec("normalize: point is not on the upper sheet (x_0 <= 0)");
  return raw / std::sqrt(-q);
}

// A point of the model quadric. Construction renormalizes, then enforces the
// quadric residual bound.
struct ModelPoint {
  SpaceForm space = SpaceForm::Sphere;
  Vec x;

  ModelPoint() = default;
  ModelPoint(SpaceForm sf, const Vec& coords) : space(sf), x(normalize_coords(sf, coords)) {
    const double res = std::fabs(model_inner(sf, x, x) - curvature_sign(sf));
    // evaluation of <x,x> itself carries ~|x|^2 * eps of roundoff
    const double floor_ = 20.0 * 2.2e-16 * x.squaredNorm();
    if (res > std::max(1e-10, floor_)) {
      throw invalid_spec("model point: quadric residual " + format_sci(res) + " too large");
    }
  }

  int dim() const { return static_cast<int>(x.size()) - 1; }
  double quadric_residual() const {
    return std::fabs(model_inner(space, x, x) - curvature_sign(space));
  }
};

// Removes the component of w normal to the quadric at p.
inline Vec project_tangent(SpaceForm sf, const Vec& p, const Vec& w) {
  // tangent space is the model-orthogonal complement of p; <p,p> = eps
  const double eps = curvature_sign(sf);
  return w - (model_inner(sf, w, p) / eps) * p;
}

inline void require_unit_tangent(SpaceForm sf, const Vec& p, const Vec& v, double tol = 1e-8) {
  if (std::fabs(model_inner(sf, v, v) - 1.0) > tol) {
    throw invalid_spec("geodesic: direction is not unit length");
  }
  if (std::fabs(model_inner(sf, v, p)) > tol) {
    throw invalid_spec("geodesic: direction is not tangent at the base point");
  }
}

// Unit-speed geodesic through p with initial velocity v.
inline ModelPoint geodesic(const ModelPoint& p, const Vec& v, double s) {
  require_unit_tangent(p.space, p.x, v);
  Vec raw;
  if (p.space == SpaceForm::Sphere) {
    raw = std::cos(s) * p.x + std::sin(s) * v;
  } else {
    raw = std::cosh(s) * p.x + std::sinh(s) * v;
  }
  return ModelPoint(p.space, raw);
}

// Velocity of the geodesic above at parameter s, projected back to the
// tangent space of the evaluated point.
inline Vec geodesic_velocity(const ModelPoint& p, const Vec& v, double s) {
  require_unit_tangent(p.space, p.x, v);
  Vec vel;
  if (p.space == SpaceForm::Sphere) {
    vel = -std::sin(s) * p.x + std::cos(s) * v;
  } else {
    vel = std::sinh(s) * p.x + std::cosh(s) * v;
  }
  const ModelPoint at = geodesic(p, v, s);
  Vec t = project_tangent(p.space, at.x, vel);
  const double n2 = model_inner(p.space, t, t);
  if (!(n2 > 0.0)) throw invalid_spec("geodesic_velocity: degenerate velocity");
  return t / std::sqrt(n2);
}

// Orthonormal (in the model metric) spacelike vectors spanning the
// model-orthogonal complement of `constraints`. Uses an SVD kernel basis,
// then metric Gram-Schmidt; lightlike constraints are handled since only the
// kernel equations involve them.
inline std::vector<Vec> orthonormal_complement(SpaceForm sf,
                                               const std::vector<Vec>& constraints,
                                               int count) {
  if (constraints.empty()) throw invalid_spec("orthonormal_complement: no constraints");
  const int n1 = static_cast<int>(constraints.front().size());
  Mat rows(static_cast<int>(constraints.size()), n1);
  for (int r = 0; r < rows.rows(); ++r) {
    Vec g = constraints[static_cast<std::size_t>(r)];
    if (sf == SpaceForm::Hyperbolic) g[0] = -g[0];
    rows.row(r) = g.transpose();
  }
  Eigen::JacobiSVD<Mat> svd(rows, Eigen::ComputeFullV);
  const int kdim = n1 - static_cast<int>(rows.rows());
  if (kdim < count) throw invalid_spec("orthonormal_complement: constraint set too large");
  std::vector<Vec> basis;
  for (int j = n1 - 1; j >= n1 - kdim && static_cast<int>(basis.size()) < count; --j) {
    Vec cand = svd.matrixV().col(j);
    for (const Vec& w : basis) cand -= model_inner(sf, cand, w) * w;
    const double n2 = model_inner(sf, cand, cand);
    if (n2 > 1e-12) basis.push_back(cand / std::sqrt(n2));
  }
  if (static_cast<int>(basis.size()) != count) {
    throw invalid_spec("orthonormal_complement: could not build a spacelike frame of the requested size");
  }
  return basis;
}

}  // namespace umbilic
