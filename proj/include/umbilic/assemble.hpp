#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "umbilic/graph.hpp"

namespace umbilic {

enum class Topology { BallLike, SphereLike, AnnulusLike, PeriodicPlaneLike };
enum class SymmetryClass { Elliptic, Parabolic, Hyperbolic };

inline const char* topology_name(Topology t) {
  switch (t) {
    case Topology::BallLike: return "ball";
    case Topology::SphereLike: return "sphere";
    case Topology::AnnulusLike: return "annulus";
    case Topology::PeriodicPlaneLike: return "periodic-plane";
  }
  return "?";
}

inline const char* symmetry_name(SymmetryClass s) {
  switch (s) {
    case SymmetryClass::Elliptic: return "elliptic";
    case SymmetryClass::Parabolic: return "parabolic";
    case SymmetryClass::Hyperbolic: return "hyperbolic";
  }
  return "?";
}

struct AssembleOptions {
  int s_samples = 48;        // profile rows, before exact seam rows are added
  int chart_samples = 32;    // per chart axis
  double chart_extent = 3.0; // half-width of the box for flat leaf charts
  int k_range = 2;           // periodic copies on each side of the fundamental piece
  double rho_floor = 1e-6;   // truncation threshold for decaying rho
  double phi_cap = 25.0;     // truncation threshold for unbounded height
  double s_cut = 0.0;        // explicit truncation override (0 = automatic)
};

// Sampled fundamental graph piece. Rows follow s; the seam rows carry the
// exact rho = 1 / theta = 0 values so reflected copies meet bit-identically.
// Interior rows next to a seam stop 1e-9 of the range short of it, since
// phi' is singular there.
struct GraphPatch {
  Profile profile;
  std::vector<double> s_rows;
  std::vector<Vec> chart_cols;
  std::vector<GraphPoint> points;  // row-major over (s_rows, chart_cols)
  bool seam_row_lo = false;
  bool seam_row_hi = false;
  bool pole_row_lo = false;
  bool truncated_hi = false;

  int rows() const { return static_cast<int>(s_rows.size()); }
  int cols() const { return static_cast<int>(chart_cols.size()); }
  const GraphPoint& at(int i, int j) const {
    return points[static_cast<std::size_t>(i) * static_cast<std::size_t>(chart_cols.size()) +
                  static_cast<std::size_t>(j)];
  }
};

// Height-affine copy of the fundamental patch: t -> sigma t + tau.
struct Piece {
  double sigma = 1.0;
  double tau = 0.0;
};

inline double piece_height(const Piece& p, double t) { return p.sigma * t + p.tau; }

// Pushforward of an ambient vector under the reflection: only the height
// component changes sign.
inline Vec piece_vector(const Piece& p, Vec v) {
  v[v.size() - 1] *= p.sigma;
  return v;
}

struct AssembledHypersurface {
  GraphPatch patch;
  std::vector<Piece> pieces;
  Topology topology = Topology::BallLike;
  SymmetryClass symmetry = SymmetryClass::Elliptic;
  bool has_vertical_diameter = false;
  double vertical_diameter = 0.0;
  bool has_slab = false;
  Interval slab{0.0, 0.0};
  bool has_period = false;
  double period = 0.0;
  std::vector<double> symmetry_planes;
  bool truncated = false;
  double t_min = 0.0;
  double t_max = 0.0;
};

namespace detail {

inline std::vector<Vec> chart_grid(const FamilySpec& fs, int per_axis, double extent) {
  const int m = fs.chart_dim();
  std::vector<std::vector<double>> axes(static_cast<std::size_t>(m));
  const bool polar = fs.kind == FamilyKind::SphereSpherical || fs.kind == FamilyKind::SphereHyperbolic;
  for (int j = 0; j < m; ++j) {
    std::vector<double>& ax = axes[static_cast<std::size_t>(j)];
    ax.resize(static_cast<std::size_t>(per_axis));
    if (polar && j == m - 1) {
      // final polar angle wraps; sample the half-open circle
      for (int i = 0; i < per_axis; ++i) ax[static_cast<std::size_t>(i)] = 2.0 * kPi * i / per_axis;
    } else if (polar) {
      for (int i = 0; i < per_axis; ++i) ax[static_cast<std::size_t>(i)] = kPi * i / (per_axis - 1);
    } else {
      for (int i = 0; i < per_axis; ++i) {
        ax[static_cast<std::size_t>(i)] = -extent + 2.0 * extent * i / (per_axis - 1);
      }
    }
  }
  std::vector<Vec> cols;
  std::size_t total = 1;
  for (const auto& ax : axes) total *= ax.size();
  cols.reserve(total);
  std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Vec y(m);
    std::size_t rem = flat;
    for (int j = m - 1; j >= 0; --j) {
      const std::size_t nj = axes[static_cast<std::size_t>(j)].size();
      y[j] = axes[static_cast<std::size_t>(j)][rem % nj];
      rem /= nj;
    }
    cols.push_back(y);
  }
  return cols;
}

}  // namespace detail

inline GraphPatch sample_patch(const Profile& pr, const AssembleOptions& opt = {}) {
  if (!pr.family.has_model()) {
    throw invalid_spec("custom family: profile only, nothing to sample");
  }
  if (opt.s_samples < 2) throw invalid_spec("need at least two profile rows");
  GraphPatch patch;
  patch.profile = pr;
  bool trunc = false;
  const Interval er = pr.export_range(opt.rho_floor, opt.phi_cap, opt.s_cut, &trunc);
  patch.truncated_hi = trunc;
  const double span = er.length();
  const double clamp_eps = 1e-9 * span;

  const bool pole = pr.family.kind == FamilyKind::SphereSpherical ||
                    pr.family.kind == FamilyKind::SphereHyperbolic;
  const bool seam_hi_here = pr.seam_hi && !trunc;
  std::vector<double> rows(static_cast<std::size_t>(opt.s_samples));
  for (int j = 0; j < opt.s_samples; ++j) {
    rows[static_cast<std::size_t>(j)] = er.lo + span * j / (opt.s_samples - 1);
  }
  if (pr.seam_lo) rows.front() = er.lo + clamp_eps;
  if (seam_hi_here) rows.back() = er.hi - clamp_eps;
  if (pr.seam_lo) {
    rows.insert(rows.begin(), er.lo);
    patch.seam_row_lo = true;
  }
  if (seam_hi_here) {
    rows.push_back(er.hi);
    patch.seam_row_hi = true;
  }
  patch.pole_row_lo = pole;
  patch.s_rows = rows;
  patch.chart_cols = detail::chart_grid(pr.family, opt.chart_samples, opt.chart_extent);

  const std::size_t n_rows = patch.s_rows.size();
  const std::size_t n_cols = patch.chart_cols.size();
  patch.points.resize(n_rows * n_cols);
  parallel_for(n_rows, [&](std::size_t i) {
    for (std::size_t j = 0; j < n_cols; ++j) {
      patch.points[i * n_cols + j] = eval_graph(pr, patch.s_rows[i], patch.chart_cols[j]);
    }
  });
  return patch;
}

// Glues reflected copies of the fundamental patch into the complete
// hypersurface and labels its topology and vertical symmetry.
inline AssembledHypersurface assemble(const Profile& pr, const AssembleOptions& opt = {}) {
  AssembledHypersurface h;
  h.patch = sample_patch(pr, opt);
  const double patch_t_lo = 0.0;
  const double patch_t_hi = pr.phi(h.patch.s_rows.back());

  switch (pr.family.kind) {
    case FamilyKind::SphereSpherical:
    case FamilyKind::SphereHyperbolic: {
      if (!pr.t0_attained) {
        // height diverges: single unclosed graph over a ball
        h.pieces = {Piece{1.0, 0.0}};
        h.topology = Topology::BallLike;
        h.symmetry = SymmetryClass::Elliptic;
        h.truncated = true;
        break;
      }
      h.pieces = {Piece{1.0, 0.0}, Piece{-1.0, 2.0 * pr.t0}};
      h.topology = Topology::SphereLike;
      h.symmetry = SymmetryClass::Elliptic;
      h.has_vertical_diameter = true;
      h.vertical_diameter = 2.0 * pr.t0;
      h.symmetry_planes = {pr.t0};
      break;
    }
    case FamilyKind::Horosphere: {
      h.pieces = {Piece{1.0, 0.0}, Piece{-1.0, 0.0}};
      h.topology = Topology::BallLike;
      h.symmetry = SymmetryClass::Parabolic;
      h.has_slab = true;
      h.slab = Interval{-0.5 * kPi, 0.5 * kPi};
      h.symmetry_planes = {0.0};
      h.truncated = true;
      break;
    }
    case FamilyKind::Equidistant: {
      const double p = pr.t0;  // height of one piece; period is twice this
      for (int k = -opt.k_range; k <= opt.k_range; ++k) {
        if (k % 2 == 0) {
          h.pieces.push_back(Piece{1.0, k * p});
        } else {
          h.pieces.push_back(Piece{-1.0, (k + 1) * p});
        }
      }
      h.topology = Topology::PeriodicPlaneLike;
      h.symmetry = SymmetryClass::Hyperbolic;
      h.has_period = true;
      h.period = 2.0 * p;
      for (int k = -opt.k_range; k <= opt.k_range + 1; ++k) {
        h.symmetry_planes.push_back(k * p);
      }
      break;
    }
    case FamilyKind::CustomLambda:
      throw invalid_spec("custom family: no assembled realization");
  }
  h.truncated = h.truncated || h.patch.truncated_hi;

  h.t_min = kInf;
  h.t_max = -kInf;
  for (const Piece& pc : h.pieces) {
    const double t1 = piece_height(pc, patch_t_lo);
    const double t2 = piece_height(pc, patch_t_hi);
    h.t_min = std::min(h.t_min, std::min(t1, t2));
    h.t_max = std::max(h.t_max, std::max(t1, t2));
  }
  return h;
}

// Angle function just short of a seam; the tangent spaces become vertical
// there, so this must be near zero. probe = 1e-6 of the profile range.
inline double boundary_verticality_check(const Profile& pr) {
  if (!pr.seam_lo && !pr.seam_hi) {
    throw invalid_spec("no seam endpoint: verticality check does not apply");
  }
  const double span = pr.s_range.length();
  const double probe = 1e-6 * (std::isfinite(span) ? span : 1.0);
  double worst = 0.0;
  if (pr.seam_hi) worst = std::max(worst, pr.theta(pr.s_range.hi - probe));
  if (pr.seam_lo) worst = std::max(worst, pr.theta(pr.s_range.lo + probe));
  return worst;
}

}  // namespace umbilic
