#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "umbilic/assemble.hpp"
#include "umbilic/interpolant.hpp"

namespace umbilic {

enum class WarpKind { Identity, ExpNeg, Constant, Cosh, Table };

inline const char* warp_name(WarpKind k) {
  switch (k) {
    case WarpKind::Identity: return "t";
    case WarpKind::ExpNeg: return "e^-t";
    case WarpKind::Constant: return "const";
    case WarpKind::Cosh: return "cosh";
    case WarpKind::Table: return "table";
  }
  return "?";
}

// Warping data: omega on the height interval I, together with the increasing
// height change F with F' = 1/omega and its image J = F(I). F is translated
// so that a finite J is centered at zero; the translation is kept in
// `offset`. delta is the half-width of J (inf when J is unbounded on either
// side, matching the convention that any bounded surface can be translated
// into an unbounded J).
struct Warp {
  WarpKind kind = WarpKind::Identity;
  double k = 1.0;  // Constant only
  Interval I{0.0, kInf};
  Interval J{-kInf, kInf};
  double delta = kInf;
  double offset = 0.0;        // raw accumulated height subtracted off (Table)
  MonotoneCubic omega_table;  // Table only
  MonotoneCubic inv_omega;    // Table only: interpolant of 1/omega

  bool table() const { return kind == WarpKind::Table; }

  double omega(double t) const {
    switch (kind) {
      case WarpKind::Identity: return t;
      case WarpKind::ExpNeg: return std::exp(-t);
      case WarpKind::Constant: return k;
      case WarpKind::Cosh: return std::cosh(t);
      case WarpKind::Table: return omega_table(t);
    }
    return 0.0;
  }

  double domega(double t) const {
    switch (kind) {
      case WarpKind::Identity: return 1.0;
      case WarpKind::ExpNeg: return -std::exp(-t);
      case WarpKind::Constant: return 0.0;
      case WarpKind::Cosh: return std::sinh(t);
      case WarpKind::Table: return omega_table.derivative(t);
    }
    return 0.0;
  }

  double F(double t) const {
    if (!(t > I.lo && t < I.hi)) throw invalid_spec("height outside the warped interval");
    switch (kind) {
      case WarpKind::Identity: return std::log(t);
      case WarpKind::ExpNeg: return std::exp(t);
      case WarpKind::Constant: return t / k;
      case WarpKind::Cosh: return 2.0 * std::atan(std::tanh(0.5 * t));
      case WarpKind::Table: return inv_omega.integral(inv_omega.x_front(), t) - offset;
    }
    return 0.0;
  }

  double F_inv(double u) const {
    if (!(u > J.lo && u < J.hi)) throw invalid_spec("height outside the conformal image");
    switch (kind) {
      case WarpKind::Identity: return std::exp(u);
      case WarpKind::ExpNeg: return std::log(u);
      case WarpKind::Constant: return u * k;
      case WarpKind::Cosh: return std::asinh(std::tan(u));
      case WarpKind::Table: {
        const double target = u + offset;
        return invert_monotone([this](double t) { return inv_omega.integral(inv_omega.x_front(), t); },
                               [this](double t) { return inv_omega(t); }, target,
                               omega_table.x_front(), omega_table.x_back());
      }
    }
    return 0.0;
  }
};

// delta for Constant is the slab half-width of J; I = (-k delta, k delta).
inline Warp make_warp(WarpKind kind, double k = 1.0, double delta = 2.0) {
  Warp w;
  w.kind = kind;
  switch (kind) {
    case WarpKind::Identity:
      w.I = Interval{0.0, kInf};
      w.J = Interval{-kInf, kInf};
      w.delta = kInf;
      break;
    case WarpKind::ExpNeg:
      w.I = Interval{-kInf, kInf};
      w.J = Interval{0.0, kInf};
      w.delta = kInf;
      break;
    case WarpKind::Constant:
      if (!(k > 0.0)) throw invalid_spec("constant warp factor must be positive");
      if (!(delta > 0.0)) throw invalid_spec("slab half-width must be positive");
      w.k = k;
      w.I = Interval{-k * delta, k * delta};
      w.J = Interval{-delta, delta};
      w.delta = delta;
      break;
    case WarpKind::Cosh:
      w.I = Interval{-kInf, kInf};
      w.J = Interval{-0.5 * kPi, 0.5 * kPi};
      w.delta = 0.5 * kPi;
      break;
    case WarpKind::Table:
      throw invalid_spec("table warp needs samples; use make_warp_table");
  }
  return w;
}

inline Warp make_warp_table(const std::vector<double>& t, const std::vector<double>& omega) {
  if (t.size() < 2 || t.size() != omega.size()) throw invalid_spec("warp table needs matching t/omega samples");
  std::vector<double> recip(omega.size());
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (!(omega[i] > 0.0)) throw invalid_spec("warp table: omega must be positive");
    recip[i] = 1.0 / omega[i];
  }
  Warp w;
  w.kind = WarpKind::Table;
  w.omega_table = MonotoneCubic(t, omega);
  w.inv_omega = MonotoneCubic(t, recip);
  const double width = w.inv_omega.integral(t.front(), t.back());
  w.offset = 0.5 * width;  // center J at zero; kept explicit for round trips
  w.I = Interval{t.front(), t.back()};
  w.J = Interval{-0.5 * width, 0.5 * width};
  w.delta = 0.5 * width;
  return w;
}

struct WarpedClassification {
  Topology topology = Topology::BallLike;
  bool complete = false;
  bool borderline = false;  // vertical diameter equals the slab width to 1e-12
};

namespace detail {

// Closed product-height span of the assembled surface, before shifting.
inline Interval product_span(const AssembledHypersurface& h) {
  if (h.topology == Topology::PeriodicPlaneLike) return Interval{-kInf, kInf};
  if (h.has_slab) return h.slab;
  if (h.topology == Topology::BallLike) return Interval{h.t_min, kInf};
  return Interval{h.t_min, h.t_max};
}

}  // namespace detail

// Where the product-side heights sit inside J before F_inv is applied:
// centered when J is bounded, unchanged when J is all of R, and one unit of
// margin from a single finite end.
inline double default_shift(const AssembledHypersurface& h, const Warp& w) {
  const Interval span = detail::product_span(h);
  const bool lo_fin = std::isfinite(w.J.lo);
  const bool hi_fin = std::isfinite(w.J.hi);
  if (std::isfinite(span.lo) && std::isfinite(span.hi)) {
    const double mid = 0.5 * (span.lo + span.hi);
    if (lo_fin && hi_fin) return 0.5 * (w.J.lo + w.J.hi) - mid;
    if (lo_fin) return w.J.lo + 1.0 - span.lo;
    if (hi_fin) return w.J.hi - 1.0 - span.hi;
    return -mid;
  }
  if (std::isfinite(span.lo)) {  // unbounded above
    if (lo_fin) return w.J.lo + 1.0 - span.lo;
    return -span.lo;
  }
  if (lo_fin && hi_fin) return 0.5 * (w.J.lo + w.J.hi);
  return 0.0;
}

// Topology and completeness of the pulled-back hypersurface. A clipped or
// asymptotic end is harmless exactly when the matching end of I is at
// infinity; the horosphere slab case follows the pinned delta > pi/2 rule.
inline WarpedClassification classify_warped(const AssembledHypersurface& h, const Warp& w,
                                            double shift) {
  WarpedClassification c;
  const double width = w.J.hi - w.J.lo;  // may be inf
  const Interval span = detail::product_span(h);
  const double lo = span.lo + shift;
  const double hi = span.hi + shift;
  const bool reach_lo = lo <= w.J.lo || (!std::isfinite(span.lo));
  const bool reach_hi = hi >= w.J.hi || (!std::isfinite(span.hi));
  const bool lo_ok = !reach_lo || !std::isfinite(w.I.lo);
  const bool hi_ok = !reach_hi || !std::isfinite(w.I.hi);

  switch (h.topology) {
    case Topology::SphereLike: {
      const double diam = h.vertical_diameter;
      if (std::isfinite(width) && std::abs(diam - width) <= 1e-12) {
        c.topology = Topology::AnnulusLike;
        c.borderline = true;
        c.complete = lo_ok && hi_ok;
      } else if (diam < width) {
        c.topology = Topology::SphereLike;
        c.complete = true;
      } else {
        c.topology = Topology::AnnulusLike;
        c.complete = lo_ok && hi_ok;
      }
      break;
    }
    case Topology::BallLike: {
      c.topology = Topology::BallLike;
      if (h.has_slab) {
        c.complete = w.delta > 0.5 * kPi;
      } else {
        c.complete = lo_ok && hi_ok;
      }
      break;
    }
    case Topology::PeriodicPlaneLike: {
      // each fundamental piece is a graph over the base
      c.topology = Topology::BallLike;
      c.complete = lo_ok && hi_ok;
      break;
    }
    case Topology::AnnulusLike:
      c.topology = Topology::AnnulusLike;
      c.complete = lo_ok && hi_ok;
      break;
  }
  return c;
}

struct WarpedSample {
  int piece = 0;
  int row = 0;
  int col = 0;
  double u = 0.0;  // product height after the shift, inside J
  double t = 0.0;  // warped height F_inv(u)
};

struct WarpedHypersurface {
  Warp warp;
  double t_shift = 0.0;
  WarpedClassification cls;
  std::vector<WarpedSample> samples;
};

// Transfers the assembled product surface into warped coordinates, dropping
// samples whose shifted height leaves the open interval J.
inline WarpedHypersurface pull_back(const AssembledHypersurface& h, const Warp& w,
                                    bool use_default_shift = true, double shift = 0.0) {
  WarpedHypersurface out;
  out.warp = w;
  out.t_shift = use_default_shift ? default_shift(h, w) : shift;
  out.cls = classify_warped(h, w, out.t_shift);
  const int rows = h.patch.rows();
  const int cols = h.patch.cols();
  for (int p = 0; p < static_cast<int>(h.pieces.size()); ++p) {
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        const double u = piece_height(h.pieces[static_cast<std::size_t>(p)], h.patch.at(i, j).t) +
                         out.t_shift;
        if (!(u > w.J.lo && u < w.J.hi)) continue;
        WarpedSample ws;
        ws.piece = p;
        ws.row = i;
        ws.col = j;
        ws.u = u;
        ws.t = w.F_inv(u);
        out.samples.push_back(ws);
      }
    }
  }
  if (out.samples.empty()) throw empty_slab_error("no samples inside the conformal image");
  return out;
}

}  // namespace umbilic
