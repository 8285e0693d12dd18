#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "umbilic/families.hpp"
#include "umbilic/quadrature.hpp"

namespace umbilic {

// What happens to rho at an end of the profile range.
enum class EndpointKind { RhoReachesOne, RhoDecaysToZero, Truncated };

inline const char* endpoint_name(EndpointKind k) {
  switch (k) {
    case EndpointKind::RhoReachesOne: return "rho-reaches-one";
    case EndpointKind::RhoDecaysToZero: return "rho-decays-to-zero";
    case EndpointKind::Truncated: return "truncated";
  }
  return "?";
}

// Solution of rho' + lambda(s) rho = 0 together with the height integral
// phi' = rho / sqrt(1 - rho^2), normalized so phi = 0 at the lower end of
// s_range. A seam is an endpoint where rho reaches 1: the graph built from
// the profile becomes vertical there and the assembly module reflects
// across it. t0 is the total height of one graph piece; it is +inf when the
// height integral diverges.
struct Profile {
  FamilySpec family;
  double c = 1.0;            // effective constant
  double c_requested = 1.0;  // before the horosphere shift normalization
  double amp = 1.0;          // spherical kind: amplitude max(c, 1/c)
  Interval s_range{0.0, 0.0};
  double a = 0.0;            // seam parameter when one exists
  EndpointKind lo_kind = EndpointKind::RhoDecaysToZero;
  EndpointKind hi_kind = EndpointKind::RhoReachesOne;
  bool seam_lo = false;
  bool seam_hi = false;
  double t0 = kInf;
  bool t0_attained = false;

  bool custom() const { return family.kind == FamilyKind::CustomLambda; }

  void require_in(double s) const {
    if (!(s >= s_range.lo && s <= s_range.hi)) {
      throw invalid_spec("profile: parameter " + format_sci(s) + " outside [" +
                         format_sci(s_range.lo) + ", " + format_sci(s_range.hi) + "]");
    }
  }

  double lambda(double s) const { return lambda_of(family, s); }

  double rho(double s) const {
    require_in(s);
    switch (family.kind) {
      case FamilyKind::SphereSpherical: return amp * std::sin(s);
      case FamilyKind::SphereHyperbolic: return c * std::sinh(s);
      case FamilyKind::Horosphere: return std::exp(-s);
      case FamilyKind::Equidistant: return c * std::cosh(s);
      case FamilyKind::CustomLambda:
        return c * std::exp(-family.lambda_table.integral(family.lambda_table.x_front(), s));
    }
    return 0.0;
  }

  // rho' from the defining equation; this is also the umbilical value of the
  // graph, since every principal curvature equals -rho lambda = rho'.
  double drho(double s) const {
    require_in(s);
    switch (family.kind) {
      case FamilyKind::SphereSpherical: return amp * std::cos(s);
      case FamilyKind::SphereHyperbolic: return c * std::cosh(s);
      case FamilyKind::Horosphere: return -std::exp(-s);
      case FamilyKind::Equidistant: return c * std::sinh(s);
      case FamilyKind::CustomLambda: return -lambda(s) * rho(s);
    }
    return 0.0;
  }

  double umbilical_value(double s) const { return drho(s); }

  // Angle function along the meridian, sqrt(1 - rho^2) evaluated without
  // cancellation where a stable closed form exists.
  double theta(double s) const {
    require_in(s);
    switch (family.kind) {
      case FamilyKind::Horosphere:
        return std::sqrt(std::max(0.0, -std::expm1(-2.0 * s)));
      case FamilyKind::SphereSpherical:
        if (amp == 1.0) return std::cos(s);
        break;
      default:
        break;
    }
    const double r = rho(s);
    return std::sqrt(std::max(0.0, (1.0 - r) * (1.0 + r)));
  }

  double dphi(double s) const {
    const double th = theta(s);
    if (th == 0.0) throw invalid_spec("profile: phi' undefined at a seam");
    return rho(s) / th;
  }

  // Closed-form height. Custom tables fall back to quadrature. The stored
  // range ends are the seam parameters themselves (up to the one-ulp clamp
  // that keeps rho < 1 strictly inside), so they map to the exact convention
  // heights; phi has a sqrt cusp at a seam and would otherwise read the
  // clamp as a 1e-8 deficit.
  double phi(double s) const {
    require_in(s);
    if (s == s_range.lo) return 0.0;
    if (t0_attained && s == a) return t0;
    switch (family.kind) {
      case FamilyKind::SphereSpherical: {
        if (amp == 1.0) return -std::log(std::cos(s));
        const double k = amp / std::sqrt(amp * amp - 1.0);
        return std::acosh(k) - std::acosh(std::max(1.0, k * std::cos(s)));
      }
      case FamilyKind::SphereHyperbolic: {
        const double d = std::sqrt(1.0 + c * c);
        return std::asin(std::min(1.0, c * std::cosh(s) / d)) - std::asin(c / d);
      }
      case FamilyKind::Horosphere:
        return 0.5 * kPi - std::asin(std::min(1.0, std::exp(-s)));
      case FamilyKind::Equidistant: {
        const double d = std::sqrt((1.0 - c) * (1.0 + c));
        return 0.5 * kPi + std::asin(std::clamp(c * std::sinh(s) / d, -1.0, 1.0));
      }
      case FamilyKind::CustomLambda:
        return phi_quadrature(s);
    }
    return 0.0;
  }

  // Quadrature route to the same height: tanh-sinh on rho/theta away from
  // seams; on a seam-adjacent window the integral is taken in the gap
  // variable v = 1 - rho, which keeps the integrable 1/sqrt(v) endpoint
  // exactly representable. Requires rho' bounded away from zero on the
  // window, which is what makes the improper integral converge.
  double phi_quadrature(double s) const {
    require_in(s);
    if (s == s_range.lo) return 0.0;
    double acc = 0.0;
    double cursor = s_range.lo;
    if (seam_lo) {
      const double x1 = std::min(s, s_range.lo + seam_window());
      acc += seam_integral(s_range.lo, x1, /*seam_at_lo=*/true);
      cursor = x1;
      if (s <= x1) return acc;
    }
    if (seam_hi && s > a - seam_window()) {
      const double x0 = a - seam_window();
      if (cursor < x0) {
        acc += integrate_checked([this](double u) { return dphi(u); }, cursor, x0,
                                 1e-13, 1e-10, "height integral");
      }
      acc += seam_integral(x0, s, /*seam_at_lo=*/false);
      return acc;
    }
    acc += integrate_checked([this](double u) { return dphi(u); }, cursor, s,
                             1e-13, 1e-10, "height integral");
    return acc;
  }

  // Height of one full graph piece by quadrature, for cross-checking the
  // closed-form t0. Only meaningful when the upper seam is reached.
  double t0_quadrature() const {
    if (!seam_hi) throw invalid_spec("profile: no upper seam to integrate to");
    return phi_quadrature(a);
  }

  // Sampling range for meshes and point clouds: unbounded or asymptotic
  // directions are cut where rho < rho_floor or phi > phi_cap, whichever
  // comes first; an explicit s_cut overrides. Seam ends are kept exact.
  Interval export_range(double rho_floor = 1e-6, double phi_cap = 25.0,
                        double explicit_cut = 0.0, bool* truncated = nullptr) const {
    Interval out = s_range;
    bool trunc = false;
    if (explicit_cut != 0.0) {
      if (explicit_cut <= out.lo) throw invalid_spec("s-cut below the profile range");
      if (explicit_cut < out.hi) {
        out.hi = explicit_cut;
        trunc = true;
      }
    } else if (!std::isfinite(out.hi)) {
      // rho decays to zero on the right: cut at the floor
      out.hi = cut_for_rho_floor(rho_floor);
      trunc = true;
    } else if (seam_hi && !t0_attained) {
      // seam at finite s but unbounded height: cut at the phi cap
      out.hi = cut_for_phi_cap(phi_cap);
      trunc = true;
    }
    if (truncated) *truncated = trunc;
    return out;
  }

 private:
  double seam_window() const {
    const double span = s_range.length();
    return std::isfinite(span) ? 0.25 * span : 0.5;
  }

  // Inverse of rho restricted to the side adjacent to the seam.
  double rho_inverse_seam_side(double u, bool seam_at_lo) const {
    switch (family.kind) {
      case FamilyKind::SphereSpherical: return std::asin(std::min(1.0, u / amp));
      case FamilyKind::SphereHyperbolic: return std::asinh(u / c);
      case FamilyKind::Horosphere: return -std::log(u);
      case FamilyKind::Equidistant: {
        const double m = std::acosh(std::max(1.0, u / c));
        return seam_at_lo ? -m : m;
      }
      case FamilyKind::CustomLambda: {
        const double w = seam_window();
        const double lo = seam_at_lo ? s_range.lo : a - w;
        const double hi = seam_at_lo ? s_range.lo + w : a;
        // the refined seam endpoint can undershoot rho = 1 by a few ulp, so
        // clamp the target into the actually attained range
        const double r0 = rho(lo), r1 = rho(hi);
        const double t = std::clamp(u, std::min(r0, r1), std::max(r0, r1));
        return invert_monotone([this](double q) { return rho(q); },
                               [this](double q) { return drho(q); }, t, lo, hi);
      }
    }
    return 0.0;
  }

  // Integral of rho/theta over [x0, x1] where one end is a seam (rho = 1).
  // Substituting u = rho and then v = 1 - u gives
  //   integral of (1 - v) / (sqrt(v (2 - v)) |rho'|) dv from 0,
  // with v = 0 the seam itself.
  double seam_integral(double x0, double x1, bool seam_at_lo) const {
    const double u_far = rho(seam_at_lo ? x1 : x0);
    const double v_hi = 1.0 - u_far;
    // The near end only touches v = 0 when it sits on the seam itself; a
    // partial window ends at v = 1 - rho of the requested parameter.
    const double v_lo = (seam_at_lo || x1 == a) ? 0.0 : std::max(0.0, 1.0 - rho(x1));
    if (v_hi <= v_lo) return 0.0;
    auto h = [this, seam_at_lo](double v) {
      const double u = 1.0 - v;
      const double sv = rho_inverse_seam_side(u, seam_at_lo);
      const double slope = std::fabs(drho(sv));
      return u / (std::sqrt(v * (2.0 - v)) * slope);
    };
    return integrate_checked(h, v_lo, v_hi, 1e-13, 1e-10, "seam height integral");
  }

  double cut_for_rho_floor(double rho_floor) const {
    // only the right end decays; rho is strictly decreasing there
    double lo = std::max(s_range.lo, a);
    double hi = std::max(lo + 1.0, 1.0);
    while (rho(hi) > rho_floor) hi *= 2.0;
    return invert_monotone([this](double t) { return rho(t); },
                           [this](double t) { return drho(t); }, rho_floor, lo, hi, 1e-12);
  }

  double cut_for_phi_cap(double phi_cap) const {
    return invert_monotone([this](double t) { return phi(t); },
                           [this](double t) { return dphi(t); }, phi_cap,
                           s_range.lo + 1e-12, a - 1e-15, 1e-12);
  }
};

// Builds the profile for one family and constant. The horosphere kind
// absorbs c into a parameter shift (parallel horospheres are congruent), so
// its stored constant is always 1.
inline Profile solve_profile(const FamilySpec& family, double c) {
  if (!(c > 0.0)) throw invalid_spec("profile constant must be positive");
  Profile p;
  p.family = family;
  p.c_requested = c;
  p.c = c;
  switch (family.kind) {
    case FamilyKind::SphereSpherical: {
      p.amp = std::max(c, 1.0 / c);
      p.seam_hi = true;
      p.hi_kind = EndpointKind::RhoReachesOne;
      p.lo_kind = EndpointKind::RhoDecaysToZero;
      if (p.amp == 1.0) {
        p.a = 0.5 * kPi;
        p.s_range = Interval{0.0, 0.5 * kPi};
        p.t0 = kInf;
        p.t0_attained = false;
      } else {
        p.a = std::asin(1.0 / p.amp);
        p.s_range = Interval{0.0, p.a};
        p.t0 = std::acosh(p.amp / std::sqrt(p.amp * p.amp - 1.0));
        p.t0_attained = true;
      }
      break;
    }
    case FamilyKind::SphereHyperbolic: {
      p.a = std::asinh(1.0 / c);
      p.s_range = Interval{0.0, p.a};
      p.seam_hi = true;
      p.hi_kind = EndpointKind::RhoReachesOne;
      p.lo_kind = EndpointKind::RhoDecaysToZero;
      p.t0 = std::atan(1.0 / c);
      p.t0_attained = true;
      break;
    }
    case FamilyKind::Horosphere: {
      p.c = 1.0;  // shift normalization
      p.a = 0.0;
      p.s_range = Interval{0.0, kInf};
      p.seam_lo = true;
      p.lo_kind = EndpointKind::RhoReachesOne;
      p.hi_kind = EndpointKind::RhoDecaysToZero;
      p.t0 = 0.5 * kPi;  // supremum, never attained
      p.t0_attained = false;
      break;
    }
    case FamilyKind::Equidistant: {
      if (!(c < 1.0)) {
        throw invalid_spec("equidistant profile requires 0 < c < 1");
      }
      p.a = std::acosh(1.0 / c);
      p.s_range = Interval{-p.a, p.a};
      p.seam_lo = true;
      p.seam_hi = true;
      p.lo_kind = EndpointKind::RhoReachesOne;
      p.hi_kind = EndpointKind::RhoReachesOne;
      p.t0 = kPi;  // phi(a) is pi for every admissible c
      p.t0_attained = true;
      break;
    }
    case FamilyKind::CustomLambda: {
      // admissible range: the longest span of the table where rho < 1,
      // i.e. where the lambda antiderivative exceeds log c
      const MonotoneCubic& tab = family.lambda_table;
      const double t_lo = tab.x_front();
      const double t_hi = tab.x_back();
      const double ln_c = std::log(c);
      auto gap = [&](double s) { return tab.integral(t_lo, s) - ln_c; };
      const int kScan = 4096;
      double best_lo = 0.0, best_hi = 0.0, best_len = -1.0;
      double run_lo = kInf;
      double prev_s = t_lo, prev_g = gap(t_lo);
      for (int i = 1; i <= kScan; ++i) {
        const double si = t_lo + (t_hi - t_lo) * static_cast<double>(i) / kScan;
        const double gi = gap(si);
        if (prev_g > 0.0 && !(run_lo < kInf)) run_lo = prev_s;
        if (prev_g <= 0.0 && gi > 0.0) {
          run_lo = invert_monotone([&](double t) { return gap(t); },
                                   [&](double t) { return tab(t); }, 0.0, prev_s, si, 1e-14);
        }
        const bool closing = (gi <= 0.0 || i == kScan);
        if (closing && run_lo < kInf) {
          double run_hi = si;
          if (gi <= 0.0) {
            run_hi = invert_monotone([&](double t) { return gap(t); },
                                     [&](double t) { return tab(t); }, 0.0, prev_s, si, 1e-14);
          }
          if (run_hi - run_lo > best_len) {
            best_len = run_hi - run_lo;
            best_lo = run_lo;
            best_hi = run_hi;
          }
          run_lo = kInf;
        }
        prev_s = si;
        prev_g = gi;
      }
      if (!(best_len > 0.0)) {
        throw invalid_spec("custom table: no positive-length range with rho < 1 for this c");
      }
      p.s_range = Interval{best_lo, best_hi};
      p.seam_lo = best_lo > t_lo + 1e-12 * (t_hi - t_lo);
      p.seam_hi = best_hi < t_hi - 1e-12 * (t_hi - t_lo);
      p.lo_kind = p.seam_lo ? EndpointKind::RhoReachesOne : EndpointKind::Truncated;
      p.hi_kind = p.seam_hi ? EndpointKind::RhoReachesOne : EndpointKind::Truncated;
      p.a = p.seam_hi ? best_hi : best_lo;
      if (p.seam_hi) {
        p.t0 = p.t0_quadrature();
        p.t0_attained = true;
      } else {
        p.t0 = kInf;
        p.t0_attained = false;
      }
      break;
    }
  }
  return p;
}

}  // namespace umbilic
