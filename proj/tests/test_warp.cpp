#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <umbilic/warp.hpp>

using namespace umbilic;
using Catch::Approx;

namespace {

AssembledHypersurface sphere_assembly(double c) {
  return assemble(solve_profile(make_family(FamilyKind::SphereHyperbolic, 2), c));
}

}  // namespace

TEST_CASE("built-in warps expose the right intervals") {
  const Warp wt = make_warp(WarpKind::Identity);
  CHECK(wt.I.lo == 0.0);
  CHECK(wt.I.hi == kInf);
  CHECK(wt.J.lo == -kInf);
  CHECK(wt.delta == kInf);

  const Warp we = make_warp(WarpKind::ExpNeg);
  CHECK(we.I.lo == -kInf);
  CHECK(we.J.lo == 0.0);
  CHECK(we.J.hi == kInf);

  const Warp wc = make_warp(WarpKind::Constant, 2.0, 0.7);
  CHECK(wc.J.lo == Approx(-0.7).margin(1e-15).epsilon(0.0));
  CHECK(wc.I.hi == Approx(1.4).margin(1e-15).epsilon(0.0));
  CHECK(wc.delta == 0.7);

  const Warp wg = make_warp(WarpKind::Cosh);
  CHECK(wg.J.hi == Approx(0.5 * kPi).margin(1e-15).epsilon(0.0));
  CHECK(wg.delta == Approx(0.5 * kPi).margin(1e-15).epsilon(0.0));

  CHECK_THROWS_AS(make_warp(WarpKind::Constant, -1.0), invalid_spec);
  CHECK_THROWS_AS(make_warp(WarpKind::Constant, 1.0, 0.0), invalid_spec);
  CHECK_THROWS_AS(make_warp(WarpKind::Table), invalid_spec);
}

TEST_CASE("F and F_inv are mutually inverse on the built-in warps") {
  for (WarpKind kind : {WarpKind::Identity, WarpKind::ExpNeg, WarpKind::Cosh}) {
    const Warp w = make_warp(kind);
    for (double t : {-1.3, 0.4, 2.0}) {
      if (!(t > w.I.lo && t < w.I.hi)) continue;
      CHECK(w.F_inv(w.F(t)) == Approx(t).margin(1e-12).epsilon(0.0));
    }
  }
  const Warp wc = make_warp(WarpKind::Constant, 3.0, 2.0);
  CHECK(wc.F(1.5) == Approx(0.5).margin(1e-15).epsilon(0.0));
  CHECK(wc.F_inv(0.5) == Approx(1.5).margin(1e-15).epsilon(0.0));
}

TEST_CASE("F' equals 1/omega") {
  for (WarpKind kind : {WarpKind::Identity, WarpKind::ExpNeg, WarpKind::Cosh}) {
    const Warp w = make_warp(kind);
    for (double t : {0.3, 1.1}) {
      const double h = 1e-6;
      const double fd = (w.F(t + h) - w.F(t - h)) / (2.0 * h);
      CHECK(fd == Approx(1.0 / w.omega(t)).margin(1e-8).epsilon(0.0));
    }
  }
}

TEST_CASE("warp domain violations are rejected") {
  const Warp wt = make_warp(WarpKind::Identity);
  CHECK_THROWS_AS(wt.F(-1.0), invalid_spec);
  CHECK_THROWS_AS(wt.F(0.0), invalid_spec);
  const Warp we = make_warp(WarpKind::ExpNeg);
  CHECK_THROWS_AS(we.F_inv(-0.5), invalid_spec);
  const Warp wc = make_warp(WarpKind::Constant, 1.0, 1.0);
  CHECK_THROWS_AS(wc.F_inv(1.5), invalid_spec);
}

TEST_CASE("table warp reproduces a tabulated exponential") {
  std::vector<double> ts, om;
  for (int i = 0; i <= 400; ++i) {
    const double t = -2.0 + 4.0 * i / 400.0;
    ts.push_back(t);
    om.push_back(std::exp(-t));
  }
  const Warp w = make_warp_table(ts, om);
  // integral of e^t over [-2, 2], centered: F(t) = e^t - cosh 2
  const double width = 2.0 * std::sinh(2.0);
  CHECK(2.0 * w.delta == Approx(width).margin(1e-6).epsilon(0.0));
  CHECK(w.J.lo == Approx(-0.5 * width).margin(1e-6).epsilon(0.0));
  CHECK(w.I.lo == -2.0);
  CHECK(w.I.hi == 2.0);
  for (double t : {-1.5, -0.2, 0.9}) {
    CHECK(w.omega(t) == Approx(std::exp(-t)).margin(1e-6).epsilon(0.0));
    CHECK(w.F(t) == Approx(std::exp(t) - std::cosh(2.0)).margin(1e-6).epsilon(0.0));
    CHECK(w.F_inv(w.F(t)) == Approx(t).margin(1e-9).epsilon(0.0));
  }
  CHECK_THROWS_AS(w.F(-2.0), invalid_spec);
  CHECK_THROWS_AS(w.F(2.5), invalid_spec);

  CHECK_THROWS_AS(make_warp_table({0.0, 1.0}, {1.0, -1.0}), invalid_spec);
  CHECK_THROWS_AS(make_warp_table({0.0}, {1.0}), invalid_spec);
}

TEST_CASE("classification: sphere against slab width") {
  const AssembledHypersurface h = sphere_assembly(2.0);  // diameter 2 atan(1/2)
  const double diam = h.vertical_diameter;

  Warp big = make_warp(WarpKind::Constant, 1.0, diam);  // 2 delta = 2 diam > diam
  WarpedClassification cls = classify_warped(h, big, default_shift(h, big));
  CHECK(cls.topology == Topology::SphereLike);
  CHECK(cls.complete);

  Warp tight = make_warp(WarpKind::Constant, 1.0, 0.25 * diam);  // 2 delta < diam
  cls = classify_warped(h, tight, default_shift(h, tight));
  CHECK(cls.topology == Topology::AnnulusLike);
  CHECK_FALSE(cls.complete);

  Warp exactw = make_warp(WarpKind::Constant, 1.0, 0.5 * diam);  // 2 delta = diam
  cls = classify_warped(h, exactw, default_shift(h, exactw));
  CHECK(cls.topology == Topology::AnnulusLike);
  CHECK(cls.borderline);
}

TEST_CASE("classification: unbounded images keep spheres complete") {
  const AssembledHypersurface h = sphere_assembly(1.0);
  for (WarpKind kind : {WarpKind::Identity, WarpKind::ExpNeg}) {
    const Warp w = make_warp(kind);
    const WarpedClassification cls = classify_warped(h, w, default_shift(h, w));
    CHECK(cls.topology == Topology::SphereLike);
    CHECK(cls.complete);
  }
}

TEST_CASE("classification: periodic surface fills the image completely or not") {
  const AssembledHypersurface h =
      assemble(solve_profile(make_family(FamilyKind::Equidistant, 2), 0.5));

  // omega = t: image J = R is filled, but I = (0, inf) has a finite end
  const Warp wt = make_warp(WarpKind::Identity);
  WarpedClassification cls = classify_warped(h, wt, default_shift(h, wt));
  CHECK(cls.topology == Topology::BallLike);
  CHECK_FALSE(cls.complete);

  // omega = e^-t: J = (0, inf) is overrun on both sides, but I = R
  const Warp we = make_warp(WarpKind::ExpNeg);
  cls = classify_warped(h, we, default_shift(h, we));
  CHECK(cls.topology == Topology::BallLike);
  CHECK(cls.complete);
}

TEST_CASE("classification: horosphere slab follows the half-pi rule") {
  const AssembledHypersurface h =
      assemble(solve_profile(make_family(FamilyKind::Horosphere, 2), 1.0));

  const Warp wide = make_warp(WarpKind::Constant, 1.0, 0.5 * kPi + 0.1);
  WarpedClassification cls = classify_warped(h, wide, default_shift(h, wide));
  CHECK(cls.topology == Topology::BallLike);
  CHECK(cls.complete);

  const Warp narrow = make_warp(WarpKind::Constant, 1.0, 1.2);
  cls = classify_warped(h, narrow, default_shift(h, narrow));
  CHECK(cls.topology == Topology::BallLike);
  CHECK_FALSE(cls.complete);

  // cosh: delta = pi/2 exactly, not strictly greater
  const Warp wg = make_warp(WarpKind::Cosh);
  cls = classify_warped(h, wg, default_shift(h, wg));
  CHECK_FALSE(cls.complete);
}

TEST_CASE("pull back maps every surviving sample through F_inv") {
  const AssembledHypersurface h = sphere_assembly(1.0);
  const Warp w = make_warp(WarpKind::Identity);
  const WarpedHypersurface wh = pull_back(h, w);
  CHECK(wh.samples.size() ==
        h.pieces.size() * static_cast<std::size_t>(h.patch.rows()) *
            static_cast<std::size_t>(h.patch.cols()));
  for (std::size_t i = 0; i < wh.samples.size(); i += 97) {
    const WarpedSample& ws = wh.samples[i];
    const double u = piece_height(h.pieces[static_cast<std::size_t>(ws.piece)],
                                  h.patch.at(ws.row, ws.col).t) +
                     wh.t_shift;
    CHECK(ws.u == u);
    CHECK(ws.t == Approx(std::exp(u)).margin(1e-12 * std::exp(u)).epsilon(0.0));
    CHECK(ws.t > w.I.lo);
  }
}

TEST_CASE("pull back drops out-of-image samples and can empty out") {
  const AssembledHypersurface h = sphere_assembly(2.0);
  const Warp tight = make_warp(WarpKind::Constant, 1.0, 0.2);
  // centered: only a band survives
  const WarpedHypersurface wh = pull_back(h, tight);
  CHECK(wh.samples.size() > 0);
  CHECK(wh.samples.size() < h.pieces.size() * static_cast<std::size_t>(h.patch.rows()) *
                                static_cast<std::size_t>(h.patch.cols()));
  for (const WarpedSample& ws : wh.samples) {
    CHECK(ws.u > tight.J.lo);
    CHECK(ws.u < tight.J.hi);
  }
  // an explicit shift far outside J leaves nothing
  CHECK_THROWS_AS(pull_back(h, tight, false, 50.0), empty_slab_error);
}

TEST_CASE("default placement centers bounded spans and respects overrides") {
  const AssembledHypersurface h = sphere_assembly(2.0);  // span [0, 2 t0]
  const Warp wc = make_warp(WarpKind::Constant, 1.0, 2.0);
  const double sh = default_shift(h, wc);
  CHECK(sh == Approx(-h.vertical_diameter / 2.0).margin(1e-12).epsilon(0.0));

  const Warp wt = make_warp(WarpKind::Identity);  // J = R: center at zero
  CHECK(default_shift(h, wt) == Approx(-h.vertical_diameter / 2.0).margin(1e-12).epsilon(0.0));

  const Warp we = make_warp(WarpKind::ExpNeg);  // one finite end: unit margin
  CHECK(default_shift(h, we) == Approx(1.0).margin(1e-12).epsilon(0.0));

  const WarpedHypersurface wh = pull_back(h, wc, false, 0.3);
  CHECK(wh.t_shift == 0.3);
}
