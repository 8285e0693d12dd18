#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <umbilic/spaceform.hpp>

using namespace umbilic;
using Catch::Approx;

namespace {

Vec unit(int n1, int i) {
  Vec v = Vec::Zero(n1);
  v[i] = 1.0;
  return v;
}

}  // namespace

TEST_CASE("model inner products carry the signature") {
  Vec u = unit(4, 0), v = unit(4, 0);
  CHECK(model_inner(SpaceForm::Sphere, u, v) == 1.0);
  CHECK(model_inner(SpaceForm::Hyperbolic, u, v) == -1.0);
  Vec w = unit(4, 2);
  CHECK(model_inner(SpaceForm::Hyperbolic, w, w) == 1.0);
  CHECK(model_inner(SpaceForm::Hyperbolic, u, w) == 0.0);
}

TEST_CASE("model points renormalize and reject bad input") {
  Vec raw(3);
  raw << 3.0, 0.0, 4.0;
  ModelPoint p(SpaceForm::Sphere, raw);
  CHECK(p.x.norm() == Approx(1.0).margin(1e-15).epsilon(0.0));
  CHECK(p.quadric_residual() < 1e-12);

  Vec hraw(3);
  hraw << 2.0, 1.0, 0.5;
  ModelPoint q(SpaceForm::Hyperbolic, hraw);
  CHECK(model_inner(SpaceForm::Hyperbolic, q.x, q.x) == Approx(-1.0).margin(1e-12).epsilon(0.0));
  CHECK(q.x[0] > 0.0);

  CHECK_THROWS_AS(ModelPoint(SpaceForm::Sphere, Vec::Zero(3)), invalid_spec);
  Vec spacelike(3);
  spacelike << 0.5, 1.0, 0.0;  // <x,x> > 0: not on the hyperboloid
  CHECK_THROWS_AS(ModelPoint(SpaceForm::Hyperbolic, spacelike), invalid_spec);
  Vec lower(3);
  lower << -2.0, 1.0, 0.5;  // lower sheet
  CHECK_THROWS_AS(ModelPoint(SpaceForm::Hyperbolic, lower), invalid_spec);
}

TEST_CASE("geodesics stay on the quadric at unit speed") {
  for (SpaceForm sf : {SpaceForm::Sphere, SpaceForm::Hyperbolic}) {
    ModelPoint p(sf, unit(4, 0));
    Vec v = unit(4, 2);
    for (double s : {0.1, 0.7, 1.9}) {
      ModelPoint g = geodesic(p, v, s);
      CHECK(g.quadric_residual() < 1e-12);
      // distance along the curve equals the parameter: checked via velocity norm
      Vec vel = geodesic_velocity(p, v, s);
      CHECK(model_inner(sf, vel, vel) == Approx(1.0).margin(1e-10).epsilon(0.0));
      CHECK(std::fabs(model_inner(sf, vel, g.x)) < 1e-10);
    }
  }
  ModelPoint p(SpaceForm::Sphere, unit(4, 0));
  CHECK_THROWS_AS(geodesic(p, 2.0 * unit(4, 2), 0.5), invalid_spec);
  CHECK_THROWS_AS(geodesic(p, unit(4, 0), 0.5), invalid_spec);
}

TEST_CASE("sphere geodesic has period 2 pi") {
  ModelPoint p(SpaceForm::Sphere, unit(3, 0));
  Vec v = unit(3, 1);
  ModelPoint g = geodesic(p, v, 2.0 * kPi);
  CHECK((g.x - p.x).norm() < 1e-12);
}

TEST_CASE("tangent projection removes the radial part") {
  ModelPoint p(SpaceForm::Hyperbolic, unit(4, 0));
  Vec w(4);
  w << 0.3, 1.0, -2.0, 0.7;
  Vec t = project_tangent(SpaceForm::Hyperbolic, p.x, w);
  CHECK(std::fabs(model_inner(SpaceForm::Hyperbolic, t, p.x)) < 1e-12);
}

TEST_CASE("orthonormal complement spans and is orthonormal") {
  for (SpaceForm sf : {SpaceForm::Sphere, SpaceForm::Hyperbolic}) {
    Vec o = unit(5, 0);
    auto basis = orthonormal_complement(sf, {o}, 4);
    REQUIRE(basis.size() == 4);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      CHECK(std::fabs(model_inner(sf, basis[i], o)) < 1e-10);
      for (std::size_t j = 0; j <= i; ++j) {
        const double want = i == j ? 1.0 : 0.0;
        CHECK(model_inner(sf, basis[i], basis[j]) == Approx(want).margin(1e-10).epsilon(0.0));
      }
    }
  }
}

TEST_CASE("orthonormal complement handles a lightlike constraint") {
  // null vector ell = o + u: the complement must still be spacelike
  Vec o = unit(4, 0);
  Vec ell = unit(4, 0) + unit(4, 3);
  auto basis = orthonormal_complement(SpaceForm::Hyperbolic, {o, ell}, 2);
  REQUIRE(basis.size() == 2);
  for (const Vec& b : basis) {
    CHECK(model_inner(SpaceForm::Hyperbolic, b, b) == Approx(1.0).margin(1e-10).epsilon(0.0));
    CHECK(std::fabs(model_inner(SpaceForm::Hyperbolic, b, o)) < 1e-10);
    CHECK(std::fabs(model_inner(SpaceForm::Hyperbolic, b, ell)) < 1e-10);
  }
  CHECK_THROWS_AS(orthonormal_complement(SpaceForm::Sphere, {o}, 4), invalid_spec);
}
