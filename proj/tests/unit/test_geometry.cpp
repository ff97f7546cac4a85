#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hotspot/errors.hpp"
#include "hotspot/geometry.hpp"

using namespace hotspot;
using doctest::Approx;

namespace {

// Brute-force distance to the ellipse x^2/a^2 + y^2/b^2 = 1 over its parametrisation.
double ellipse_distance_oracle(double a, double b, const Point& x) {
  double best = 1e300;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double t = 2 * std::numbers::pi * i / n;
    best = std::min(best, std::hypot(a * std::cos(t) - x.x(), b * std::sin(t) - x.y()));
  }
  return best;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("distance to the boundary of analytic kinds") {
  const auto disk = make_ball(Point(0, 0), 1);
  CHECK(distance_to_boundary(disk, Point(0, 0)) == Approx(1).epsilon(1e-12));
  CHECK(distance_to_boundary(disk, Point(0.5, 0)) == Approx(0.5).epsilon(1e-12));

  const auto ell = make_ellipse(Point(0, 0), 2, 1);
  CHECK(distance_to_boundary(ell, Point(0, 0)) == Approx(1).epsilon(1e-9));
  for (const Point& x : {Point(1.2, 0.3), Point(-0.4, -0.8), Point(1.9, 0.05)})
    CHECK(distance_to_boundary(ell, x) == Approx(ellipse_distance_oracle(2, 1, x)).epsilon(1e-6));

  CHECK_THROWS_AS(distance_to_boundary(disk, Point(2, 0)), DomainError);
}

TEST_CASE("distance is 1-Lipschitz along random segments") {
  const auto peanut = make_polar(Point(0, 0), 1.0, {0.15, 0.3});
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1, 1);
  int checked = 0;
  while (checked < 200) {
    const Point a(U(rng), U(rng)), b(U(rng), U(rng));
    if (!peanut.inside(a) || !peanut.inside(b)) continue;
    const double da = distance_to_boundary(peanut, a), db = distance_to_boundary(peanut, b);
    CHECK(std::abs(da - db) <= (a - b).norm() + 1e-6);
    ++checked;
  }
}

TEST_CASE("inradius and incenters") {
  const auto disk = inradius_incenter(make_ball(Point(0, 0), 1));
  CHECK(disk.r_in == Approx(1).epsilon(1e-6));
  CHECK(disk.points.front().norm() < 1e-3);

  const auto rect = inradius_incenter(make_rectangle(Point(0, 0), Point(4, 2)));
  CHECK(rect.r_in == Approx(1).epsilon(1e-6));
  REQUIRE(rect.points.size() > 2);
  double xmin = 1e9, xmax = -1e9;
  for (const Point& p : rect.points) {
    CHECK(p.y() == Approx(1).epsilon(1e-3));
    xmin = std::min(xmin, p.x());
    xmax = std::max(xmax, p.x());
  }
  CHECK(xmin == Approx(1).epsilon(0.02));
  CHECK(xmax == Approx(3).epsilon(0.02));

  const auto ell = inradius_incenter(make_ellipse(Point(0, 0), 2, 1));
  CHECK(ell.r_in == Approx(1).epsilon(1e-6));
  // The distance is flat near the centre, so the incenter set is a short cluster around it.
  Point mean(0, 0);
  for (const Point& p : ell.points) mean += p / static_cast<double>(ell.points.size());
  CHECK(mean.norm() < 1e-3);
}

TEST_CASE("diameter") {
  CHECK(diameter(make_ball(Point(0, 0), 1)) == Approx(2));
  CHECK(diameter(make_rectangle(Point(0, 0), Point(4, 2))) == Approx(std::sqrt(20.0)));
  CHECK(diameter(make_ellipse(Point(0, 0), 2, 1)) == Approx(4));
}

TEST_CASE("exterior sphere radius") {
  const auto disk = exterior_sphere_radius(make_ball(Point(0, 0), 1));
  CHECK(disk.unbounded);
  CHECK(disk.value == Approx(2));

  const auto supplied = exterior_sphere_radius(make_dumbbell(1, 0.55, 0.3), 0.3);
  CHECK(supplied.supplied);
  CHECK(supplied.value == 0.3);

  // Convex: every exterior ball fits, truncated to the diameter.
  const auto ell = exterior_sphere_radius(make_ellipse(Point(0, 0), 2, 1));
  CHECK(ell.unbounded);
  CHECK(ell.value == Approx(4));

  // The peanut's waist bounds the exterior radius by its concave curvature radius.
  const auto peanut = make_polar(Point(0, 0), 1.0, {0.15, 0.3});
  const auto rp = exterior_sphere_radius(peanut);
  const auto curv = min_mean_curvature(peanut);
  CHECK_FALSE(rp.unbounded);
  CHECK(rp.value <= 1 / curv.M0_minus * 1.01);
}

TEST_CASE("mean curvature") {
  const auto sphere = min_mean_curvature(make_sphere3d(2.0));
  CHECK(sphere.min_curvature == Approx(0.5).epsilon(1e-6));
  CHECK(sphere.M0_minus == doctest::Approx(0).epsilon(1e-12));

  const auto ell = min_mean_curvature(make_ellipse(Point(0, 0), 2, 1));
  CHECK(ell.min_curvature == Approx(0.25).epsilon(1e-4));
  CHECK(ell.M0_minus == 0);

  // Catenoid neck is minimal; spheres have positive mean curvature.
  const auto db = min_mean_curvature(make_dumbbell(1, 0.55, 0.3));
  CHECK(db.min_curvature >= -1e-8);
  CHECK(db.min_curvature <= 1e-6);
  CHECK(db.M0_minus <= 1e-8);

  const auto peanut = min_mean_curvature(make_polar(Point(0, 0), 1.0, {0.15, 0.3}));
  CHECK(peanut.min_curvature < 0);
  CHECK(peanut.M0_minus == Approx(-peanut.min_curvature));
}

TEST_CASE("John ellipsoid") {
  const auto ell = john_ellipsoid(make_ellipse(Point(0, 0), 2, 1));
  CHECK(ell.center.norm() < 1e-9);
  CHECK(ell.axes[0] == Approx(1));
  CHECK(ell.axes[1] == Approx(2));

  const auto rect = john_ellipsoid(make_rectangle(Point(0, 0), Point(4, 2)));
  CHECK(rect.center.x() == Approx(2));
  CHECK(rect.center.y() == Approx(1));
  CHECK(rect.axes[0] == Approx(1));
  CHECK(rect.axes[1] == Approx(2));

  const double s = 1.5;
  const auto tri = john_ellipsoid(make_regular_polygon(3, s));
  CHECK(tri.axes[0] == Approx(s / (2 * std::sqrt(3.0))).epsilon(1e-3));
  CHECK(tri.axes[1] == Approx(s / (2 * std::sqrt(3.0))).epsilon(1e-3));

  CHECK_THROWS_AS(john_ellipsoid(make_polar(Point(0, 0), 1.0, {0.15, 0.3})), UnsupportedError);
}

TEST_CASE("harmonic-type mean m_-2") {
  CHECK(m_minus2({1, 1}) == Approx(1));
  CHECK(m_minus2({3, 4}) == Approx(std::sqrt(288.0 / 25)));
  CHECK(m_minus2({1, 1e8}) == Approx(std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("summary applies overrides") {
  GeomOverrides o;
  o.r_e = 0.3;
  o.john_axes = std::vector<double>{1, 1};
  const auto g = summarize(make_dumbbell(1, 0.55, 0.3), o);
  REQUIRE(g.r_e);
  CHECK(g.r_e->value == 0.3);
  CHECK(g.r_in == Approx(1).epsilon(1e-3));
}

}
