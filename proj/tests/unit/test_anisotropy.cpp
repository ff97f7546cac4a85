#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hotspot/anisotropy.hpp"
#include "hotspot/errors.hpp"

using namespace hotspot;
using doctest::Approx;

namespace {

// max over the H-unit circle of xi . eta, by dense angular sampling.
double polar_oracle(const AnisoNorm& n, const Vec2& eta) {
  double best = 0;
  for (int i = 0; i < 100000; ++i) {
    const double t = 2 * std::numbers::pi * i / 100000;
    const Vec2 d(std::cos(t), std::sin(t));
    best = std::max(best, d.dot(eta) / n.H(d));
  }
  return best;
}

const Eigen::Matrix2d kA = (Eigen::Matrix2d() << 4, 0, 0, 1).finished();

}  // namespace

TEST_SUITE("anisotropy") {

TEST_CASE("polar norms") {
  CHECK(polar(AnisoNorm::euclidean(), Vec2(3, 4)) == Approx(5));
  const auto ell = AnisoNorm::elliptic(kA);
  CHECK(ell.polar(Vec2(1, 0)) == Approx(0.5));
  CHECK(ell.polar(Vec2(0.3, -0.7)) == Approx(polar_oracle(ell, Vec2(0.3, -0.7))).epsilon(1e-6));
  const auto l3 = AnisoNorm::lp(3);
  CHECK(l3.polar(Vec2(1, 1)) == Approx(std::pow(2.0, 2.0 / 3)).epsilon(1e-9));
  CHECK(polar_numeric([&](const Vec2& x) { return l3.H(x); }, Vec2(1, 1)) ==
        Approx(std::pow(2.0, 2.0 / 3)).epsilon(1e-6));
}

TEST_CASE("norm identities") {
  for (const auto& n : {AnisoNorm::elliptic(kA), AnisoNorm::lp(3), AnisoNorm::lp(1.5)}) {
    for (const Vec2& xi : {Vec2(1, 0.2), Vec2(-0.4, 2), Vec2(0.7, -0.7)}) {
      // Euler: gradH . xi = H; polar(gradH) = 1.
      CHECK(n.gradH(xi).dot(xi) == Approx(n.H(xi)).epsilon(1e-10));
      CHECK(n.polar(n.gradH(xi)) == Approx(1).epsilon(1e-8));
      CHECK(n.H(2.5 * xi) == Approx(2.5 * n.H(xi)));
    }
  }
}

TEST_CASE("anisotropic distance and inradius") {
  const auto ell = AnisoNorm::elliptic(kA);
  const auto wulff = make_wulff_ball(ell, Point(0.2, -0.1), 0.8);
  CHECK(aniso_distance(wulff, ell, Point(0.2, -0.1)) == Approx(0.8).epsilon(1e-6));
  const auto disk = make_ball(Point(0, 0), 1);
  CHECK(aniso_distance(disk, ell, Point(0, 0)) == Approx(0.5).epsilon(1e-6));
  for (const Point& x : {Point(0.3, 0.1), Point(-0.6, 0.5)})
    CHECK(aniso_distance(disk, AnisoNorm::euclidean(), x) == Approx(distance_to_boundary(disk, x)).epsilon(1e-6));

  const auto rw = aniso_inradius(wulff, ell);
  CHECK(rw.r_in == Approx(0.8).epsilon(1e-4));
  CHECK((rw.points.front() - Point(0.2, -0.1)).norm() < 1e-2);

  const auto ellipse = make_ellipse(Point(0, 0), 2, 1);
  const Eigen::Matrix2d B = (Eigen::Matrix2d() << 0.25, 0, 0, 1).finished();
  const auto re = aniso_inradius(ellipse, AnisoNorm::elliptic(B));
  CHECK(re.r_in == Approx(1).epsilon(1e-3));
  Point mean(0, 0);
  for (const Point& p : re.points) mean += p / static_cast<double>(re.points.size());
  CHECK(mean.norm() < 2e-2);
}

TEST_CASE("Wulff torsion exact solution") {
  const auto p2 = make_power_pair(2);
  const auto eu = AnisoNorm::euclidean();
  CHECK(wulff_torsion_exact(eu, p2, 1, Point(0, 0), Point(0, 0)) == Approx(0.5));
  CHECK(wulff_torsion_exact(eu, p2, 1, Point(0, 0), Point(1, 0)) == Approx(0).epsilon(1e-12));
  const auto ell = AnisoNorm::elliptic(kA);
  CHECK(wulff_torsion_exact(ell, p2, 1, Point(0, 0), Point(0, 0)) == Approx(0.5));
  // Boundary of the Wulff ball, where the polar norm equals the radius.
  CHECK(ell.polar(Vec2(2, 0)) == Approx(1));
  CHECK(wulff_torsion_exact(ell, p2, 1, Point(0, 0), Point(2, 0)) == Approx(0).epsilon(1e-12));
  CHECK(wulff_torsion_exact(ell, p2, 1, Point(0, 0), Point(0, 1)) == Approx(0).epsilon(1e-12));
}

TEST_CASE("anisotropic mean convexity") {
  const auto disk = make_ball(Point(0, 0), 1);
  const auto c = aniso_mean_convexity(disk, AnisoNorm::euclidean());
  CHECK(c.min_Ma == Approx(1).epsilon(1e-4));
  CHECK(c.max_Ma == Approx(1).epsilon(1e-4));
  const auto ell = AnisoNorm::elliptic(kA);
  const auto w = aniso_mean_convexity(make_wulff_ball(ell, Point(0, 0), 1), ell);
  CHECK(w.h_mean_convex);
  CHECK(w.min_Ma > 0);
  CHECK((w.max_Ma - w.min_Ma) / w.max_Ma < 1e-3);
  const auto peanut = aniso_mean_convexity(make_polar(Point(0, 0), 1.0, {0.15, 0.3}), ell);
  CHECK_FALSE(peanut.h_mean_convex);
  CHECK(peanut.min_Ma < 0);
}

}
