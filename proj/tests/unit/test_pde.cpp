#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hotspot/anisotropy.hpp"
#include "hotspot/errors.hpp"
#include "hotspot/pde.hpp"
#include "hotspot/semilinear.hpp"

using namespace hotspot;
using doctest::Approx;

namespace {

constexpr double kH = 1.0 / 128;
const double kPi = std::numbers::pi;

// -Lap u = 2 on [0, pi]^2: double sine series at the centre.
double square_torsion_center() {
  double s = 0;
  for (int m = 1; m < 100; m += 2)
    for (int n = 1; n < 100; n += 2) {
      const double sign = ((m / 2 + n / 2) % 2 == 0) ? 1.0 : -1.0;
      s += sign * 32.0 / (kPi * kPi * m * n * (m * m + n * n));
    }
  return s;
}

// First zero of J_nu by bracketing and bisection on the standard library Bessel function.
double bessel_zero_oracle(double nu) {
  double a = 0.5, b = 0.6;
  while (std::cyl_bessel_j(nu, a) * std::cyl_bessel_j(nu, b) > 0) a = b, b += 0.1;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    (std::cyl_bessel_j(nu, a) * std::cyl_bessel_j(nu, m) <= 0 ? b : a) = m;
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST_SUITE("pde") {

TEST_CASE("torsion on the disk, ellipse and square") {
  const auto disk = make_ball(Point(0, 0), 1);
  const auto u = solve_torsion(disk, kH);
  const auto mx = locate_max(u);
  CHECK(mx.value == Approx(0.5).epsilon(2e-3));
  CHECK(mx.z.norm() <= kH);
  const auto grad = field_gradient(u);
  for (int k = 0; k < u.grid->size(); k += 97) CHECK(std::abs(grad[k].norm() - u.grid->point(k).norm()) <= 2 * kH);

  const auto ell = solve_torsion(make_ellipse(Point(0, 0), 2, 1), kH);
  const auto me = locate_max(ell);
  CHECK(std::abs(me.value - 0.8) <= 2e-3);
  CHECK(me.z.norm() <= kH);

  const auto sq = solve_torsion(make_rectangle(Point(0, 0), Point(kPi, kPi)), kH);
  CHECK(std::abs(locate_max(sq).value - square_torsion_center()) <= 1e-4);

  const auto rect = locate_max(solve_torsion(make_rectangle(Point(0, 0), Point(4, 2)), kH));
  CHECK(std::abs(rect.z.x() - 2) <= kH);
  CHECK(std::abs(rect.z.y() - 1) <= kH);
}

TEST_CASE("axisymmetric torsion") {
  const auto ball = solve_torsion_axisymmetric(make_sphere3d(1.0), kH);
  const auto mx = locate_max(ball);
  CHECK(std::abs(mx.value - 0.5) <= 1e-3);
  CHECK(mx.z.norm() <= kH);
  // Long capsule, mid-section: infinite cylinder profile 3 (a^2 - rho^2) / 4.
  const double a = 0.5;
  const auto cap = solve_torsion_axisymmetric(make_capsule(a, 4.0), 1.0 / 64);
  const int k = cap.grid->index(0, cap.grid->ny() / 2);
  REQUIRE(k >= 0);
  CHECK(std::abs(cap.grid->point(k).y()) < 1.0 / 64);
  CHECK(cap.values(k) == Approx(3 * a * a / 4).epsilon(5e-3));
  CHECK_THROWS_AS(solve_torsion_axisymmetric(make_ball(Point(0, 0), 1), kH), UnsupportedError);
}

TEST_CASE("first Dirichlet eigenpair") {
  const auto disk = solve_eigen(make_ball(Point(0, 0), 1), kH);
  const double j0 = bessel_zero_oracle(0);
  CHECK(j0 == Approx(2.4048255577).epsilon(1e-10));
  CHECK(disk.lambda == Approx(j0 * j0).epsilon(5e-3));
  CHECK(locate_max(disk.phi).z.norm() <= kH);
  CHECK(disk.phi.values.maxCoeff() == Approx(1));
  CHECK(disk.psi.values.cwiseProduct(disk.psi.grid->mass_vector()).dot(disk.psi.values) == Approx(1).epsilon(1e-9));

  const auto sq = solve_eigen(make_rectangle(Point(0, 0), Point(kPi, kPi)), kH);
  CHECK(sq.lambda == Approx(2).epsilon(5e-3));
}

TEST_CASE("heat flow") {
  const auto grid = make_grid(make_ball(Point(0, 0), 1), 1.0 / 64);
  const auto eig = solve_eigen(grid);
  HeatInitial g;
  g.nodal = eig.phi.values;
  const auto tr = solve_heat(grid, g, {0.05, 0.3, 1.0});
  for (const auto& st : tr.steps) CHECK(st.M * std::exp(eig.lambda * st.t) == Approx(1).epsilon(1e-2));
  REQUIRE(tr.snapshots.size() == 3);
  for (const auto& sn : tr.snapshots) CHECK(sn.t >= sn.requested);

  HeatInitial one;
  one.constant_one = true;
  const auto t1 = solve_heat(grid, one, {0.001, 0.5, 1.5});
  CHECK(t1.snapshots.front().max.value == Approx(1).epsilon(2e-2));
  // Large time: M e^{lambda t} -> <1, phi_1> / <phi_1, phi_1>.
  const Vector& m = grid->mass_vector();
  const double c = m.dot(eig.phi.values) / eig.phi.values.cwiseProduct(m).dot(eig.phi.values);
  const auto& last = t1.snapshots.back();
  CHECK(last.max.value * std::exp(eig.lambda * last.t) == Approx(c).epsilon(2e-2));

  HeatInitial neg;
  neg.nodal = -eig.phi.values;
  CHECK_THROWS_AS(solve_heat(grid, neg, {0.1}), DomainError);
}

TEST_CASE("small diffusion") {
  const auto disk = make_ball(Point(0, 0), 1);
  const auto grid = make_grid(disk, kH);
  const auto tor = solve_torsion(grid);
  const auto big = solve_small_diffusion(grid, 1e6);
  CHECK((big.u.values - tor.values).cwiseAbs().maxCoeff() <= 1e-3 * tor.values.maxCoeff());

  const auto r = solve_small_diffusion(grid, 0.01);
  CHECK(r.v.values.minCoeff() > 0);
  CHECK(r.v.values.maxCoeff() < 1);
  const int c = grid->index(grid->nx() / 2, grid->ny() / 2);
  REQUIRE(c >= 0);
  REQUIRE(grid->point(c).norm() < 1e-12);
  const double vc = r.v.values(c);
  CHECK(-std::sqrt(0.01) * std::log(vc) == Approx(1).epsilon(0.15));

  // Same problem through the generic semilinear solver.
  const auto sl = solve_semilinear(grid, SemilinearSource::small_diffusion(2, 0.1), SemilinearMode::fixed_point);
  const auto sd = solve_small_diffusion(grid, 0.1);
  CHECK((sl.u.values - sd.u.values).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("semilinear sources") {
  for (const auto& s : {SemilinearSource::small_diffusion(2, 0.1), SemilinearSource::constant(3),
                        SemilinearSource::linear(5.78), SemilinearSource::lane_emden(1.5, 4.0)})
    CHECK(check_primitive(s, 0.01, 1.0) <= 1e-6);
}

TEST_CASE("Lane-Emden") {
  const auto grid = make_grid(make_ball(Point(0, 0), 1), kH);
  const auto q2 = solve_lane_emden(grid, 2.0);
  const auto eig = solve_eigen(grid);
  CHECK(q2.lambda_q == Approx(eig.lambda).epsilon(5e-3));
  const auto q15 = solve_lane_emden(grid, 1.5);
  CHECK(q15.lambda_q == Approx(radial_lane_emden_lambda(1.5, 2)).epsilon(1e-2));
  const double j = bessel_zero_oracle(0);
  CHECK(radial_lane_emden_lambda(2.0, 2) == Approx(j * j).epsilon(1e-8));
  CHECK(radial_lane_emden_lambda(2.0, 3) == Approx(kPi * kPi).epsilon(1e-8));
}

TEST_CASE("radial quadratures") {
  CHECK(radial_q_eps(1e4, 1, 2) == Approx(0.5).epsilon(1e-2));
  CHECK(radial_q_eps(1e4, 2, 3) == Approx(2).epsilon(1e-2));
  CHECK(radial_q_eps(0.3, 0, 2) == 0);
  for (double eps : {0.01, 1.0})
    for (double s : {0.1, 0.9}) {
      const double se = std::sqrt(eps);
      CHECK(radial_h_eps(eps, s, 3) == Approx(2 * se * std::sinh(s / se) / s).epsilon(1e-8));
    }
}

TEST_CASE("maximum location and gradients") {
  const auto grid = make_grid(make_ball(Point(0, 0), 1), 1.0 / 32);
  ScalarField lin;
  lin.grid = grid;
  lin.values.resize(grid->size());
  for (int k = 0; k < grid->size(); ++k) lin.values(k) = 2 * grid->point(k).x() - 3 * grid->point(k).y() + 1;
  lin.boundary = [](const Point& x) { return 2 * x.x() - 3 * x.y() + 1; };
  for (const auto& g : field_gradient(lin)) {
    CHECK(g.x() == Approx(2).epsilon(1e-12));
    CHECK(g.y() == Approx(-3).epsilon(1e-12));
  }
  ScalarField cst = lin;
  cst.values.setConstant(0.7);
  cst.boundary = [](const Point&) { return 0.7; };
  for (const auto& g : field_gradient(cst)) CHECK(g.norm() <= 1e-12);
  // A plateau reports all its nodes.
  CHECK(locate_max(cst).near_max.size() == static_cast<size_t>(grid->size()));

  ScalarField zero = lin;
  zero.values.setZero();
  CHECK_THROWS(locate_max(zero));
}

TEST_CASE("p-torsion") {
  const auto grid = make_grid(make_ball(Point(0, 0), 1), 1.0 / 64);
  CHECK(locate_max(solve_p_torsion(grid, 3)).value == Approx(2.0 / 3).epsilon(1e-2));
  CHECK(locate_max(solve_p_torsion(grid, 1.5)).value == Approx(1.0 / 3).epsilon(1e-2));
  const auto lin = solve_torsion(grid);
  const auto p2 = solve_p_torsion(grid, 2);
  CHECK((lin.values - p2.values).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("anisotropic torsion") {
  const Eigen::Matrix2d A = (Eigen::Matrix2d() << 4, 0, 0, 1).finished();
  const auto ell = AnisoNorm::elliptic(A);
  const auto p2 = make_power_pair(2);
  const auto wulff = make_wulff_ball(ell, Point(0, 0), 1);
  NonlinearStats stats;
  const auto u = solve_aniso_torsion(make_grid(wulff, 1.0 / 64), ell, p2, &stats);
  CHECK(locate_max(u).value == Approx(wulff_torsion_exact(ell, p2, 1, Point(0, 0), Point(0, 0))).epsilon(1e-2));
  for (size_t i = 1; i < stats.energies.size(); ++i) CHECK(stats.energies[i] <= stats.energies[i - 1] + 1e-12);

  const auto grid = make_grid(make_ball(Point(0, 0), 1), 1.0 / 32);
  const auto e = solve_aniso_torsion(grid, AnisoNorm::euclidean(), make_power_pair(3));
  const auto p = solve_p_torsion(grid, 3);
  CHECK((e.values - p.values).cwiseAbs().maxCoeff() <= 1e-6);
}

}
