#include "hotspot/anisotropy.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hotspot/errors.hpp"
#include "hotspot/numerics.hpp"

namespace hotspot {

namespace {

constexpr double kPi = std::numbers::pi;

double sgn(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

double lp_norm(const Vec2& x, double s) {
  const double m = std::max(std::abs(x.x()), std::abs(x.y()));
  if (m == 0) return 0.0;
  return m * std::pow(std::pow(std::abs(x.x()) / m, s) + std::pow(std::abs(x.y()) / m, s), 1.0 / s);
}

Vec2 lp_grad(const Vec2& x, double s) {
  const double n = lp_norm(x, s);
  if (n == 0) return Vec2::Zero();
  return Vec2(sgn(x.x()) * std::pow(std::abs(x.x()) / n, s - 1), sgn(x.y()) * std::pow(std::abs(x.y()) / n, s - 1));
}

}  // namespace

AnisoNorm AnisoNorm::euclidean() { return AnisoNorm(); }

AnisoNorm AnisoNorm::elliptic(const Eigen::Matrix2d& A) {
  if ((A - A.transpose()).norm() > 1e-12 * A.norm()) throw DomainError("elliptic norm matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(A);
  if (!(es.eigenvalues()(0) > 0)) throw DomainError("elliptic norm matrix must be positive definite");
  AnisoNorm n;
  n.kind_ = Kind::elliptic;
  n.A_ = A;
  n.Ainv_ = A.inverse();
  return n;
}

AnisoNorm AnisoNorm::lp(double s) {
  if (!(s > 1) || !std::isfinite(s)) throw DomainError("l^s norm needs 1 < s < infinity (strict convexity)");
  AnisoNorm n;
  n.kind_ = Kind::lp;
  n.s_ = s;
  return n;
}

std::string AnisoNorm::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::euclidean: os << "euclidean"; break;
    case Kind::elliptic:
      os << "elliptic(" << A_(0, 0) << "," << A_(0, 1) << "," << A_(1, 1) << ")";
      break;
    case Kind::lp: os << "l" << s_; break;
  }
  return os.str();
}

double AnisoNorm::H(const Vec2& xi) const {
  switch (kind_) {
    case Kind::euclidean: return xi.norm();
    case Kind::elliptic: return std::sqrt(std::max(0.0, xi.dot(A_ * xi)));
    case Kind::lp: return lp_norm(xi, s_);
  }
  return 0;
}

Vec2 AnisoNorm::gradH(const Vec2& xi) const {
  const double h = H(xi);
  if (h == 0) return Vec2::Zero();
  switch (kind_) {
    case Kind::euclidean: return xi / h;
    case Kind::elliptic: return A_ * xi / h;
    case Kind::lp: return lp_grad(xi, s_);
  }
  return Vec2::Zero();
}

Vec2 AnisoNorm::H_gradH(const Vec2& xi) const {
  switch (kind_) {
    case Kind::euclidean: return xi;
    case Kind::elliptic: return A_ * xi;
    case Kind::lp: return H(xi) * lp_grad(xi, s_);
  }
  return Vec2::Zero();
}

double AnisoNorm::polar(const Vec2& eta) const {
  switch (kind_) {
    case Kind::euclidean: return eta.norm();
    case Kind::elliptic: return std::sqrt(std::max(0.0, eta.dot(Ainv_ * eta)));
    case Kind::lp: return lp_norm(eta, s_ / (s_ - 1));
  }
  return 0;
}

Vec2 AnisoNorm::grad_polar(const Vec2& eta) const {
  const double h = polar(eta);
  if (h == 0) return Vec2::Zero();
  switch (kind_) {
    case Kind::euclidean: return eta / h;
    case Kind::elliptic: return Ainv_ * eta / h;
    case Kind::lp: return lp_grad(eta, s_ / (s_ - 1));
  }
  return Vec2::Zero();
}

Eigen::Matrix2d AnisoNorm::preconditioner() const {
  return kind_ == Kind::elliptic ? A_ : Eigen::Matrix2d::Identity();
}

double polar(const AnisoNorm& norm, const Vec2& eta) { return norm.polar(eta); }

double polar_numeric(const std::function<double(const Vec2&)>& H, const Vec2& eta) {
  constexpr int n = 720;
  auto f = [&](double th) {
    const Vec2 xi(std::cos(th), std::sin(th));
    return xi.dot(eta) / H(xi);
  };
  int best = 0;
  double bv = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const double v = f(2 * kPi * k / n);
    if (v > bv) {
      bv = v;
      best = k;
    }
  }
  const double th0 = 2 * kPi * best / n, dth = 2 * kPi / n;
  const auto [th, v] = numerics::golden_max(f, th0 - dth, th0 + dth, 200);
  (void)th;
  return std::max(v, bv);
}

DomainSpec make_wulff_ball(const AnisoNorm& norm, const Point& x0, double r) {
  if (!(r > 0)) throw DomainError("Wulff ball radius must be positive");
  switch (norm.kind()) {
    case AnisoNorm::Kind::euclidean: return make_ball(x0, r);
    case AnisoNorm::Kind::elliptic: {
      const auto& A = norm.matrix();
      if (std::abs(A(0, 1)) < 1e-15) return make_ellipse(x0, r * std::sqrt(A(0, 0)), r * std::sqrt(A(1, 1)));
      break;
    }
    default: break;
  }
  const double R = 2 * r * std::max(norm.H(Vec2(1, 0)), norm.H(Vec2(0, 1))) + r;
  return make_implicit([norm, x0, r](const Point& y) { return norm.polar(y - x0) - r; }, x0 - Point(R, R),
                       x0 + Point(R, R), 256);
}

double aniso_distance(const DomainSpec& domain, const AnisoNorm& norm, const Point& x) {
  if (domain.dimension() != 2) throw UnsupportedError("anisotropic distance is implemented for planar domains");
  const auto [lo, hi] = domain.bbox();
  if (domain.level(x) > 1e-9 * (hi - lo).norm()) throw DomainError("point lies outside the closure of the domain");
  if (norm.kind() == AnisoNorm::Kind::euclidean) return domain.raw_distance(x);
  if (domain.kind() == DomainKind::implicit) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& b : domain.boundary_samples(0)) d = std::min(d, norm.polar(x - b.x));
    return d;
  }
  constexpr int n = 2048;
  auto f = [&](double t) { return norm.polar(x - domain.boundary_at(t - std::floor(t)).x); };
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = f(static_cast<double>(k) / n);
  double d = std::numeric_limits<double>::infinity();
  // Refine around every local minimum that is within a sample spacing of the global one.
  const double vmin = *std::min_element(v.begin(), v.end());
  for (int k = 0; k < n; ++k) {
    if (v[k] > v[(k + n - 1) % n] || v[k] > v[(k + 1) % n]) continue;
    if (v[k] > vmin * 1.05 + 1e-12) continue;
    const double t0 = static_cast<double>(k) / n;
    const auto [t, val] = numerics::golden_min(f, t0 - 1.0 / n, t0 + 1.0 / n, 80);
    (void)t;
    d = std::min({d, val, v[k]});
  }
  return d;
}

Incenters aniso_inradius(const DomainSpec& domain, const AnisoNorm& norm) {
  if (norm.kind() == AnisoNorm::Kind::euclidean) return inradius_incenter(domain);
  return maximize_over_domain(domain, [&](const Point& x) { return aniso_distance(domain, norm, x); }, 100);
}

double wulff_torsion_exact(const AnisoNorm& norm, const YoungPair& pair, double r, const Point& x0, const Point& y) {
  const double h = norm.polar(y - x0);
  if (h > r * (1 + 1e-12)) throw DomainError("point lies outside the Wulff ball");
  return pair.Psi(r) - pair.Psi(std::min(h, r));
}

AnisoConvexity aniso_mean_convexity(const DomainSpec& domain, const AnisoNorm& norm, double tol, int samples) {
  if (domain.dimension() != 2 || domain.kind() == DomainKind::implicit)
    throw UnsupportedError("anisotropic mean curvature needs a parametrised planar boundary");
  constexpr double dt = 1e-4;
  auto nu_a = [&](double t) { return norm.gradH(-domain.boundary_at(t - std::floor(t)).normal); };
  auto pos = [&](double t) { return domain.boundary_at(t - std::floor(t)).x; };
  AnisoConvexity out;
  out.min_Ma = std::numeric_limits<double>::infinity();
  out.max_Ma = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const double t = (k + 0.5) / samples;
    const Vec2 dx = (pos(t + dt) - pos(t - dt)) / (2 * dt);
    const double speed = dx.norm();
    if (!(speed > 0)) continue;
    const Vec2 T = dx / speed;
    const Vec2 dv = (nu_a(t + dt) - nu_a(t - dt)) / (2 * dt);
    const double Ma = -dv.dot(T) / speed;
    out.min_Ma = std::min(out.min_Ma, Ma);
    out.max_Ma = std::max(out.max_Ma, Ma);
  }
  out.h_mean_convex = out.min_Ma >= -tol;
  return out;
}

}  // namespace hotspot
