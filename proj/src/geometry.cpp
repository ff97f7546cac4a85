#include "hotspot/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hotspot/errors.hpp"
#include "hotspot/numerics.hpp"

namespace hotspot {

namespace {

constexpr double kPi = std::numbers::pi;

double segment_distance(const Point& p, const Point& a, const Point& b) {
  const Point d = b - a;
  const double L2 = d.squaredNorm();
  double t = L2 > 0 ? (p - a).dot(d) / L2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * d)).norm();
}

Point perp_out(const Point& tangent) {  // outward normal of a counter-clockwise curve
  Point n(tangent.y(), -tangent.x());
  return n / n.norm();
}

// Smallest t in (0, 1] with |a + t d - c| = R, assuming a strictly inside the circle.
double circle_crossing(const Point& a, const Point& b, const Point& c, double R) {
  const Point d = b - a, f = a - c;
  const double A = d.squaredNorm(), B = 2 * f.dot(d), C = f.squaredNorm() - R * R;
  const double disc = std::max(0.0, B * B - 4 * A * C);
  const double t = (-B + std::sqrt(disc)) / (2 * A);
  return std::clamp(t, 0.0, 1.0);
}

// ---------------------------------------------------------------------------------------------
class BallShape final : public Shape {
 public:
  BallShape(Point c, double R) : c_(std::move(c)), R_(R) {}
  DomainKind kind() const override { return DomainKind::ball; }
  bool convex() const override { return true; }
  std::pair<Point, Point> bbox() const override {
    return {c_ - Point(R_, R_), c_ + Point(R_, R_)};
  }
  double level(const Point& x) const override { return (x - c_).norm() - R_; }
  double distance(const Point& x) const override { return std::abs(R_ - (x - c_).norm()); }
  double crossing(const Point& a, const Point& b) const override { return circle_crossing(a, b, c_, R_); }
  BoundaryPoint boundary_at(double t) const override {
    const double th = 2 * kPi * t;
    const Point n(std::cos(th), std::sin(th));
    return {c_ + R_ * n, n, 1.0 / R_, true};
  }
  double exact_diameter() const override { return 2 * R_; }
  const Point& center() const { return c_; }
  double radius() const { return R_; }

 private:
  Point c_;
  double R_;
};

// ---------------------------------------------------------------------------------------------
// Distance from a first-quadrant point to an ellipse with semi-axes e0 >= e1 (Eberly's method).
double ellipse_root(double r0, double z0, double z1, double g) {
  const double n0 = r0 * z0;
  double s0 = z1 - 1, s1 = (g < 0 ? 0.0 : std::hypot(n0, z1) - 1);
  double s = 0;
  for (int i = 0; i < 200; ++i) {
    s = 0.5 * (s0 + s1);
    if (s == s0 || s == s1) break;
    const double q0 = n0 / (s + r0), q1 = z1 / (s + 1);
    const double gg = q0 * q0 + q1 * q1 - 1;
    if (gg > 0) s0 = s;
    else if (gg < 0) s1 = s;
    else break;
  }
  return s;
}

double ellipse_quadrant_distance(double e0, double e1, double y0, double y1) {
  if (y1 > 0) {
    if (y0 > 0) {
      const double z0 = y0 / e0, z1 = y1 / e1, g = z0 * z0 + z1 * z1 - 1;
      if (g == 0) return 0.0;
      const double r0 = (e0 / e1) * (e0 / e1);
      const double sbar = ellipse_root(r0, z0, z1, g);
      const double x0 = r0 * y0 / (sbar + r0), x1 = y1 / (sbar + 1);
      return std::hypot(x0 - y0, x1 - y1);
    }
    return std::abs(y1 - e1);
  }
  const double numer0 = e0 * y0, denom0 = e0 * e0 - e1 * e1;
  if (numer0 < denom0) {
    const double xde0 = numer0 / denom0;
    const double x0 = e0 * xde0, x1 = e1 * std::sqrt(std::max(0.0, 1 - xde0 * xde0));
    return std::hypot(x0 - y0, x1);
  }
  return std::abs(y0 - e0);
}

class EllipseShape final : public Shape {
 public:
  EllipseShape(Point c, double a, double b) : c_(std::move(c)), a_(a), b_(b) {}
  DomainKind kind() const override { return DomainKind::ellipse; }
  bool convex() const override { return true; }
  std::pair<Point, Point> bbox() const override { return {c_ - Point(a_, b_), c_ + Point(a_, b_)}; }
  double level(const Point& x) const override {
    const Point q = x - c_;
    return std::sqrt((q.x() / a_) * (q.x() / a_) + (q.y() / b_) * (q.y() / b_)) - 1.0;
  }
  double distance(const Point& x) const override {
    const double y0 = std::abs(x.x() - c_.x()), y1 = std::abs(x.y() - c_.y());
    if (a_ >= b_) return ellipse_quadrant_distance(a_, b_, y0, y1);
    return ellipse_quadrant_distance(b_, a_, y1, y0);
  }
  double crossing(const Point& p, const Point& q) const override {
    const Point s(1 / a_, 1 / b_);
    const Point pa = (p - c_).cwiseProduct(s), pb = (q - c_).cwiseProduct(s);
    return circle_crossing(pa, pb, Point(0, 0), 1.0);
  }
  BoundaryPoint boundary_at(double t) const override {
    const double th = 2 * kPi * t, ct = std::cos(th), st = std::sin(th);
    Point n(ct / a_, st / b_);
    n.normalize();
    const double den = std::pow(a_ * a_ * st * st + b_ * b_ * ct * ct, 1.5);
    return {c_ + Point(a_ * ct, b_ * st), n, a_ * b_ / den, true};
  }
  double exact_diameter() const override { return 2 * std::max(a_, b_); }
  const Point& center() const { return c_; }
  double a() const { return a_; }
  double b() const { return b_; }

 private:
  Point c_;
  double a_, b_;
};

// ---------------------------------------------------------------------------------------------
class PolygonShape : public Shape {
 public:
  explicit PolygonShape(std::vector<Point> v) : v_(std::move(v)) {
    const size_t n = v_.size();
    if (n < 3) throw DomainError("polygon needs at least 3 vertices");
    double area2 = 0;
    for (size_t i = 0; i < n; ++i) {
      const Point& p = v_[i];
      const Point& q = v_[(i + 1) % n];
      area2 += p.x() * q.y() - q.x() * p.y();
    }
    if (std::abs(area2) < 1e-14) throw DomainError("polygon has empty interior");
    if (area2 < 0) std::reverse(v_.begin(), v_.end());
    perimeter_ = 0;
    cum_.push_back(0);
    for (size_t i = 0; i < n; ++i) {
      const Point& p = v_[i];
      const Point& q = v_[(i + 1) % n];
      const Point e = q - p;
      const Point nrm = perp_out(e);
      normals_.push_back(nrm);
      offsets_.push_back(nrm.dot(p));
      perimeter_ += e.norm();
      cum_.push_back(perimeter_);
    }
    for (size_t i = 0; i < n; ++i) {
      const Point e1 = v_[(i + 1) % n] - v_[i];
      const Point e2 = v_[(i + 2) % n] - v_[(i + 1) % n];
      if (e1.x() * e2.y() - e1.y() * e2.x() < -1e-12) throw DomainError("polygon is not convex");
    }
    lo_ = hi_ = v_[0];
    for (const auto& p : v_) {
      lo_ = lo_.cwiseMin(p);
      hi_ = hi_.cwiseMax(p);
    }
  }
  DomainKind kind() const override { return DomainKind::convex_polygon; }
  bool convex() const override { return true; }
  std::pair<Point, Point> bbox() const override { return {lo_, hi_}; }
  double level(const Point& x) const override {
    double m = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < v_.size(); ++i) m = std::max(m, normals_[i].dot(x) - offsets_[i]);
    return m;
  }
  double distance(const Point& x) const override {
    const double l = level(x);
    if (l <= 0) return -l;
    double d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < v_.size(); ++i) d = std::min(d, segment_distance(x, v_[i], v_[(i + 1) % v_.size()]));
    return d;
  }
  double crossing(const Point& a, const Point& b) const override {
    // Convex: the segment leaves through the first half-plane it crosses.
    double t = 1.0;
    const Point d = b - a;
    for (size_t i = 0; i < v_.size(); ++i) {
      const double num = offsets_[i] - normals_[i].dot(a), den = normals_[i].dot(d);
      if (den > 0) t = std::min(t, num / den);
    }
    return std::clamp(t, 0.0, 1.0);
  }
  BoundaryPoint boundary_at(double t) const override {
    double s = (t - std::floor(t)) * perimeter_;
    size_t i = static_cast<size_t>(std::upper_bound(cum_.begin(), cum_.end(), s) - cum_.begin()) - 1;
    i = std::min(i, v_.size() - 1);
    const Point& p = v_[i];
    const Point& q = v_[(i + 1) % v_.size()];
    const double len = cum_[i + 1] - cum_[i];
    const double f = len > 0 ? (s - cum_[i]) / len : 0.0;
    return {p + f * (q - p), normals_[i], 0.0, true};
  }
  double exact_diameter() const override {
    double d = 0;
    for (const auto& p : v_)
      for (const auto& q : v_) d = std::max(d, (p - q).norm());
    return d;
  }
  const std::vector<Point>& vertices() const { return v_; }
  const std::vector<Point>& normals() const { return normals_; }
  const std::vector<double>& offsets() const { return offsets_; }

 protected:
  std::vector<Point> v_, normals_;
  std::vector<double> offsets_, cum_;
  double perimeter_ = 0;
  Point lo_, hi_;
};

class RectangleShape final : public PolygonShape {
 public:
  RectangleShape(const Point& lo, const Point& hi)
      : PolygonShape({lo, Point(hi.x(), lo.y()), hi, Point(lo.x(), hi.y())}) {}
  DomainKind kind() const override { return DomainKind::rectangle; }
  double level(const Point& x) const override {
    return std::max({lo_.x() - x.x(), x.x() - hi_.x(), lo_.y() - x.y(), x.y() - hi_.y()});
  }
};

// ---------------------------------------------------------------------------------------------
class PolarShape final : public Shape {
 public:
  PolarShape(Point c, double a0, std::vector<double> ca, std::vector<double> sa)
      : c_(std::move(c)), a0_(a0), ca_(std::move(ca)), sa_(std::move(sa)) {
    constexpr int n = 4096;
    double rmax = 0, kmin = std::numeric_limits<double>::infinity();
    pts_.reserve(n);
    for (int i = 0; i < n; ++i) {
      const double th = 2 * kPi * i / n;
      const double r = radius(th, 0);
      if (!(r > 0)) throw DomainError("polar domain needs r(theta) > 0");
      rmax = std::max(rmax, r);
      kmin = std::min(kmin, curvature_at(th));
      pts_.push_back(point(th));
    }
    convex_ = kmin >= 0;
    lo_ = hi_ = pts_[0];
    for (const auto& p : pts_) {
      lo_ = lo_.cwiseMin(p);
      hi_ = hi_.cwiseMax(p);
    }
  }
  DomainKind kind() const override { return DomainKind::polar; }
  bool convex() const override { return convex_; }
  std::pair<Point, Point> bbox() const override { return {lo_, hi_}; }
  double level(const Point& x) const override {
    const Point q = x - c_;
    return q.norm() - radius(std::atan2(q.y(), q.x()), 0);
  }
  double distance(const Point& x) const override {
    const int n = static_cast<int>(pts_.size());
    std::vector<std::pair<double, int>> best;
    for (int i = 0; i < n; ++i) {
      const double d2 = (pts_[i] - x).squaredNorm();
      const double dl = (pts_[(i + n - 1) % n] - x).squaredNorm(), dr = (pts_[(i + 1) % n] - x).squaredNorm();
      if (d2 <= dl && d2 <= dr) best.emplace_back(d2, i);
    }
    std::sort(best.begin(), best.end());
    double result = std::numeric_limits<double>::infinity();
    const double dth = 2 * kPi / n;
    for (size_t k = 0; k < best.size() && k < 4; ++k) {
      const double th0 = dth * best[k].second;
      auto f = [&](double th) { return (point(th) - x).squaredNorm(); };
      const auto [th, v] = numerics::golden_min(f, th0 - dth, th0 + dth, 80);
      result = std::min(result, std::sqrt(std::min(v, best[k].first)));
    }
    return result;
  }
  BoundaryPoint boundary_at(double t) const override {
    const double th = 2 * kPi * t;
    return {point(th), perp_out(tangent(th)), curvature_at(th), true};
  }

  double radius(double th, int deriv) const {
    double r = deriv == 0 ? a0_ : 0.0;
    for (size_t k = 0; k < ca_.size(); ++k) {
      const double m = static_cast<double>(k + 1);
      const double c = std::cos(m * th), s = std::sin(m * th);
      if (deriv == 0) r += ca_[k] * c;
      if (deriv == 1) r += -m * ca_[k] * s;
      if (deriv == 2) r += -m * m * ca_[k] * c;
    }
    for (size_t k = 0; k < sa_.size(); ++k) {
      const double m = static_cast<double>(k + 1);
      const double c = std::cos(m * th), s = std::sin(m * th);
      if (deriv == 0) r += sa_[k] * s;
      if (deriv == 1) r += m * sa_[k] * c;
      if (deriv == 2) r += -m * m * sa_[k] * s;
    }
    return r;
  }
  Point point(double th) const { return c_ + radius(th, 0) * Point(std::cos(th), std::sin(th)); }
  Point tangent(double th) const {
    const double r = radius(th, 0), r1 = radius(th, 1);
    return r1 * Point(std::cos(th), std::sin(th)) + r * Point(-std::sin(th), std::cos(th));
  }
  double curvature_at(double th) const {
    const double r = radius(th, 0), r1 = radius(th, 1), r2 = radius(th, 2);
    return (r * r + 2 * r1 * r1 - r * r2) / std::pow(r * r + r1 * r1, 1.5);
  }

 private:
  Point c_;
  double a0_;
  std::vector<double> ca_, sa_;
  std::vector<Point> pts_;
  bool convex_ = false;
  Point lo_, hi_;
};

// ---------------------------------------------------------------------------------------------
class RevolutionShape final : public Shape {
 public:
  explicit RevolutionShape(std::vector<ProfilePiece> pieces) : p_(std::move(pieces)) {
    if (p_.empty()) throw DomainError("revolution profile needs at least one piece");
    const auto& first = p_.front();
    const auto& last = p_.back();
    if (first.type != ProfilePiece::Type::sphere || last.type != ProfilePiece::Type::sphere ||
        std::abs(first.z0 - (first.zc - first.R)) > 1e-12 || std::abs(last.z1 - (last.zc + last.R)) > 1e-12)
      throw UnsupportedError("profile must meet the axis transversally (sphere caps at both ends)");
    for (size_t i = 0; i + 1 < p_.size(); ++i) {
      if (std::abs(p_[i].z1 - p_[i + 1].z0) > 1e-12) throw DomainError("profile pieces are not contiguous");
      const double fa = p_[i].F(p_[i].z1), fb = p_[i + 1].F(p_[i + 1].z0);
      if (std::abs(fa - fb) > 1e-9 * (1 + fa)) throw DomainError("profile is discontinuous at a junction");
    }
    convex_ = true;
    double rmax = 0, total = 0;
    for (const auto& q : p_) {
      if (q.type == ProfilePiece::Type::catenoid) convex_ = false;
      double len = 0;
      Point prev = piece_point(q, 0.0);
      for (int k = 1; k <= 2000; ++k) {
        const Point cur = piece_point(q, k / 2000.0);
        len += (cur - prev).norm();
        rmax = std::max(rmax, cur.x());
        prev = cur;
      }
      total += len;
      cum_.push_back(total);
    }
    for (auto& c : cum_) c /= total;
    lo_ = Point(0, first.z0);
    hi_ = Point(rmax, last.z1);
    pts_ = samples(8192);
  }
  DomainKind kind() const override { return DomainKind::revolution; }
  int dimension() const override { return 3; }
  bool convex() const override { return convex_; }
  std::pair<Point, Point> bbox() const override { return {lo_, hi_}; }
  double level(const Point& x) const override {
    const double rho = std::abs(x.x()), z = x.y();
    if (z < lo_.y() || z > hi_.y()) return rho * rho + std::pow(std::max(lo_.y() - z, z - hi_.y()), 2);
    return rho * rho - piece_for(z).F(z);
  }
  double distance(const Point& x) const override {
    const Point q(std::abs(x.x()), x.y());
    double d = std::numeric_limits<double>::infinity();
    for (const auto& pc : p_) d = std::min(d, piece_distance(pc, q));
    return d;
  }
  BoundaryPoint boundary_at(double t) const override {
    t = std::clamp(t, 0.0, 1.0);
    size_t i = static_cast<size_t>(std::lower_bound(cum_.begin(), cum_.end(), t) - cum_.begin());
    i = std::min(i, p_.size() - 1);
    const double a = i == 0 ? 0.0 : cum_[i - 1];
    const double s = (cum_[i] > a) ? (t - a) / (cum_[i] - a) : 0.0;
    const auto& pc = p_[i];
    const Point x = piece_point(pc, s);
    const double z = x.y();
    const double F = std::max(0.0, pc.F(z)), F1 = pc.dF(z), F2 = pc.d2F(z);
    Point n(2 * std::sqrt(F), -F1);
    n.normalize();
    const double M = (4 * F + 2 * F1 * F1 - 2 * F * F2) / std::pow(4 * F + F1 * F1, 1.5);
    return {x, n, M, true};
  }
  std::vector<BoundaryPoint> samples(int n) const override {
    std::vector<BoundaryPoint> out;
    out.reserve(n + 1);
    for (int i = 0; i <= n; ++i) out.push_back(boundary_at(static_cast<double>(i) / n));
    return out;
  }
  double exact_diameter() const override {
    if (p_.size() == 1) return 2 * p_[0].R;
    double d = 0;
    for (const auto& a : pts_)
      for (const auto& b : pts_) d = std::max(d, std::hypot(a.x.x() + b.x.x(), a.x.y() - b.x.y()));
    return d;
  }
  const std::vector<ProfilePiece>& pieces() const { return p_; }

 private:
  const ProfilePiece& piece_for(double z) const {
    for (const auto& q : p_)
      if (z <= q.z1) return q;
    return p_.back();
  }
  static double sphere_angle(const ProfilePiece& q, double z) {
    return std::acos(std::clamp((q.zc - z) / q.R, -1.0, 1.0));
  }
  static Point piece_point(const ProfilePiece& q, double s) {
    if (q.type == ProfilePiece::Type::sphere) {
      const double a0 = sphere_angle(q, q.z0), a1 = sphere_angle(q, q.z1);
      const double al = a0 + s * (a1 - a0);
      return {q.R * std::sin(al), q.zc - q.R * std::cos(al)};
    }
    const double z = q.z0 + s * (q.z1 - q.z0);
    return {std::sqrt(std::max(0.0, q.F(z))), z};
  }
  static double piece_distance(const ProfilePiece& q, const Point& x) {
    const Point e0 = piece_point(q, 0.0), e1 = piece_point(q, 1.0);
    double d = std::min((x - e0).norm(), (x - e1).norm());
    switch (q.type) {
      case ProfilePiece::Type::sphere: {
        const Point c(0, q.zc);
        const double al = std::atan2(x.x(), q.zc - x.y());
        const double a0 = sphere_angle(q, q.z0), a1 = sphere_angle(q, q.z1);
        if (al >= std::min(a0, a1) - 1e-15 && al <= std::max(a0, a1) + 1e-15)
          d = std::min(d, std::abs((x - c).norm() - q.R));
        break;
      }
      case ProfilePiece::Type::cylinder:
        if (x.y() >= q.z0 && x.y() <= q.z1) d = std::min(d, std::abs(x.x() - q.a));
        break;
      case ProfilePiece::Type::catenoid: {
        constexpr int n = 256;
        auto f = [&](double s) { return (piece_point(q, s) - x).squaredNorm(); };
        int best = 0;
        double bv = f(0.0);
        for (int k = 1; k <= n; ++k) {
          const double v = f(static_cast<double>(k) / n);
          if (v < bv) {
            bv = v;
            best = k;
          }
        }
        const double lo = std::max(0.0, (best - 1.0) / n), hi = std::min(1.0, (best + 1.0) / n);
        const auto [s, v] = numerics::golden_min(f, lo, hi, 100);
        d = std::min(d, std::sqrt(std::min(v, bv)));
        break;
      }
    }
    return d;
  }

  std::vector<ProfilePiece> p_;
  std::vector<double> cum_;
  std::vector<BoundaryPoint> pts_;
  bool convex_ = true;
  Point lo_, hi_;
};

// ---------------------------------------------------------------------------------------------
class ImplicitShape final : public Shape {
 public:
  ImplicitShape(std::function<double(const Point&)> f, Point lo, Point hi, int res)
      : f_(std::move(f)), lo_(std::move(lo)), hi_(std::move(hi)) {
    constexpr int sub = 4;  // sub-edges per cell edge: >= 4 samples per crossed cell
    const Point span = hi_ - lo_;
    const int nx = res * sub, ny = std::max(1, static_cast<int>(std::round(res * sub * span.y() / span.x())));
    const double hx = span.x() / nx, hy = span.y() / ny;
    auto node = [&](int i, int j) { return Point(lo_.x() + i * hx, lo_.y() + j * hy); };
    std::vector<double> v((nx + 1) * (ny + 1));
    bool any_inside = false;
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        v[j * (nx + 1) + i] = f_(node(i, j));
        any_inside |= v[j * (nx + 1) + i] < 0;
      }
    if (!any_inside) throw DomainError("implicit domain has empty interior on its sampling grid");
    auto add = [&](const Point& a, const Point& b) {
      const double t = numerics::bisect([&](double s) { return f_(a + s * (b - a)); }, 0.0, 1.0, 1e-13);
      samples_.push_back(a + t * (b - a));
    };
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        const double a = v[j * (nx + 1) + i];
        if (i < nx && (a < 0) != (v[j * (nx + 1) + i + 1] < 0)) add(node(i, j), node(i + 1, j));
        if (j < ny && (a < 0) != (v[(j + 1) * (nx + 1) + i] < 0)) add(node(i, j), node(i, j + 1));
      }
    spacing_ = std::max(hx, hy);
  }
  DomainKind kind() const override { return DomainKind::implicit; }
  std::pair<Point, Point> bbox() const override { return {lo_, hi_}; }
  double level(const Point& x) const override { return f_(x); }
  double distance(const Point& x) const override {
    std::vector<std::pair<double, size_t>> near;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < samples_.size(); ++i) best = std::min(best, (samples_[i] - x).squaredNorm());
    const double lim = std::pow(std::sqrt(best) + 2 * spacing_, 2);
    for (size_t i = 0; i < samples_.size(); ++i) {
      const double d2 = (samples_[i] - x).squaredNorm();
      if (d2 <= lim) near.emplace_back(d2, i);
    }
    std::sort(near.begin(), near.end());
    if (near.size() > 12) near.resize(12);
    double d = std::sqrt(best);
    // Chord refinement between nearby samples.
    for (size_t a = 0; a < near.size(); ++a)
      for (size_t b = a + 1; b < near.size(); ++b) {
        const Point& pa = samples_[near[a].second];
        const Point& pb = samples_[near[b].second];
        if ((pa - pb).norm() <= 1.5 * spacing_) d = std::min(d, segment_distance(x, pa, pb));
      }
    return d;
  }
  BoundaryPoint boundary_at(double t) const override {
    const size_t n = samples_.size();
    const size_t i = std::min(n - 1, static_cast<size_t>(std::floor((t - std::floor(t)) * n)));
    const Point& x = samples_[i];
    const double e = 1e-6 * (hi_ - lo_).norm();
    Point g((f_(x + Point(e, 0)) - f_(x - Point(e, 0))) / (2 * e), (f_(x + Point(0, e)) - f_(x - Point(0, e))) / (2 * e));
    return {x, g / g.norm(), 0.0, false};
  }
  std::vector<BoundaryPoint> samples(int) const override {
    std::vector<BoundaryPoint> out;
    out.reserve(samples_.size());
    for (size_t i = 0; i < samples_.size(); ++i) out.push_back(boundary_at((i + 0.5) / samples_.size()));
    return out;
  }
  bool has_curvature() const override { return false; }

 private:
  std::function<double(const Point&)> f_;
  Point lo_, hi_;
  std::vector<Point> samples_;
  double spacing_ = 0;
};

double boundary_tolerance(const DomainSpec& d) {
  const auto [lo, hi] = d.bbox();
  return 1e-9 * (hi - lo).norm();
}

}  // namespace

// ---- ProfilePiece -----------------------------------------------------------------------------

double ProfilePiece::F(double z) const {
  switch (type) {
    case Type::sphere: return R * R - (z - zc) * (z - zc);
    case Type::catenoid: {
      const double ch = std::cosh((z - zm) / c);
      return c * c * ch * ch;
    }
    case Type::cylinder: return a * a;
  }
  return 0;
}

double ProfilePiece::dF(double z) const {
  switch (type) {
    case Type::sphere: return -2 * (z - zc);
    case Type::catenoid: {
      const double u = (z - zm) / c;
      return 2 * c * std::cosh(u) * std::sinh(u);
    }
    case Type::cylinder: return 0;
  }
  return 0;
}

double ProfilePiece::d2F(double z) const {
  switch (type) {
    case Type::sphere: return -2;
    case Type::catenoid: {
      const double u = (z - zm) / c;
      return 2 * (std::cosh(u) * std::cosh(u) + std::sinh(u) * std::sinh(u));
    }
    case Type::cylinder: return 0;
  }
  return 0;
}

// ---- Shape defaults ---------------------------------------------------------------------------

double Shape::crossing(const Point& a, const Point& b) const {
  if (level(b) < 0) return 1.0;
  return numerics::bisect([&](double t) { return level(a + t * (b - a)); }, 0.0, 1.0, 1e-15);
}

std::vector<BoundaryPoint> Shape::samples(int n) const {
  std::vector<BoundaryPoint> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(boundary_at(static_cast<double>(i) / n));
  return out;
}

// ---- DomainSpec -------------------------------------------------------------------------------

std::string to_string(DomainKind k) {
  switch (k) {
    case DomainKind::ball: return "ball";
    case DomainKind::ellipse: return "ellipse";
    case DomainKind::rectangle: return "rectangle";
    case DomainKind::convex_polygon: return "convex_polygon";
    case DomainKind::polar: return "polar";
    case DomainKind::revolution: return "revolution";
    case DomainKind::implicit: return "implicit";
  }
  return "?";
}

DomainKind DomainSpec::kind() const { return shape_->kind(); }
int DomainSpec::dimension() const { return shape_->dimension(); }
bool DomainSpec::convex() const { return shape_->convex(); }
std::pair<Point, Point> DomainSpec::bbox() const { return shape_->bbox(); }
double DomainSpec::level(const Point& x) const { return shape_->level(x); }
double DomainSpec::raw_distance(const Point& x) const { return shape_->distance(x); }
double DomainSpec::crossing(const Point& a, const Point& b) const { return shape_->crossing(a, b); }
BoundaryPoint DomainSpec::boundary_at(double t) const { return shape_->boundary_at(t); }
std::vector<BoundaryPoint> DomainSpec::boundary_samples(int n) const { return shape_->samples(n); }
bool DomainSpec::has_curvature() const { return shape_->has_curvature(); }

// ---- constructors -----------------------------------------------------------------------------

DomainSpec make_ball(const Point& center, double radius) {
  if (!(radius > 0)) throw DomainError("ball radius must be positive");
  return DomainSpec(std::make_shared<BallShape>(center, radius));
}

DomainSpec make_ellipse(const Point& center, double a, double b) {
  if (!(a > 0 && b > 0)) throw DomainError("ellipse semi-axes must be positive");
  return DomainSpec(std::make_shared<EllipseShape>(center, a, b));
}

DomainSpec make_rectangle(const Point& lo, const Point& hi) {
  if (!(hi.x() > lo.x() && hi.y() > lo.y())) throw DomainError("rectangle has empty interior");
  return DomainSpec(std::make_shared<RectangleShape>(lo, hi));
}

DomainSpec make_convex_polygon(std::vector<Point> vertices) {
  return DomainSpec(std::make_shared<PolygonShape>(std::move(vertices)));
}

DomainSpec make_regular_polygon(int n, double side, const Point& center) {
  if (n < 3 || !(side > 0)) throw DomainError("regular polygon needs n >= 3 and side > 0");
  const double R = side / (2 * std::sin(kPi / n));
  std::vector<Point> v;
  for (int k = 0; k < n; ++k) {
    const double th = kPi / 2 + 2 * kPi * k / n;
    v.push_back(center + R * Point(std::cos(th), std::sin(th)));
  }
  return make_convex_polygon(std::move(v));
}

DomainSpec make_polar(const Point& center, double a0, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs) {
  return DomainSpec(std::make_shared<PolarShape>(center, a0, std::move(cos_coeffs), std::move(sin_coeffs)));
}

DomainSpec make_revolution(std::vector<ProfilePiece> pieces) {
  return DomainSpec(std::make_shared<RevolutionShape>(std::move(pieces)));
}

DomainSpec make_sphere3d(double radius, double zc) {
  if (!(radius > 0)) throw DomainError("sphere radius must be positive");
  ProfilePiece s;
  s.type = ProfilePiece::Type::sphere;
  s.zc = zc;
  s.R = radius;
  s.z0 = zc - radius;
  s.z1 = zc + radius;
  return make_revolution({s});
}

DomainSpec make_dumbbell(double big_radius, double small_radius, double neck) {
  if (!(neck > 0 && small_radius > neck && big_radius > neck))
    throw DomainError("dumbbell needs sphere radii larger than the neck parameter");
  const double c = neck;
  // Tangency: the sphere through (c cosh(zt/c), zt) normal to the catenoid has radius c cosh^2(zt/c).
  auto piece_sphere = [&](double R, double sign) {
    const double zt = sign * c * std::acosh(std::sqrt(R / c));
    const double ch = std::cosh(zt / c), sh = std::sinh(zt / c);
    ProfilePiece s;
    s.type = ProfilePiece::Type::sphere;
    s.R = R;
    s.zc = zt + c * ch * sh;
    return std::pair{s, zt};
  };
  auto [big, zb] = piece_sphere(big_radius, -1.0);
  auto [small, zs] = piece_sphere(small_radius, 1.0);
  big.z0 = big.zc - big.R;
  big.z1 = zb;
  small.z0 = zs;
  small.z1 = small.zc + small.R;
  ProfilePiece cat;
  cat.type = ProfilePiece::Type::catenoid;
  cat.c = c;
  cat.zm = 0;
  cat.z0 = zb;
  cat.z1 = zs;
  return make_revolution({big, cat, small});
}

DomainSpec make_capsule(double a, double half_length) {
  ProfilePiece b0, cyl, b1;
  b0.type = b1.type = ProfilePiece::Type::sphere;
  b0.R = b1.R = a;
  b0.zc = -half_length;
  b0.z0 = -half_length - a;
  b0.z1 = -half_length;
  cyl.type = ProfilePiece::Type::cylinder;
  cyl.a = a;
  cyl.z0 = -half_length;
  cyl.z1 = half_length;
  b1.zc = half_length;
  b1.z0 = half_length;
  b1.z1 = half_length + a;
  return make_revolution({b0, cyl, b1});
}

DomainSpec make_implicit(std::function<double(const Point&)> level, const Point& lo, const Point& hi, int resolution) {
  if (!(hi.x() > lo.x() && hi.y() > lo.y())) throw DomainError("implicit domain box is empty");
  return DomainSpec(std::make_shared<ImplicitShape>(std::move(level), lo, hi, resolution));
}

// ---- operations -------------------------------------------------------------------------------

double distance_to_boundary(const DomainSpec& domain, const Point& x) {
  if (domain.level(x) > boundary_tolerance(domain)) throw DomainError("point lies outside the closure of the domain");
  return domain.raw_distance(x);
}

Incenters maximize_over_domain(const DomainSpec& domain, const std::function<double(const Point&)>& dist, int cells) {
  const auto [lo, hi] = domain.bbox();
  const Point span = hi - lo;
  const double s = std::max(span.x(), span.y()) / cells;
  const int nx = static_cast<int>(std::ceil(span.x() / s)), ny = static_cast<int>(std::ceil(span.y() / s));
  std::vector<std::pair<Point, double>> vals;
  double best = -1;
  Point bp = lo;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const Point x = lo + Point(i * s, j * s);
      if (!domain.inside(x)) continue;
      const double d = dist(x);
      vals.emplace_back(x, d);
      if (d > best) {
        best = d;
        bp = x;
      }
    }
  if (vals.empty()) throw DomainError("domain has empty interior");
  const bool axis = domain.axisymmetric();
  // Compass search from the best grid node.
  Point x = bp;
  double fx = best, step = s;
  const double stop = 1e-12 * std::max(span.x(), span.y());
  while (step > stop) {
    bool moved = false;
    for (const Point& dir : {Point(1, 0), Point(-1, 0), Point(0, 1), Point(0, -1)}) {
      Point y = x + step * dir;
      if (axis && y.x() < 0) y.x() = 0;
      if (!domain.inside(y)) continue;
      const double fy = dist(y);
      if (fy > fx) {
        x = y;
        fx = fy;
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
  }
  Incenters out;
  out.r_in = fx;
  const double tol = 1e-3 * fx;
  for (const auto& [p, d] : vals)
    if (d >= fx - tol) out.points.push_back(p);
  bool dup = false;
  for (const auto& p : out.points) dup |= (p - x).norm() < 1e-9 * (1 + span.norm());
  if (!dup) out.points.push_back(x);
  std::sort(out.points.begin(), out.points.end(),
            [](const Point& a, const Point& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); });
  return out;
}

Incenters inradius_incenter(const DomainSpec& domain) {
  return maximize_over_domain(domain, [&](const Point& x) { return domain.raw_distance(x); });
}

double diameter(const DomainSpec& domain) {
  const double exact = domain.shape().exact_diameter();
  if (exact > 0) return exact;
  const auto pts = domain.boundary_samples(2048);
  double d = 0;
  for (const auto& a : pts)
    for (const auto& b : pts) d = std::max(d, (a.x - b.x).norm());
  return d;
}

ExteriorRadius exterior_sphere_radius(const DomainSpec& domain, std::optional<double> supplied) {
  ExteriorRadius out;
  if (supplied) {
    if (!(*supplied > 0)) throw DomainError("supplied exterior radius must be positive");
    out.value = *supplied;
    out.supplied = true;
    return out;
  }
  if (domain.axisymmetric())
    throw UnsupportedError("exterior sphere radius of a solid of revolution must be supplied");
  const double diam = diameter(domain);
  const auto pts = domain.boundary_samples(1024);
  auto admissible = [&](double r) {
    for (const auto& b : pts) {
      const Point c = b.x + r * b.normal;
      if (domain.inside(c)) return false;
      for (const auto& q : pts)
        if ((c - q.x).norm() < r * (1 - 1e-9)) return false;
    }
    return true;
  };
  if (admissible(diam)) {
    out.value = diam;
    out.unbounded = true;
    return out;
  }
  double lo = 0, hi = diam;
  while (hi - lo > 1e-3 * diam) {
    const double mid = 0.5 * (lo + hi);
    (admissible(mid) ? lo : hi) = mid;
  }
  out.value = lo;
  out.degenerate = !(lo > 0);
  return out;
}

CurvatureSummary min_mean_curvature(const DomainSpec& domain, int samples) {
  if (!domain.has_curvature()) throw UnsupportedError("curvature requires an analytic domain kind");
  CurvatureSummary s;
  s.min_curvature = std::numeric_limits<double>::infinity();
  for (const auto& b : domain.boundary_samples(samples)) s.min_curvature = std::min(s.min_curvature, b.curvature);
  s.M0_minus = std::max(0.0, -s.min_curvature);
  return s;
}

namespace {

// Maximum-volume inscribed ellipse of a convex polygon via a log-barrier Newton method.
JohnEllipsoid john_polygon(const PolygonShape& poly) {
  const auto& A = poly.normals();
  const auto& b = poly.offsets();
  const size_t m = A.size();
  using V5 = Eigen::Matrix<double, 5, 1>;
  auto unpack = [](const V5& x, Eigen::Matrix2d& B, Point& c) {
    B << x(0), x(1), x(1), x(2);
    c = Point(x(3), x(4));
  };
  auto feasible = [&](const V5& x) {
    Eigen::Matrix2d B;
    Point c;
    unpack(x, B, c);
    if (!(B(0, 0) > 0 && B.determinant() > 0)) return false;
    for (size_t i = 0; i < m; ++i)
      if (!(b[i] - A[i].dot(c) - (B * A[i]).norm() > 0)) return false;
    return true;
  };
  auto objective = [&](const V5& x, double mu) {
    Eigen::Matrix2d B;
    Point c;
    unpack(x, B, c);
    double f = -std::log(B.determinant());
    for (size_t i = 0; i < m; ++i) f -= mu * std::log(b[i] - A[i].dot(c) - (B * A[i]).norm());
    return f;
  };
  auto gradient = [&](const V5& x, double mu) {
    Eigen::Matrix2d B;
    Point c;
    unpack(x, B, c);
    const Eigen::Matrix2d Bi = B.inverse();
    V5 g;
    g << -Bi(0, 0), -2 * Bi(0, 1), -Bi(1, 1), 0, 0;
    for (size_t i = 0; i < m; ++i) {
      const Point v = B * A[i];
      const double nv = v.norm();
      const double s = b[i] - A[i].dot(c) - nv;
      // d(-mu log s) = (mu / s) * d(A.c + |B a|)
      const double w = mu / s;
      g(0) += w * v.x() * A[i].x() / nv;
      g(1) += w * (v.x() * A[i].y() + v.y() * A[i].x()) / nv;
      g(2) += w * v.y() * A[i].y() / nv;
      g(3) += w * A[i].x();
      g(4) += w * A[i].y();
    }
    return g;
  };
  Point c0(0, 0);
  for (const auto& v : poly.vertices()) c0 += v;
  c0 /= static_cast<double>(poly.vertices().size());
  double r0 = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < m; ++i) r0 = std::min(r0, b[i] - A[i].dot(c0));
  V5 x;
  x << 0.5 * r0, 0, 0.5 * r0, c0.x(), c0.y();
  for (double mu = 1.0; mu > 1e-11; mu *= 0.1) {
    for (int it = 0; it < 200; ++it) {
      const V5 g = gradient(x, mu);
      Eigen::Matrix<double, 5, 5> H;
      const double scale = std::max(1e-12, 1e-6 * x.head<3>().norm());
      for (int k = 0; k < 5; ++k) {
        V5 e = V5::Zero();
        e(k) = scale;
        H.col(k) = (gradient(x + e, mu) - gradient(x - e, mu)) / (2 * scale);
      }
      H = 0.5 * (H + H.transpose()).eval();
      V5 dx = -H.ldlt().solve(g);
      if (!dx.allFinite() || g.dot(dx) >= 0) dx = -g;
      const double dec = -g.dot(dx);
      double t = 1.0;
      const double f0 = objective(x, mu);
      while (t > 1e-14) {
        const V5 y = x + t * dx;
        if (feasible(y) && objective(y, mu) <= f0 - 0.25 * t * dec) break;
        t *= 0.5;
      }
      if (t <= 1e-14) break;
      x += t * dx;
      if (dec < 1e-18) break;
    }
  }
  Eigen::Matrix2d B;
  Point c;
  unpack(x, B, c);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(B);
  return {c, {es.eigenvalues()(0), es.eigenvalues()(1)}, B};
}

}  // namespace

JohnEllipsoid john_ellipsoid(const DomainSpec& domain) {
  const Shape& s = domain.shape();
  switch (domain.kind()) {
    case DomainKind::ball: {
      const auto& b = static_cast<const BallShape&>(s);
      return {b.center(), {b.radius(), b.radius()}, b.radius() * Eigen::Matrix2d::Identity()};
    }
    case DomainKind::ellipse: {
      const auto& e = static_cast<const EllipseShape&>(s);
      std::vector<double> ax{std::min(e.a(), e.b()), std::max(e.a(), e.b())};
      Eigen::Matrix2d B = Eigen::Vector2d(e.a(), e.b()).asDiagonal();
      return {e.center(), ax, B};
    }
    case DomainKind::rectangle: {
      const auto [lo, hi] = domain.bbox();
      const Point half = 0.5 * (hi - lo);
      Eigen::Matrix2d B = half.asDiagonal();
      return {0.5 * (lo + hi), {std::min(half.x(), half.y()), std::max(half.x(), half.y())}, B};
    }
    case DomainKind::convex_polygon: return john_polygon(static_cast<const PolygonShape&>(s));
    case DomainKind::revolution: {
      const auto& rv = static_cast<const RevolutionShape&>(s);
      if (rv.pieces().size() == 1) {
        const auto& p = rv.pieces()[0];
        return {Point(0, p.zc), {p.R, p.R, p.R}, p.R * Eigen::Matrix2d::Identity()};
      }
      break;
    }
    default: break;
  }
  throw UnsupportedError("John ellipsoid is available for balls, ellipses, rectangles and convex polygons");
}

double m_minus2(const std::vector<double>& axes) {
  if (axes.empty()) throw DomainError("m_minus2 needs at least one axis");
  double s = 0;
  for (double a : axes) {
    if (!(a > 0)) throw DomainError("m_minus2 needs positive axes");
    s += 1.0 / (a * a);
  }
  return std::pow(s / static_cast<double>(axes.size()), -0.5);
}

GeomSummary summarize(const DomainSpec& domain, const GeomOverrides& overrides) {
  GeomSummary g;
  const auto inc = inradius_incenter(domain);
  g.r_in = inc.r_in;
  g.incenters = inc.points;
  g.diam = diameter(domain);
  try {
    g.r_e = exterior_sphere_radius(domain, overrides.r_e);
  } catch (const UnsupportedError&) {
  }
  try {
    g.curvature = min_mean_curvature(domain);
  } catch (const UnsupportedError&) {
  }
  if (overrides.john_axes) {
    JohnEllipsoid j;
    j.center = g.incenters.front();
    j.axes = *overrides.john_axes;
    std::sort(j.axes.begin(), j.axes.end());
    j.shape = Eigen::Matrix2d::Identity();
    g.john = j;
  } else if (domain.convex()) {
    try {
      g.john = john_ellipsoid(domain);
    } catch (const UnsupportedError&) {
    }
  }
  return g;
}

}  // namespace hotspot
