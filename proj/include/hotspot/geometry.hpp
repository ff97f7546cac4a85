#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hotspot {

// All geometry works in a planar "section" coordinate system.  Planar domains use (x, y).
// Surfaces of revolution about the z-axis use the meridian half-plane (rho, z) with rho >= 0;
// distances in that half-plane equal the three-dimensional distances.
using Point = Eigen::Vector2d;

enum class DomainKind { ball, ellipse, rectangle, convex_polygon, polar, revolution, implicit };

std::string to_string(DomainKind k);

struct BoundaryPoint {
  Point x;
  Point normal;  // outward unit normal (in the section plane)
  double curvature = 0.0;  // mean curvature w.r.t. the inward normal (planar: signed curvature)
  bool has_curvature = false;
};

// One analytic piece of a meridian profile, described through F(z) = rho(z)^2.
struct ProfilePiece {
  enum class Type { sphere, catenoid, cylinder } type = Type::sphere;
  double z0 = 0, z1 = 0;   // axial extent of the piece
  double zc = 0, R = 1;    // sphere: centre on the axis and radius
  double c = 1, zm = 0;    // catenoid rho = c cosh((z - zm)/c)
  double a = 1;            // cylinder radius

  double F(double z) const;
  double dF(double z) const;
  double d2F(double z) const;
};

class Shape;

// Immutable handle to a bounded domain.  Cheap to copy, safe to share between threads.
class DomainSpec {
 public:
  DomainSpec() = default;
  explicit DomainSpec(std::shared_ptr<const Shape> s) : shape_(std::move(s)) {}

  DomainKind kind() const;
  int dimension() const;
  bool convex() const;
  bool axisymmetric() const { return kind() == DomainKind::revolution; }
  std::pair<Point, Point> bbox() const;

  // Negative strictly inside, positive outside, zero on the boundary.
  double level(const Point& x) const;
  bool inside(const Point& x) const { return level(x) < 0.0; }

  // Unsigned distance to the boundary without the closure check.
  double raw_distance(const Point& x) const;

  // Fraction t in (0, 1] with inside(a) and level(a + t (b - a)) = 0 at the first crossing.
  double crossing(const Point& a, const Point& b) const;

  // Boundary parametrisation on t in [0, 1).
  BoundaryPoint boundary_at(double t) const;
  std::vector<BoundaryPoint> boundary_samples(int n) const;
  bool has_curvature() const;

  const Shape& shape() const { return *shape_; }
  bool valid() const { return static_cast<bool>(shape_); }

 private:
  std::shared_ptr<const Shape> shape_;
};

class Shape {
 public:
  virtual ~Shape() = default;
  virtual DomainKind kind() const = 0;
  virtual int dimension() const { return 2; }
  virtual bool convex() const { return false; }
  virtual std::pair<Point, Point> bbox() const = 0;
  virtual double level(const Point& x) const = 0;
  virtual double distance(const Point& x) const = 0;
  virtual double crossing(const Point& a, const Point& b) const;
  virtual BoundaryPoint boundary_at(double t) const = 0;
  virtual std::vector<BoundaryPoint> samples(int n) const;
  virtual bool has_curvature() const { return true; }
  virtual double exact_diameter() const { return -1.0; }
};

// ---- constructors -------------------------------------------------------------------------

DomainSpec make_ball(const Point& center, double radius);
DomainSpec make_ellipse(const Point& center, double a, double b);
DomainSpec make_rectangle(const Point& lo, const Point& hi);
DomainSpec make_convex_polygon(std::vector<Point> vertices);
DomainSpec make_regular_polygon(int n, double side, const Point& center = Point(0, 0));
// Star-shaped curve r(theta) = a0 + sum_k (cos_k cos(k theta) + sin_k sin(k theta)).
DomainSpec make_polar(const Point& center, double a0, std::vector<double> cos_coeffs,
                      std::vector<double> sin_coeffs = {});
// Solid of revolution from contiguous profile pieces ordered by increasing z.  Both ends must
// be sphere caps reaching the axis.
DomainSpec make_revolution(std::vector<ProfilePiece> pieces);
DomainSpec make_sphere3d(double radius, double zc = 0.0);
// Two spheres joined by a catenoid neck rho = c cosh(z/c), tangent (C^{1,1}) at the junctions.
DomainSpec make_dumbbell(double big_radius, double small_radius, double neck);
// Cylinder of radius a and length 2*half_length capped by hemispheres.
DomainSpec make_capsule(double a, double half_length);
// Implicit domain {level < 0} inside the given box; boundary sampled on a resolution^2 grid.
DomainSpec make_implicit(std::function<double(const Point&)> level, const Point& lo, const Point& hi,
                         int resolution = 256);

// ---- operations ---------------------------------------------------------------------------

double distance_to_boundary(const DomainSpec& domain, const Point& x);

struct Incenters {
  double r_in = 0;
  std::vector<Point> points;  // lexicographically sorted; front() is the canonical incenter
};

// Generic grid search + local refinement of a distance-like function over the domain.
Incenters maximize_over_domain(const DomainSpec& domain, const std::function<double(const Point&)>& dist,
                               int cells = 160);
Incenters inradius_incenter(const DomainSpec& domain);

double diameter(const DomainSpec& domain);

struct ExteriorRadius {
  double value = 0;
  bool supplied = false;
  bool unbounded = false;  // no finite obstruction found; value truncated to diam
  bool degenerate = false;  // no positive radius admissible
};
ExteriorRadius exterior_sphere_radius(const DomainSpec& domain, std::optional<double> supplied = std::nullopt);

struct CurvatureSummary {
  double min_curvature = 0;
  double M0_minus = 0;
};
CurvatureSummary min_mean_curvature(const DomainSpec& domain, int samples = 4096);

struct JohnEllipsoid {
  Point center;
  std::vector<double> axes;  // ascending
  Eigen::Matrix2d shape;     // E = { shape * u + center : |u| <= 1 }
};
JohnEllipsoid john_ellipsoid(const DomainSpec& domain);

double m_minus2(const std::vector<double>& axes);

struct GeomOverrides {
  std::optional<double> r_e;
  std::optional<std::vector<double>> john_axes;
};

struct GeomSummary {
  double r_in = 0;
  std::vector<Point> incenters;
  double diam = 0;
  std::optional<ExteriorRadius> r_e;
  std::optional<CurvatureSummary> curvature;
  std::optional<JohnEllipsoid> john;
};

// Computes everything available for the domain; quantities whose preconditions fail are left empty.
GeomSummary summarize(const DomainSpec& domain, const GeomOverrides& overrides = {});

}  // namespace hotspot
