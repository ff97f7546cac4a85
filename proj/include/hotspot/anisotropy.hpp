#pragma once

#include <Eigen/Dense>
#include <string>

#include "hotspot/geometry.hpp"
#include "hotspot/young.hpp"

namespace hotspot {

using Vec2 = Eigen::Vector2d;

// Planar norm H with gradient and polar H°.  Unit balls are strictly convex for all kinds.
class AnisoNorm {
 public:
  enum class Kind { euclidean, elliptic, lp };

  static AnisoNorm euclidean();
  static AnisoNorm elliptic(const Eigen::Matrix2d& A);  // H(xi) = sqrt(xi . A xi), A SPD
  static AnisoNorm lp(double s);                        // 1 < s < infinity

  Kind kind() const { return kind_; }
  std::string describe() const;
  const Eigen::Matrix2d& matrix() const { return A_; }
  double exponent() const { return s_; }

  double H(const Vec2& xi) const;
  Vec2 gradH(const Vec2& xi) const;
  // H(xi) grad H(xi) = grad (H^2/2); linear for elliptic norms.
  Vec2 H_gradH(const Vec2& xi) const;
  double polar(const Vec2& eta) const;
  Vec2 grad_polar(const Vec2& eta) const;

  // Matrix B with H^2(xi) >= c xi.B xi used to precondition the anisotropic energy, A for elliptic norms.
  Eigen::Matrix2d preconditioner() const;

 private:
  Kind kind_ = Kind::euclidean;
  Eigen::Matrix2d A_ = Eigen::Matrix2d::Identity(), Ainv_ = Eigen::Matrix2d::Identity();
  double s_ = 2;
};

// sup_{xi != 0} <xi, eta> / H(xi); analytic where available.
double polar(const AnisoNorm& norm, const Vec2& eta);
// Same supremum by 720 directions plus golden-section refinement, for any norm-like function.
double polar_numeric(const std::function<double(const Vec2&)>& H, const Vec2& eta);

// Wulff ball {y : H°(y - x0) < r}.
DomainSpec make_wulff_ball(const AnisoNorm& norm, const Point& x0, double r);

double aniso_distance(const DomainSpec& domain, const AnisoNorm& norm, const Point& x);
Incenters aniso_inradius(const DomainSpec& domain, const AnisoNorm& norm);

double wulff_torsion_exact(const AnisoNorm& norm, const YoungPair& pair, double r, const Point& x0, const Point& y);

struct AnisoConvexity {
  double min_Ma = 0;
  double max_Ma = 0;
  bool h_mean_convex = false;
};
AnisoConvexity aniso_mean_convexity(const DomainSpec& domain, const AnisoNorm& norm, double tol = 1e-6,
                                    int samples = 2048);

}  // namespace hotspot
