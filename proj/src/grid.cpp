#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "hotspot/errors.hpp"
#include "hotspot/pde.hpp"

namespace hotspot {

namespace {

constexpr int kDi[4] = {1, -1, 0, 0};
constexpr int kDj[4] = {0, 0, 1, -1};

}  // namespace

Grid::Grid(const DomainSpec& domain, double h) : domain_(domain), h_(h), axisym_(domain.axisymmetric()) {
  if (!(h > 0)) throw DomainError("grid spacing must be positive");
  const auto [lo, hi] = domain.bbox();
  i0_ = axisym_ ? 0 : static_cast<int>(std::floor(lo.x() / h)) - 1;
  j0_ = static_cast<int>(std::floor(lo.y() / h)) - 1;
  nx_ = static_cast<int>(std::ceil(hi.x() / h)) + 1 - i0_ + 1;
  ny_ = static_cast<int>(std::ceil(hi.y() / h)) + 1 - j0_ + 1;
  index_.assign(static_cast<size_t>(nx_) * ny_, -1);
  // Unknowns are numbered with i outer, j inner: index order is lexicographic in (x, y).
  for (int i = 0; i < nx_; ++i)
    for (int j = 0; j < ny_; ++j) {
      if (domain.level(node_point(i, j)) < 0) {
        index_[static_cast<size_t>(i) * ny_ + j] = static_cast<int>(ij_.size());
        ij_.push_back({i, j});
      }
    }
  if (ij_.empty()) throw DomainError("grid has no interior nodes");
  const double tpi = axisym_ ? 2 * std::numbers::pi : 1.0;
  arms_.resize(ij_.size());
  mass_.resize(static_cast<Eigen::Index>(ij_.size()));
  for (size_t k = 0; k < ij_.size(); ++k) {
    const auto [i, j] = ij_[k];
    const Point p = node_point(i, j);
    for (int a = 0; a < 4; ++a) {
      Arm arm;
      const int ni = i + kDi[a], nj = j + kDj[a];
      if (axisym_ && ni < 0) {
        arm.nb = Arm::kSymmetry;
      } else {
        const int nb = index(ni, nj);
        if (nb >= 0) {
          arm.nb = nb;
        } else {
          arm.nb = Arm::kBoundary;
          arm.theta = std::clamp(domain.crossing(p, node_point(ni, nj)), 1e-10, 1.0);
        }
      }
      arms_[k][a] = arm;
    }
    const double rbar = axisym_ ? (i == 0 ? h / 8 : i * h) : 1.0;
    mass_(static_cast<Eigen::Index>(k)) = tpi * rbar * h * h;
  }
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(ij_.size() * 5);
  for (int k = 0; k < size(); ++k) {
    double diag = 0;
    for (int a = 0; a < 4; ++a) {
      const Arm& arm = arms_[k][a];
      if (arm.nb == Arm::kSymmetry) continue;
      const double c = face_weight(k, a);
      diag += c / arm.theta;
      if (arm.nb >= 0) trip.emplace_back(k, arm.nb, -c);
    }
    trip.emplace_back(k, k, diag);
  }
  A_.resize(size(), size());
  A_.setFromTriplets(trip.begin(), trip.end());
}

Point Grid::node_point(int i, int j) const { return Point((i0_ + i) * h_, (j0_ + j) * h_); }

Point Grid::point(int k) const {
  const auto [i, j] = ij_[k];
  return node_point(i, j);
}

int Grid::index(int i, int j) const {
  if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return -1;
  return index_[static_cast<size_t>(i) * ny_ + j];
}

bool Grid::boundary_adjacent(int k) const {
  for (const auto& a : arms_[k])
    if (a.nb == Arm::kBoundary) return true;
  return false;
}

double Grid::face_weight(int k, int a) const {
  if (!axisym_) return 1.0;
  const int i = ij_[k][0];
  const double tpi = 2 * std::numbers::pi;
  if (a == 0) return tpi * (i + 0.5) * h_;
  if (a == 1) return i == 0 ? 0.0 : tpi * (i - 0.5) * h_;
  return tpi * (i == 0 ? h_ / 8 : i * h_);
}

Point Grid::arm_boundary_point(int k, int a) const {
  const Point p = point(k);
  const double t = arms_[k][a].theta * h_;
  return p + Point(kDi[a] * t, kDj[a] * t);
}

Vector Grid::boundary_rhs(const std::function<double(const Point&)>& b) const {
  Vector r = Vector::Zero(size());
  for (int k = 0; k < size(); ++k)
    for (int a = 0; a < 4; ++a) {
      const Arm& arm = arms_[k][a];
      if (arm.nb != Arm::kBoundary) continue;
      r(k) += face_weight(k, a) / arm.theta * b(arm_boundary_point(k, a));
    }
  return r;
}

GridPtr make_grid(const DomainSpec& domain, double h) { return std::make_shared<const Grid>(domain, h); }

double ScalarField::max() const {
  if (complement) return complement_scale * (1.0 - complement->minCoeff());
  return values.maxCoeff();
}

MaxInfo locate_max(const ScalarField& field, double rel_threshold) {
  const Grid& g = *field.grid;
  const int n = g.size();
  if (n == 0) throw DomainError("empty field");
  const bool comp = field.complement.has_value();
  // F is maximised; for complement fields F = -w, which keeps full relative precision.
  auto F = [&](int k) { return comp ? -(*field.complement)(k) : field.values(k); };
  int best = 0;
  for (int k = 1; k < n; ++k)
    if (F(k) > F(best)) best = k;
  MaxInfo info;
  info.node = best;
  const double Mnode = comp ? field.complement_scale * (1.0 - (*field.complement)(best)) : field.values(best);
  if (!(std::abs(Mnode) > 0)) throw DomainError("field is identically zero");
  const double h = g.h();
  Point delta(0, 0);
  double dF = 0;
  const auto& arms = g.arms(best);
  for (int axis = 0; axis < 2; ++axis) {
    const Arm& ap = arms[2 * axis];
    const Arm& am = arms[2 * axis + 1];
    if (ap.nb < 0) continue;
    double fm;
    if (am.nb >= 0) fm = F(am.nb);
    else if (am.nb == Arm::kSymmetry) fm = F(ap.nb);
    else continue;
    const double f0 = F(best), fp = F(ap.nb);
    const double D = fm - 2 * f0 + fp;
    if (!(D < 0)) continue;
    double s = -(fp - fm) * h / (2 * D);
    s = std::clamp(s, -0.5 * h, 0.5 * h);
    delta(axis) = s;
    dF += (fp - fm) / (2 * h) * s + D / (2 * h * h) * s * s;
  }
  info.z = g.point(best) + delta;
  if (g.axisymmetric() && info.z.x() < 0) info.z.x() = 0;
  info.value = comp ? Mnode + field.complement_scale * dF : Mnode + dF;
  if (comp) {
    const double wmin = (*field.complement)(best);
    const double wcut = 1.0 - (1.0 - wmin) * (1.0 - rel_threshold);
    for (int k = 0; k < n; ++k)
      if ((*field.complement)(k) <= wcut) info.near_max.push_back(k);
  } else {
    const double cut = Mnode - rel_threshold * std::abs(Mnode);
    for (int k = 0; k < n; ++k)
      if (field.values(k) >= cut) info.near_max.push_back(k);
  }
  for (int k : info.near_max) info.near_points.push_back(g.point(k));
  return info;
}

namespace {

// Derivative at 0 of the polynomial through (s_i, f_i), i < n.
double lagrange_derivative(const double* s, const double* f, int n) {
  double d = 0;
  for (int i = 0; i < n; ++i) {
    double w = 0, den = 1;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      den *= s[i] - s[j];
      double prod = 1;
      for (int m = 0; m < n; ++m)
        if (m != i && m != j) prod *= -s[m];
      w += prod;
    }
    d += w / den * f[i];
  }
  return d;
}

// Boundary arm shorter than h: the nodal error would be amplified by 1/(theta h), so interpolate the
// boundary value and up to three nodes on the far side instead of the node itself.
std::optional<double> short_arm_derivative(const ScalarField& field, int k, int axis) {
  const Grid& g = *field.grid;
  const double h = g.h();
  const auto& arms = g.arms(k);
  for (int side = 0; side < 2; ++side) {
    const Arm& near = arms[2 * axis + side];
    const Arm& far = arms[2 * axis + 1 - side];
    if (near.nb >= 0 || near.theta >= 1.0 || far.nb < 0) continue;
    const double dir = side == 0 ? 1.0 : -1.0;
    double s[4] = {dir * near.theta * h}, f[4] = {field.boundary_value(g.arm_boundary_point(k, 2 * axis + side))};
    int n = 1;
    for (int nb = far.nb; nb >= 0 && n < 4; nb = g.arms(nb)[2 * axis + 1 - side].nb, ++n) {
      s[n] = -dir * n * h;
      f[n] = field.values(nb);
    }
    if (n >= 3) return lagrange_derivative(s, f, n);
  }
  return std::nullopt;
}

}  // namespace

std::vector<Eigen::Vector2d> field_gradient(const ScalarField& field) {
  const Grid& g = *field.grid;
  const double h = g.h();
  std::vector<Eigen::Vector2d> out(g.size(), Eigen::Vector2d::Zero());
  for (int k = 0; k < g.size(); ++k) {
    const auto& arms = g.arms(k);
    const double b = field.values(k);
    for (int axis = 0; axis < 2; ++axis) {
      const Arm& ap = arms[2 * axis];
      const Arm& am = arms[2 * axis + 1];
      if (am.nb == Arm::kSymmetry) {
        out[k](axis) = 0.0;
        continue;
      }
      if (const auto d = field.nodal_boundary_gradient ? std::nullopt : short_arm_derivative(field, k, axis)) {
        out[k](axis) = *d;
        continue;
      }
      const double h2 = ap.nb >= 0 ? h : ap.theta * h;
      const double h1 = am.nb >= 0 ? h : am.theta * h;
      const double c = ap.nb >= 0 ? field.values(ap.nb) : field.boundary_value(g.arm_boundary_point(k, 2 * axis));
      const double a = am.nb >= 0 ? field.values(am.nb) : field.boundary_value(g.arm_boundary_point(k, 2 * axis + 1));
      out[k](axis) = -h2 / (h1 * (h1 + h2)) * a + (h2 - h1) / (h1 * h2) * b + h1 / (h2 * (h1 + h2)) * c;
    }
  }
  return out;
}

SpdSolver::SpdSolver(const SpMat& A) : A_(&A) {
  ldlt_.compute(A);
  if (ldlt_.info() != Eigen::Success) throw SolverError("sparse factorisation failed");
}

Vector SpdSolver::solve(const Vector& b) const {
  const double nb = b.norm();
  if (nb == 0) return Vector::Zero(b.size());
  Vector x = ldlt_.solve(b);
  double res = (b - (*A_) * x).norm() / nb;
  for (int it = 0; it < 3 && res > 1e-12; ++it) {
    x += ldlt_.solve(b - (*A_) * x);
    res = (b - (*A_) * x).norm() / nb;
  }
  if (!(res <= 1e-10)) throw SolverError("linear solve residual " + std::to_string(res) + " exceeds 1e-10");
  return x;
}

}  // namespace hotspot
