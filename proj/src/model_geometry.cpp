// SPDX-License-Identifier: Apache-2.0
#include "waistlab/model_geometry.hpp"

#include <algorithm>
#include <cmath>

#include "waistlab/errors.hpp"
#include "waistlab/quadrature.hpp"

namespace waistlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double ModelSpace::diameter() const {
  return curvature > 0 ? kPi / std::sqrt(curvature) : kInf;
}

double sn(double kappa, double t) {
  if (kappa > 0) {
    const double s = std::sqrt(kappa);
    return std::sin(s * t) / s;
  }
  if (kappa < 0) {
    const double s = std::sqrt(-kappa);
    return std::sinh(s * t) / s;
  }
  return t;
}

double cs(double kappa, double t) {
  if (kappa > 0) return std::cos(std::sqrt(kappa) * t);
  if (kappa < 0) return std::cosh(std::sqrt(-kappa) * t);
  return 1.0;
}

double unit_ball_volume(int m) {
  if (m < 0) throw DomainError("unit_ball_volume: dimension must be >= 0");
  return std::pow(kPi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

double sphere_volume(int k) {
  if (k < 0) throw DomainError("sphere_volume: dimension must be >= 0");
  return (k + 1) * unit_ball_volume(k + 1);
}

double geodesic_ball_volume(double kappa, int n, double R) {
  if (n < 1) throw DomainError("geodesic_ball_volume: dimension must be >= 1");
  if (R < 0) throw DomainError("geodesic_ball_volume: radius must be >= 0");
  if (kappa > 0 && R > kPi / std::sqrt(kappa) + 1e-12)
    throw DomainError("geodesic_ball_volume: radius exceeds the sphere diameter");
  if (R == 0) return 0.0;
  const double shell = sphere_volume(n - 1);
  const double radial =
      integrate([kappa, n](double t) { return std::pow(sn(kappa, t), n - 1); }, 0.0, R);
  return shell * radial;
}

double geodesic_ball_volume(const BallSpec& ball) {
  return geodesic_ball_volume(ball.space.curvature, ball.space.dim, ball.radius);
}

double tube_volume_subsphere(int n, int k, double t) {
  if (n < 1 || k < 0 || k > n - 1)
    throw DomainError("tube_volume_subsphere: need 0 <= k <= n-1");
  if (t < 0 || t > 0.5 * kPi + 1e-12)
    throw DomainError("tube_volume_subsphere: t must lie in [0, pi/2]");
  const double shellk = sphere_volume(k);
  const double shellc = sphere_volume(n - k - 1);
  const double radial = integrate(
      [n, k](double th) {
        return std::pow(std::cos(th), k) * std::pow(std::sin(th), n - k - 1);
      },
      0.0, std::min(t, 0.5 * kPi));
  return shellk * shellc * radial;
}

Eigen::VectorXd stereographic_project(const Eigen::VectorXd& p) {
  const Eigen::Index n1 = p.size();
  if (n1 < 2) throw DomainError("stereographic_project: need an ambient R^{n+1}, n >= 1");
  if (std::fabs(p.norm() - 1.0) > 1e-9)
    throw ValidationError("stereographic_project: point is not on the unit sphere");
  const double last = p[n1 - 1];
  if (last > 1.0 - 1e-12)
    throw DomainError("stereographic_project: north pole is outside the chart");
  return p.head(n1 - 1) / (1.0 - last);
}

Eigen::VectorXd stereographic_lift(const Eigen::VectorXd& x) {
  const double r2 = x.squaredNorm();
  Eigen::VectorXd p(x.size() + 1);
  p.head(x.size()) = 2.0 * x;
  p[x.size()] = r2 - 1.0;
  p /= (1.0 + r2);
  return p;
}

double stereographic_conformal_factor(double r) { return 2.0 / (1.0 + r * r); }

double stereographic_conformal_factor(const Eigen::VectorXd& x) {
  return 2.0 / (1.0 + x.squaredNorm());
}

double cap_chart_radius(double R) {
  if (!(R > 0) || !(R < kPi))
    throw DomainError("cap_chart_radius: R must lie in (0, pi)");
  return std::tan(0.5 * R);
}

double poincare_conformal_factor(double r) {
  if (!(r >= 0) || r >= 1.0)
    throw DomainError("poincare_conformal_factor: |x| must be < 1");
  return 2.0 / (1.0 - r * r);
}

double poincare_conformal_factor(const Eigen::VectorXd& x) {
  return poincare_conformal_factor(x.norm());
}

double hyperbolic_chart_radius(double R) {
  if (!(R > 0)) throw DomainError("hyperbolic_chart_radius: R must be > 0");
  return std::tanh(0.5 * R);
}

double poincare_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double na = a.squaredNorm(), nb = b.squaredNorm();
  if (na >= 1.0 || nb >= 1.0)
    throw DomainError("poincare_distance: chart points must lie in the open disk");
  const double q = (a - b).squaredNorm() / ((1.0 - na) * (1.0 - nb));
  return std::acosh(1.0 + 2.0 * q);
}

double sphere_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  const double half_chord = 0.5 * (p - q).norm();
  return 2.0 * std::asin(std::min(1.0, half_chord));
}

double model_polar_distance(double kappa, double r1, double r2, double dtheta) {
  const double c = std::cos(dtheta);
  if (kappa > 0) {
    const double s = std::sqrt(kappa);
    double cd = std::cos(s * r1) * std::cos(s * r2) +
                std::sin(s * r1) * std::sin(s * r2) * c;
    cd = std::clamp(cd, -1.0, 1.0);
    return std::acos(cd) / s;
  }
  if (kappa < 0) {
    const double s = std::sqrt(-kappa);
    double cd = std::cosh(s * r1) * std::cosh(s * r2) -
                std::sinh(s * r1) * std::sinh(s * r2) * c;
    cd = std::max(1.0, cd);
    return std::acosh(cd) / s;
  }
  const double d2 = r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * c;
  return std::sqrt(std::max(0.0, d2));
}

}  // namespace waistlab
