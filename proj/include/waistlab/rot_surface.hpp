// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>

namespace waistlab {

//! Surface of revolution with metric dr^2 + h(r)^2 dtheta^2 on the polar
//! chart r in (0, max_radius).  The profile must satisfy h(0) = 0 and
//! h'(0) = 1 so the chart extends smoothly over the pole; the pole chart is
//! then a normal coordinate system and exp at the origin is the identity.
//!
//! Chart points are Cartesian pairs u = r (cos theta, sin theta).  Tangent
//! vectors at u use the frame {u/|u|, rot90(u/|u|)}, which the metric makes
//! orthonormal, so on the flat surface log_map(base, target) reduces to
//! target - base.
class RotSymSurface {
 public:
  using Profile = std::function<double(double)>;

  RotSymSurface() = default;

  //! Profile with analytic first and second derivatives.
  RotSymSurface(std::string name, Profile h, Profile dh, Profile d2h,
                double max_radius);

  //! Profile only; derivatives fall back to central differences, which is
  //! fine for plotting but too noisy for tight conservation tests.
  RotSymSurface(std::string name, Profile h, double max_radius);

  double profile(double r) const { return h_(r); }
  double profile_d(double r) const { return dh_(r); }
  double profile_dd(double r) const { return d2h_(r); }

  //! Gauss curvature -h''(r)/h(r), for r in (0, max_radius].
  double gauss_curvature(double r) const;

  double max_radius() const { return max_radius_; }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  Profile h_, dh_, d2h_;
  double max_radius_ = 0.0;
};

//! Constant-curvature comparison surface: h = sn_kappa with analytic
//! derivatives.
RotSymSurface model_surface(double kappa, double max_radius);

struct GeodesicOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  double init_step = 1e-3;
  int max_steps = 200000;
};

//! Point reached after unit time along the geodesic with initial velocity v.
Eigen::Vector2d exp_map(const RotSymSurface& surf, const Eigen::Vector2d& base,
                        const Eigen::Vector2d& v, const GeodesicOptions& opt = {});

//! Initial velocity whose exp_map hits `target`; found by damped Newton
//! shooting with a finite-difference Jacobian.
Eigen::Vector2d log_map(const RotSymSurface& surf, const Eigen::Vector2d& base,
                        const Eigen::Vector2d& target, const GeodesicOptions& opt = {});

//! Geodesic distance |log_map(p, q)|.
double surface_distance(const RotSymSurface& surf, const Eigen::Vector2d& p,
                        const Eigen::Vector2d& q, const GeodesicOptions& opt = {});

struct CurvatureCheck {
  bool ok = false;
  double worst_excess = 0.0;  // max over grid of K(r) - bound
  double worst_radius = 0.0;
};

//! Verifies K(r) <= bound + tol on a uniform grid of (r_lo, r_hi].
CurvatureCheck check_curvature_bound(const RotSymSurface& surf, double bound,
                                     double r_lo, double r_hi, int n_grid,
                                     double tol = 1e-9);

}  // namespace waistlab
