// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <limits>

namespace waistlab {

//! Simply connected space form of constant curvature `curvature` and
//! dimension `dim` (sphere, Euclidean space, or hyperbolic space).
struct ModelSpace {
  double curvature = 0.0;
  int dim = 2;

  //! Diameter: pi/sqrt(curvature) on spheres, infinite otherwise.
  double diameter() const;
};

//! Metric ball in a model space.
struct BallSpec {
  ModelSpace space;
  double radius = 1.0;
};

//! Generalized sine: solution of f'' + kappa f = 0 with f(0)=0, f'(0)=1.
double sn(double kappa, double t);
//! Its derivative (cos, 1, or cosh flavor).
double cs(double kappa, double t);

//! Volume of the unit ball in R^m (m >= 0).
double unit_ball_volume(int m);

//! Volume of the unit k-sphere S^k in R^{k+1} (k >= 0; S^0 counts 2 points).
double sphere_volume(int k);

//! Volume of a geodesic ball of radius R in the n-dimensional model space
//! of curvature kappa.  R must stay within the diameter on spheres.
double geodesic_ball_volume(double kappa, int n, double R);
double geodesic_ball_volume(const BallSpec& ball);

//! Volume of the closed t-neighborhood of an equatorial S^k inside the unit
//! S^n, valid for t in [0, pi/2].
double tube_volume_subsphere(int n, int k, double t);

// ---------------------------------------------------------------------------
// Conformal charts.  Stereographic projection goes from the north pole of
// the unit sphere to the equatorial plane, so the south pole sits at the
// chart origin and the round metric pulls back to (2/(1+|x|^2))^2 times the
// flat one.  The Poincare chart of hyperbolic space uses (2/(1-|x|^2))^2.
// ---------------------------------------------------------------------------

//! Chart point of p in S^n (|p| = 1, p not the north pole).
Eigen::VectorXd stereographic_project(const Eigen::VectorXd& p);

//! Sphere point over a chart point.
Eigen::VectorXd stereographic_lift(const Eigen::VectorXd& x);

double stereographic_conformal_factor(double r);
double stereographic_conformal_factor(const Eigen::VectorXd& x);

//! Euclidean chart radius of the spherical cap of geodesic radius R
//! around the south pole: tan(R/2), for R in (0, pi).
double cap_chart_radius(double R);

double poincare_conformal_factor(double r);
double poincare_conformal_factor(const Eigen::VectorXd& x);

//! Chart radius of the hyperbolic ball of geodesic radius R: tanh(R/2).
double hyperbolic_chart_radius(double R);

//! Hyperbolic distance between Poincare-chart points (|a|, |b| < 1).
double poincare_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

//! Geodesic distance of unit vectors on the round sphere.
double sphere_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

//! Distance between polar-coordinate points (r1, 0) and (r2, dtheta) in the
//! model surface of curvature kappa (law of cosines in all three regimes).
double model_polar_distance(double kappa, double r1, double r2, double dtheta);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace waistlab
