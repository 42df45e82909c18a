// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "waistlab/interp.hpp"

namespace waistlab {

//! Radial weight rho on [0, support) together with the fiber dimension k of
//! the associated moment rho_k(x) = rho(x) x^{k-1}.  The moment is what the
//! transport machinery integrates; k-dimensional radial measures have mass
//! vol(S^{k-1}) * integral of rho_k.
struct RadialDensity {
  int k = 1;
  double support = 0.0;  // may be +inf
  std::function<double(double)> value;

  double moment(double x) const { return value(x) * std::pow(x, k - 1); }
};

//! Conformal density of the round k-sphere in its stereographic chart:
//! rho(x) = (2/(1+x^2))^k on [0, inf).
RadialDensity spherical_density(int k);

//! A density scaled so its total k-moment matches the spherical one.
struct NormalizedDensity {
  RadialDensity density;
  double normalization = 1.0;  // the factor A
  double chart_radius = 0.0;   // Euclidean radius of the image ball
};

//! Spherical cap of geodesic radius R in (0, pi), seen in the stereographic
//! chart as A * (2/(1+x^2))^k on [0, tan(R/2)] with A chosen so the total
//! moment equals that of the whole k-sphere.
NormalizedDensity cap_density(int k, double R);

//! Hyperbolic ball of radius R in the Poincare chart:
//! A * (2/(1-x^2))^k on [0, tanh(R/2)], same total-moment normalization.
NormalizedDensity hyperbolic_ball_density(int k, double R);

//! Cumulative moment P(x) = integral of rho_k over [0, x], tabulated on a
//! log grid with a monotone interpolant.  Infinite supports are truncated
//! where the remaining tail drops below 1e-12 of the total; the table is
//! refined at interval midpoints until the interpolation error falls below
//! 1e-10 of the total mass.
class CumulativeMoment {
 public:
  CumulativeMoment() = default;
  explicit CumulativeMoment(RadialDensity density, std::size_t table_size = 4096);

  double operator()(double x) const;
  //! Radius with P(radius) = y, for y in [0, total].
  double inverse(double y) const;

  double total() const { return total_; }
  double cutoff() const { return cutoff_; }
  double table_origin() const { return x_min_; }
  const RadialDensity& density() const { return density_; }

 private:
  RadialDensity density_;
  MonotoneCubic table_;
  double total_ = 0.0;
  double cutoff_ = 0.0;
  double x_min_ = 0.0;
  double y_min_ = 0.0;
};

//! Monotone radial transport between two k-moment densities with equal
//! totals.  psi = Sigma^{-1} o P maps source radii to image radii and
//! pushes the source measure onto the image one; phi is its inverse.
class TransportMap {
 public:
  TransportMap(CumulativeMoment rho, CumulativeMoment sigma);

  double psi(double x) const;
  double phi(double s) const;

  //! Central differences with one Richardson step; the exact identity
  //! psi' = rho_k / (sigma_k o psi) is reserved for validation.
  double psi_prime(double x) const;
  double phi_prime(double s) const;

  int k() const { return rho_.density().k; }
  double domain_radius() const { return rho_.cutoff(); }
  double image_radius() const { return sigma_.cutoff(); }
  const CumulativeMoment& source() const { return rho_; }
  const CumulativeMoment& image() const { return sigma_; }

 private:
  CumulativeMoment rho_, sigma_;
};

//! Validates matching fiber dimensions and totals (1e-8 relative) and
//! assembles the cumulative tables.
TransportMap build_transport(RadialDensity rho, RadialDensity sigma,
                             std::size_t table_size = 4096);

//! The radial extension x -> psi(|x|) x/|x| of the transport profile.
Eigen::VectorXd apply_radial_map(const TransportMap& map, const Eigen::VectorXd& x);

//! k-volume scaling of the radial map restricted to the subspace spanned by
//! an orthonormal frame (columns).  With a = psi'(r), b = psi(r)/r and w the
//! frame coordinates of the radial direction, this is
//! b^{k-1} sqrt(b^2 + (a^2-b^2)|w|^2).
double jacobian_on_subspace(const TransportMap& map, const Eigen::VectorXd& x,
                            const Eigen::MatrixXd& frame);

//! Pointwise check of x phi'(x) >= phi(x) on a grid of image radii.  Points
//! within tolerance of equality are reported separately rather than counted
//! as failures; x -> 0 is always such a point.
struct ConditionReport {
  bool holds = false;
  double min_margin = 0.0;  // min over grid of (x phi' - phi) / scale
  std::vector<double> violation_points;
  std::vector<double> equality_points;
};
ConditionReport check_radial_condition(const TransportMap& map,
                                       const std::vector<double>& grid,
                                       double rel_tol = 1e-8);

//! sup of psi(x)/x over a log grid; < 1 certifies the map contracts radii.
//! The grid stops at the radius holding all but 1e-9 of the source mass:
//! past it the cumulative inverse is conditioning-limited.
double contraction_factor(const TransportMap& map, int grid_points = 1024);

//! Monotonicity certificate for t -> sigma_k(c t) / rho_k(t).
struct RatioReport {
  bool nondecreasing = false;
  double factor = 0.0;
  std::vector<double> grid;
  std::vector<double> ratios;
  std::vector<double> violation_points;
};
RatioReport gromov_ratio_monotone(const RadialDensity& sigma,
                                  const RadialDensity& rho, double factor,
                                  const std::vector<double>& grid,
                                  double rel_tol = 1e-10);

//! Re-integrates both densities with fresh adaptive quadrature and compares
//! the mass of each source ball with the mass of its image ball.
struct PreservationRow {
  double radius = 0.0;
  double source_mass = 0.0;
  double image_mass = 0.0;
  double rel_residual = 0.0;
};
struct PreservationReport {
  bool ok = false;
  double worst = 0.0;
  std::vector<PreservationRow> rows;
};
PreservationReport verify_kball_preservation(const TransportMap& map,
                                             const std::vector<double>& radii,
                                             double rel_tol = 1e-7);

//! Diagnostic table: x, psi, psi_prime, ratio_psi_over_x.
void write_transport_csv(std::ostream& os, const TransportMap& map, int rows = 256);

}  // namespace waistlab
