// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "waistlab/minkowski_content.hpp"
#include "waistlab/rot_surface.hpp"

namespace waistlab {

//! ---------------------------------------------------------------------
//! Cube scenarios: the coordinate-max map on (-1,1)^n under the sup norm.
//! ---------------------------------------------------------------------

//! For f(z) = max_i z_i on the cube, the sup-distance from z to the level
//! set {f = y} is exactly |f(z) - y|, so t-neighborhood volumes have the
//! closed form (min(y+t,1)+1)^n - (max(y-t,-1)+1)^n.
double cube_max_neighborhood_volume(int n, double y, double t);

struct CubeMaxReport {
  int n = 0;
  double t = 0.0;
  double exact_volume = 0.0;  // closed form at level y = 0
  double mc_volume = 0.0;
  double mc_stderr = 0.0;
  double ratio = 0.0;        // mc_volume / t, should approach 2n as t -> 0
  double slope = 0.0;        // the small-t slope 2n
  bool ratio_ok = false;     // ratio within 5% of 2n
  bool below_full_rate = false;  // 2n < 2^n, strict for n >= 3
};

//! Monte Carlo neighborhood volume of the central fiber of the max map,
//! compared against the 2nt small-t law and the t*2^n rate a norm-waist
//! bound would demand of a single fixed level.
CubeMaxReport cube_max_map_check(int n, double t, const McConfig& cfg);

struct NormWaistReport {
  int n = 0;
  double t = 0.0;
  double best_y = 0.0;        // level maximizing the neighborhood volume
  double best_volume = 0.0;   // closed-form volume at best_y
  double bound = 0.0;         // t * 2^n
  bool witness_ok = false;    // best_volume >= bound (closed form)
  double mc_volume = 0.0;     // Monte Carlo at best_y
  double mc_stderr = 0.0;
  bool mc_ok = false;         // |mc - closed form| <= 3 sigma
};

//! Sweeps the level y of the max map and verifies that the best level
//! carries sup-norm neighborhood volume at least t * 2^n.  The optimizer
//! sits at y = 1 - t, so it moves with t.
NormWaistReport norm_waist_cube_check(int n, double t, int y_grid,
                                      const McConfig& cfg);

//! ---------------------------------------------------------------------
//! Gauges and log-concave bodies.
//! ---------------------------------------------------------------------

//! Minkowski functional of a polytope {x : a_i . x <= b_i} with 0 in the
//! interior (all b_i > 0): gauge(v) = max_i (a_i . v) / b_i.
class PolytopeGauge {
 public:
  PolytopeGauge(Eigen::MatrixXd normals, Eigen::VectorXd offsets);

  double operator()(const Eigen::VectorXd& v) const;
  int dim() const { return static_cast<int>(normals_.cols()); }

  //! Sup-norm unit ball (-1,1)^n as a polytope gauge.
  static PolytopeGauge cube(int n);

  const Eigen::MatrixXd& normals() const { return normals_; }
  const Eigen::VectorXd& offsets() const { return offsets_; }

 private:
  Eigen::MatrixXd normals_;
  Eigen::VectorXd offsets_;
};

//! Convex body L with a log-concave density g on it, plus the point where
//! g restricted to L is maximal.  The box bounds L and is what uniform
//! sampling covers.
struct ConvexBodyMeasure {
  std::string name;
  std::string claim;
  int dim = 0;
  std::function<bool(const Eigen::VectorXd&)> member;
  std::function<double(const Eigen::VectorXd&)> density;
  Eigen::VectorXd mode;
  Eigen::VectorXd box_lo, box_hi;
};

struct LogConcavityReport {
  int pairs_checked = 0;
  int violations = 0;
  double worst_ratio = 1.0;  // min over pairs of g(mid)^2 / (g(x) g(y))
  bool mode_ok = false;      // g(mode) dominates every sampled g(x)
  bool ok = false;
};

//! Midpoint concavity of log g on random in-body pairs, and dominance of
//! the declared mode.
LogConcavityReport validate_log_concavity(const ConvexBodyMeasure& body, int pairs,
                                          std::uint64_t seed, double tol = 1e-9);

struct PancakeReport {
  std::string name;
  double t = 0.0;
  double mass = 0.0;           // mu(L)
  double mass_stderr = 0.0;
  double shrunk = 0.0;         // mu(c + t(L - c))
  double shrunk_stderr = 0.0;
  double ratio = 0.0;          // shrunk / (t^dim * mass), >= 1 when the bound holds
  double margin_sigma = 0.0;   // paired-sample margin in standard errors
  bool ok = false;
};

//! Contracting a log-concave measure toward its density mode by factor t
//! keeps at least the fraction t^dim of the mass.  One-dimensional bodies
//! are integrated by quadrature (zero standard error); higher dimensions
//! use paired Monte Carlo on the bounding box.
PancakeReport pancake_lemma_check(const ConvexBodyMeasure& body, double t,
                                  const McConfig& cfg);

//! Shipped bodies: a uniform hexagon (equality case), a Gaussian weight on
//! an off-center interval, and an l1-exponential weight on a seeded octagon.
std::vector<ConvexBodyMeasure> builtin_pancake_scenarios(std::uint64_t seed);

//! ---------------------------------------------------------------------
//! Distance map on the Euclidean ball: the small-cap obstruction.
//! ---------------------------------------------------------------------

struct BallDistanceReport {
  int n = 0;
  double projection_bound = 0.0;  // 2 (sqrt(3)/2)^{n-1} v_{n-1}
  double half_ball = 0.0;         // v_n / 2
  double ratio = 0.0;             // projection_bound / half_ball
  bool bound_below_half_ball = false;
  double cap_area_exact = 0.0;    // unit-sphere cap of polar angle pi/3
  double cap_area_mc = 0.0;
  double cap_area_stderr = 0.0;
  bool cap_below_bound = false;   // mc <= projection_bound + 3 sigma
};

//! For f(x) = |x - p| on the unit ball with |p| = 1, the only level whose
//! 1-neighborhood covers both p and -p is the cap through the origin, a
//! unit-sphere cap of polar angle pi/3.  Its area is bounded by twice its
//! equatorial projection, which for large n drops below v_n / 2; the
//! crossover sits between n = 3 and n = 20.
BallDistanceReport ball_distance_map_check(int n, const McConfig& cfg);

//! ---------------------------------------------------------------------
//! Gaussian measure of plane neighborhoods.
//! ---------------------------------------------------------------------

struct GaussianPlaneReport {
  int n = 0, k = 0;
  double t = 0.0;
  std::vector<double> distances;
  std::vector<double> measures;
  bool max_at_zero = false;
  bool monotone = false;
};

//! Gaussian measure (density e^{-pi |x|^2}) of the t-neighborhood of an
//! affine k-plane at distance d from the origin.  The k in-plane factors
//! integrate to one, leaving a ball integral in the n-k normal directions;
//! the measure is largest for the plane through the origin and decays
//! monotonically in d.
GaussianPlaneReport gaussian_plane_check(int n, int k, double t,
                                         const std::vector<double>& d_grid);

//! Closed-ball Gaussian mass: integral of e^{-pi |w|^2} over |w - p| <= t
//! in dimension j, |p| = d.
double gaussian_ball_mass(int j, double d, double t);

//! ---------------------------------------------------------------------
//! Fiber sweeps of distance maps on rotationally symmetric surfaces.
//! ---------------------------------------------------------------------

enum class FiberMethod { band_quadrature, minkowski_mc };

struct SweepConfig {
  FiberMethod method = FiberMethod::band_quadrature;
  int levels = 25;
  double band_epsilon = 1e-4;
  McConfig mc;  // minkowski_mc only
};

struct FiberLevel {
  double level = 0.0;    // fiber parameter: geodesic radius, or longitude
  double content = 0.0;  // one-dimensional content estimate
  double stderr_ = 0.0;  // zero for band quadrature
};

struct FiberSweep {
  std::string name;
  std::string claim;
  double bound = 0.0;  // one-dimensional model ball volume, recomputed per run
  std::vector<FiberLevel> levels;
  double max_content = 0.0;
  double argmax_level = 0.0;
  double combined_error = 0.0;
  int failed_levels = 0;
  bool expected_gap = false;
  bool ok = false;
};

//! Distance-from-center map on a surface ball B(R).  Validates the
//! curvature bound K <= kappa on (0, R], then estimates the content of the
//! circle fibers and compares the best one against the one-dimensional
//! ball volume 2R of the model space.
FiberSweep surface_distance_sweep(const RotSymSurface& surface, double kappa,
                                  double R, const SweepConfig& cfg);

//! Spherical cap of geodesic radius R < pi; fibers are circles of length
//! 2 pi sin r.  minkowski_mc rebuilds each fiber as a sampled circle on
//! the embedded sphere and runs the neighborhood-volume estimator.
FiberSweep cap_distance_sweep(double R, const SweepConfig& cfg);

//! Hyperbolic disk of radius R; fibers are circles of length 2 pi sinh r,
//! optionally re-estimated in the Poincare disk.
FiberSweep hyperbolic_ball_distance_sweep(double R, const SweepConfig& cfg);

//! Longitude projection of the sphere minus two poles onto the equator.
//! Every fiber is an open meridian of length pi, short of the closed-curve
//! bound 2 pi: the gap this sweep flags is the expected outcome.
FiberSweep two_puncture_sweep(const SweepConfig& cfg);

struct SweepScenario {
  std::string name;
  std::string claim;
  bool expect_rejection = false;  // curvature validator should fire
  std::function<FiberSweep(const SweepConfig&)> run;
};

std::vector<SweepScenario> builtin_sweep_scenarios();

//! ---------------------------------------------------------------------
//! Distance comparison against the constant-curvature model.
//! ---------------------------------------------------------------------

struct CatComparisonReport {
  std::string name;
  double model_curvature = 0.0;
  double R = 0.0;
  int pairs = 0;
  int violations = 0;
  double min_margin = 0.0;  // min over pairs of dist_target - dist_model
  bool ok = false;
};

//! The normal-coordinate identification of the model ball B(R) in the
//! curvature-kappa model plane with the target surface ball does not
//! decrease distances when the target curvature stays <= kappa.  Verified
//! on seeded random polar pairs, target distances by geodesic shooting.
CatComparisonReport cat_comparison_check(const RotSymSurface& target,
                                         double model_curvature, double R,
                                         int pairs, std::uint64_t seed,
                                         double tol = 1e-6);

struct CatScenario {
  std::string name;
  std::string claim;
  double model_curvature = 0.0;
  double R = 0.0;
  std::function<RotSymSurface()> make_target;
};

std::vector<CatScenario> builtin_cat_scenarios();

//! Profile with curvature exceeding +1 near the pole; feeding it to a
//! kappa = 1 sweep or comparison must raise a validation error.
RotSymSurface counterexample_profile(double max_radius = 1.5);

}  // namespace waistlab
