// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace waistlab {

//! Union of equal closed balls around a finite configuration.
struct BallSystem {
  std::vector<Eigen::VectorXd> centers;
  double radius = 1.0;
};

//! Exact area of the union of two disks of radius r at center distance d.
double two_disk_union_area(double r, double d);

struct UnionVolumeOptions {
  std::uint64_t samples = 1u << 20;
  std::uint64_t seed = 0;
  int workers = 1;
  bool force_mc = false;  // skip the planar closed forms, for cross-checks
  std::string stream_label = "union";
};

//! Volume of the union with standard error.  Planar systems of at most two
//! balls use the closed form (zero error) unless force_mc is set.
std::pair<double, double> union_volume(const BallSystem& balls,
                                       const UnionVolumeOptions& opt);

//! A finite configuration together with a 1-Lipschitz image.  The doubled
//! configuration cos(alpha) x  (+)  sin(alpha) f(x) interpolates between X
//! and f(X) inside R^{2d}, and every pairwise distance is nonincreasing in
//! alpha on [0, pi/2].
struct ContractionPath {
  std::vector<Eigen::VectorXd> source;
  std::vector<Eigen::VectorXd> image;
};

//! Doubled configuration at homotopy parameter alpha.
std::vector<Eigen::VectorXd> interpolate(const ContractionPath& path, double alpha);

//! Validates the Lipschitz property and checks every pairwise distance is
//! nonincreasing along an alpha grid.
struct PairwiseReport {
  bool ok = false;
  double worst_violation = 0.0;  // most positive distance increase found
  std::vector<std::pair<int, int>> violating_pairs;
};
PairwiseReport pairwise_monotonicity_check(const ContractionPath& path,
                                           int alpha_steps = 33,
                                           double tol = 1e-9);

//! Volume of the union of t-balls around the doubled configuration, as a
//! function of alpha, sampled with one common point stream so consecutive
//! levels difference out most of the Monte Carlo noise.
struct KpCurvePoint {
  double alpha = 0.0;
  double volume = 0.0;
  double stderr_ = 0.0;
};
struct KpReport {
  std::vector<KpCurvePoint> curve;
  //! standardized increase of each consecutive difference; nonincreasing
  //! means none exceeds +3.
  std::vector<double> diff_sigmas;
  double worst_diff_sigma = 0.0;
  bool nonincreasing = false;
  std::uint64_t samples = 0;
};
KpReport kp_experiment(const ContractionPath& path, double t,
                       const std::vector<double>& alphas,
                       const UnionVolumeOptions& opt);

//! Planar contraction principle: the union of t-balls around f(X) is no
//! larger than around X.  Checked with paired sampling on a common region.
struct PlanarContractionReport {
  double source_volume = 0.0, source_stderr = 0.0;
  double image_volume = 0.0, image_stderr = 0.0;
  double shrink_sigma = 0.0;  // (source - image) / sigma of the paired diff
  bool ok = false;            // shrink_sigma >= -3
};
PlanarContractionReport planar_lipschitz_content_check(const ContractionPath& path,
                                                       double t,
                                                       const UnionVolumeOptions& opt);

//! Named, seeded experiment setups covering the qualitative regimes:
//! merging, the identity, strict contractions, and a rank-drop projection.
struct KpScenario {
  std::string name;
  std::string claim;
  ContractionPath path;
  double t = 0.3;
};
std::vector<KpScenario> builtin_kp_scenarios(std::uint64_t seed);

}  // namespace waistlab
