// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "waistlab/philox.hpp"

namespace waistlab {

//! Region that encloses a neighborhood of interest, with a sampler that is
//! uniform for the coordinate measure declared in `measure`.  Monte Carlo
//! integrals against the Riemannian volume then read
//!   measure * mean(f(X) * volume_weight(X)).
struct SampleRegion {
  double measure = 0.0;
  std::function<Eigen::VectorXd(Philox4x32&)> draw;
};

//! Ambient space in which sampled sets live.  Coordinates are global chart
//! coordinates (Euclidean space itself, the embedding R^{n+1} of a sphere,
//! or the Poincare disk), so all sets in one ambient can share a spatial
//! index on plain coordinate vectors.
class Ambient {
 public:
  virtual ~Ambient() = default;

  virtual std::string name() const = 0;
  virtual int coord_dim() const = 0;
  virtual int dim() const = 0;  // intrinsic dimension n

  virtual double distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const = 0;

  //! Largest alpha with distance >= alpha * (coordinate distance); spatial
  //! pruning depends on it.
  virtual double metric_lower_factor() const = 0;

  //! Density of the Riemannian volume against the sampler's coordinate
  //! measure at x.
  virtual double volume_weight(const Eigen::VectorXd& x) const = 0;

  //! Region covering the `margin`-neighborhood of the cloud.
  virtual SampleRegion sampling_region(const std::vector<Eigen::VectorXd>& cloud,
                                       double margin) const = 0;
};

//! R^n with the standard metric; regions are balls around the cloud.
class EuclideanAmbient final : public Ambient {
 public:
  explicit EuclideanAmbient(int n);
  std::string name() const override { return "euclidean"; }
  int coord_dim() const override { return n_; }
  int dim() const override { return n_; }
  double distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const override;
  double metric_lower_factor() const override { return 1.0; }
  double volume_weight(const Eigen::VectorXd&) const override { return 1.0; }
  SampleRegion sampling_region(const std::vector<Eigen::VectorXd>& cloud,
                               double margin) const override;

 private:
  int n_;
};

//! Round unit sphere S^n embedded in R^{n+1}.  Sampling is uniform surface
//! measure on the whole sphere; chordal and geodesic nearest neighbors
//! agree, so the pruning factor can stay at 1.
class SphereAmbient final : public Ambient {
 public:
  explicit SphereAmbient(int n);
  std::string name() const override { return "sphere"; }
  int coord_dim() const override { return n_ + 1; }
  int dim() const override { return n_; }
  double distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const override;
  double metric_lower_factor() const override { return 1.0; }
  double volume_weight(const Eigen::VectorXd&) const override { return 1.0; }
  SampleRegion sampling_region(const std::vector<Eigen::VectorXd>& cloud,
                               double margin) const override;

 private:
  int n_;
};

//! Hyperbolic plane in the Poincare disk chart.  Sampling is Lebesgue on a
//! Euclidean disk, weighted by the conformal area factor; the hyperbolic
//! metric dominates twice the Euclidean one.
class PoincareDiskAmbient final : public Ambient {
 public:
  PoincareDiskAmbient();
  std::string name() const override { return "poincare-disk"; }
  int coord_dim() const override { return 2; }
  int dim() const override { return 2; }
  double distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const override;
  double metric_lower_factor() const override { return 2.0; }
  double volume_weight(const Eigen::VectorXd& x) const override;
  SampleRegion sampling_region(const std::vector<Eigen::VectorXd>& cloud,
                               double margin) const override;
};

//! Uniform draw from the unit ball of R^n, by normalized Gaussian direction
//! and a radial power law.
Eigen::VectorXd sample_unit_ball(Philox4x32& rng, int n);

//! Uniform draw from the unit sphere S^n in R^{n+1}.
Eigen::VectorXd sample_unit_sphere(Philox4x32& rng, int n);

}  // namespace waistlab
