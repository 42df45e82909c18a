// SPDX-License-Identifier: Apache-2.0
#include "waistlab/ambient.hpp"

#include <algorithm>
#include <cmath>

#include "waistlab/errors.hpp"
#include "waistlab/model_geometry.hpp"

namespace waistlab {

Eigen::VectorXd sample_unit_ball(Philox4x32& rng, int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.next_gaussian();
  const double norm = v.norm();
  const double r = std::pow(rng.next_double(), 1.0 / n);
  if (norm == 0.0) return Eigen::VectorXd::Zero(n);
  return (r / norm) * v;
}

Eigen::VectorXd sample_unit_sphere(Philox4x32& rng, int n) {
  Eigen::VectorXd v(n + 1);
  double norm = 0.0;
  do {
    for (int i = 0; i <= n; ++i) v[i] = rng.next_gaussian();
    norm = v.norm();
  } while (norm < 1e-12);
  return v / norm;
}

EuclideanAmbient::EuclideanAmbient(int n) : n_(n) {
  if (n < 1) throw DomainError("euclidean ambient: dimension must be >= 1");
}

double EuclideanAmbient::distance(const Eigen::VectorXd& a,
                                  const Eigen::VectorXd& b) const {
  return (a - b).norm();
}

SampleRegion EuclideanAmbient::sampling_region(
    const std::vector<Eigen::VectorXd>& cloud, double margin) const {
  if (cloud.empty()) throw ValidationError("sampling_region: empty cloud");
  Eigen::VectorXd lo = cloud.front(), hi = cloud.front();
  for (const auto& p : cloud) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Eigen::VectorXd center = 0.5 * (lo + hi);
  double radius = 0.0;
  for (const auto& p : cloud) radius = std::max(radius, (p - center).norm());
  radius += 1.1 * margin;

  SampleRegion region;
  region.measure = unit_ball_volume(n_) * std::pow(radius, n_);
  region.draw = [center, radius, n = n_](Philox4x32& rng) -> Eigen::VectorXd {
    return center + radius * sample_unit_ball(rng, n);
  };
  return region;
}

SphereAmbient::SphereAmbient(int n) : n_(n) {
  if (n < 1) throw DomainError("sphere ambient: dimension must be >= 1");
}

double SphereAmbient::distance(const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b) const {
  return sphere_distance(a, b);
}

SampleRegion SphereAmbient::sampling_region(const std::vector<Eigen::VectorXd>&,
                                            double) const {
  // the whole sphere; neighborhoods of anything are contained in it
  SampleRegion region;
  region.measure = sphere_volume(n_);
  region.draw = [n = n_](Philox4x32& rng) { return sample_unit_sphere(rng, n); };
  return region;
}

PoincareDiskAmbient::PoincareDiskAmbient() = default;

double PoincareDiskAmbient::distance(const Eigen::VectorXd& a,
                                     const Eigen::VectorXd& b) const {
  return poincare_distance(a, b);
}

double PoincareDiskAmbient::volume_weight(const Eigen::VectorXd& x) const {
  const double f = poincare_conformal_factor(x.norm());
  return f * f;
}

SampleRegion PoincareDiskAmbient::sampling_region(
    const std::vector<Eigen::VectorXd>& cloud, double margin) const {
  if (cloud.empty()) throw ValidationError("sampling_region: empty cloud");
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(2);
  double reach = 0.0;
  for (const auto& p : cloud)
    reach = std::max(reach, poincare_distance(origin, p));
  reach += 1.1 * margin;
  const double euclid_radius = std::tanh(0.5 * reach);

  SampleRegion region;
  region.measure = 3.14159265358979323846 * euclid_radius * euclid_radius;
  region.draw = [euclid_radius](Philox4x32& rng) -> Eigen::VectorXd {
    return euclid_radius * sample_unit_ball(rng, 2);
  };
  return region;
}

}  // namespace waistlab
