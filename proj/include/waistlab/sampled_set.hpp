// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "waistlab/ambient.hpp"
#include "waistlab/point_grid.hpp"

namespace waistlab {

//! Parametrized k-patch: a box in parameter space mapped into ambient
//! coordinates.  Periodic flags close the corresponding parameter circle
//! (hi identifies with lo), which is how circles and tori are described.
struct Chart {
  int k = 1;
  Eigen::VectorXd lo, hi;
  std::vector<std::uint8_t> periodic;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> map;
};

//! Discrete sampling of a subset X of an ambient space.  The cloud always
//! lies on X, so cloud distances overestimate d(., X) by at most the fill
//! distance; when a chart is attached, queries can be refined through it
//! and the gap shrinks to the refinement tolerance.
struct SampledSet {
  std::shared_ptr<const Ambient> ambient;
  int k = 0;  // intrinsic dimension of X
  std::vector<Eigen::VectorXd> cloud;
  std::vector<Eigen::VectorXd> params;
  std::optional<Chart> chart;
  Eigen::VectorXd param_step;
  double fill_distance = 0.0;
};

//! Evaluates a chart on a structured parameter grid and estimates the fill
//! distance from cell midpoints.
SampledSet sample_chart(std::shared_ptr<const Ambient> ambient, Chart chart,
                        const std::vector<int>& counts);

//! A finite set given by its points (the cloud is the set; fill is zero).
SampledSet cloud_set(std::shared_ptr<const Ambient> ambient,
                     std::vector<Eigen::VectorXd> points, int k = 0);

//! Distance oracle for a sampled set, valid for queries up to max_query.
//! Membership tests ask the cloud first and fall back to a local chart
//! minimization only inside the uncertainty band (t, t + fill].
class SetDistance {
 public:
  SetDistance(const SampledSet& set, double max_query);

  //! Is d(q, X) <= t (up to the refinement tolerance)?
  bool within(const Eigen::VectorXd& q, double t) const;

  //! d(q, X) when it does not exceed cap; +inf otherwise.
  double distance_within(const Eigen::VectorXd& q, double cap) const;

  double max_query() const { return cap_limit_; }

 private:
  double metric_to(const Eigen::VectorXd& q, int idx) const;
  double refine(const Eigen::VectorXd& q, int idx) const;

  const SampledSet* set_;
  PointGrid grid_;
  double alpha_ = 1.0;
  double cap_limit_ = 0.0;
};

}  // namespace waistlab
