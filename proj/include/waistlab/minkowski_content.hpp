// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "waistlab/sampled_set.hpp"

namespace waistlab {

//! Monte Carlo run parameters.  The stream label keyed with the level
//! index fixes every random draw, so estimates depend only on
//! (samples, seed, label), never on the worker count.
struct McConfig {
  std::uint64_t samples = 1u << 20;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string stream_label = "mc";
};

struct CurvePoint {
  double t = 0.0;
  double value = 0.0;
  double stderr_ = 0.0;
  std::uint64_t samples = 0;
};

struct VolumeCurve {
  std::vector<CurvePoint> points;
};

//! Volume of the closed t-neighborhood of the set, with standard error.
std::pair<double, double> neighborhood_volume(const SampledSet& set, double t,
                                              const McConfig& cfg);

//! Same, with the volume element multiplied by an ambient density.
std::pair<double, double> weighted_neighborhood_volume(
    const SampledSet& set, const std::function<double(const Eigen::VectorXd&)>& density,
    double t, const McConfig& cfg);

//! Descending geometric schedule {coarsest * ratio^i : i < levels}.
std::vector<double> geometric_schedule(double coarsest, double ratio, int levels);

//! Two-sided Minkowski content estimate of a codimension >= 1 set:
//! vol nu_t(X) / (v_m t^m) along the schedule, with the liminf/limsup
//! proxies taken over the finest statistically resolved levels.
struct ContentEstimate {
  double lower = 0.0;
  double upper = 0.0;
  double fit_exponent = 0.0;  // log-log slope of vol nu_t against t
  double ci = 0.0;            // largest ratio standard error in the window
  std::optional<double> gaussian;
  VolumeCurve curve;   // raw neighborhood volumes
  VolumeCurve ratios;  // normalized ratios
};

ContentEstimate content_estimate(const SampledSet& set,
                                 const std::vector<double>& schedule,
                                 const McConfig& cfg);

ContentEstimate weighted_content_estimate(
    const SampledSet& set, const std::function<double(const Eigen::VectorXd&)>& density,
    const std::vector<double>& schedule, const McConfig& cfg);

//! Largest admissible Gaussian sharpness for a sampled set: the kernel
//! width 1/u must stay above five fill distances.
double max_gaussian_sharpness(const SampledSet& set);

//! Gaussian content proxy: u^{n-k} * integral of exp(-pi u^2 dist^2) for an
//! ascending schedule of u, windowed like the Minkowski estimate.
struct GaussianEstimate {
  double lower = 0.0;
  double upper = 0.0;
  double ci = 0.0;
  VolumeCurve curve;  // t field holds u
};

GaussianEstimate gaussian_content(const SampledSet& set,
                                  const std::vector<double>& u_schedule,
                                  const McConfig& cfg);

//! | integral over [0, inf) of v_m w^m 2 pi w exp(-pi w^2) dw  -  1 |.
double gaussian_weight_identity_residual(int m);

//! Runs both estimators and checks the two-sided chain
//! lower Minkowski <= Gaussian <= upper Minkowski within noise plus a
//! structural slack, together with the weight normalization identity.
struct SandwichReport {
  ContentEstimate mink;
  GaussianEstimate gauss;
  double weight_identity_residual = 0.0;
  double slack = 0.0;
  bool chain_ok = false;
  bool identity_ok = false;
  bool ok = false;
};

SandwichReport verify_sandwich(const SampledSet& set,
                               const std::vector<double>& t_schedule,
                               const std::vector<double>& u_schedule,
                               const McConfig& cfg, double rel_slack = 0.02);

//! Multiplicativity of Gaussian content under products, computed with the
//! exact product distance d((x,y),(X,Y))^2 = d(x,X)^2 + d(y,Y)^2 so the
//! factors' distance engines carry the whole query.  The product run draws
//! from kernel mixtures around the clouds (importance sampling); a product
//! whose total ambient dimension exceeds 6 raises ResourceError.
struct ProductReport {
  GaussianEstimate x, y, xy;
  double product_of_factors = 0.0;
  double rel_gap = 0.0;
  double tol = 0.0;
  bool ok = false;
};

ProductReport gaussian_product_check(const SampledSet& sx, const SampledSet& sy,
                                     int levels, const McConfig& cfg,
                                     double rel_tol = 0.03);

//! Quadrature check of v_{m+l} = v_m v_l l * integral over [0, pi/2] of
//! sin^{m+1} cos^{l-1}.
struct FubiniReport {
  int m = 0, l = 0;
  double lhs = 0.0, rhs = 0.0, residual = 0.0;
  bool ok = false;
};

FubiniReport fubini_tube_identity(int m, int l, double tol = 1e-9);

}  // namespace waistlab
