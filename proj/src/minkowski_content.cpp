// SPDX-License-Identifier: Apache-2.0
#include "waistlab/minkowski_content.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <unordered_map>

#include "waistlab/errors.hpp"
#include "waistlab/model_geometry.hpp"
#include "waistlab/parallel.hpp"
#include "waistlab/quadrature.hpp"

namespace waistlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint64_t level_stream(const McConfig& cfg, const char* kind, int level) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "/%s#%d", kind, level);
  return stream_from_label(cfg.stream_label + buf);
}

//! Indicator-style MC over a sampling region; `payload(x)` returns the
//! integrand value (0 for points outside the neighborhood).
template <class Payload>
std::pair<double, double> region_mc(const SampleRegion& region, std::uint64_t samples,
                                    std::uint64_t seed, std::uint64_t stream,
                                    int workers, Payload&& payload) {
  const auto acc = chunked_reduce<MomentAccum>(
      samples, seed, stream, workers,
      [&](Philox4x32& rng, std::uint64_t count, MomentAccum& a) {
        for (std::uint64_t i = 0; i < count; ++i) a.add(payload(region.draw(rng)));
      });
  return {region.measure * acc.mean(), region.measure * acc.stderr_of_mean()};
}

std::pair<double, double> neighborhood_volume_impl(
    const SampledSet& set, const std::function<double(const Eigen::VectorXd&)>* density,
    double t, const McConfig& cfg, std::uint64_t stream) {
  if (!(t > 0)) throw DomainError("neighborhood_volume: t must be > 0");
  if (set.cloud.empty()) throw ValidationError("neighborhood_volume: empty set");
  const SetDistance dist(set, t);
  const SampleRegion region = set.ambient->sampling_region(set.cloud, t);
  const Ambient& amb = *set.ambient;
  return region_mc(region, cfg.samples, cfg.seed, stream, cfg.workers,
                   [&](const Eigen::VectorXd& x) -> double {
                     if (!dist.within(x, t)) return 0.0;
                     double v = amb.volume_weight(x);
                     if (density) v *= (*density)(x);
                     return v;
                   });
}

void validate_schedule(const std::vector<double>& s, bool descending) {
  if (s.size() < 5)
    throw ValidationError("schedule: need at least 5 levels");
  double ratio0 = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i] > 0) || !(s[i - 1] > 0))
      throw ValidationError("schedule: levels must be positive");
    const double r = descending ? s[i] / s[i - 1] : s[i - 1] / s[i];
    if (!(r > 0.05 && r < 0.95))
      throw ValidationError("schedule: levels must form a geometric progression");
    if (i == 1)
      ratio0 = r;
    else if (std::fabs(r - ratio0) > 0.05 * ratio0)
      throw ValidationError("schedule: geometric ratio drifts by more than 5%");
  }
}

//! Indices of the finest statistically resolved levels (value above 100
//! standard errors), at most `width` of them, finest last.
std::vector<std::size_t> resolved_window(const VolumeCurve& curve, std::size_t width) {
  std::vector<std::size_t> good;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const auto& p = curve.points[i];
    if (p.value > 100.0 * p.stderr_) good.push_back(i);
  }
  if (good.empty())
    throw NumericError("content estimate: no level is resolved; raise the budget");
  if (good.size() > width) good.erase(good.begin(), good.end() - static_cast<long>(width));
  return good;
}

double loglog_slope(const VolumeCurve& curve) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& p : curve.points) {
    if (!(p.value > 0)) continue;
    const double lx = std::log(p.t), ly = std::log(p.value);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) throw NumericError("content estimate: too few nonzero levels for a fit");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

//! Gaussian-kernel mixture importance sampler over a point cloud.  With the
//! kernel width matched to the content sharpness (2 sigma^2 = 1/(pi u^2))
//! the weight exp(-pi u^2 d^2) / density is constant along the interior of
//! the sampled set, so high-codimension integrands stay resolvable at
//! budgets where uniform region sampling collapses.
class KernelMixture {
 public:
  KernelMixture(const std::vector<Eigen::VectorXd>& cloud, double sigma)
      : cloud_(&cloud), sigma_(sigma), cell_(4.0 * sigma) {
    const auto dim = cloud.front().size();
    log_norm_ = -0.5 * static_cast<double>(dim) *
                    std::log(2.0 * kPi * sigma * sigma) -
                std::log(static_cast<double>(cloud.size()));
    for (std::uint32_t i = 0; i < cloud.size(); ++i)
      cells_[cell_key(cloud[i])].push_back(i);
  }

  Eigen::VectorXd draw(Philox4x32& rng) const {
    const auto& pts = *cloud_;
    auto j = static_cast<std::size_t>(rng.next_double() *
                                      static_cast<double>(pts.size()));
    if (j >= pts.size()) j = pts.size() - 1;
    Eigen::VectorXd x = pts[j];
    for (Eigen::Index d = 0; d < x.size(); ++d)
      x[d] += sigma_ * rng.next_gaussian();
    return x;
  }

  //! Mixture density at x.  Kernels beyond 4 sigma are dropped, which
  //! biases the density down by at most erfc(4/sqrt(2)) per axis.
  double density(const Eigen::VectorXd& x) const {
    const auto& pts = *cloud_;
    const double r2_max = 16.0 * sigma_ * sigma_;
    const double inv_two_s2 = 0.5 / (sigma_ * sigma_);
    const auto dim = x.size();
    std::array<std::int64_t, 8> base{};
    for (Eigen::Index d = 0; d < dim; ++d)
      base[static_cast<std::size_t>(d)] =
          static_cast<std::int64_t>(std::floor(x[d] / cell_));
    int combos = 1;
    for (Eigen::Index d = 0; d < dim; ++d) combos *= 3;
    double sum = 0.0;
    for (int m = 0; m < combos; ++m) {
      std::uint64_t key = 0;
      int digits = m;
      for (Eigen::Index d = 0; d < dim; ++d) {
        const std::int64_t c =
            base[static_cast<std::size_t>(d)] + (digits % 3) - 1;
        digits /= 3;
        key = (key << 16) | static_cast<std::uint64_t>(c & 0xffff);
      }
      const auto it = cells_.find(key);
      if (it == cells_.end()) continue;
      for (const std::uint32_t i : it->second) {
        const double r2 = (x - pts[i]).squaredNorm();
        if (r2 <= r2_max) sum += std::exp(-r2 * inv_two_s2);
      }
    }
    return std::exp(log_norm_) * sum;
  }

 private:
  std::uint64_t cell_key(const Eigen::VectorXd& x) const {
    std::uint64_t key = 0;
    for (Eigen::Index d = 0; d < x.size(); ++d) {
      const auto c = static_cast<std::int64_t>(std::floor(x[d] / cell_));
      key = (key << 16) | static_cast<std::uint64_t>(c & 0xffff);
    }
    return key;
  }

  const std::vector<Eigen::VectorXd>* cloud_;
  double sigma_;
  double cell_;
  double log_norm_ = 0.0;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
};

ContentEstimate content_estimate_impl(
    const SampledSet& set, const std::function<double(const Eigen::VectorXd&)>* density,
    const std::vector<double>& schedule, const McConfig& cfg) {
  validate_schedule(schedule, /*descending=*/true);
  const int m = set.ambient->dim() - set.k;
  if (m < 1) throw DomainError("content estimate: set must have codimension >= 1");
  const double vm = unit_ball_volume(m);

  ContentEstimate est;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const double t = schedule[i];
    const auto [vol, se] = neighborhood_volume_impl(
        set, density, t, cfg, level_stream(cfg, "nbhd", static_cast<int>(i)));
    const double norm = vm * std::pow(t, m);
    est.curve.points.push_back({t, vol, se, cfg.samples});
    est.ratios.points.push_back({t, vol / norm, se / norm, cfg.samples});
  }

  const auto window = resolved_window(est.curve, 3);
  est.lower = kInf;
  est.upper = -kInf;
  for (const std::size_t i : window) {
    const auto& r = est.ratios.points[i];
    est.lower = std::min(est.lower, r.value);
    est.upper = std::max(est.upper, r.value);
    est.ci = std::max(est.ci, r.stderr_);
  }
  est.fit_exponent = loglog_slope(est.curve);
  return est;
}

}  // namespace

std::pair<double, double> neighborhood_volume(const SampledSet& set, double t,
                                              const McConfig& cfg) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "/t=%.17g", t);
  return neighborhood_volume_impl(set, nullptr, t, cfg,
                                  stream_from_label(cfg.stream_label + buf));
}

std::pair<double, double> weighted_neighborhood_volume(
    const SampledSet& set, const std::function<double(const Eigen::VectorXd&)>& density,
    double t, const McConfig& cfg) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "/wt=%.17g", t);
  return neighborhood_volume_impl(set, &density, t, cfg,
                                  stream_from_label(cfg.stream_label + buf));
}

std::vector<double> geometric_schedule(double coarsest, double ratio, int levels) {
  if (!(coarsest > 0) || !(ratio > 0.05 && ratio < 0.95) || levels < 5)
    throw ValidationError("geometric_schedule: need coarsest > 0, ratio in (0.05, 0.95), levels >= 5");
  std::vector<double> s(static_cast<std::size_t>(levels));
  double t = coarsest;
  for (auto& v : s) {
    v = t;
    t *= ratio;
  }
  return s;
}

ContentEstimate content_estimate(const SampledSet& set,
                                 const std::vector<double>& schedule,
                                 const McConfig& cfg) {
  return content_estimate_impl(set, nullptr, schedule, cfg);
}

ContentEstimate weighted_content_estimate(
    const SampledSet& set, const std::function<double(const Eigen::VectorXd&)>& density,
    const std::vector<double>& schedule, const McConfig& cfg) {
  return content_estimate_impl(set, &density, schedule, cfg);
}

double max_gaussian_sharpness(const SampledSet& set) {
  if (!(set.fill_distance > 0))
    return kInf;  // exact clouds: any sharpness is fine
  return 1.0 / (5.0 * set.fill_distance);
}

GaussianEstimate gaussian_content(const SampledSet& set,
                                  const std::vector<double>& u_schedule,
                                  const McConfig& cfg) {
  validate_schedule(u_schedule, /*descending=*/false);
  const double u_cap = max_gaussian_sharpness(set);
  for (const double u : u_schedule)
    if (u > u_cap * (1.0 + 1e-12))
      throw ValidationError("gaussian_content: kernel sharper than five fill distances");
  const int n = set.ambient->dim();
  const int m = n - set.k;
  if (m < 1) throw DomainError("gaussian_content: set must have codimension >= 1");

  const bool point_exact = set.cloud.size() == 1 && set.k == 0 &&
                           dynamic_cast<const EuclideanAmbient*>(set.ambient.get());

  GaussianEstimate est;
  for (std::size_t i = 0; i < u_schedule.size(); ++i) {
    const double u = u_schedule[i];
    const double eps = 6.0 / u;
    const double scale = std::pow(u, m);
    if (point_exact) {
      // single point in R^n: the integral is radial and cheap to do exactly
      const double shell = sphere_volume(n - 1);
      const double integral = integrate(
          [u, n](double r) {
            return std::pow(r, n - 1) * std::exp(-kPi * u * u * r * r);
          },
          0.0, eps);
      est.curve.points.push_back({u, scale * shell * integral, 0.0, 0});
      continue;
    }
    const SetDistance dist(set, eps);
    const SampleRegion region = set.ambient->sampling_region(set.cloud, eps);
    const Ambient& amb = *set.ambient;
    const auto [raw, se] =
        region_mc(region, cfg.samples, cfg.seed,
                  level_stream(cfg, "gauss", static_cast<int>(i)), cfg.workers,
                  [&](const Eigen::VectorXd& x) -> double {
                    const double d = dist.distance_within(x, eps);
                    if (!std::isfinite(d)) return 0.0;
                    return amb.volume_weight(x) * std::exp(-kPi * u * u * d * d);
                  });
    est.curve.points.push_back({u, scale * raw, scale * se, cfg.samples});
  }

  const auto window = resolved_window(est.curve, 3);
  est.lower = kInf;
  est.upper = -kInf;
  for (const std::size_t i : window) {
    const auto& p = est.curve.points[i];
    est.lower = std::min(est.lower, p.value);
    est.upper = std::max(est.upper, p.value);
    est.ci = std::max(est.ci, p.stderr_);
  }
  return est;
}

double gaussian_weight_identity_residual(int m) {
  if (m < 0) throw DomainError("weight identity: m must be >= 0");
  const double vm = unit_ball_volume(m);
  const double integral = integrate(
      [vm, m](double w) {
        return vm * std::pow(w, m) * 2.0 * kPi * w * std::exp(-kPi * w * w);
      },
      0.0, 8.0, {1e-14, 1e-12, 48});
  return std::fabs(integral - 1.0);
}

SandwichReport verify_sandwich(const SampledSet& set,
                               const std::vector<double>& t_schedule,
                               const std::vector<double>& u_schedule,
                               const McConfig& cfg, double rel_slack) {
  SandwichReport rep;
  McConfig mink_cfg = cfg;
  mink_cfg.stream_label = cfg.stream_label + "/mink";
  McConfig gauss_cfg = cfg;
  gauss_cfg.stream_label = cfg.stream_label + "/gauss";
  rep.mink = content_estimate(set, t_schedule, mink_cfg);
  rep.gauss = gaussian_content(set, u_schedule, gauss_cfg);
  rep.mink.gaussian = 0.5 * (rep.gauss.lower + rep.gauss.upper);

  const double scale =
      std::max({std::fabs(rep.mink.upper), std::fabs(rep.gauss.upper), 1e-300});
  rep.slack = 3.0 * (rep.mink.ci + rep.gauss.ci) + rel_slack * scale;
  rep.chain_ok = rep.mink.lower <= rep.gauss.lower + rep.slack &&
                 rep.gauss.upper <= rep.mink.upper + rep.slack;
  rep.weight_identity_residual =
      gaussian_weight_identity_residual(set.ambient->dim() - set.k);
  rep.identity_ok = rep.weight_identity_residual <= 1e-10;
  rep.ok = rep.chain_ok && rep.identity_ok;
  return rep;
}

ProductReport gaussian_product_check(const SampledSet& sx, const SampledSet& sy,
                                     int levels, const McConfig& cfg,
                                     double rel_tol) {
  if (!dynamic_cast<const EuclideanAmbient*>(sx.ambient.get()) ||
      !dynamic_cast<const EuclideanAmbient*>(sy.ambient.get()))
    throw ValidationError("gaussian_product_check: factors must live in Euclidean space");
  if (levels < 5) throw ValidationError("gaussian_product_check: need >= 5 levels");

  const int mx = sx.ambient->dim() - sx.k;
  const int my = sy.ambient->dim() - sy.k;
  if (mx < 0 || my < 0 || mx + my < 1)
    throw DomainError("gaussian_product_check: product must have codimension >= 1");
  if (sx.ambient->dim() + sy.ambient->dim() > 6)
    throw ResourceError(
        "gaussian_product_check: product dimension exceeds 6; the Monte Carlo "
        "budget model stops at desk scale");

  const double fill =
      std::hypot(sx.fill_distance, sy.fill_distance);
  const double u_max = fill > 0 ? 1.0 / (5.0 * fill)
                                : std::min(max_gaussian_sharpness(sx),
                                           max_gaussian_sharpness(sy));
  if (!std::isfinite(u_max))
    throw ValidationError("gaussian_product_check: unbounded sharpness on both factors");
  std::vector<double> u_sched(static_cast<std::size_t>(levels));
  for (int i = 0; i < levels; ++i)
    u_sched[static_cast<std::size_t>(i)] = u_max * std::pow(0.5, levels - 1 - i);

  ProductReport rep;
  McConfig fx_cfg = cfg;
  fx_cfg.stream_label = cfg.stream_label + "/factor-x";
  McConfig fy_cfg = cfg;
  fy_cfg.stream_label = cfg.stream_label + "/factor-y";
  rep.x = gaussian_content(sx, u_sched, fx_cfg);
  rep.y = gaussian_content(sy, u_sched, fy_cfg);

  // Product run: a genuine Monte Carlo pass over the product set with the
  // product metric.  Uniform region sampling cannot resolve codimension >= 2
  // integrands at desk budgets (the acceptance fraction squares), so points
  // are drawn from per-factor kernel mixtures and weighted by the inverse
  // mixture density.
  const double eps_max = 6.0 / u_sched.front();
  const SetDistance dx(sx, eps_max), dy(sy, eps_max);
  GaussianEstimate prod;
  for (std::size_t i = 0; i < u_sched.size(); ++i) {
    const double u = u_sched[i];
    const double eps = 6.0 / u;
    const double sigma = 1.0 / (u * std::sqrt(2.0 * kPi));
    const KernelMixture qx(sx.cloud, sigma);
    const KernelMixture qy(sy.cloud, sigma);
    const auto acc = chunked_reduce<MomentAccum>(
        cfg.samples, cfg.seed, level_stream(cfg, "prod", static_cast<int>(i)),
        cfg.workers, [&](Philox4x32& rng, std::uint64_t count, MomentAccum& a) {
          for (std::uint64_t j = 0; j < count; ++j) {
            const Eigen::VectorXd px = qx.draw(rng);
            const Eigen::VectorXd py = qy.draw(rng);
            const double ddx = dx.distance_within(px, eps);
            const double ddy = dy.distance_within(py, eps);
            if (!std::isfinite(ddx) || !std::isfinite(ddy)) {
              a.add(0.0);
              continue;
            }
            const double q = qx.density(px) * qy.density(py);
            if (!(q > 0)) {
              // beyond the kernel truncation of every cloud point; the
              // discarded true mass is below erfc(4/sqrt(2)) of the total
              a.add(0.0);
              continue;
            }
            a.add(std::exp(-kPi * u * u * (ddx * ddx + ddy * ddy)) / q);
          }
        });
    const double scale = std::pow(u, mx + my);
    prod.curve.points.push_back(
        {u, scale * acc.mean(), scale * acc.stderr_of_mean(), cfg.samples});
  }
  {
    const auto window = resolved_window(prod.curve, 3);
    prod.lower = kInf;
    prod.upper = -kInf;
    for (const std::size_t i : window) {
      const auto& p = prod.curve.points[i];
      prod.lower = std::min(prod.lower, p.value);
      prod.upper = std::max(prod.upper, p.value);
      prod.ci = std::max(prod.ci, p.stderr_);
    }
  }
  rep.xy = std::move(prod);

  const double gx = 0.5 * (rep.x.lower + rep.x.upper);
  const double gy = 0.5 * (rep.y.lower + rep.y.upper);
  const double gxy = 0.5 * (rep.xy.lower + rep.xy.upper);
  rep.product_of_factors = gx * gy;
  const double denom = std::max(std::fabs(rep.product_of_factors), 1e-300);
  rep.rel_gap = std::fabs(gxy - rep.product_of_factors) / denom;
  rep.tol = rel_tol + 3.0 * (rep.xy.ci + gx * rep.y.ci + gy * rep.x.ci) / denom;
  rep.ok = rep.rel_gap <= rep.tol;
  return rep;
}

FubiniReport fubini_tube_identity(int m, int l, double tol) {
  if (m < 0 || l < 1) throw DomainError("fubini_tube_identity: need m >= 0, l >= 1");
  FubiniReport rep;
  rep.m = m;
  rep.l = l;
  // substitution x = sin(theta) removes the endpoint singularity at l = 1
  const double integral = integrate(
      [m, l](double th) {
        return std::pow(std::sin(th), m + 1) * std::pow(std::cos(th), l - 1);
      },
      0.0, 0.5 * kPi, {1e-14, 1e-12, 48});
  rep.lhs = unit_ball_volume(m) * unit_ball_volume(l) * l * integral;
  rep.rhs = unit_ball_volume(m + l);
  rep.residual = std::fabs(rep.lhs - rep.rhs);
  rep.ok = rep.residual <= tol * std::max(1.0, rep.rhs);
  return rep;
}

}  // namespace waistlab
