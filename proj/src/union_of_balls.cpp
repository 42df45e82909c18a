// SPDX-License-Identifier: Apache-2.0
#include "waistlab/union_of_balls.hpp"

#include <algorithm>
#include <cmath>

#include "waistlab/ambient.hpp"
#include "waistlab/errors.hpp"
#include "waistlab/model_geometry.hpp"
#include "waistlab/parallel.hpp"

namespace waistlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

void validate_system(const BallSystem& balls) {
  if (balls.centers.empty()) throw ValidationError("ball system: no centers");
  if (!(balls.radius > 0)) throw ValidationError("ball system: radius must be > 0");
  const Eigen::Index d = balls.centers.front().size();
  for (const auto& c : balls.centers)
    if (c.size() != d) throw ValidationError("ball system: mixed dimensions");
}

//! Ball that contains the union of t-balls around all the given centers,
//! with a little margin so boundary effects never clip the sampling.
std::pair<Eigen::VectorXd, double> bounding_ball(
    const std::vector<Eigen::VectorXd>& centers, double t) {
  Eigen::VectorXd lo = centers.front(), hi = centers.front();
  for (const auto& c : centers) {
    lo = lo.cwiseMin(c);
    hi = hi.cwiseMax(c);
  }
  const Eigen::VectorXd mid = 0.5 * (lo + hi);
  double radius = 0.0;
  for (const auto& c : centers) radius = std::max(radius, (c - mid).norm());
  return {mid, radius + 1.05 * t};
}

bool in_union(const std::vector<Eigen::VectorXd>& centers, double r2,
              const Eigen::VectorXd& x) {
  for (const auto& c : centers)
    if ((x - c).squaredNorm() <= r2) return true;
  return false;
}

void validate_lipschitz(const ContractionPath& path, double tol) {
  if (path.source.size() != path.image.size() || path.source.empty())
    throw ValidationError("contraction path: source and image sizes differ");
  const Eigen::Index d = path.source.front().size();
  double scale = 0.0;
  for (std::size_t i = 0; i < path.source.size(); ++i) {
    if (path.source[i].size() != d || path.image[i].size() != d)
      throw ValidationError("contraction path: mixed dimensions");
    for (std::size_t j = 0; j < i; ++j)
      scale = std::max(scale, (path.source[i] - path.source[j]).norm());
  }
  for (std::size_t i = 0; i < path.source.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double ds = (path.source[i] - path.source[j]).norm();
      const double di = (path.image[i] - path.image[j]).norm();
      if (di > ds + tol * std::max(1.0, scale))
        throw ValidationError("contraction path: map is not 1-Lipschitz on the pair (" +
                              std::to_string(j) + ", " + std::to_string(i) + ")");
    }
}

}  // namespace

double two_disk_union_area(double r, double d) {
  if (!(r > 0) || d < 0) throw DomainError("two_disk_union_area: need r > 0, d >= 0");
  const double full = 2.0 * kPi * r * r;
  if (d >= 2.0 * r) return full;
  const double lens =
      2.0 * r * r * std::acos(d / (2.0 * r)) - 0.5 * d * std::sqrt(4.0 * r * r - d * d);
  return full - lens;
}

std::pair<double, double> union_volume(const BallSystem& balls,
                                       const UnionVolumeOptions& opt) {
  validate_system(balls);
  const Eigen::Index d = balls.centers.front().size();
  if (!opt.force_mc && d == 2 && balls.centers.size() <= 2) {
    if (balls.centers.size() == 1)
      return {kPi * balls.radius * balls.radius, 0.0};
    const double dist = (balls.centers[0] - balls.centers[1]).norm();
    return {two_disk_union_area(balls.radius, dist), 0.0};
  }

  const auto [mid, radius] = bounding_ball(balls.centers, balls.radius);
  const double measure =
      unit_ball_volume(static_cast<int>(d)) * std::pow(radius, static_cast<double>(d));
  const double r2 = balls.radius * balls.radius;
  const auto acc = chunked_reduce<MomentAccum>(
      opt.samples, opt.seed, stream_from_label(opt.stream_label), opt.workers,
      [&, mid = mid, radius = radius](Philox4x32& rng, std::uint64_t count,
                                      MomentAccum& a) {
        for (std::uint64_t i = 0; i < count; ++i) {
          const Eigen::VectorXd x =
              mid + radius * sample_unit_ball(rng, static_cast<int>(d));
          a.add(in_union(balls.centers, r2, x) ? 1.0 : 0.0);
        }
      });
  return {measure * acc.mean(), measure * acc.stderr_of_mean()};
}

std::vector<Eigen::VectorXd> interpolate(const ContractionPath& path, double alpha) {
  if (path.source.size() != path.image.size() || path.source.empty())
    throw ValidationError("interpolate: source and image sizes differ");
  if (!(alpha >= 0) || alpha > 0.5 * kPi + 1e-12)
    throw DomainError("interpolate: alpha must lie in [0, pi/2]");
  const double c = std::cos(alpha), s = std::sin(alpha);
  std::vector<Eigen::VectorXd> out;
  out.reserve(path.source.size());
  for (std::size_t i = 0; i < path.source.size(); ++i) {
    const Eigen::Index d = path.source[i].size();
    Eigen::VectorXd p(2 * d);
    p.head(d) = c * path.source[i];
    p.tail(d) = s * path.image[i];
    out.push_back(std::move(p));
  }
  return out;
}

PairwiseReport pairwise_monotonicity_check(const ContractionPath& path,
                                           int alpha_steps, double tol) {
  validate_lipschitz(path, tol);
  if (alpha_steps < 2)
    throw ValidationError("pairwise_monotonicity_check: need >= 2 alpha steps");
  PairwiseReport rep;
  rep.worst_violation = -kInf;
  const std::size_t n = path.source.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      double prev = kInf;
      bool bad = false;
      for (int a = 0; a < alpha_steps; ++a) {
        const double alpha = 0.5 * kPi * a / (alpha_steps - 1);
        const double c = std::cos(alpha), s = std::sin(alpha);
        const double ds2 = (path.source[i] - path.source[j]).squaredNorm();
        const double di2 = (path.image[i] - path.image[j]).squaredNorm();
        const double dist = std::sqrt(c * c * ds2 + s * s * di2);
        const double rise = dist - prev;
        rep.worst_violation = std::max(rep.worst_violation, rise);
        if (rise > tol * std::max(1.0, prev)) bad = true;
        prev = dist;
      }
      if (bad)
        rep.violating_pairs.emplace_back(static_cast<int>(j), static_cast<int>(i));
    }
  rep.ok = rep.violating_pairs.empty();
  return rep;
}

namespace {

//! Per-chunk accumulator: one hit counter per alpha level plus one counter
//! for each consecutive difference of indicators.
struct KpAccum {
  std::vector<MomentAccum> levels;
  std::vector<MomentAccum> diffs;

  void init(std::size_t n_levels) {
    if (levels.empty()) {
      levels.resize(n_levels);
      diffs.resize(n_levels > 0 ? n_levels - 1 : 0);
    }
  }
  void merge(const KpAccum& o) {
    if (o.levels.empty()) return;
    init(o.levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i) levels[i].merge(o.levels[i]);
    for (std::size_t i = 0; i < diffs.size(); ++i) diffs[i].merge(o.diffs[i]);
  }
};

}  // namespace

KpReport kp_experiment(const ContractionPath& path, double t,
                       const std::vector<double>& alphas,
                       const UnionVolumeOptions& opt) {
  validate_lipschitz(path, 1e-9);
  if (alphas.size() < 2)
    throw ValidationError("kp_experiment: need at least 2 alpha levels");
  for (std::size_t i = 1; i < alphas.size(); ++i)
    if (!(alphas[i] > alphas[i - 1]))
      throw ValidationError("kp_experiment: alpha levels must increase");
  if (!(t > 0)) throw DomainError("kp_experiment: t must be > 0");

  // all doubled configurations, and one region that covers every level
  std::vector<std::vector<Eigen::VectorXd>> configs;
  configs.reserve(alphas.size());
  std::vector<Eigen::VectorXd> everything;
  for (const double a : alphas) {
    configs.push_back(interpolate(path, a));
    everything.insert(everything.end(), configs.back().begin(), configs.back().end());
  }
  const auto [mid, radius] = bounding_ball(everything, t);
  const int dim = static_cast<int>(everything.front().size());
  const double measure = unit_ball_volume(dim) * std::pow(radius, dim);
  const double r2 = t * t;
  const std::size_t n_levels = alphas.size();

  const auto acc = chunked_reduce<KpAccum>(
      opt.samples, opt.seed, stream_from_label(opt.stream_label + "/kp"), opt.workers,
      [&, mid = mid, radius = radius](Philox4x32& rng, std::uint64_t count, KpAccum& a) {
        a.init(n_levels);
        std::vector<double> hit(n_levels);
        for (std::uint64_t s = 0; s < count; ++s) {
          const Eigen::VectorXd x = mid + radius * sample_unit_ball(rng, dim);
          for (std::size_t l = 0; l < n_levels; ++l) {
            hit[l] = in_union(configs[l], r2, x) ? 1.0 : 0.0;
            a.levels[l].add(hit[l]);
            if (l > 0) a.diffs[l - 1].add(hit[l] - hit[l - 1]);
          }
        }
      });

  KpReport rep;
  rep.samples = opt.samples;
  for (std::size_t l = 0; l < n_levels; ++l)
    rep.curve.push_back({alphas[l], measure * acc.levels[l].mean(),
                         measure * acc.levels[l].stderr_of_mean()});
  rep.worst_diff_sigma = -kInf;
  for (const auto& d : acc.diffs) {
    const double se = d.stderr_of_mean();
    const double sigma = se > 0 ? d.mean() / se : (d.mean() > 0 ? kInf : 0.0);
    rep.diff_sigmas.push_back(sigma);
    rep.worst_diff_sigma = std::max(rep.worst_diff_sigma, sigma);
  }
  rep.nonincreasing = rep.worst_diff_sigma <= 3.0;
  return rep;
}

PlanarContractionReport planar_lipschitz_content_check(const ContractionPath& path,
                                                       double t,
                                                       const UnionVolumeOptions& opt) {
  validate_lipschitz(path, 1e-9);
  if (!(t > 0)) throw DomainError("planar_lipschitz_content_check: t must be > 0");

  std::vector<Eigen::VectorXd> everything(path.source);
  everything.insert(everything.end(), path.image.begin(), path.image.end());
  const auto [mid, radius] = bounding_ball(everything, t);
  const int dim = static_cast<int>(path.source.front().size());
  const double measure = unit_ball_volume(dim) * std::pow(radius, dim);
  const double r2 = t * t;

  struct Acc {
    MomentAccum src, img, diff;
    void merge(const Acc& o) {
      src.merge(o.src);
      img.merge(o.img);
      diff.merge(o.diff);
    }
  };
  const auto acc = chunked_reduce<Acc>(
      opt.samples, opt.seed, stream_from_label(opt.stream_label + "/planar"),
      opt.workers,
      [&, mid = mid, radius = radius](Philox4x32& rng, std::uint64_t count, Acc& a) {
        for (std::uint64_t s = 0; s < count; ++s) {
          const Eigen::VectorXd x = mid + radius * sample_unit_ball(rng, dim);
          const double hs = in_union(path.source, r2, x) ? 1.0 : 0.0;
          const double hi = in_union(path.image, r2, x) ? 1.0 : 0.0;
          a.src.add(hs);
          a.img.add(hi);
          a.diff.add(hs - hi);
        }
      });

  PlanarContractionReport rep;
  rep.source_volume = measure * acc.src.mean();
  rep.source_stderr = measure * acc.src.stderr_of_mean();
  rep.image_volume = measure * acc.img.mean();
  rep.image_stderr = measure * acc.img.stderr_of_mean();
  const double se = acc.diff.stderr_of_mean();
  rep.shrink_sigma = se > 0 ? acc.diff.mean() / se : (acc.diff.mean() >= 0 ? kInf : -kInf);
  rep.ok = rep.shrink_sigma >= -3.0;
  return rep;
}

std::vector<KpScenario> builtin_kp_scenarios(std::uint64_t seed) {
  std::vector<KpScenario> out;

  {
    // two unit balls whose centers merge as alpha advances
    KpScenario s;
    s.name = "two-balls-merge";
    s.claim = "two tangent disks merge into one; the union volume falls from 2*pi to pi";
    s.path.source = {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, 2.0)};
    s.path.image = {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1)};
    s.t = 1.0;
    out.push_back(std::move(s));
  }

  Philox4x32 rng(seed, stream_from_label("kp-scenarios"));
  auto scatter = [&rng](int count, double spread) {
    std::vector<Eigen::VectorXd> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      Eigen::VectorXd p(2);
      p << spread * (2.0 * rng.next_double() - 1.0),
          spread * (2.0 * rng.next_double() - 1.0);
      pts.push_back(std::move(p));
    }
    return pts;
  };

  {
    KpScenario s;
    s.name = "identity-flat";
    s.claim = "the identity map leaves every union volume constant along the homotopy";
    s.path.source = scatter(12, 1.0);
    s.path.image = s.path.source;
    s.t = 0.35;
    out.push_back(std::move(s));
  }
  {
    KpScenario s;
    s.name = "centroid-contraction";
    s.claim = "contracting halfway toward the centroid never grows the union";
    s.path.source = scatter(20, 1.2);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(2);
    for (const auto& p : s.path.source) c += p;
    c /= static_cast<double>(s.path.source.size());
    for (const auto& p : s.path.source) s.path.image.push_back(c + 0.5 * (p - c));
    s.t = 0.3;
    out.push_back(std::move(s));
  }
  {
    KpScenario s;
    s.name = "project-to-line";
    s.claim = "orthogonal projection to a line is 1-Lipschitz and shrinks the union";
    s.path.source = scatter(15, 1.0);
    for (const auto& p : s.path.source) {
      Eigen::VectorXd q(2);
      q << p[0], 0.0;
      s.path.image.push_back(std::move(q));
    }
    s.t = 0.3;
    out.push_back(std::move(s));
  }
  {
    KpScenario s;
    s.name = "scale-0.8";
    s.claim = "a global 0.8 scaling shrinks every pairwise distance and the union";
    s.path.source = scatter(10, 1.3);
    for (const auto& p : s.path.source) s.path.image.push_back(0.8 * p);
    s.t = 0.4;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace waistlab
