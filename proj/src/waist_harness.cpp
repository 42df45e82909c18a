// SPDX-License-Identifier: Apache-2.0
#include "waistlab/waist_harness.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

#include "waistlab/ambient.hpp"
#include "waistlab/errors.hpp"
#include "waistlab/model_geometry.hpp"
#include "waistlab/parallel.hpp"
#include "waistlab/quadrature.hpp"
#include "waistlab/sampled_set.hpp"

namespace waistlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double ipow(double x, int n) {
  double out = 1.0;
  for (int i = 0; i < n; ++i) out *= x;
  return out;
}

}  // namespace

double cube_max_neighborhood_volume(int n, double y, double t) {
  if (n < 1) throw DomainError("cube_max_neighborhood_volume: n must be >= 1");
  if (t < 0) throw DomainError("cube_max_neighborhood_volume: t must be >= 0");
  const double hi = std::min(y + t, 1.0);
  const double lo = std::max(y - t, -1.0);
  if (hi <= lo) return 0.0;
  return ipow(hi + 1.0, n) - ipow(lo + 1.0, n);
}

CubeMaxReport cube_max_map_check(int n, double t, const McConfig& cfg) {
  if (n < 2) throw DomainError("cube_max_map_check: n must be >= 2");
  if (!(t > 0) || t > 0.05)
    throw DomainError("cube_max_map_check: t must lie in (0, 0.05]");

  CubeMaxReport rep;
  rep.n = n;
  rep.t = t;
  rep.exact_volume = cube_max_neighborhood_volume(n, 0.0, t);
  rep.slope = 2.0 * n;

  const double measure = ipow(2.0, n);
  const auto acc = chunked_reduce<MomentAccum>(
      cfg.samples, cfg.seed, stream_from_label(cfg.stream_label + "/cube-max"),
      cfg.workers, [&](Philox4x32& rng, std::uint64_t count, MomentAccum& a) {
        for (std::uint64_t s = 0; s < count; ++s) {
          double top = -1.0;
          for (int i = 0; i < n; ++i)
            top = std::max(top, 2.0 * rng.next_double() - 1.0);
          a.add(std::abs(top) <= t ? 1.0 : 0.0);
        }
      });
  rep.mc_volume = measure * acc.mean();
  rep.mc_stderr = measure * acc.stderr_of_mean();
  rep.ratio = rep.mc_volume / t;
  rep.ratio_ok = std::abs(rep.ratio - rep.slope) <= 0.05 * rep.slope;
  rep.below_full_rate = rep.slope < measure;
  return rep;
}

NormWaistReport norm_waist_cube_check(int n, double t, int y_grid,
                                      const McConfig& cfg) {
  if (n < 1) throw ValidationError("norm_waist_cube_check: n must be >= 1");
  if (!(t > 0) || t > 1.0)
    throw ValidationError("norm_waist_cube_check: t must lie in (0, 1]");
  if (y_grid < 2) throw ValidationError("norm_waist_cube_check: need >= 2 levels");

  NormWaistReport rep;
  rep.n = n;
  rep.t = t;
  const double full = ipow(2.0, n);
  rep.bound = t * full;

  // sweep the level; the closed-form optimum 1 - t joins the grid
  rep.best_volume = -1.0;
  auto consider = [&](double y) {
    const double v = cube_max_neighborhood_volume(n, y, t);
    if (v > rep.best_volume) {
      rep.best_volume = v;
      rep.best_y = y;
    }
  };
  for (int i = 0; i < y_grid; ++i)
    consider(-1.0 + 2.0 * i / (y_grid - 1));
  consider(1.0 - t);
  rep.witness_ok = rep.best_volume >= rep.bound - 1e-12 * full;

  const auto acc = chunked_reduce<MomentAccum>(
      cfg.samples, cfg.seed, stream_from_label(cfg.stream_label + "/norm-waist"),
      cfg.workers, [&](Philox4x32& rng, std::uint64_t count, MomentAccum& a) {
        for (std::uint64_t s = 0; s < count; ++s) {
          double top = -1.0;
          for (int i = 0; i < n; ++i)
            top = std::max(top, 2.0 * rng.next_double() - 1.0);
          a.add(std::abs(top - rep.best_y) <= t ? 1.0 : 0.0);
        }
      });
  rep.mc_volume = full * acc.mean();
  rep.mc_stderr = full * acc.stderr_of_mean();
  const double gap = std::abs(rep.mc_volume - rep.best_volume);
  rep.mc_ok = rep.mc_stderr > 0 ? gap <= 3.0 * rep.mc_stderr : gap <= 1e-12 * full;
  return rep;
}

PolytopeGauge::PolytopeGauge(Eigen::MatrixXd normals, Eigen::VectorXd offsets)
    : normals_(std::move(normals)), offsets_(std::move(offsets)) {
  if (normals_.rows() == 0 || normals_.rows() != offsets_.size())
    throw ValidationError("polytope gauge: need one offset per facet");
  if ((offsets_.array() <= 0).any())
    throw ValidationError("polytope gauge: offsets must be positive (0 interior)");
}

double PolytopeGauge::operator()(const Eigen::VectorXd& v) const {
  if (v.size() != normals_.cols())
    throw ValidationError("polytope gauge: dimension mismatch");
  return ((normals_ * v).array() / offsets_.array()).maxCoeff();
}

PolytopeGauge PolytopeGauge::cube(int n) {
  if (n < 1) throw ValidationError("polytope gauge: n must be >= 1");
  Eigen::MatrixXd a(2 * n, n);
  a.setZero();
  for (int i = 0; i < n; ++i) {
    a(2 * i, i) = 1.0;
    a(2 * i + 1, i) = -1.0;
  }
  return PolytopeGauge(a, Eigen::VectorXd::Ones(2 * n));
}

namespace {

Eigen::VectorXd draw_in_box(Philox4x32& rng, const Eigen::VectorXd& lo,
                            const Eigen::VectorXd& hi) {
  Eigen::VectorXd x(lo.size());
  for (Eigen::Index i = 0; i < lo.size(); ++i)
    x[i] = lo[i] + (hi[i] - lo[i]) * rng.next_double();
  return x;
}

Eigen::VectorXd draw_in_body(const ConvexBodyMeasure& body, Philox4x32& rng) {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    Eigen::VectorXd x = draw_in_box(rng, body.box_lo, body.box_hi);
    if (body.member(x)) return x;
  }
  throw NumericError("log-concave body: rejection sampling kept missing the body");
}

void validate_body(const ConvexBodyMeasure& body) {
  if (body.dim < 1 || body.box_lo.size() != body.dim ||
      body.box_hi.size() != body.dim || body.mode.size() != body.dim)
    throw ValidationError("log-concave body: inconsistent dimensions");
  if (!body.member || !body.density)
    throw ValidationError("log-concave body: member and density are required");
  if (!body.member(body.mode))
    throw ValidationError("log-concave body: mode must belong to the body");
}

}  // namespace

LogConcavityReport validate_log_concavity(const ConvexBodyMeasure& body, int pairs,
                                          std::uint64_t seed, double tol) {
  validate_body(body);
  LogConcavityReport rep;
  rep.mode_ok = true;
  Philox4x32 rng(seed, stream_from_label("log-concavity/" + body.name));
  const double g_mode = body.density(body.mode);
  for (int i = 0; i < pairs; ++i) {
    const Eigen::VectorXd x = draw_in_body(body, rng);
    const Eigen::VectorXd y = draw_in_body(body, rng);
    const Eigen::VectorXd mid = 0.5 * (x + y);
    const double gx = body.density(x), gy = body.density(y), gm = body.density(mid);
    if (gx > g_mode * (1 + tol) || gy > g_mode * (1 + tol)) rep.mode_ok = false;
    const double denom = gx * gy;
    const double ratio = denom > 0 ? gm * gm / denom : 1.0;
    rep.worst_ratio = std::min(rep.worst_ratio, ratio);
    if (ratio < 1.0 - tol || !body.member(mid)) ++rep.violations;
    ++rep.pairs_checked;
  }
  rep.ok = rep.violations == 0 && rep.mode_ok;
  return rep;
}

PancakeReport pancake_lemma_check(const ConvexBodyMeasure& body, double t,
                                  const McConfig& cfg) {
  validate_body(body);
  if (!(t > 0) || t > 1.0)
    throw DomainError("pancake_lemma_check: t must lie in (0, 1]");
  const auto lc = validate_log_concavity(body, 160, cfg.seed ^ 0x9e3779b9ull);
  if (!lc.ok)
    throw ValidationError("pancake_lemma_check: density failed the log-concavity "
                          "or mode check on " + body.name);

  PancakeReport rep;
  rep.name = body.name;
  rep.t = t;
  const Eigen::VectorXd& c = body.mode;
  const double t_pow = ipow(t, body.dim);

  if (body.dim == 1) {
    // one-dimensional bodies must set box = body; both masses are then
    // plain integrals and the verdict carries no sampling noise
    const double lo = body.box_lo[0], hi = body.box_hi[0];
    rep.mass = integrate([&](double x) { return body.density(Eigen::VectorXd::Constant(1, x)); },
                         lo, hi);
    const double c0 = c[0];
    rep.shrunk = integrate([&](double x) { return body.density(Eigen::VectorXd::Constant(1, x)); },
                           c0 + t * (lo - c0), c0 + t * (hi - c0));
    rep.ratio = rep.shrunk / (t_pow * rep.mass);
    rep.margin_sigma = rep.ratio >= 1.0 - 1e-12 ? kInf : -kInf;
    rep.ok = rep.ratio >= 1.0 - 1e-12;
    return rep;
  }

  struct Acc {
    MomentAccum mass, shrunk, diff;
    void merge(const Acc& o) {
      mass.merge(o.mass);
      shrunk.merge(o.shrunk);
      diff.merge(o.diff);
    }
  };
  const double box = (body.box_hi - body.box_lo).prod();
  const auto acc = chunked_reduce<Acc>(
      cfg.samples, cfg.seed, stream_from_label(cfg.stream_label + "/pancake/" + body.name),
      cfg.workers, [&](Philox4x32& rng, std::uint64_t count, Acc& a) {
        for (std::uint64_t s = 0; s < count; ++s) {
          const Eigen::VectorXd x = draw_in_box(rng, body.box_lo, body.box_hi);
          if (!body.member(x)) {
            a.mass.add(0.0);
            a.shrunk.add(0.0);
            a.diff.add(0.0);
            continue;
          }
          const double gx = body.density(x);
          const double gs = body.density(c + t * (x - c));
          a.mass.add(gx);
          a.shrunk.add(gs);
          a.diff.add(gs - gx);
        }
      });
  rep.mass = box * acc.mass.mean();
  rep.mass_stderr = box * acc.mass.stderr_of_mean();
  rep.shrunk = t_pow * box * acc.shrunk.mean();
  rep.shrunk_stderr = t_pow * box * acc.shrunk.stderr_of_mean();
  rep.ratio = acc.mass.mean() > 0 ? acc.shrunk.mean() / acc.mass.mean() : 0.0;
  const double se = acc.diff.stderr_of_mean();
  const double mean = acc.diff.mean();
  rep.margin_sigma = se > 0 ? mean / se : (mean >= 0 ? (mean > 0 ? kInf : 0.0) : -kInf);
  rep.ok = rep.margin_sigma >= -3.0;
  return rep;
}

std::vector<ConvexBodyMeasure> builtin_pancake_scenarios(std::uint64_t seed) {
  std::vector<ConvexBodyMeasure> out;

  {
    ConvexBodyMeasure m;
    m.name = "uniform-hexagon";
    m.claim = "contracting the uniform hexagon toward an interior point scales "
              "its area by exactly t^2";
    m.dim = 2;
    Eigen::MatrixXd a(6, 2);
    for (int i = 0; i < 6; ++i) {
      const double th = 2.0 * kPi * i / 6.0;
      a.row(i) << std::cos(th), std::sin(th);
    }
    auto gauge = std::make_shared<PolytopeGauge>(a, Eigen::VectorXd::Ones(6));
    m.member = [gauge](const Eigen::VectorXd& x) { return (*gauge)(x) <= 1.0; };
    m.density = [](const Eigen::VectorXd&) { return 1.0; };
    m.mode = Eigen::Vector2d(0.1, -0.05);
    m.box_lo = Eigen::Vector2d(-1.2, -1.2);
    m.box_hi = Eigen::Vector2d(1.2, 1.2);
    out.push_back(std::move(m));
  }
  {
    ConvexBodyMeasure m;
    m.name = "gauss-interval";
    m.claim = "the centered Gaussian weight on an off-center interval loses at "
              "most the factor t when squeezed toward its peak";
    m.dim = 1;
    m.member = [](const Eigen::VectorXd&) { return true; };
    m.density = [](const Eigen::VectorXd& x) { return std::exp(-kPi * x[0] * x[0]); };
    m.mode = Eigen::VectorXd::Zero(1);
    m.box_lo = Eigen::VectorXd::Constant(1, -0.4);
    m.box_hi = Eigen::VectorXd::Constant(1, 1.3);
    out.push_back(std::move(m));
  }
  {
    ConvexBodyMeasure m;
    m.name = "laplace-octagon";
    m.claim = "an l1-exponential weight on a seeded octagon obeys the t^2 "
              "contraction bound toward its peak at the origin";
    m.dim = 2;
    Philox4x32 rng(seed, stream_from_label("pancake-octagon"));
    Eigen::MatrixXd a(8, 2);
    Eigen::VectorXd b(8);
    for (int i = 0; i < 8; ++i) {
      const double th = 2.0 * kPi * i / 8.0 + 0.1 * (2.0 * rng.next_double() - 1.0);
      a.row(i) << std::cos(th), std::sin(th);
      b[i] = 0.7 + 0.7 * rng.next_double();
    }
    auto gauge = std::make_shared<PolytopeGauge>(a, b);
    m.member = [gauge](const Eigen::VectorXd& x) { return (*gauge)(x) <= 1.0; };
    m.density = [](const Eigen::VectorXd& x) {
      return std::exp(-(std::abs(x[0]) + std::abs(x[1])));
    };
    m.mode = Eigen::VectorXd::Zero(2);
    m.box_lo = Eigen::Vector2d(-1.6, -1.6);
    m.box_hi = Eigen::Vector2d(1.6, 1.6);
    out.push_back(std::move(m));
  }
  return out;
}

BallDistanceReport ball_distance_map_check(int n, const McConfig& cfg) {
  if (n < 3) throw ValidationError("ball_distance_map_check: n must be >= 3");
  BallDistanceReport rep;
  rep.n = n;
  rep.projection_bound =
      2.0 * std::pow(std::sqrt(3.0) / 2.0, n - 1) * unit_ball_volume(n - 1);
  rep.half_ball = 0.5 * unit_ball_volume(n);
  rep.ratio = rep.projection_bound / rep.half_ball;
  rep.bound_below_half_ball = rep.projection_bound < rep.half_ball;

  rep.cap_area_exact =
      sphere_volume(n - 2) *
      integrate([n](double th) { return std::pow(std::sin(th), n - 2); }, 0.0, kPi / 3.0);

  // fraction of the unit sphere within polar angle pi/3 of the inward axis
  const auto acc = chunked_reduce<MomentAccum>(
      cfg.samples, cfg.seed, stream_from_label(cfg.stream_label + "/ball-distance"),
      cfg.workers, [&](Philox4x32& rng, std::uint64_t count, MomentAccum& a) {
        for (std::uint64_t s = 0; s < count; ++s) {
          const Eigen::VectorXd u = sample_unit_sphere(rng, n - 1);
          a.add(u[0] <= -0.5 ? 1.0 : 0.0);
        }
      });
  rep.cap_area_mc = sphere_volume(n - 1) * acc.mean();
  rep.cap_area_stderr = sphere_volume(n - 1) * acc.stderr_of_mean();
  rep.cap_below_bound =
      rep.cap_area_mc <= rep.projection_bound + 3.0 * rep.cap_area_stderr;
  return rep;
}

double gaussian_ball_mass(int j, double d, double t) {
  if (j < 1) throw DomainError("gaussian_ball_mass: dimension must be >= 1");
  if (d < 0 || !(t > 0)) throw DomainError("gaussian_ball_mass: need d >= 0, t > 0");
  if (j == 1)
    return integrate([](double s) { return std::exp(-kPi * s * s); }, d - t, d + t);
  const double ang_norm = sphere_volume(j - 2);
  return integrate(
      [&](double r) {
        const double ang = integrate(
            [&](double th) {
              return std::exp(-2.0 * kPi * d * r * std::cos(th)) *
                     std::pow(std::sin(th), j - 2);
            },
            0.0, kPi);
        return std::pow(r, j - 1) * std::exp(-kPi * (d * d + r * r)) * ang_norm * ang;
      },
      0.0, t);
}

GaussianPlaneReport gaussian_plane_check(int n, int k, double t,
                                         const std::vector<double>& d_grid) {
  if (k < 1 || k >= n) throw ValidationError("gaussian_plane_check: need 1 <= k < n");
  if (!(t > 0)) throw ValidationError("gaussian_plane_check: t must be > 0");
  if (d_grid.empty()) throw ValidationError("gaussian_plane_check: empty grid");
  for (std::size_t i = 0; i < d_grid.size(); ++i)
    if (d_grid[i] < 0 || (i > 0 && d_grid[i] <= d_grid[i - 1]))
      throw ValidationError("gaussian_plane_check: grid must increase from >= 0");

  GaussianPlaneReport rep;
  rep.n = n;
  rep.k = k;
  rep.t = t;
  const int j = n - k;
  for (const double d : d_grid) {
    rep.distances.push_back(d);
    rep.measures.push_back(gaussian_ball_mass(j, d, t));
  }
  const double at_zero =
      d_grid.front() == 0.0 ? rep.measures.front() : gaussian_ball_mass(j, 0.0, t);
  const double slack = 1e-12 * (1.0 + at_zero);
  rep.max_at_zero = true;
  rep.monotone = true;
  for (std::size_t i = 0; i < rep.measures.size(); ++i) {
    if (rep.measures[i] > at_zero + slack) rep.max_at_zero = false;
    if (i > 0 && rep.measures[i] > rep.measures[i - 1] + slack) rep.monotone = false;
  }
  return rep;
}

namespace {

void finish_sweep(FiberSweep& sweep) {
  sweep.max_content = -kInf;
  double worst_se = 0.0;
  for (const auto& lv : sweep.levels) {
    worst_se = std::max(worst_se, lv.stderr_);
    if (lv.content > sweep.max_content) {
      sweep.max_content = lv.content;
      sweep.argmax_level = lv.level;
    }
  }
  sweep.combined_error = 3.0 * worst_se + 1e-9 * (1.0 + std::abs(sweep.bound));
  if (sweep.expected_gap)
    sweep.ok = sweep.failed_levels == 0 &&
               sweep.max_content + sweep.combined_error < sweep.bound;
  else
    sweep.ok = sweep.max_content >= sweep.bound - sweep.combined_error;
}

//! Circle-fiber content through the neighborhood-volume estimator, with the
//! fiber rebuilt as a periodic chart in the given ambient.
FiberLevel mc_circle_level(std::shared_ptr<const Ambient> ambient, double r,
                           double chart_radius,
                           const std::function<Eigen::VectorXd(double, double)>& lift,
                           double coarsest, const SweepConfig& cfg, int index) {
  Chart chart;
  chart.k = 1;
  chart.lo = Eigen::VectorXd::Zero(1);
  chart.hi = Eigen::VectorXd::Constant(1, 2.0 * kPi);
  chart.periodic = {1};
  chart.map = [chart_radius, lift](const Eigen::VectorXd& th) {
    return lift(chart_radius * std::cos(th[0]), chart_radius * std::sin(th[0]));
  };
  const SampledSet set = sample_chart(std::move(ambient), std::move(chart), {512});
  McConfig mc = cfg.mc;
  mc.stream_label += "/fiber#" + std::to_string(index);
  const auto est = content_estimate(set, geometric_schedule(coarsest, 0.6, 5), mc);
  FiberLevel lv;
  lv.level = r;
  lv.content = 0.5 * (est.lower + est.upper);
  lv.stderr_ = est.ci + 0.5 * (est.upper - est.lower);
  return lv;
}

}  // namespace

FiberSweep surface_distance_sweep(const RotSymSurface& surface, double kappa,
                                  double R, const SweepConfig& cfg) {
  if (!(R > 0) || R > surface.max_radius())
    throw ValidationError("surface_distance_sweep: R must lie in (0, max_radius]");
  if (cfg.levels < 2) throw ValidationError("surface_distance_sweep: need >= 2 levels");
  if (cfg.method == FiberMethod::minkowski_mc)
    throw ValidationError(
        "surface_distance_sweep: the sampling estimator needs an embedded model; "
        "use the cap or hyperbolic sweeps");

  const auto curv = check_curvature_bound(surface, kappa, 0.0, R, 400);
  if (!curv.ok)
    throw ValidationError("surface_distance_sweep: curvature exceeds " +
                          std::to_string(kappa) + " by " +
                          std::to_string(curv.worst_excess) + " at radius " +
                          std::to_string(curv.worst_radius));

  FiberSweep sweep;
  sweep.name = surface.name() + "-distance";
  sweep.claim = "the distance-from-center map on the ball of radius " +
                std::to_string(R) + " has a circle fiber at least as long as the "
                "one-dimensional model ball";
  sweep.bound = geodesic_ball_volume(kappa, 1, R);

  const double eps = cfg.band_epsilon;
  for (int i = 1; i <= cfg.levels; ++i) {
    const double r = R * i / (cfg.levels + 1);
    const double lo = std::max(0.0, r - eps), hi = std::min(R, r + eps);
    FiberLevel lv;
    lv.level = r;
    lv.content =
        integrate([&](double s) { return 2.0 * kPi * surface.profile(s); }, lo, hi) /
        (2.0 * eps);
    sweep.levels.push_back(lv);
  }
  finish_sweep(sweep);
  return sweep;
}

FiberSweep cap_distance_sweep(double R, const SweepConfig& cfg) {
  if (!(R > 0) || R >= kPi)
    throw ValidationError("cap_distance_sweep: R must lie in (0, pi)");
  if (cfg.method == FiberMethod::band_quadrature) {
    FiberSweep sweep = surface_distance_sweep(model_surface(1.0, R), 1.0, R, cfg);
    sweep.name = "cap-distance";
    sweep.claim = "every spherical cap of radius " + std::to_string(R) +
                  " carries a parallel circle at least as long as 2R";
    return sweep;
  }

  FiberSweep sweep;
  sweep.name = "cap-distance";
  sweep.claim = "parallel circles of the spherical cap, re-measured by "
                "neighborhood sampling on the embedded sphere";
  sweep.bound = geodesic_ball_volume(1.0, 1, R);
  auto ambient = std::make_shared<SphereAmbient>(2);
  for (int i = 1; i <= cfg.levels; ++i) {
    const double r = R * i / (cfg.levels + 1);
    const double coarsest = std::min(0.12, 0.35 * std::min(r, kPi - r));
    try {
      sweep.levels.push_back(mc_circle_level(
          ambient, r, cap_chart_radius(r),
          [](double x, double y) { return stereographic_lift(Eigen::Vector2d(x, y)); },
          coarsest, cfg, i));
    } catch (const NumericError&) {
      ++sweep.failed_levels;
    }
  }
  finish_sweep(sweep);
  return sweep;
}

FiberSweep hyperbolic_ball_distance_sweep(double R, const SweepConfig& cfg) {
  if (!(R > 0)) throw ValidationError("hyperbolic_ball_distance_sweep: R must be > 0");
  if (cfg.method == FiberMethod::band_quadrature) {
    FiberSweep sweep = surface_distance_sweep(model_surface(-1.0, R), -1.0, R, cfg);
    sweep.name = "hyperbolic-ball-distance";
    sweep.claim = "every hyperbolic disk of radius " + std::to_string(R) +
                  " carries a circle fiber at least as long as 2R";
    return sweep;
  }

  FiberSweep sweep;
  sweep.name = "hyperbolic-ball-distance";
  sweep.claim = "hyperbolic circles re-measured by neighborhood sampling in the "
                "conformal disk chart";
  sweep.bound = geodesic_ball_volume(-1.0, 1, R);
  auto ambient = std::make_shared<PoincareDiskAmbient>();
  for (int i = 1; i <= cfg.levels; ++i) {
    const double r = R * i / (cfg.levels + 1);
    const double coarsest = std::min(0.12, 0.35 * r);
    try {
      sweep.levels.push_back(mc_circle_level(
          ambient, r, hyperbolic_chart_radius(r),
          [](double x, double y) { return Eigen::Vector2d(x, y); }, coarsest, cfg, i));
    } catch (const NumericError&) {
      ++sweep.failed_levels;
    }
  }
  finish_sweep(sweep);
  return sweep;
}

FiberSweep two_puncture_sweep(const SweepConfig& cfg) {
  if (cfg.levels < 1) throw ValidationError("two_puncture_sweep: need >= 1 level");
  FiberSweep sweep;
  sweep.name = "two-puncture-sphere";
  sweep.claim = "longitude fibers of the twice-punctured sphere are meridians of "
                "length pi; none reaches the closed-circle bound";
  sweep.bound = sphere_volume(1);
  sweep.expected_gap = true;

  // the t-neighborhood of a meridian: at polar angle th the reachable
  // longitude offset is pi inside the polar caps and asin(sin t / sin th)
  // between them
  const double t = cfg.band_epsilon;
  auto width = [t](double th) {
    if (std::min(th, kPi - th) <= t) return kPi;
    return std::asin(std::min(1.0, std::sin(t) / std::sin(th)));
  };
  auto band_area = [&](void) {
    const double caps =
        integrate([&](double th) { return 2.0 * kPi * std::sin(th); }, 0.0, t) +
        integrate([&](double th) { return 2.0 * kPi * std::sin(th); }, kPi - t, kPi);
    const double middle = integrate(
        [&](double th) { return 2.0 * width(th) * std::sin(th); }, t, kPi - t);
    return caps + middle;
  };
  const double content = band_area() / (2.0 * t);
  for (int i = 0; i < cfg.levels; ++i) {
    FiberLevel lv;
    lv.level = 2.0 * kPi * i / cfg.levels;
    lv.content = content;  // rotational symmetry: every longitude is alike
    sweep.levels.push_back(lv);
  }
  finish_sweep(sweep);
  return sweep;
}

std::vector<SweepScenario> builtin_sweep_scenarios() {
  std::vector<SweepScenario> out;
  out.push_back({"cap-distance",
                 "a spherical cap of radius 2 has a parallel of length 2 pi sin r "
                 "beating the bound 4",
                 false,
                 [](const SweepConfig& cfg) { return cap_distance_sweep(2.0, cfg); }});
  out.push_back({"hyperbolic-ball-distance",
                 "a hyperbolic disk of radius 1.5 has circles of length "
                 "2 pi sinh r beating the bound 3",
                 false,
                 [](const SweepConfig& cfg) {
                   return hyperbolic_ball_distance_sweep(1.5, cfg);
                 }});
  out.push_back({"two-puncture-sphere",
                 "removing two poles lets every fiber stay at length pi, below "
                 "the closed-circle bound 2 pi",
                 false,
                 [](const SweepConfig& cfg) { return two_puncture_sweep(cfg); }});
  out.push_back({"cat-surface",
                 "a profile steeper than sinh keeps curvature below -1, and its "
                 "circle fibers clear the hyperbolic bound 2R",
                 false,
                 [](const SweepConfig& cfg) {
                   RotSymSurface surf(
                       "steep-funnel",
                       [](double r) { return std::sinh(r) + 0.1 * r * r * r; },
                       [](double r) { return std::cosh(r) + 0.3 * r * r; },
                       [](double r) { return std::sinh(r) + 0.6 * r; }, 1.6);
                   return surface_distance_sweep(surf, -1.0, 1.0, cfg);
                 }});
  out.push_back({"cat-model-identity",
                 "running the sweep on the model profile itself reproduces the "
                 "constant-curvature scenario",
                 false,
                 [](const SweepConfig& cfg) {
                   return surface_distance_sweep(model_surface(-1.0, 1.2), -1.0, 1.0,
                                                 cfg);
                 }});
  out.push_back({"counterexample-profile",
                 "a bulged profile with curvature above +1 must be rejected by "
                 "the curvature validator",
                 true,
                 [](const SweepConfig& cfg) {
                   return surface_distance_sweep(counterexample_profile(), 1.0, 1.0,
                                                 cfg);
                 }});
  return out;
}

CatComparisonReport cat_comparison_check(const RotSymSurface& target,
                                         double model_curvature, double R,
                                         int pairs, std::uint64_t seed, double tol) {
  if (!(R > 0) || R > target.max_radius())
    throw ValidationError("cat_comparison_check: R must lie in (0, max_radius]");
  if (pairs < 1) throw ValidationError("cat_comparison_check: need >= 1 pair");
  const auto curv = check_curvature_bound(target, model_curvature, 0.0, R, 400);
  if (!curv.ok)
    throw ValidationError("cat_comparison_check: target curvature exceeds the "
                          "model bound by " + std::to_string(curv.worst_excess) +
                          " at radius " + std::to_string(curv.worst_radius));

  CatComparisonReport rep;
  rep.name = target.name();
  rep.model_curvature = model_curvature;
  rep.R = R;
  rep.min_margin = kInf;
  Philox4x32 rng(seed, stream_from_label("cat-pairs/" + target.name()));
  for (int i = 0; i < pairs; ++i) {
    const double r1 = R * std::sqrt(rng.next_double());
    const double r2 = R * std::sqrt(rng.next_double());
    const double th1 = 2.0 * kPi * rng.next_double();
    const double th2 = 2.0 * kPi * rng.next_double();
    const double dm = model_polar_distance(model_curvature, r1, r2, th1 - th2);
    const Eigen::Vector2d p1(r1 * std::cos(th1), r1 * std::sin(th1));
    const Eigen::Vector2d p2(r2 * std::cos(th2), r2 * std::sin(th2));
    const double dt = surface_distance(target, p1, p2);
    const double margin = dt - dm;
    rep.min_margin = std::min(rep.min_margin, margin);
    if (margin < -tol) ++rep.violations;
    ++rep.pairs;
  }
  rep.ok = rep.violations == 0;
  return rep;
}

std::vector<CatScenario> builtin_cat_scenarios() {
  std::vector<CatScenario> out;
  out.push_back({"flat-to-hyperbolic",
                 "normal coordinates from the flat disk into the hyperbolic disk "
                 "never shorten distances",
                 0.0, 1.0, [] { return model_surface(-1.0, 1.3); }});
  out.push_back({"sphere-to-flat",
                 "normal coordinates from the spherical cap into the flat disk "
                 "never shorten distances",
                 1.0, 1.0, [] { return model_surface(0.0, 1.3); }});
  out.push_back({"hyperbolic-identity",
                 "the identification of the hyperbolic disk with itself keeps "
                 "every distance",
                 -1.0, 1.0, [] { return model_surface(-1.0, 1.3); }});
  return out;
}

RotSymSurface counterexample_profile(double max_radius) {
  return RotSymSurface(
      "pinched-bulge",
      [](double r) { return std::sin(r) * (1.0 - 0.2 * r * r); },
      [](double r) {
        return std::cos(r) * (1.0 - 0.2 * r * r) - 0.4 * r * std::sin(r);
      },
      [](double r) {
        return -std::sin(r) * (1.0 - 0.2 * r * r) - 0.8 * r * std::cos(r) -
               0.4 * std::sin(r);
      },
      max_radius);
}

}  // namespace waistlab
