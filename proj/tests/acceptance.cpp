// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Tolerances and budgets are pinned here and nowhere else.

#include <Eigen/Core>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "waistlab/errors.hpp"
#include "waistlab/interp.hpp"
#include "waistlab/minkowski_content.hpp"
#include "waistlab/model_geometry.hpp"
#include "waistlab/radial_transport.hpp"
#include "waistlab/rot_surface.hpp"
#include "waistlab/sampled_set.hpp"
#include "waistlab/union_of_balls.hpp"
#include "waistlab/waist_harness.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Gate {
  int failures = 0;

  void record(int idx, const std::string& name, bool pass,
              const std::string& detail) {
    std::ostringstream line;
    line << (pass ? "[PASS]" : "[FAIL]") << " criterion " << (idx < 10 ? "0" : "")
         << idx << " " << name << ": " << detail;
    std::cout << line.str() << std::endl;
    if (!pass) ++failures;
  }

  void run(int idx, const std::string& name,
           const std::function<std::pair<bool, std::string>()>& body) {
    try {
      auto [pass, detail] = body();
      record(idx, name, pass, detail);
    } catch (const std::exception& e) {
      record(idx, name, false, std::string("exception: ") + e.what());
    }
  }
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// ---------------------------------------------------------------------------
// transport scenario table shared by criteria 2-4
// ---------------------------------------------------------------------------

struct TransportScenario {
  std::string label;
  bool cap = false;  // cap target (else hyperbolic ball)
  int k = 0;
  double R = 0.0;
};

std::vector<TransportScenario> transport_scenarios() {
  std::vector<TransportScenario> out;
  for (int k : {1, 2, 3}) {
    for (double R : {kPi / 4, kPi / 2, 3 * kPi / 4, 3.0}) {
      out.push_back({"cap k=" + std::to_string(k) + " R=" + fmt(R), true, k, R});
    }
    for (double R : {0.5, 1.0, 2.0}) {
      out.push_back(
          {"hyperbolic k=" + std::to_string(k) + " R=" + fmt(R), false, k, R});
    }
  }
  return out;
}

waistlab::TransportMap build_scenario(const TransportScenario& sc) {
  const auto target = sc.cap ? waistlab::cap_density(sc.k, sc.R)
                             : waistlab::hyperbolic_ball_density(sc.k, sc.R);
  return waistlab::build_transport(waistlab::spherical_density(sc.k),
                                   target.density);
}

// ---------------------------------------------------------------------------
// sampled sets shared by criteria 10-11
// ---------------------------------------------------------------------------

waistlab::SampledSet circle_set(int count) {
  waistlab::Chart c;
  c.k = 1;
  c.lo = Eigen::VectorXd::Zero(1);
  c.hi = Eigen::VectorXd::Constant(1, 2.0 * kPi);
  c.periodic = {1};
  c.map = [](const Eigen::VectorXd& u) {
    Eigen::VectorXd p(2);
    p << std::cos(u(0)), std::sin(u(0));
    return p;
  };
  return waistlab::sample_chart(std::make_shared<waistlab::EuclideanAmbient>(2),
                                std::move(c), {count});
}

waistlab::SampledSet segment_set(int count) {
  waistlab::Chart c;
  c.k = 1;
  c.lo = Eigen::VectorXd::Zero(1);
  c.hi = Eigen::VectorXd::Ones(1);
  c.periodic = {0};
  c.map = [](const Eigen::VectorXd& u) {
    Eigen::VectorXd p(2);
    p << u(0), 0.0;
    return p;
  };
  return waistlab::sample_chart(std::make_shared<waistlab::EuclideanAmbient>(2),
                                std::move(c), {count});
}

waistlab::SampledSet equator_band_set(int count) {
  waistlab::Chart c;
  c.k = 1;
  c.lo = Eigen::VectorXd::Zero(1);
  c.hi = Eigen::VectorXd::Constant(1, 2.0 * kPi);
  c.periodic = {1};
  c.map = [](const Eigen::VectorXd& u) {
    Eigen::VectorXd p(3);
    p << std::cos(u(0)), std::sin(u(0)), 0.0;
    return p;
  };
  return waistlab::sample_chart(std::make_shared<waistlab::SphereAmbient>(2),
                                std::move(c), {count});
}

// ---------------------------------------------------------------------------
// criterion 14 helpers: drive the installed CLI binary
// ---------------------------------------------------------------------------

int run_cli(const std::string& args, const std::filesystem::path& out_dir,
            const std::filesystem::path& log) {
  const std::string cmd = std::string("\"") + ACCEPTANCE_CLI_PATH + "\" " + args +
                          " --json --out \"" + out_dir.string() + "\" > \"" +
                          log.string() + "\" 2>&1";
  return std::system(cmd.c_str());
}

nlohmann::json read_results(const std::filesystem::path& out_dir) {
  std::ifstream in(out_dir / "report.json");
  if (!in) throw std::runtime_error("missing report.json in " + out_dir.string());
  nlohmann::json doc = nlohmann::json::parse(in);
  return doc.at("results");
}

}  // namespace

int main() {
  unsetenv("WAISTLAB_SEED");
  std::cout.setf(std::ios::unitbuf);
  Gate gate;

  // 1 ------------------------------------------------------------------
  gate.run(1, "ball-slicing-identity", []() -> std::pair<bool, std::string> {
    double worst = 0.0;
    for (int m = 0; m <= 4; ++m) {
      for (int l = 1; l <= 4; ++l) {
        const auto rep = waistlab::fubini_tube_identity(m, l, 1e-9);
        worst = std::max(worst, rep.residual);
        if (!rep.ok) {
          return std::make_pair(false, "m=" + std::to_string(m) +
                                           " l=" + std::to_string(l) +
                                           " residual " + fmt(rep.residual));
        }
      }
    }
    return std::make_pair(true, "max residual " + fmt(worst) + " <= 1e-9 on m<=4, l<=4");
  });

  // 2 ------------------------------------------------------------------
  gate.run(2, "transport-identity", []() -> std::pair<bool, std::string> {
    double worst_id = 0.0, worst_total = 0.0;
    for (const auto& sc : transport_scenarios()) {
      const auto map = build_scenario(sc);
      const double x_hi = std::min(map.domain_radius(), 1e6);
      const auto grid = waistlab::log_grid(1e-6, x_hi, 1000);
      for (const double x : grid) {
        const double resid = std::fabs(map.image()(map.psi(x)) - map.source()(x));
        worst_id = std::max(worst_id, resid);
        if (resid >= 1e-9)
          return std::make_pair(false, sc.label + ": identity residual " +
                                           fmt(resid) + " at x=" + fmt(x));
      }
      const double ts = map.source().total();
      const double ti = map.image().total();
      const double dt = std::fabs(ts - ti) / std::max(ts, ti);
      worst_total = std::max(worst_total, dt);
      if (dt > 1e-8)
        return std::make_pair(false, sc.label + ": total moments differ by " + fmt(dt));
      if (sc.cap) {
        for (const double x : {1e-4, 1e-3, 1e-2}) {
          if (!(map.psi(x) < x))
            return std::make_pair(false,
                                  sc.label + ": psi(x) >= x at x=" + fmt(x));
        }
      }
    }
    return std::make_pair(true, "21 scenarios, worst identity residual " +
                                    fmt(worst_id) + ", worst total gap " +
                                    fmt(worst_total));
  });

  // 3 ------------------------------------------------------------------
  gate.run(3, "growth-ratio-certificates", []() -> std::pair<bool, std::string> {
    double worst_cap_c = 0.0;
    int expanding = 0;
    for (const auto& sc : transport_scenarios()) {
      const auto map = build_scenario(sc);
      const double c = waistlab::contraction_factor(map);
      if (sc.cap) {
        // Proper caps hold less mass than the comparison sphere, so the
        // spherical certificate always comes with a genuine contraction.
        worst_cap_c = std::max(worst_cap_c, c);
        if (!(c < 1.0))
          return std::make_pair(false,
                                sc.label + ": contraction factor " + fmt(c));
      } else if (!(c < 1.0)) {
        // Hyperbolic balls whose volume exceeds the comparison sphere force
        // an expanding factor near the origin; the hyperbolic growth ratio
        // increases for any factor on the range c*t < 1, so the certificate
        // below is still the binding check.
        ++expanding;
      }
      const double support = map.image().density().support;
      const double t_hi = 0.999 * std::min(1e3, support / c);
      const auto grid = waistlab::log_grid(1e-6, t_hi, 1000);
      const auto rep = waistlab::gromov_ratio_monotone(
          map.image().density(), map.source().density(), c, grid);
      if (!rep.nondecreasing)
        return std::make_pair(
            false, sc.label + ": " + std::to_string(rep.violation_points.size()) +
                       " ratio decreases");
    }
    return std::make_pair(true, "21 monotone certificates, cap factors <= " +
                                    fmt(worst_cap_c) + ", " +
                                    std::to_string(expanding) +
                                    " expanding hyperbolic maps");
  });

  // 4 ------------------------------------------------------------------
  gate.run(4, "ball-preservation", []() -> std::pair<bool, std::string> {
    double worst = 0.0;
    for (const auto& sc : transport_scenarios()) {
      const auto map = build_scenario(sc);
      const double r_hi = std::min(1e3, map.domain_radius());
      const auto radii = waistlab::log_grid(1e-2, r_hi, 20);
      const auto rep = waistlab::verify_kball_preservation(map, radii, 1e-7);
      worst = std::max(worst, rep.worst);
      if (!rep.ok)
        return std::make_pair(false,
                              sc.label + ": worst relative residual " + fmt(rep.worst));
    }
    return std::make_pair(true, "21 scenarios x 20 radii, worst residual " +
                                    fmt(worst) + " < 1e-7");
  });

  // 5 ------------------------------------------------------------------
  gate.run(5, "cube-max-neighborhood-rate", []() -> std::pair<bool, std::string> {
    waistlab::McConfig cfg;
    cfg.samples = 10'000'000;
    cfg.seed = 2024;
    std::string detail;
    for (int n : {2, 3, 4}) {
      const auto rep = waistlab::cube_max_map_check(n, 0.01, cfg);
      if (!rep.ratio_ok)
        return std::make_pair(false, "n=" + std::to_string(n) + ": ratio " +
                                         fmt(rep.ratio) + " outside 2n +- 5%");
      if (n >= 3 && !rep.below_full_rate)
        return std::make_pair(false, "n=" + std::to_string(n) +
                                         ": expected 2n < 2^n to be strict");
      detail += (detail.empty() ? "" : ", ") + std::string("n=") +
                std::to_string(n) + " ratio " + fmt(rep.ratio);
    }
    return std::make_pair(true, detail + " (1e7 samples, t=0.01)");
  });

  // 6 ------------------------------------------------------------------
  gate.run(6, "ball-distance-crossover", []() -> std::pair<bool, std::string> {
    waistlab::McConfig cfg;
    cfg.samples = 1'000'000;
    cfg.seed = 2024;
    const auto low = waistlab::ball_distance_map_check(3, cfg);
    if (low.bound_below_half_ball)
      return std::make_pair(false, "n=3: projection bound unexpectedly beats v_n/2");
    if (std::fabs(low.cap_area_mc - low.cap_area_exact) > 3.0 * low.cap_area_stderr)
      return std::make_pair(false, "n=3: cap area MC " + fmt(low.cap_area_mc) +
                                       " vs exact " + fmt(low.cap_area_exact));
    if (!low.cap_below_bound)
      return std::make_pair(false, "n=3: cap area exceeds the projection bound");
    const auto high = waistlab::ball_distance_map_check(20, cfg);
    if (!high.bound_below_half_ball)
      return std::make_pair(false, "n=20: projection bound still above v_n/2");
    return std::make_pair(true, "n=3 ratio " + fmt(low.ratio) + " > 1 > n=20 ratio " +
                                    fmt(high.ratio) + ", cap MC within 3 sigma");
  });

  // 7 ------------------------------------------------------------------
  gate.run(7, "norm-waist-witness", []() -> std::pair<bool, std::string> {
    for (int n : {2, 3, 4}) {
      const double full = std::pow(2.0, n);
      for (int i = 1; i <= 50; ++i) {
        const double t = static_cast<double>(i) / 50.0;
        const double vol =
            waistlab::cube_max_neighborhood_volume(n, 1.0 - t, t);
        const double want = full * (1.0 - std::pow(1.0 - t, n));
        if (std::fabs(vol - want) > 1e-12 * full)
          return std::make_pair(false, "closed form mismatch at n=" +
                                           std::to_string(n) + " t=" + fmt(t));
        if (vol < t * full - 1e-12 * full)
          return std::make_pair(false, "witness below t*2^n at n=" +
                                           std::to_string(n) + " t=" + fmt(t));
      }
      waistlab::McConfig cfg;
      cfg.samples = 1'000'000;
      cfg.seed = 31;
      const auto rep = waistlab::norm_waist_cube_check(n, 0.2, 50, cfg);
      if (!rep.witness_ok || !rep.mc_ok)
        return std::make_pair(false, "n=" + std::to_string(n) +
                                         ": MC volume " + fmt(rep.mc_volume) +
                                         " vs closed form " + fmt(rep.best_volume));
    }
    return std::make_pair(true,
                          "50-point t grid exact for n=2,3,4; MC within 3 sigma at 1e6");
  });

  // 8 ------------------------------------------------------------------
  gate.run(8, "pancake-contraction", []() -> std::pair<bool, std::string> {
    const auto bodies = waistlab::builtin_pancake_scenarios(2024);
    waistlab::McConfig cfg;
    cfg.samples = 1u << 20;
    cfg.seed = 47;
    double min_margin = waistlab::kInf;
    for (const auto& body : bodies) {
      for (int i = 1; i <= 10; ++i) {
        const double t = static_cast<double>(i) / 10.0;
        const auto rep = waistlab::pancake_lemma_check(body, t, cfg);
        if (!rep.ok)
          return std::make_pair(false, body.name + " t=" + fmt(t) + ": margin " +
                                           fmt(rep.margin_sigma) + " sigma");
        min_margin = std::min(min_margin, rep.margin_sigma);
        if (body.name == "uniform-hexagon" && std::fabs(rep.ratio - 1.0) > 1e-12)
          return std::make_pair(false, "uniform body misses equality: ratio " +
                                           fmt(rep.ratio) + " at t=" + fmt(t));
      }
    }
    return std::make_pair(true,
                          "3 bodies x 10 levels, worst margin " + fmt(min_margin) +
                              " sigma; uniform case exactly 1");
  });

  // 9 ------------------------------------------------------------------
  gate.run(9, "shrinking-union-volume", []() -> std::pair<bool, std::string> {
    waistlab::UnionVolumeOptions opt;
    opt.samples = 1u << 20;
    opt.seed = 2024;
    std::vector<double> alphas;
    for (int i = 0; i < 17; ++i) alphas.push_back(kPi / 2 * i / 16.0);
    for (const auto& sc : waistlab::builtin_kp_scenarios(2024)) {
      const auto rep = waistlab::kp_experiment(sc.path, sc.t, alphas, opt);
      if (!rep.nonincreasing)
        return std::make_pair(false, sc.name + ": worst diff " +
                                         fmt(rep.worst_diff_sigma) + " sigma");
    }
    // planar two-ball case against the lens closed form at 1e7 samples
    waistlab::BallSystem two;
    Eigen::VectorXd a(2), b(2);
    a << 0.0, 0.0;
    b << 1.0, 0.0;
    two.centers = {a, b};
    two.radius = 1.0;
    waistlab::UnionVolumeOptions mc;
    mc.samples = 10'000'000;
    mc.seed = 2024;
    mc.force_mc = true;
    const auto [vol, se] = waistlab::union_volume(two, mc);
    const double exact = waistlab::two_disk_union_area(1.0, 1.0);
    const double rel = std::fabs(vol - exact) / exact;
    if (rel > 1e-3)
      return std::make_pair(false, "two-ball union off by " + fmt(rel) +
                                       " relative (se " + fmt(se) + ")");
    return std::make_pair(true, "5 scenarios nonincreasing at 3 sigma; lens gap " +
                                    fmt(rel) + " <= 1e-3");
  });

  // 10 -----------------------------------------------------------------
  gate.run(10, "tube-content-families", []() -> std::pair<bool, std::string> {
    waistlab::McConfig cfg;
    cfg.samples = 4'000'000;
    cfg.seed = 1729;

    const auto circ = waistlab::content_estimate(
        circle_set(1024), waistlab::geometric_schedule(0.2, 0.55, 6), cfg);
    const double cmid = 0.5 * (circ.lower + circ.upper);
    if (std::fabs(cmid - 2 * kPi) > 0.02 * 2 * kPi)
      return std::make_pair(false, "circle content " + fmt(cmid) +
                                       " outside 2 pi +- 2%");
    if (std::fabs(circ.fit_exponent - 1.0) > 0.1)
      return std::make_pair(false,
                            "circle tube exponent " + fmt(circ.fit_exponent));

    const auto seg = waistlab::content_estimate(
        segment_set(2048), waistlab::geometric_schedule(0.1, 0.5, 6), cfg);
    const double smid = 0.5 * (seg.lower + seg.upper);
    if (std::fabs(smid - 1.0) > 0.02)
      return std::make_pair(false, "segment content " + fmt(smid) +
                                       " outside 1 +- 2%");
    if (std::fabs(seg.fit_exponent - 1.0) > 0.1)
      return std::make_pair(false,
                            "segment tube exponent " + fmt(seg.fit_exponent));

    waistlab::McConfig band_cfg;
    band_cfg.samples = 1'000'000;
    band_cfg.seed = 1729;
    const auto band = equator_band_set(1024);
    for (double t : waistlab::geometric_schedule(0.3, 0.5, 5)) {
      const auto [vol, se] = waistlab::neighborhood_volume(band, t, band_cfg);
      if (std::fabs(vol - 4 * kPi * std::sin(t)) > 3.0 * se + 1e-4)
        return std::make_pair(false, "band at t=" + fmt(t) + ": " + fmt(vol) +
                                         " vs " + fmt(4 * kPi * std::sin(t)));
    }
    const auto bandc = waistlab::content_estimate(
        band, waistlab::geometric_schedule(0.3, 0.5, 5), band_cfg);
    if (std::fabs(bandc.fit_exponent - 1.0) > 0.1)
      return std::make_pair(false, "band tube exponent " + fmt(bandc.fit_exponent));

    return std::make_pair(true, "circle " + fmt(cmid) + ", segment " + fmt(smid) +
                                    ", band levels within 3 sigma of 4 pi sin t");
  });

  // 11 -----------------------------------------------------------------
  gate.run(11, "gaussian-content-chain", []() -> std::pair<bool, std::string> {
    waistlab::McConfig cfg;
    cfg.samples = 4'000'000;
    cfg.seed = 1729;

    // quadrature fast path for a single point
    Eigen::VectorXd p(2);
    p << 0.2, -0.7;
    const auto point = waistlab::cloud_set(
        std::make_shared<waistlab::EuclideanAmbient>(2), {p});
    const auto pg =
        waistlab::gaussian_content(point, {25, 50, 100, 200, 400}, cfg);
    const double pmid = 0.5 * (pg.lower + pg.upper);
    if (std::fabs(pmid - 1.0) > 1e-3)
      return std::make_pair(false, "point gaussian content " + fmt(pmid));

    const auto seg = segment_set(2048);
    const auto sg =
        waistlab::gaussian_content(seg, {50, 100, 200, 400, 800}, cfg);
    const double smid = 0.5 * (sg.lower + sg.upper);
    if (std::fabs(smid - 1.0) > 0.02)
      return std::make_pair(false, "segment gaussian content " + fmt(smid));

    // two-sided sandwich on every test set
    waistlab::McConfig mid_cfg;
    mid_cfg.samples = 2'000'000;
    mid_cfg.seed = 1729;
    // kernel sharpness is capped at five fill distances, so the 1024-point
    // circle tops out near u = 65 while the 2048-point segment reaches 800
    const auto s1 = waistlab::verify_sandwich(
        circle_set(1024), waistlab::geometric_schedule(0.2, 0.55, 6),
        {4, 8, 16, 32, 64}, mid_cfg);
    if (!s1.ok) return std::make_pair(false, "circle sandwich violated");
    const auto s2 = waistlab::verify_sandwich(
        seg, waistlab::geometric_schedule(0.1, 0.5, 6), {25, 50, 100, 200, 400},
        mid_cfg);
    if (!s2.ok) return std::make_pair(false, "segment sandwich violated");
    waistlab::McConfig band_cfg;
    band_cfg.samples = 1'000'000;
    band_cfg.seed = 1729;
    const auto s3 = waistlab::verify_sandwich(
        equator_band_set(1024), waistlab::geometric_schedule(0.3, 0.5, 5),
        {4, 8, 16, 32, 64}, band_cfg);
    if (!s3.ok) return std::make_pair(false, "equator band sandwich violated");

    // product multiplicativity within 3%
    waistlab::McConfig prod_cfg;
    prod_cfg.samples = 2'000'000;
    prod_cfg.seed = 1729;
    const auto prod = waistlab::gaussian_product_check(segment_set(1024),
                                                      segment_set(1024), 5,
                                                      prod_cfg, 0.03);
    if (!prod.ok)
      return std::make_pair(false, "product gap " + fmt(prod.rel_gap) +
                                       " exceeds tol " + fmt(prod.tol));

    // weight normalization in low codimension
    for (int m = 0; m <= 5; ++m) {
      if (waistlab::gaussian_weight_identity_residual(m) > 1e-10)
        return std::make_pair(false,
                              "weight identity fails at m=" + std::to_string(m));
    }
    return std::make_pair(true, "point " + fmt(pmid) + ", segment " + fmt(smid) +
                                    ", sandwiches hold, product gap " +
                                    fmt(prod.rel_gap));
  });

  // 12 -----------------------------------------------------------------
  gate.run(12, "model-distance-comparison", []() -> std::pair<bool, std::string> {
    const auto scenarios = waistlab::builtin_cat_scenarios();
    int done = 0;
    for (const auto& sc : scenarios) {
      if (sc.name != "flat-to-hyperbolic" && sc.name != "sphere-to-flat") continue;
      const auto target = sc.make_target();
      const auto rep = waistlab::cat_comparison_check(target, sc.model_curvature,
                                                      std::min(sc.R, 1.0), 10000,
                                                      2024, 1e-6);
      if (!rep.ok || rep.violations != 0)
        return std::make_pair(false, sc.name + ": " +
                                         std::to_string(rep.violations) +
                                         " of 10000 pairs decreased, min margin " +
                                         fmt(rep.min_margin));
      ++done;
    }
    if (done != 2) return std::make_pair(false, "expected both shipped comparisons");
    bool rejected = false;
    try {
      waistlab::cat_comparison_check(waistlab::counterexample_profile(), 1.0, 1.0,
                                     10, 1);
    } catch (const waistlab::ValidationError&) {
      rejected = true;
    }
    if (!rejected)
      return std::make_pair(false, "curvature validator accepted the bulge profile");
    return std::make_pair(
        true, "2 x 10000 pairs, zero decreases (tol 1e-6); bulge profile rejected");
  });

  // 13 -----------------------------------------------------------------
  gate.run(13, "fiber-sweeps-clear-bound", []() -> std::pair<bool, std::string> {
    waistlab::SweepConfig cfg;  // band quadrature, 25 interior levels
    std::string gap_note;
    for (const auto& sc : waistlab::builtin_sweep_scenarios()) {
      if (sc.expect_rejection) {
        bool rejected = false;
        try {
          sc.run(cfg);
        } catch (const waistlab::ValidationError&) {
          rejected = true;
        }
        if (!rejected)
          return std::make_pair(false, sc.name + ": validator failed to fire");
        continue;
      }
      const auto sweep = sc.run(cfg);
      if (!sweep.ok)
        return std::make_pair(false, sc.name + ": max content " +
                                         fmt(sweep.max_content) + " vs bound " +
                                         fmt(sweep.bound));
      if (sweep.expected_gap) {
        gap_note = sc.name + " max " + fmt(sweep.max_content) +
                   " below bound " + fmt(sweep.bound) + " as expected";
      }
    }
    if (gap_note.empty())
      return std::make_pair(false, "missing the expected boundary-case sweep");
    return std::make_pair(true, "all sweeps clear their recomputed bounds; " + gap_note);
  });

  // 14 -----------------------------------------------------------------
  gate.run(14, "bit-identical-reruns", []() -> std::pair<bool, std::string> {
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / "waistlab-acceptance";
    fs::remove_all(base);
    fs::create_directories(base);

    const std::string kp_args =
        "kp --scenario two-balls-merge --alphas 9 --samples 200000 --seed 7";
    if (run_cli(kp_args, base / "kp-a", base / "kp-a.log") != 0)
      return std::make_pair(false, "kp run A failed (see " +
                                       (base / "kp-a.log").string() + ")");
    if (run_cli(kp_args, base / "kp-b", base / "kp-b.log") != 0)
      return std::make_pair(false, "kp run B failed");
    if (read_results(base / "kp-a").dump() != read_results(base / "kp-b").dump())
      return std::make_pair(false, "kp reruns differ in their results subtree");

    const std::string content_args =
        "content --set circle --samples 262144 --seed 11";
    if (run_cli(content_args + " --workers 1", base / "w1", base / "w1.log") != 0)
      return std::make_pair(false, "content run with 1 worker failed");
    if (run_cli(content_args + " --workers 4", base / "w4", base / "w4.log") != 0)
      return std::make_pair(false, "content run with 4 workers failed");
    if (read_results(base / "w1").dump() != read_results(base / "w4").dump())
      return std::make_pair(false, "worker counts changed the results subtree");

    fs::remove_all(base);
    return std::make_pair(true,
                          "rerun and worker-count results are byte-identical JSON");
  });

  std::cout << (gate.failures == 0
                    ? "acceptance: all 14 criteria hold"
                    : "acceptance: " + std::to_string(gate.failures) +
                          " criterion(s) failed")
            << std::endl;
  return gate.failures == 0 ? 0 : 1;
}
