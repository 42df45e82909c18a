// SPDX-License-Identifier: Apache-2.0
//! Batch front end: every subcommand builds its scenario from the shared
//! libraries, prints one line per verdict, and optionally emits a JSON
//! report plus CSV/SVG artifacts into the output directory.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "waistlab/ambient.hpp"
#include "waistlab/errors.hpp"
#include "waistlab/interp.hpp"
#include "waistlab/minkowski_content.hpp"
#include "waistlab/model_geometry.hpp"
#include "waistlab/radial_transport.hpp"
#include "waistlab/report.hpp"
#include "waistlab/run_config.hpp"
#include "waistlab/sampled_set.hpp"
#include "waistlab/union_of_balls.hpp"
#include "waistlab/waist_harness.hpp"

namespace {

using nlohmann::ordered_json;
namespace wl = waistlab;

constexpr double kPi = 3.14159265358979323846;

//! `key=value` token lists let one option carry a small record, e.g.
//! `--ball k=2 kappa=1 R=1.5707963`.
std::map<std::string, double> parse_kv(const std::vector<std::string>& tokens,
                                       const std::set<std::string>& allowed) {
  std::map<std::string, double> out;
  for (const auto& tok : tokens) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0)
      throw wl::ValidationError("expected key=value, got \"" + tok + "\"");
    const std::string key = tok.substr(0, eq);
    if (!allowed.count(key))
      throw wl::ValidationError("unknown key \"" + key + "\" in \"" + tok + "\"");
    try {
      out[key] = std::stod(tok.substr(eq + 1));
    } catch (const std::exception&) {
      throw wl::ValidationError("cannot parse the value in \"" + tok + "\"");
    }
  }
  return out;
}

double kv_need(const std::map<std::string, double>& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw wl::ValidationError("missing required key \"" + key + "=\"");
  return it->second;
}

double kv_get(const std::map<std::string, double>& kv, const std::string& key,
              double fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

int kv_int(double v, const std::string& what) {
  const int i = static_cast<int>(std::llround(v));
  if (std::abs(v - i) > 1e-9)
    throw wl::ValidationError(what + " must be an integer");
  return i;
}

ordered_json curve_json(const wl::VolumeCurve& curve) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : curve.points) {
    ordered_json item;
    item["t"] = p.t;
    item["value"] = p.value;
    item["stderr"] = p.stderr_;
    item["samples"] = p.samples;
    arr.push_back(std::move(item));
  }
  return arr;
}

ordered_json sweep_json(const wl::FiberSweep& sweep) {
  ordered_json j;
  j["name"] = sweep.name;
  j["claim"] = sweep.claim;
  j["bound"] = sweep.bound;
  j["max_content"] = sweep.max_content;
  j["argmax_level"] = sweep.argmax_level;
  j["combined_error"] = sweep.combined_error;
  j["expected_gap"] = sweep.expected_gap;
  j["failed_levels"] = sweep.failed_levels;
  ordered_json levels = ordered_json::array();
  for (const auto& lv : sweep.levels) {
    ordered_json item;
    item["level"] = lv.level;
    item["content"] = lv.content;
    item["stderr"] = lv.stderr_;
    levels.push_back(std::move(item));
  }
  j["levels"] = std::move(levels);
  return j;
}

//! Shared artifact sink: remembers the output directory and flags, creates
//! the directory lazily on first write.
class ArtifactSink {
 public:
  ArtifactSink(const wl::RunConfig& cfg, std::string stem)
      : cfg_(cfg), stem_(std::move(stem)) {}

  void csv(const std::string& suffix,
           const std::function<void(std::ostream&)>& writer) {
    if (cfg_.write_csv) write(suffix + ".csv", writer);
  }
  void svg(const std::string& suffix,
           const std::function<void(std::ostream&)>& writer) {
    if (cfg_.write_svg) write(suffix + ".svg", writer);
  }
  const std::vector<std::string>& files() const { return files_; }

 private:
  void write(const std::string& name,
             const std::function<void(std::ostream&)>& writer) {
    std::filesystem::create_directories(cfg_.out_dir);
    const auto path = std::filesystem::path(cfg_.out_dir) / (stem_ + "-" + name);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw wl::NumericError("cannot open artifact file " + path.string());
    writer(os);
    files_.push_back(path.string());
  }

  const wl::RunConfig& cfg_;
  std::string stem_;
  std::vector<std::string> files_;
};

// ---------------------------------------------------------------- volumes

struct VolumesArgs {
  std::vector<int> unit_ball;
  std::vector<int> sphere;
  std::vector<std::string> ball;
  std::vector<std::string> tube;
  std::vector<std::string> fubini;
};

wl::RunReport run_volumes(const VolumesArgs& args, const wl::RunConfig& cfg,
                          ArtifactSink& sink) {
  wl::RunReport rep;
  rep.command = "volumes";
  rep.config = cfg.to_json();

  std::vector<int> balls = args.unit_ball;
  std::vector<int> spheres = args.sphere;
  if (balls.empty() && spheres.empty() && args.ball.empty() && args.tube.empty() &&
      args.fubini.empty()) {
    for (int m = 0; m <= 8; ++m) balls.push_back(m);
    for (int k = 0; k <= 8; ++k) spheres.push_back(k);
  }

  ordered_json unit = ordered_json::array();
  for (const int m : balls) {
    ordered_json item;
    item["m"] = m;
    item["value"] = wl::unit_ball_volume(m);
    unit.push_back(std::move(item));
  }
  if (!unit.empty()) rep.results["unit_ball"] = std::move(unit);

  ordered_json sph = ordered_json::array();
  for (const int k : spheres) {
    ordered_json item;
    item["k"] = k;
    item["value"] = wl::sphere_volume(k);
    sph.push_back(std::move(item));
  }
  if (!sph.empty()) rep.results["sphere"] = std::move(sph);

  if (!args.ball.empty()) {
    const auto kv = parse_kv(args.ball, {"k", "kappa", "R"});
    const int k = kv_int(kv_need(kv, "k"), "k");
    const double kappa = kv_get(kv, "kappa", 0.0);
    const double R = kv_need(kv, "R");
    ordered_json j;
    j["k"] = k;
    j["kappa"] = kappa;
    j["R"] = R;
    j["value"] = wl::geodesic_ball_volume(kappa, k, R);
    rep.results["ball"] = std::move(j);
  }

  if (!args.tube.empty()) {
    const auto kv = parse_kv(args.tube, {"n", "k", "t"});
    const int n = kv_int(kv_need(kv, "n"), "n");
    const int k = kv_int(kv_need(kv, "k"), "k");
    const double t = kv_need(kv, "t");
    ordered_json j;
    j["n"] = n;
    j["k"] = k;
    j["t"] = t;
    j["value"] = wl::tube_volume_subsphere(n, k, t);
    const double full = wl::tube_volume_subsphere(n, k, kPi / 2.0);
    const double sphere = wl::sphere_volume(n - 1);
    j["full_tube"] = full;
    j["sphere"] = sphere;
    rep.results["tube"] = std::move(j);
    wl::Verdict v;
    v.name = "tube-exhausts-sphere";
    v.pass = std::abs(full - sphere) <= 1e-9 * sphere;
    v.detail = "tube at t=pi/2 " + wl::format_double(full) + " vs sphere " +
               wl::format_double(sphere);
    rep.verdicts.push_back(std::move(v));
  }

  if (!args.fubini.empty()) {
    const auto kv = parse_kv(args.fubini, {"m", "l"});
    const auto fub = wl::fubini_tube_identity(kv_int(kv_need(kv, "m"), "m"),
                                              kv_int(kv_need(kv, "l"), "l"));
    ordered_json j;
    j["m"] = fub.m;
    j["l"] = fub.l;
    j["lhs"] = fub.lhs;
    j["rhs"] = fub.rhs;
    j["residual"] = fub.residual;
    rep.results["fubini"] = std::move(j);
    wl::Verdict v;
    v.name = "fubini-identity";
    v.pass = fub.ok;
    v.detail = "residual " + wl::format_double(fub.residual);
    rep.verdicts.push_back(std::move(v));
  }

  sink.csv("table", [&](std::ostream& os) {
    os << "kind,index,value\n";
    for (const int m : balls)
      os << "unit_ball," << m << ',' << wl::format_double(wl::unit_ball_volume(m))
         << '\n';
    for (const int k : spheres)
      os << "sphere," << k << ',' << wl::format_double(wl::sphere_volume(k)) << '\n';
  });
  return rep;
}

// -------------------------------------------------------------- transport

struct TransportArgs {
  std::string rho = "sphere";
  std::string sigma = "cap";
  int k = 1;
  double R = kPi / 2.0;
  int grid = 1000;
};

wl::RunReport run_transport(const TransportArgs& args, const wl::RunConfig& cfg,
                            ArtifactSink& sink) {
  if (args.rho != "sphere")
    throw wl::ValidationError("unknown source density \"" + args.rho +
                              "\" (available: sphere)");

  wl::RadialDensity rho = wl::spherical_density(args.k);
  wl::RadialDensity sigma;
  double normalization = 1.0;
  if (args.sigma == "cap") {
    auto nd = wl::cap_density(args.k, args.R);
    sigma = std::move(nd.density);
    normalization = nd.normalization;
  } else if (args.sigma == "hyperbolic-ball") {
    auto nd = wl::hyperbolic_ball_density(args.k, args.R);
    sigma = std::move(nd.density);
    normalization = nd.normalization;
  } else if (args.sigma == "sphere") {
    sigma = wl::spherical_density(args.k);
  } else {
    throw wl::ValidationError("unknown image density \"" + args.sigma +
                              "\" (available: cap, hyperbolic-ball, sphere)");
  }

  const wl::TransportMap map = wl::build_transport(rho, std::move(sigma));

  wl::RunReport rep;
  rep.command = "transport";
  rep.config = cfg.to_json();
  rep.config["rho"] = args.rho;
  rep.config["sigma"] = args.sigma;
  rep.config["k"] = args.k;
  rep.config["R"] = args.R;

  // identity residual on a log grid of source radii
  const double x_hi = std::min(map.domain_radius(), 1e6);
  const auto grid = wl::log_grid(1e-6 * x_hi, x_hi, args.grid);
  double worst = 0.0;
  for (const double x : grid)
    worst = std::max(worst, std::abs(map.image()(map.psi(x)) - map.source()(x)));
  const double total_gap = std::abs(map.source().total() - map.image().total());

  // the condition grid covers all but 1e-6 of the mass: past that quantile
  // the cumulative inverse is conditioning-limited and the finite-difference
  // slope amplifies its noise beyond the identity map's zero margin
  const double x_resolved =
      map.source().inverse((1.0 - 1e-6) * map.source().total());
  std::vector<double> image_grid;
  for (const double x : wl::log_grid(1e-6 * x_hi, std::min(x_hi, x_resolved),
                                     args.grid))
    image_grid.push_back(map.psi(x));
  const auto cond = wl::check_radial_condition(map, image_grid, 1e-6);
  const double factor = wl::contraction_factor(map);

  // the construction pins the near-origin factor to normalization^(-1/k);
  // it exceeds 1 exactly when the image ball outweighs the comparison sphere
  const double expected_factor = std::pow(normalization, -1.0 / args.k);
  const double ratio_hi =
      0.999 * std::min({50.0, map.source().density().support,
                        map.image().density().support / expected_factor});
  const auto ratio = wl::gromov_ratio_monotone(
      map.image().density(), map.source().density(), expected_factor,
      wl::log_grid(1e-6, ratio_hi, args.grid));
  std::vector<double> radii;
  for (int i = 1; i <= 20; ++i) radii.push_back(x_hi * i / 20.0);
  const auto pres = wl::verify_kball_preservation(map, radii);

  rep.results["normalization"] = normalization;
  rep.results["contraction_factor"] = factor;
  rep.results["contraction_expected"] = expected_factor;
  rep.results["identity_residual"] = worst;
  rep.results["total_moment_gap"] = total_gap;
  rep.results["condition_min_margin"] = cond.min_margin;
  rep.results["condition_equality_points"] = cond.equality_points.size();
  rep.results["preservation_worst"] = pres.worst;

  auto verdict = [&](std::string name, bool pass, std::string detail) {
    rep.verdicts.push_back({std::move(name), pass, std::move(detail)});
  };
  verdict("transport-identity", worst < 1e-9,
          "max residual " + wl::format_double(worst));
  verdict("total-moment", total_gap <= 1e-8 * map.source().total(),
          "gap " + wl::format_double(total_gap));
  verdict("radial-condition", cond.holds,
          "min margin " + wl::format_double(cond.min_margin) + ", " +
              std::to_string(cond.equality_points.size()) + " equality points");
  verdict("contraction-law",
          std::fabs(factor - expected_factor) <= 1e-6 * expected_factor,
          "sup psi(x)/x = " + wl::format_double(factor) + ", normalization^(-1/k) = " +
              wl::format_double(expected_factor));
  verdict("ratio-monotone", ratio.nondecreasing,
          std::to_string(ratio.violation_points.size()) + " violations");
  verdict("ball-preservation", pres.ok,
          "worst relative residual " + wl::format_double(pres.worst));

  sink.csv("table", [&](std::ostream& os) { wl::write_transport_csv(os, map); });
  sink.svg("psi", [&](std::ostream& os) {
    std::vector<wl::PlotPoint> pts;
    for (int i = 0; i <= 256; ++i) {
      const double x = x_hi * i / 256.0;
      pts.push_back({x, x > 0 ? map.psi(x) : 0.0, 0.0});
    }
    wl::write_curve_svg(os, "transport profile", "source radius", "image radius",
                        pts);
  });
  return rep;
}

// ---------------------------------------------------------------- content

struct ContentArgs {
  std::string set = "circle";
  int levels = 6;
  double coarsest = 0.2;
  double ratio = 0.55;
  bool gaussian = false;
};

struct NamedSet {
  wl::SampledSet set;
  double reference = 0.0;  // known content
  double rel_tol = 0.02;
  std::function<double(double)> exact_volume;  // optional exact nu_t volume
};

NamedSet make_named_set(const std::string& name) {
  NamedSet out;
  if (name == "circle") {
    wl::Chart chart;
    chart.k = 1;
    chart.lo = Eigen::VectorXd::Zero(1);
    chart.hi = Eigen::VectorXd::Constant(1, 2.0 * kPi);
    chart.periodic = {1};
    chart.map = [](const Eigen::VectorXd& th) {
      return Eigen::Vector2d(std::cos(th[0]), std::sin(th[0]));
    };
    out.set = wl::sample_chart(std::make_shared<wl::EuclideanAmbient>(2), chart, {1024});
    out.reference = 2.0 * kPi;
    out.exact_volume = [](double t) { return kPi * ((1 + t) * (1 + t) - (1 - t) * (1 - t)); };
  } else if (name == "segment") {
    wl::Chart chart;
    chart.k = 1;
    chart.lo = Eigen::VectorXd::Zero(1);
    chart.hi = Eigen::VectorXd::Ones(1);
    chart.periodic = {0};
    chart.map = [](const Eigen::VectorXd& s) { return Eigen::Vector2d(s[0], 0.0); };
    out.set = wl::sample_chart(std::make_shared<wl::EuclideanAmbient>(2), chart, {512});
    out.reference = 1.0;
    out.exact_volume = [](double t) { return 2.0 * t + kPi * t * t; };
  } else if (name == "arc") {
    wl::Chart chart;
    chart.k = 1;
    chart.lo = Eigen::VectorXd::Zero(1);
    chart.hi = Eigen::VectorXd::Constant(1, kPi / 2.0);
    chart.periodic = {0};
    chart.map = [](const Eigen::VectorXd& th) {
      return Eigen::Vector2d(std::cos(th[0]), std::sin(th[0]));
    };
    out.set = wl::sample_chart(std::make_shared<wl::EuclideanAmbient>(2), chart, {512});
    out.reference = kPi / 2.0;
  } else if (name == "equator-band") {
    wl::Chart chart;
    chart.k = 1;
    chart.lo = Eigen::VectorXd::Zero(1);
    chart.hi = Eigen::VectorXd::Constant(1, 2.0 * kPi);
    chart.periodic = {1};
    chart.map = [](const Eigen::VectorXd& th) {
      return Eigen::Vector3d(std::cos(th[0]), std::sin(th[0]), 0.0);
    };
    out.set = wl::sample_chart(std::make_shared<wl::SphereAmbient>(2), chart, {1024});
    out.reference = 2.0 * kPi;
    out.exact_volume = [](double t) { return 4.0 * kPi * std::sin(t); };
  } else if (name == "point") {
    out.set = wl::cloud_set(std::make_shared<wl::EuclideanAmbient>(2),
                            {Eigen::VectorXd::Zero(2)}, 0);
    out.reference = 1.0;
    out.rel_tol = 1e-3;
  } else {
    throw wl::ValidationError("unknown set \"" + name +
                              "\" (available: circle, segment, arc, equator-band, "
                              "point)");
  }
  return out;
}

wl::RunReport run_content(const ContentArgs& args, const wl::RunConfig& cfg,
                          ArtifactSink& sink) {
  NamedSet named = make_named_set(args.set);

  wl::McConfig mc;
  mc.samples = cfg.samples;
  mc.seed = cfg.seed;
  mc.workers = cfg.workers;
  mc.stream_label = "content/" + args.set;

  wl::RunReport rep;
  rep.command = "content";
  rep.config = cfg.to_json();
  rep.config["set"] = args.set;
  rep.config["levels"] = args.levels;
  rep.config["coarsest"] = args.coarsest;
  rep.config["ratio"] = args.ratio;
  rep.config["gaussian"] = args.gaussian;

  auto verdict = [&](std::string name, bool pass, std::string detail) {
    rep.verdicts.push_back({std::move(name), pass, std::move(detail)});
  };

  if (args.set == "point") {
    // zero-dimensional set: only the Gaussian estimator applies
    const auto est = wl::gaussian_content(named.set, {25, 50, 100, 200, 400}, mc);
    const double mid = 0.5 * (est.lower + est.upper);
    rep.results["gaussian_lower"] = est.lower;
    rep.results["gaussian_upper"] = est.upper;
    rep.results["gaussian_mid"] = mid;
    verdict("gaussian-reference", std::abs(mid - named.reference) <=
                                      named.rel_tol * named.reference,
            "estimate " + wl::format_double(mid) + " vs " +
                wl::format_double(named.reference));
    return rep;
  }

  const auto schedule = wl::geometric_schedule(args.coarsest, args.ratio, args.levels);
  const auto est = wl::content_estimate(named.set, schedule, mc);
  const double mid = 0.5 * (est.lower + est.upper);
  const int codim = named.set.ambient->dim() - named.set.k;

  rep.results["lower"] = est.lower;
  rep.results["upper"] = est.upper;
  rep.results["mid"] = mid;
  rep.results["ci"] = est.ci;
  rep.results["fit_exponent"] = est.fit_exponent;
  rep.results["curve"] = curve_json(est.curve);
  rep.results["ratios"] = curve_json(est.ratios);

  verdict("content-reference",
          std::abs(mid - named.reference) <=
              named.rel_tol * named.reference + 3.0 * est.ci,
          "estimate " + wl::format_double(mid) + " vs " +
              wl::format_double(named.reference));
  verdict("fit-exponent", std::abs(est.fit_exponent - codim) <= 0.1,
          "slope " + wl::format_double(est.fit_exponent) + " vs codimension " +
              std::to_string(codim));
  if (named.exact_volume) {
    bool all_ok = true;
    double worst_sigmas = 0.0;
    for (const auto& p : est.curve.points) {
      const double gap = std::abs(p.value - named.exact_volume(p.t));
      const double sig = p.stderr_ > 0 ? gap / p.stderr_ : 0.0;
      worst_sigmas = std::max(worst_sigmas, sig);
      if (sig > 3.0) all_ok = false;
    }
    verdict("tube-formula", all_ok,
            "worst deviation " + wl::format_double(worst_sigmas) + " sigma");
  }

  if (args.gaussian) {
    const double u_cap = wl::max_gaussian_sharpness(named.set);
    std::vector<double> u_sched;
    for (int i = args.levels - 1; i >= 0; --i)
      u_sched.push_back(std::min(u_cap, 400.0) * std::pow(0.5, i));
    const auto sandwich = wl::verify_sandwich(named.set, schedule, u_sched, mc);
    rep.results["gaussian_lower"] = sandwich.gauss.lower;
    rep.results["gaussian_upper"] = sandwich.gauss.upper;
    rep.results["weight_identity_residual"] = sandwich.weight_identity_residual;
    verdict("sandwich-chain", sandwich.ok,
            "lower " + wl::format_double(sandwich.mink.lower) + " <= gaussian <= upper " +
                wl::format_double(sandwich.mink.upper));
  }

  sink.csv("curve", [&](std::ostream& os) { wl::write_curve_csv(os, est.curve); });
  sink.svg("ratios", [&](std::ostream& os) {
    std::vector<wl::PlotPoint> pts;
    for (const auto& p : est.ratios.points) pts.push_back({p.t, p.value, p.stderr_});
    wl::write_curve_svg(os, args.set + " content ratio", "t", "ratio", pts);
  });
  return rep;
}

// --------------------------------------------------------------------- kp

struct KpArgs {
  std::string scenario = "two-balls-merge";
  int alphas = 17;
  std::optional<double> t;
};

wl::RunReport run_kp(const KpArgs& args, const wl::RunConfig& cfg,
                     ArtifactSink& sink) {
  const auto scenarios = wl::builtin_kp_scenarios(cfg.seed);
  const wl::KpScenario* chosen = nullptr;
  for (const auto& s : scenarios)
    if (s.name == args.scenario) chosen = &s;
  if (!chosen) {
    std::string names;
    for (const auto& s : scenarios) names += " " + s.name;
    throw wl::ValidationError("unknown scenario \"" + args.scenario +
                              "\" (available:" + names + ")");
  }
  const double t = args.t.value_or(chosen->t);

  wl::UnionVolumeOptions opt;
  opt.samples = cfg.samples;
  opt.seed = cfg.seed;
  opt.workers = cfg.workers;
  opt.stream_label = "kp/" + chosen->name;

  std::vector<double> alphas;
  for (int i = 0; i < args.alphas; ++i)
    alphas.push_back(kPi / 2.0 * i / (args.alphas - 1));

  const auto pairwise = wl::pairwise_monotonicity_check(chosen->path);
  const auto rep_kp = wl::kp_experiment(chosen->path, t, alphas, opt);

  wl::RunReport rep;
  rep.command = "kp";
  rep.config = cfg.to_json();
  rep.config["scenario"] = chosen->name;
  rep.config["t"] = t;
  rep.config["alphas"] = args.alphas;

  ordered_json curve = ordered_json::array();
  for (const auto& p : rep_kp.curve) {
    ordered_json item;
    item["alpha"] = p.alpha;
    item["volume"] = p.volume;
    item["stderr"] = p.stderr_;
    curve.push_back(std::move(item));
  }
  rep.results["claim"] = chosen->claim;
  rep.results["curve"] = std::move(curve);
  rep.results["worst_diff_sigma"] = rep_kp.worst_diff_sigma;

  auto verdict = [&](std::string name, bool pass, std::string detail) {
    rep.verdicts.push_back({std::move(name), pass, std::move(detail)});
  };
  verdict("pairwise-distances-monotone", pairwise.ok,
          std::to_string(pairwise.violating_pairs.size()) + " violating pairs");
  verdict("volume-nonincreasing", rep_kp.nonincreasing,
          "worst increase " + wl::format_double(rep_kp.worst_diff_sigma) + " sigma");

  if (chosen->name == "two-balls-merge") {
    // endpoints against the planar closed forms
    const double d0 =
        (chosen->path.source[0] - chosen->path.source[1]).norm();
    const double start = wl::two_disk_union_area(t, d0);
    const double end = kPi * t * t;
    const auto& first = rep_kp.curve.front();
    const auto& last = rep_kp.curve.back();
    const bool ok0 = std::abs(first.volume - start) <= 3.0 * first.stderr_;
    const bool ok1 = std::abs(last.volume - end) <= 3.0 * last.stderr_;
    rep.results["lens_start"] = start;
    rep.results["lens_end"] = end;
    verdict("lens-endpoints", ok0 && ok1,
            wl::format_double(first.volume) + " -> " + wl::format_double(last.volume) +
                " vs " + wl::format_double(start) + " -> " + wl::format_double(end));
  }

  sink.csv("curve", [&](std::ostream& os) { wl::write_kp_csv(os, rep_kp); });
  sink.svg("curve", [&](std::ostream& os) {
    std::vector<wl::PlotPoint> pts;
    for (const auto& p : rep_kp.curve) pts.push_back({p.alpha, p.volume, p.stderr_});
    wl::write_curve_svg(os, chosen->name, "alpha", "union volume", pts);
  });
  return rep;
}

// ------------------------------------------------------------------ waist

struct WaistArgs {
  std::string scenario = "cube-max";
  int n = 3;
  int k = 1;
  double t = 0.01;
  std::string target = "all";
  int sweep_levels = 25;
  bool sweep_mc = false;
};

wl::RunReport run_waist(const WaistArgs& args, const wl::RunConfig& cfg,
                        ArtifactSink& sink) {
  wl::McConfig mc;
  mc.samples = cfg.samples;
  mc.seed = cfg.seed;
  mc.workers = cfg.workers;
  mc.stream_label = "waist/" + args.scenario;

  wl::RunReport rep;
  rep.command = "waist";
  rep.config = cfg.to_json();
  rep.config["scenario"] = args.scenario;

  auto verdict = [&](std::string name, bool pass, std::string detail) {
    rep.verdicts.push_back({std::move(name), pass, std::move(detail)});
  };

  if (args.scenario == "cube-max") {
    rep.config["n"] = args.n;
    rep.config["t"] = args.t;
    const auto r = wl::cube_max_map_check(args.n, args.t, mc);
    rep.results["exact_volume"] = r.exact_volume;
    rep.results["mc_volume"] = r.mc_volume;
    rep.results["mc_stderr"] = r.mc_stderr;
    rep.results["ratio"] = r.ratio;
    rep.results["slope"] = r.slope;
    verdict("neighborhood-rate", r.ratio_ok,
            "ratio " + wl::format_double(r.ratio) + " vs 2n = " +
                wl::format_double(r.slope));
    verdict("below-full-rate", r.n >= 3 ? r.below_full_rate : !r.below_full_rate,
            "2n = " + wl::format_double(r.slope) + " vs 2^n = " +
                wl::format_double(std::pow(2.0, r.n)));
  } else if (args.scenario == "norm-waist") {
    rep.config["n"] = args.n;
    rep.config["t"] = args.t;
    const auto r = wl::norm_waist_cube_check(args.n, args.t, 50, mc);
    rep.results["best_y"] = r.best_y;
    rep.results["best_volume"] = r.best_volume;
    rep.results["bound"] = r.bound;
    rep.results["mc_volume"] = r.mc_volume;
    verdict("witness", r.witness_ok,
            "best level " + wl::format_double(r.best_y) + " volume " +
                wl::format_double(r.best_volume) + " >= " + wl::format_double(r.bound));
    verdict("mc-agreement", r.mc_ok,
            "mc " + wl::format_double(r.mc_volume) + " +- " +
                wl::format_double(r.mc_stderr));
  } else if (args.scenario == "pancake") {
    ordered_json all = ordered_json::array();
    bool pass = true;
    for (const auto& body : wl::builtin_pancake_scenarios(cfg.seed)) {
      for (int i = 1; i <= 10; ++i) {
        const double t = i / 10.0;
        const auto r = wl::pancake_lemma_check(body, t, mc);
        pass = pass && r.ok;
        ordered_json item;
        item["name"] = r.name;
        item["t"] = r.t;
        item["ratio"] = r.ratio;
        item["margin_sigma"] =
            std::isfinite(r.margin_sigma) ? r.margin_sigma : 1e12;
        all.push_back(std::move(item));
      }
    }
    rep.results["grid"] = std::move(all);
    verdict("pancake-grid", pass, "3 bodies x 10 contraction ratios");
  } else if (args.scenario == "ball-distance") {
    rep.config["n"] = args.n;
    const auto r = wl::ball_distance_map_check(args.n, mc);
    rep.results["projection_bound"] = r.projection_bound;
    rep.results["half_ball"] = r.half_ball;
    rep.results["cap_area_exact"] = r.cap_area_exact;
    rep.results["cap_area_mc"] = r.cap_area_mc;
    verdict("cap-below-bound", r.cap_below_bound,
            "cap " + wl::format_double(r.cap_area_mc) + " <= bound " +
                wl::format_double(r.projection_bound));
    verdict(r.n >= 20 ? "bound-beats-half-ball" : "half-ball-beats-bound",
            r.n >= 20 ? r.bound_below_half_ball : !r.bound_below_half_ball,
            "bound " + wl::format_double(r.projection_bound) + " vs v_n/2 " +
                wl::format_double(r.half_ball));
  } else if (args.scenario == "gaussian-plane") {
    rep.config["n"] = args.n;
    rep.config["k"] = args.k;
    rep.config["t"] = args.t;
    std::vector<double> d_grid;
    for (int i = 0; i <= 10; ++i) d_grid.push_back(0.3 * i);
    const auto r = wl::gaussian_plane_check(args.n, args.k, args.t, d_grid);
    rep.results["distances"] = r.distances;
    rep.results["measures"] = r.measures;
    verdict("max-at-origin", r.max_at_zero, "plane through 0 dominates");
    verdict("monotone-decay", r.monotone, "measure falls with distance");
  } else if (args.scenario == "cat-comparison") {
    ordered_json all = ordered_json::array();
    bool pass = true;
    for (const auto& sc : wl::builtin_cat_scenarios()) {
      if (args.target != "all" && args.target != sc.name) continue;
      const auto r = wl::cat_comparison_check(sc.make_target(), sc.model_curvature,
                                              sc.R, 2000, cfg.seed);
      pass = pass && r.ok;
      ordered_json item;
      item["name"] = sc.name;
      item["pairs"] = r.pairs;
      item["violations"] = r.violations;
      item["min_margin"] = r.min_margin;
      all.push_back(std::move(item));
    }
    if (all.empty())
      throw wl::ValidationError("unknown comparison target \"" + args.target + "\"");
    rep.results["comparisons"] = std::move(all);
    verdict("distances-not-decreased", pass, "geodesic shooting vs model");
  } else if (args.scenario.rfind("sweep:", 0) == 0) {
    const std::string want = args.scenario.substr(6);
    wl::SweepConfig sc;
    sc.levels = args.sweep_levels;
    sc.method = args.sweep_mc ? wl::FiberMethod::minkowski_mc
                              : wl::FiberMethod::band_quadrature;
    sc.mc = mc;
    bool found = false;
    for (const auto& s : wl::builtin_sweep_scenarios()) {
      if (s.name != want) continue;
      found = true;
      if (s.expect_rejection) {
        bool rejected = false;
        std::string why = "no validation error raised";
        try {
          s.run(sc);
        } catch (const wl::ValidationError& e) {
          rejected = true;
          why = e.what();
        }
        rep.results["rejected"] = rejected;
        verdict("curvature-validator", rejected, why);
      } else {
        const auto sweep = s.run(sc);
        rep.results["sweep"] = sweep_json(sweep);
        verdict(sweep.expected_gap ? "expected-gap" : "max-fiber-clears-bound",
                sweep.ok,
                "max " + wl::format_double(sweep.max_content) + " vs bound " +
                    wl::format_double(sweep.bound));
        sink.csv("sweep", [&](std::ostream& os) { wl::write_sweep_csv(os, sweep); });
        sink.svg("sweep", [&](std::ostream& os) {
          std::vector<wl::PlotPoint> pts;
          for (const auto& lv : sweep.levels)
            pts.push_back({lv.level, lv.content, lv.stderr_});
          wl::write_curve_svg(os, sweep.name, "level", "fiber content", pts);
        });
      }
    }
    if (!found) {
      std::string names;
      for (const auto& s : wl::builtin_sweep_scenarios()) names += " sweep:" + s.name;
      throw wl::ValidationError("unknown sweep \"" + want + "\" (available:" + names +
                                ")");
    }
  } else {
    throw wl::ValidationError(
        "unknown scenario \"" + args.scenario +
        "\" (available: cube-max, norm-waist, pancake, ball-distance, "
        "gaussian-plane, cat-comparison, sweep:<name>)");
  }
  return rep;
}

// ------------------------------------------------------------------- main

//! Pre-parse hook: convert a JSON --config file to INI before CLI11 sees it.
std::vector<std::string> preprocess_args(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      args[i + 1] = wl::prepare_config_file(args[i + 1]);
    else if (args[i].rfind("--config=", 0) == 0)
      args[i] = "--config=" + wl::prepare_config_file(args[i].substr(9));
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"measure transport, content estimators, and waist scenarios"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "options from an INI or flat JSON file");

  wl::RunConfig cfg;
  double samples_raw = static_cast<double>(cfg.samples);
  std::uint64_t seed_raw = 0;
  auto* seed_opt = app.add_option("--seed", seed_raw, "RNG seed (default fixed)");
  app.add_option("--samples", samples_raw, "Monte Carlo samples per estimate");
  app.add_option("--workers", cfg.workers, "worker threads (never changes results)")
      ->check(CLI::Range(1, 64));
  app.add_option("--out", cfg.out_dir, "artifact directory");
  app.add_flag("--csv", cfg.write_csv, "write CSV artifacts");
  app.add_flag("--json", cfg.write_json, "write the JSON run report");
  app.add_flag("--svg", cfg.write_svg, "write SVG plots");

  VolumesArgs vol_args;
  auto* vol = app.add_subcommand("volumes", "unit ball, sphere, and tube tables");
  vol->add_option("--unit-ball", vol_args.unit_ball, "dimensions m for v_m");
  vol->add_option("--sphere", vol_args.sphere, "dimensions k for vol S^k");
  vol->add_option("--ball", vol_args.ball, "k= kappa= R= geodesic ball")
      ->expected(-1);
  vol->add_option("--tube", vol_args.tube, "n= k= t= subsphere tube")->expected(-1);
  vol->add_option("--fubini", vol_args.fubini, "m= l= product identity")
      ->expected(-1);

  TransportArgs tr_args;
  auto* tr = app.add_subcommand("transport", "radial transport certificates");
  tr->add_option("--rho", tr_args.rho, "source density (sphere)");
  tr->add_option("--sigma", tr_args.sigma, "image density (cap, hyperbolic-ball, sphere)");
  tr->add_option("--k", tr_args.k, "moment order")->check(CLI::Range(1, 10));
  tr->add_option("--R", tr_args.R, "geodesic radius of the image ball");
  tr->add_option("--grid", tr_args.grid, "certificate grid points")
      ->check(CLI::Range(10, 100000));

  ContentArgs ct_args;
  auto* ct = app.add_subcommand("content", "neighborhood-volume content estimates");
  ct->add_option("--set", ct_args.set, "circle, segment, arc, equator-band, point");
  ct->add_option("--t-levels", ct_args.levels, "schedule length")
      ->check(CLI::Range(5, 40));
  ct->add_option("--coarsest", ct_args.coarsest, "largest neighborhood radius");
  ct->add_option("--ratio", ct_args.ratio, "schedule ratio");
  ct->add_flag("--gaussian", ct_args.gaussian, "add the Gaussian sandwich check");

  KpArgs kp_args;
  auto* kp = app.add_subcommand("kp", "union-of-balls contraction experiments");
  kp->add_option("--scenario", kp_args.scenario, "builtin scenario name");
  kp->add_option("--alphas", kp_args.alphas, "homotopy grid size")
      ->check(CLI::Range(2, 512));
  double kp_t = -1.0;
  kp->add_option("--t", kp_t, "ball radius override");

  WaistArgs w_args;
  auto* wa = app.add_subcommand("waist", "fiber sweeps and witness checks");
  wa->add_option("--scenario", w_args.scenario,
                 "cube-max, norm-waist, pancake, ball-distance, gaussian-plane, "
                 "cat-comparison, sweep:<name>");
  wa->add_option("--n", w_args.n, "ambient dimension")->check(CLI::Range(1, 64));
  wa->add_option("--k", w_args.k, "fiber dimension")->check(CLI::Range(1, 63));
  wa->add_option("--t", w_args.t, "neighborhood radius / homothety ratio");
  wa->add_option("--target", w_args.target, "comparison scenario or 'all'");
  wa->add_option("--sweep-levels", w_args.sweep_levels, "levels per sweep")
      ->check(CLI::Range(1, 400));
  wa->add_flag("--sweep-mc", w_args.sweep_mc,
               "estimate sweep fibers by neighborhood sampling");

  try {
    const auto args = preprocess_args(argc, argv);
    try {
      // CLI11 wants the arguments reversed
      std::vector<std::string> rev(args.rbegin(), args.rend());
      app.parse(rev);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e);
      return code == 0 ? 0 : 2;
    }

    if (samples_raw < 1 || samples_raw > 4e12 ||
        samples_raw != std::floor(samples_raw))
      throw wl::ValidationError("--samples must be a positive integer");
    cfg.samples = static_cast<std::uint64_t>(samples_raw);
    cfg.seed = wl::resolve_seed(seed_opt->count() > 0
                                    ? std::optional<std::uint64_t>(seed_raw)
                                    : std::nullopt);
    if (kp_t > 0) kp_args.t = kp_t;

    const auto t0 = std::chrono::steady_clock::now();
    wl::RunReport rep;
    std::string stem;
    if (vol->parsed()) {
      stem = "volumes";
      ArtifactSink sink(cfg, stem);
      rep = run_volumes(vol_args, cfg, sink);
    } else if (tr->parsed()) {
      stem = "transport";
      ArtifactSink sink(cfg, stem);
      rep = run_transport(tr_args, cfg, sink);
    } else if (ct->parsed()) {
      stem = "content-" + ct_args.set;
      ArtifactSink sink(cfg, stem);
      rep = run_content(ct_args, cfg, sink);
    } else if (kp->parsed()) {
      stem = "kp-" + kp_args.scenario;
      ArtifactSink sink(cfg, stem);
      rep = run_kp(kp_args, cfg, sink);
    } else if (wa->parsed()) {
      stem = "waist-" + w_args.scenario;
      for (auto& c : stem)
        if (c == ':') c = '-';
      ArtifactSink sink(cfg, stem);
      rep = run_waist(w_args, cfg, sink);
    }
    rep.wall_clock_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                  t0)
            .count();

    for (const auto& v : rep.verdicts)
      std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << v.name << ": " << v.detail
                << '\n';
    if (cfg.write_json) {
      std::filesystem::create_directories(cfg.out_dir);
      const auto path = std::filesystem::path(cfg.out_dir) / "report.json";
      std::ofstream os(path, std::ios::binary);
      os << rep.to_json().dump(2) << '\n';
      std::cout << "report: " << path.string() << '\n';
    }
    return rep.all_pass() ? 0 : 1;
  } catch (const wl::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const wl::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const wl::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return 2;
  }
}
