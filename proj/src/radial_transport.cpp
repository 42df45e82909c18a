// SPDX-License-Identifier: Apache-2.0
#include "waistlab/radial_transport.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "waistlab/errors.hpp"
#include "waistlab/model_geometry.hpp"
#include "waistlab/quadrature.hpp"

namespace waistlab {

namespace {

constexpr double kTailFraction = 1e-12;

QuadratureOptions table_quadrature() {
  QuadratureOptions opt;
  opt.abs_tol = 1e-15;
  opt.rel_tol = 1e-12;
  return opt;
}

}  // namespace

RadialDensity spherical_density(int k) {
  if (k < 1) throw DomainError("spherical_density: k must be >= 1");
  return {k, kInf, [k](double x) { return std::pow(2.0 / (1.0 + x * x), k); }};
}

NormalizedDensity cap_density(int k, double R) {
  if (k < 1) throw DomainError("cap_density: k must be >= 1");
  const double chart_radius = cap_chart_radius(R);  // validates R in (0, pi)
  const double a = sphere_volume(k) / geodesic_ball_volume(1.0, k, R);
  NormalizedDensity out;
  out.normalization = a;
  out.chart_radius = chart_radius;
  out.density = {k, chart_radius,
                 [k, a](double x) { return a * std::pow(2.0 / (1.0 + x * x), k); }};
  return out;
}

NormalizedDensity hyperbolic_ball_density(int k, double R) {
  if (k < 1) throw DomainError("hyperbolic_ball_density: k must be >= 1");
  const double chart_radius = hyperbolic_chart_radius(R);  // validates R > 0
  const double a = sphere_volume(k) / geodesic_ball_volume(-1.0, k, R);
  NormalizedDensity out;
  out.normalization = a;
  out.chart_radius = chart_radius;
  out.density = {k, chart_radius,
                 [k, a](double x) { return a * std::pow(2.0 / (1.0 - x * x), k); }};
  return out;
}

CumulativeMoment::CumulativeMoment(RadialDensity density, std::size_t table_size)
    : density_(std::move(density)) {
  if (density_.k < 1) throw ValidationError("cumulative moment: k must be >= 1");
  if (!(density_.support > 0)) throw ValidationError("cumulative moment: empty support");
  if (table_size < 16) throw ValidationError("cumulative moment: table too small");

  const auto opt = table_quadrature();
  auto moment = [this](double x) { return density_.moment(x); };

  const double ref = std::isfinite(density_.support) ? density_.support : 1.0;
  if (std::isfinite(density_.support)) {
    cutoff_ = density_.support;
  } else {
    // Truncate where the remaining tail is a negligible fraction of the
    // total; the tail is measured, not bounded analytically, so this works
    // for any integrable moment.  The tail integral runs in inverted
    // coordinates u = 1/x, which keeps slowly decaying moments resolvable
    // at arbitrarily large offsets.
    auto tail_mass = [&moment, &opt](double a) {
      return integrate(
          [&moment](double u) { return moment(1.0 / u) / (u * u); }, 0.0,
          1.0 / a, opt);
    };
    double head = integrate(moment, 0.0, ref, opt);
    double trunc = ref;
    for (int i = 0; i < 200; ++i) {
      const double tail = tail_mass(trunc);
      if (!(tail > kTailFraction * (head + tail))) break;
      const double next = 2.0 * trunc;
      head += integrate(moment, trunc, next, opt);
      trunc = next;
      if (i == 199)
        throw NumericError("cumulative moment: tail does not decay");
    }
    cutoff_ = trunc;
  }

  x_min_ = 1e-6 * std::min(ref, cutoff_);
  std::vector<double> xs = log_grid(x_min_, cutoff_, table_size);

  std::vector<double> values(xs.size());
  long double acc = integrate(moment, 0.0, x_min_, opt);
  y_min_ = static_cast<double>(acc);
  values[0] = y_min_;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double seg = integrate(moment, xs[i - 1], xs[i], opt);
    if (!(seg > 0))
      throw ValidationError("cumulative moment: density must be positive on its support");
    acc += seg;
    values[i] = static_cast<double>(acc);
  }
  total_ = values.back();
  table_ = MonotoneCubic(xs, values);

  // Error-driven refinement: the interpolant is compared with direct
  // quadrature inside every interval and intervals are split until the
  // cumulative is resolved to 1e-10 of the total mass (or the table hits a
  // hard size cap).  The dominant error mode, from the O(h^2) error of the
  // estimated node derivatives, vanishes at interval midpoints and peaks at
  // the quarter points, so the quarter point is the probe that sees it.
  constexpr double kRefineTol = 1e-10;
  constexpr std::size_t kMaxTableSize = std::size_t{1} << 17;
  for (int round = 0; round < 8 && xs.size() < kMaxTableSize; ++round) {
    std::vector<double> nx, nv;
    nx.reserve(2 * xs.size());
    nv.reserve(2 * xs.size());
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      nx.push_back(xs[i]);
      nv.push_back(values[i]);
      const double quarter = 0.75 * xs[i] + 0.25 * xs[i + 1];
      const double mid = 0.5 * (xs[i] + xs[i + 1]);
      const double at_quarter = values[i] + integrate(moment, xs[i], quarter, opt);
      const double at_mid = at_quarter + integrate(moment, quarter, mid, opt);
      worst = std::max(worst, std::fabs(table_(quarter) - at_quarter));
      worst = std::max(worst, std::fabs(table_(mid) - at_mid));
      // Insert only midpoints that keep the table strictly increasing.
      if (at_mid > values[i] && values[i + 1] > at_mid) {
        nx.push_back(mid);
        nv.push_back(at_mid);
      }
    }
    nx.push_back(xs.back());
    nv.push_back(values.back());
    if (worst <= kRefineTol * total_) break;
    xs = std::move(nx);
    values = std::move(nv);
    table_ = MonotoneCubic(xs, values);
  }
}

double CumulativeMoment::operator()(double x) const {
  if (!(x >= 0)) throw DomainError("cumulative moment: x must be >= 0");
  if (x <= x_min_)
    return y_min_ * std::pow(x / x_min_, density_.k);
  if (x >= cutoff_) return total_;
  return table_(x);
}

double CumulativeMoment::inverse(double y) const {
  if (!(y >= 0) || y > total_ * (1.0 + 1e-12))
    throw DomainError("cumulative moment: mass outside [0, total]");
  if (y <= y_min_)
    return x_min_ * std::pow(y / y_min_, 1.0 / density_.k);
  if (y >= total_) return cutoff_;
  return table_.inverse(y);
}

TransportMap::TransportMap(CumulativeMoment rho, CumulativeMoment sigma)
    : rho_(std::move(rho)), sigma_(std::move(sigma)) {
  if (rho_.density().k != sigma_.density().k)
    throw ValidationError("transport: fiber dimensions differ");
  const double scale = std::max(rho_.total(), sigma_.total());
  if (std::fabs(rho_.total() - sigma_.total()) > 1e-8 * scale)
    throw ValidationError("transport: total moments differ beyond 1e-8");
}

TransportMap build_transport(RadialDensity rho, RadialDensity sigma,
                             std::size_t table_size) {
  CumulativeMoment p(std::move(rho), table_size);
  CumulativeMoment s(std::move(sigma), table_size);
  return TransportMap(std::move(p), std::move(s));
}

double TransportMap::psi(double x) const {
  if (x <= 0) return 0.0;
  return sigma_.inverse(std::min(rho_(x), sigma_.total()));
}

double TransportMap::phi(double s) const {
  if (s <= 0) return 0.0;
  return rho_.inverse(std::min(sigma_(s), rho_.total()));
}

namespace {

//! Central difference with one Richardson extrapolation step. The stencil is
//! kept to a quarter of the gap up to `upper`: inverses of saturating maps
//! blow up toward the end of their range, and a wider stencil there is
//! dominated by the pole (the extrapolated slope can even turn negative).
template <class F>
double richardson_diff(const F& f, double x, double h, double upper) {
  const double gap = upper - x;
  if (h > 0.25 * gap) h = std::max(0.25 * gap, 1e-14 * upper);
  auto central = [&](double step) { return (f(x + step) - f(x - step)) / (2 * step); };
  const double d1 = central(h);
  const double d2 = central(0.5 * h);
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace

double TransportMap::psi_prime(double x) const {
  if (!(x > 0)) throw DomainError("psi_prime: x must be > 0");
  const double h = 3e-3 * std::max(x, rho_.table_origin());
  return richardson_diff([this](double t) { return psi(t); }, x, h, domain_radius());
}

double TransportMap::phi_prime(double s) const {
  if (!(s > 0)) throw DomainError("phi_prime: s must be > 0");
  const double h = 3e-3 * std::max(s, sigma_.table_origin());
  return richardson_diff([this](double t) { return phi(t); }, s, h, image_radius());
}

Eigen::VectorXd apply_radial_map(const TransportMap& map, const Eigen::VectorXd& x) {
  const double r = x.norm();
  if (r == 0.0) return Eigen::VectorXd::Zero(x.size());
  return (map.psi(r) / r) * x;
}

double jacobian_on_subspace(const TransportMap& map, const Eigen::VectorXd& x,
                            const Eigen::MatrixXd& frame) {
  const double r = x.norm();
  if (!(r > 0)) throw DomainError("jacobian_on_subspace: x must be nonzero");
  if (frame.rows() != x.size() || frame.cols() < 1 || frame.cols() > frame.rows())
    throw ValidationError("jacobian_on_subspace: frame shape mismatch");
  const Eigen::MatrixXd gram =
      frame.transpose() * frame - Eigen::MatrixXd::Identity(frame.cols(), frame.cols());
  if (gram.cwiseAbs().maxCoeff() > 1e-8)
    throw ValidationError("jacobian_on_subspace: frame is not orthonormal");

  const double a = map.psi_prime(r);
  const double b = map.psi(r) / r;
  const double w2 = (frame.transpose() * (x / r)).squaredNorm();
  const int k = static_cast<int>(frame.cols());
  return std::pow(b, k - 1) * std::sqrt(std::max(0.0, b * b + (a * a - b * b) * w2));
}

ConditionReport check_radial_condition(const TransportMap& map,
                                       const std::vector<double>& grid,
                                       double rel_tol) {
  ConditionReport out;
  out.min_margin = kInf;
  for (const double x : grid) {
    if (!(x > 0) || x > map.image_radius())
      throw DomainError("check_radial_condition: grid point outside (0, image radius]");
    const double phi = map.phi(x);
    const double dphi = map.phi_prime(x);
    const double scale = std::max(x * std::fabs(dphi) + std::fabs(phi), 1e-300);
    const double margin = (x * dphi - phi) / scale;
    out.min_margin = std::min(out.min_margin, margin);
    if (margin < -rel_tol)
      out.violation_points.push_back(x);
    else if (margin <= rel_tol)
      out.equality_points.push_back(x);
  }
  out.holds = out.violation_points.empty();
  return out;
}

double contraction_factor(const TransportMap& map, int grid_points) {
  const double lo = std::max(map.source().table_origin() * 10.0, 1e-9);
  // Beyond the radius holding all but 1e-9 of the mass, inverting the
  // cumulative is conditioning-limited (one ulp of the total moves the
  // preimage by ulp/remaining-mass), so the sup grid stops there.
  const double hi = std::min(
      map.domain_radius(),
      map.source().inverse((1.0 - 1e-9) * map.source().total()));
  const auto grid = log_grid(lo, hi, static_cast<std::size_t>(grid_points));
  double c = 0.0;
  for (const double x : grid) c = std::max(c, map.psi(x) / x);
  return c;
}

RatioReport gromov_ratio_monotone(const RadialDensity& sigma,
                                  const RadialDensity& rho, double factor,
                                  const std::vector<double>& grid, double rel_tol) {
  if (sigma.k != rho.k)
    throw ValidationError("gromov_ratio_monotone: fiber dimensions differ");
  if (!(factor > 0)) throw DomainError("gromov_ratio_monotone: factor must be > 0");
  RatioReport out;
  out.factor = factor;
  for (const double t : grid) {
    if (!(t > 0) || t >= rho.support || factor * t >= sigma.support)
      throw DomainError("gromov_ratio_monotone: grid leaves the density supports");
    const double denom = rho.moment(t);
    if (!(denom > 0))
      throw DomainError("gromov_ratio_monotone: source moment vanishes on grid");
    out.grid.push_back(t);
    out.ratios.push_back(sigma.moment(factor * t) / denom);
  }
  out.nondecreasing = true;
  for (std::size_t i = 1; i < out.ratios.size(); ++i) {
    const double scale = std::max(std::fabs(out.ratios[i - 1]), std::fabs(out.ratios[i]));
    if (out.ratios[i] - out.ratios[i - 1] < -rel_tol * scale) {
      out.nondecreasing = false;
      out.violation_points.push_back(out.grid[i]);
    }
  }
  return out;
}

PreservationReport verify_kball_preservation(const TransportMap& map,
                                             const std::vector<double>& radii,
                                             double rel_tol) {
  PreservationReport out;
  const int k = map.k();
  const double shell = sphere_volume(k - 1);
  const RadialDensity& rho = map.source().density();
  const RadialDensity& sigma = map.image().density();
  for (const double r : radii) {
    if (!(r > 0)) throw DomainError("verify_kball_preservation: radius must be > 0");
    PreservationRow row;
    row.radius = r;
    const double upper = std::min(r, map.domain_radius());
    row.source_mass =
        shell * integrate([&rho](double t) { return rho.moment(t); }, 0.0, upper);
    const double s = map.psi(r);
    row.image_mass =
        shell * integrate([&sigma](double t) { return sigma.moment(t); }, 0.0, s);
    row.rel_residual = std::fabs(row.image_mass - row.source_mass) /
                       std::max(row.source_mass, 1e-300);
    out.worst = std::max(out.worst, row.rel_residual);
    out.rows.push_back(row);
  }
  out.ok = out.worst <= rel_tol;
  return out;
}

void write_transport_csv(std::ostream& os, const TransportMap& map, int rows) {
  const double hi = map.domain_radius();
  const double lo = 1e-4 * std::min(1.0, hi);
  const auto grid = log_grid(lo, std::min(hi, 1e3), static_cast<std::size_t>(rows));
  os << "x,psi,psi_prime,ratio_psi_over_x\n";
  for (const double x : grid) {
    const double p = map.psi(x);
    os << x << ',' << p << ',' << map.psi_prime(x) << ',' << p / x << '\n';
  }
}

}  // namespace waistlab
