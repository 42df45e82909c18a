// SPDX-License-Identifier: Apache-2.0
#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "waistlab/errors.hpp"
#include "waistlab/model_geometry.hpp"
#include "waistlab/philox.hpp"
#include "waistlab/radial_transport.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_CASE("cumulative moments integrate the conformal circle density") {
  // k = 1: P(x) = int_0^x 2/(1+t^2) dt = 2 arctan x, total pi
  waistlab::CumulativeMoment P(waistlab::spherical_density(1));
  CHECK(P.total() == doctest::Approx(kPi).epsilon(1e-9));
  CHECK(P(1.0) == doctest::Approx(kPi / 2).epsilon(1e-9));
  CHECK(P(0.2) == doctest::Approx(2.0 * std::atan(0.2)).epsilon(1e-9));
  for (double x : {1e-4, 0.05, 0.7, 3.0, 40.0}) {
    CHECK(P.inverse(P(x)) == doctest::Approx(x).epsilon(1e-8));
  }
  // k = 2: total moment int 4 t/(1+t^2)^2 = 2, i.e. vol(S^1)-normalized area 4 pi
  waistlab::CumulativeMoment Q(waistlab::spherical_density(2));
  CHECK(Q.total() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(waistlab::sphere_volume(1) * Q.total() ==
        doctest::Approx(waistlab::sphere_volume(2)).epsilon(1e-9));
}

TEST_CASE("normalization constants for caps and hyperbolic balls") {
  // k = 1, R = pi/2: the half circle has mass pi, the full one 2 pi, so A = 2
  const auto half = waistlab::cap_density(1, kPi / 2);
  CHECK(half.normalization == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(half.chart_radius == doctest::Approx(1.0).epsilon(1e-12));

  // k = 1 hyperbolic ball of radius R: arc length 2R against 2 pi, A = pi / R
  for (double R : {0.5, 1.0, 2.0}) {
    const auto ball = waistlab::hyperbolic_ball_density(1, R);
    CHECK(ball.normalization == doctest::Approx(kPi / R).epsilon(1e-9));
    CHECK(ball.chart_radius == doctest::Approx(std::tanh(R / 2)).epsilon(1e-12));
  }

  // general k: A = vol(ball in model) normalizes to the sphere volume
  for (int k : {2, 3}) {
    for (double R : {0.8, 2.0}) {
      const double want = waistlab::sphere_volume(k) /
                          waistlab::geodesic_ball_volume(1.0, k, R);
      CHECK(waistlab::cap_density(k, R).normalization ==
            doctest::Approx(want).epsilon(1e-8));
      const double hwant = waistlab::sphere_volume(k) /
                           waistlab::geodesic_ball_volume(-1.0, k, R);
      CHECK(waistlab::hyperbolic_ball_density(k, R).normalization ==
            doctest::Approx(hwant).epsilon(1e-8));
    }
  }
}

TEST_CASE("half-circle transport has the half-angle closed form") {
  // circle onto half circle: psi(x) = tan(arctan(x) / 2)
  auto map = waistlab::build_transport(waistlab::spherical_density(1),
                                       waistlab::cap_density(1, kPi / 2).density);
  for (double x : {1e-3, 0.1, 0.5, 1.0, 4.0, 100.0}) {
    CHECK(map.psi(x) == doctest::Approx(std::tan(std::atan(x) / 2)).epsilon(1e-7));
    CHECK(map.phi(map.psi(x)) == doctest::Approx(x).epsilon(1e-6));
  }
  // the image stays inside the chart disk of the half circle
  CHECK(map.image_radius() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(map.psi(1e6) <= 1.0 + 1e-9);
}

TEST_CASE("transport derivative obeys the mass-balance identity") {
  for (int k : {1, 2, 3}) {
    auto nd = waistlab::cap_density(k, 2.0);
    auto map = waistlab::build_transport(waistlab::spherical_density(k), nd.density);
    const auto& rho = map.source().density();
    const auto& sigma = map.image().density();
    for (double x : {0.05, 0.3, 1.0, 2.5}) {
      const double exact = rho.moment(x) / sigma.moment(map.psi(x));
      CHECK(map.psi_prime(x) == doctest::Approx(exact).epsilon(2e-5));
    }
  }
}

TEST_CASE("identity transport is a fixed point") {
  auto map = waistlab::build_transport(waistlab::spherical_density(2),
                                       waistlab::spherical_density(2));
  for (double x : {0.01, 0.4, 1.0, 7.0}) {
    CHECK(map.psi(x) == doctest::Approx(x).epsilon(1e-7));
  }
  // x phi' >= phi holds with equality everywhere
  const auto grid = waistlab::log_grid(1e-3, 10.0, 64);
  const auto rep = waistlab::check_radial_condition(map, grid);
  CHECK(rep.holds);
  CHECK(rep.violation_points.empty());
  CHECK(rep.equality_points.size() == grid.size());
}

TEST_CASE("radial condition holds strictly for proper caps") {
  auto map = waistlab::build_transport(waistlab::spherical_density(2),
                                       waistlab::cap_density(2, kPi / 2).density);
  // Full range: the margin decays to zero at the origin, so test against a
  // tolerance above the noise floor of the finite-difference derivative.
  std::vector<double> image_grid;
  for (double x : waistlab::log_grid(1e-3, 50.0, 200)) image_grid.push_back(map.psi(x));
  const auto rep = waistlab::check_radial_condition(map, image_grid, 1e-6);
  CHECK(rep.holds);
  CHECK(rep.violation_points.empty());
  CHECK(rep.min_margin >= -1e-6);
  // Interior of the image ball: strict inequality with a macroscopic margin.
  const auto interior =
      waistlab::check_radial_condition(map, waistlab::log_grid(0.05, 0.95, 100), 1e-6);
  CHECK(interior.holds);
  CHECK(interior.equality_points.empty());
  CHECK(interior.min_margin >= 1e-3);
}

TEST_CASE("contraction factor approaches A^{-1/k}") {
  // psi(x)/x climbs toward its supremum at x -> 0 where psi'(0) = A^{-1/k}
  for (int k : {1, 2, 3}) {
    const auto nd = waistlab::cap_density(k, kPi / 2);
    auto map = waistlab::build_transport(waistlab::spherical_density(k), nd.density);
    const double c = waistlab::contraction_factor(map);
    CHECK(c == doctest::Approx(std::pow(nd.normalization, -1.0 / k)).epsilon(1e-4));
    CHECK(c < 1.0);
  }
  // hyperbolic target: same principle with A = 2 pi / (2 pi (cosh R - 1))
  const auto hb = waistlab::hyperbolic_ball_density(2, 1.0);
  auto hmap = waistlab::build_transport(waistlab::spherical_density(2), hb.density);
  CHECK(waistlab::contraction_factor(hmap) ==
        doctest::Approx(std::pow(hb.normalization, -0.5)).epsilon(1e-4));
}

TEST_CASE("growth ratio certificate matches the closed form") {
  // sigma_k(c t) / rho_k(t) = A c^{k-1} ((1+t^2)/(1+(c t)^2))^k for caps
  const int k = 2;
  const auto nd = waistlab::cap_density(k, 2.2);
  auto map = waistlab::build_transport(waistlab::spherical_density(k), nd.density);
  const double c = waistlab::contraction_factor(map);
  const auto grid = waistlab::log_grid(1e-3, 0.999 * nd.chart_radius / c, 300);
  const auto rep = waistlab::gromov_ratio_monotone(nd.density,
                                                   waistlab::spherical_density(k),
                                                   c, grid);
  CHECK(rep.nondecreasing);
  CHECK(rep.violation_points.empty());
  REQUIRE(rep.ratios.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    const double ct = c * t;
    const double want = nd.normalization * std::pow(c, k - 1) *
                        std::pow((1.0 + t * t) / (1.0 + ct * ct), k);
    CHECK(rep.ratios[i] == doctest::Approx(want).epsilon(1e-9));
  }
  // the grid guard refuses points outside the support
  CHECK_THROWS_AS(waistlab::gromov_ratio_monotone(
                      nd.density, waistlab::spherical_density(k), c,
                      {nd.chart_radius / c * 2.0}),
                  waistlab::DomainError);
}

TEST_CASE("k-ball preservation closes the loop") {
  auto map = waistlab::build_transport(waistlab::spherical_density(3),
                                       waistlab::cap_density(3, 1.0).density);
  const auto radii = waistlab::log_grid(1e-2, 100.0, 20);
  const auto rep = waistlab::verify_kball_preservation(map, radii);
  CHECK(rep.ok);
  CHECK(rep.worst < 1e-7);
  REQUIRE(rep.rows.size() == 20);
  for (const auto& row : rep.rows) {
    CHECK(row.source_mass == doctest::Approx(row.image_mass).epsilon(1e-6));
  }
}

TEST_CASE("subspace jacobian interpolates between radial and tangential rates") {
  auto map = waistlab::build_transport(waistlab::spherical_density(2),
                                       waistlab::cap_density(2, kPi / 2).density);
  Eigen::VectorXd x(3);
  x << 0.6, 0.3, -0.2;
  const double r = x.norm();
  const double a = map.psi_prime(r);
  const double b = map.psi(r) / r;

  // frame containing the radial direction: k = 1 stretch is psi'
  Eigen::MatrixXd radial = x.normalized();
  CHECK(waistlab::jacobian_on_subspace(map, x, radial) ==
        doctest::Approx(a).epsilon(1e-10));

  // orthogonal frame: pure tangential stretch psi(r)/r
  const Eigen::Vector3d xn = Eigen::Vector3d(x).normalized();
  Eigen::Vector3d t1(-0.3, 0.6, 0.0);
  t1 -= t1.dot(xn) * xn;
  t1.normalize();
  const Eigen::Vector3d t2 = xn.cross(t1);
  Eigen::MatrixXd tang(3, 2);
  tang.col(0) = t1;
  tang.col(1) = t2;
  CHECK(waistlab::jacobian_on_subspace(map, x, tang) ==
        doctest::Approx(b * b).epsilon(1e-10));

  // a random 2-frame agrees with a finite-difference area estimate
  waistlab::Philox4x32 rng(31, 0);
  Eigen::MatrixXd F(3, 2);
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < 3; ++i) F(i, c) = rng.next_gaussian();
  // Gram-Schmidt
  F.col(0).normalize();
  F.col(1) -= F.col(0).dot(F.col(1)) * F.col(0);
  F.col(1).normalize();
  const double h = 1e-5;
  const Eigen::VectorXd f0 = waistlab::apply_radial_map(map, x);
  const Eigen::VectorXd fu =
      waistlab::apply_radial_map(map, x + h * F.col(0)) - f0;
  const Eigen::VectorXd fv =
      waistlab::apply_radial_map(map, x + h * F.col(1)) - f0;
  const double gram = (fu.dot(fu) * fv.dot(fv) - fu.dot(fv) * fu.dot(fv)) /
                      (h * h * h * h);
  CHECK(waistlab::jacobian_on_subspace(map, x, F) ==
        doctest::Approx(std::sqrt(std::max(0.0, gram))).epsilon(1e-4));
}

TEST_CASE("radial extension acts on vectors as psi on the norm") {
  auto map = waistlab::build_transport(waistlab::spherical_density(1),
                                       waistlab::cap_density(1, kPi / 2).density);
  Eigen::VectorXd x(2);
  x << 3.0, 4.0;
  const auto y = waistlab::apply_radial_map(map, x);
  CHECK(y.norm() == doctest::Approx(map.psi(5.0)).epsilon(1e-12));
  CHECK(y(0) / y.norm() == doctest::Approx(0.6).epsilon(1e-12));
  // the origin is a fixed point
  Eigen::VectorXd z = Eigen::VectorXd::Zero(2);
  CHECK(waistlab::apply_radial_map(map, z).norm() == 0.0);
}

TEST_CASE("transport construction validates its inputs") {
  // mismatched fiber dimensions
  CHECK_THROWS_AS(waistlab::build_transport(waistlab::spherical_density(1),
                                            waistlab::spherical_density(2)),
                  waistlab::ValidationError);
  // mismatched totals: an unnormalized cap misses mass
  waistlab::RadialDensity raw_cap{1, 1.0,
                                  [](double x) { return 2.0 / (1.0 + x * x); }};
  CHECK_THROWS_AS(
      waistlab::build_transport(waistlab::spherical_density(1), raw_cap),
      waistlab::ValidationError);
}

TEST_CASE("transport table export is numeric CSV") {
  auto map = waistlab::build_transport(waistlab::spherical_density(1),
                                       waistlab::cap_density(1, 2.0).density);
  std::ostringstream os;
  waistlab::write_transport_csv(os, map, 16);
  const std::string text = os.str();
  CHECK(text.rfind("x,psi,psi_prime,ratio_psi_over_x\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  int lines = 0;
  for (char ch : text)
    if (ch == '\n') ++lines;
  CHECK(lines == 17);  // header + 16 rows
}
