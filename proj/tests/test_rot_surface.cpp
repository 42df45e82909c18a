// SPDX-License-Identifier: Apache-2.0
#include <Eigen/Core>
#include <cmath>

#include "doctest.h"
#include "waistlab/model_geometry.hpp"
#include "waistlab/philox.hpp"
#include "waistlab/rot_surface.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::Vector2d polar(double r, double theta) {
  return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace

TEST_CASE("model surfaces report their constant curvature") {
  const auto sph = waistlab::model_surface(1.0, 3.0);
  const auto flat = waistlab::model_surface(0.0, 3.0);
  const auto hyp = waistlab::model_surface(-1.0, 3.0);
  for (double r : {0.2, 1.0, 2.5}) {
    CHECK(sph.gauss_curvature(r) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(flat.gauss_curvature(r) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK(hyp.gauss_curvature(r) == doctest::Approx(-1.0).epsilon(1e-9));
  }
  CHECK(sph.profile(0.8) == doctest::Approx(std::sin(0.8)));
  CHECK(hyp.profile_d(0.8) == doctest::Approx(std::cosh(0.8)));
}

TEST_CASE("flat surface geodesics are straight lines") {
  const auto flat = waistlab::model_surface(0.0, 10.0);
  waistlab::Philox4x32 rng(21, 0);
  for (int i = 0; i < 10; ++i) {
    const Eigen::Vector2d base = polar(0.3 + 2.0 * rng.next_double(),
                                       2.0 * kPi * rng.next_double());
    const Eigen::Vector2d target = polar(0.3 + 2.0 * rng.next_double(),
                                         2.0 * kPi * rng.next_double());
    const Eigen::Vector2d v = waistlab::log_map(flat, base, target);
    CHECK(v.norm() == doctest::Approx((target - base).norm()).epsilon(1e-8));
    const Eigen::Vector2d hit = waistlab::exp_map(flat, base, v);
    CHECK((hit - target).norm() <= 1e-7);
    CHECK(waistlab::surface_distance(flat, base, target) ==
          doctest::Approx((target - base).norm()).epsilon(1e-8));
  }
}

TEST_CASE("spherical surface distances match the polar law of cosines") {
  const auto sph = waistlab::model_surface(1.0, kPi);
  waistlab::Philox4x32 rng(22, 0);
  for (int i = 0; i < 12; ++i) {
    const double r1 = 0.2 + 1.2 * rng.next_double();
    const double r2 = 0.2 + 1.2 * rng.next_double();
    const double t1 = 2.0 * kPi * rng.next_double();
    const double t2 = 2.0 * kPi * rng.next_double();
    const double want = waistlab::model_polar_distance(1.0, r1, r2, t2 - t1);
    CHECK(waistlab::surface_distance(sph, polar(r1, t1), polar(r2, t2)) ==
          doctest::Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("hyperbolic surface distances match the Poincare chart") {
  const auto hyp = waistlab::model_surface(-1.0, 4.0);
  waistlab::Philox4x32 rng(23, 0);
  for (int i = 0; i < 12; ++i) {
    const double r1 = 0.2 + 1.6 * rng.next_double();
    const double r2 = 0.2 + 1.6 * rng.next_double();
    const double t1 = 2.0 * kPi * rng.next_double();
    const double t2 = 2.0 * kPi * rng.next_double();
    Eigen::VectorXd a(2), b(2);
    const double ca = waistlab::hyperbolic_chart_radius(r1);
    const double cb = waistlab::hyperbolic_chart_radius(r2);
    a << ca * std::cos(t1), ca * std::sin(t1);
    b << cb * std::cos(t2), cb * std::sin(t2);
    const double want = waistlab::poincare_distance(a, b);
    CHECK(waistlab::surface_distance(hyp, polar(r1, t1), polar(r2, t2)) ==
          doctest::Approx(want).epsilon(1e-6));
  }
  // right-angle configuration with a classical closed form:
  // cosh d = cosh a cosh b for legs a, b meeting at the pole
  const double d = waistlab::surface_distance(hyp, polar(0.5, 0.0), polar(0.5, kPi / 2));
  CHECK(d == doctest::Approx(std::acosh(std::cosh(0.5) * std::cosh(0.5))).epsilon(1e-6));
  CHECK(d >= std::sqrt(0.5));  // never shorter than the flat comparison
}

TEST_CASE("exp and log invert each other on a curved surface") {
  const auto sph = waistlab::model_surface(1.0, kPi);
  waistlab::Philox4x32 rng(24, 0);
  for (int i = 0; i < 10; ++i) {
    const Eigen::Vector2d base = polar(0.4 + 0.8 * rng.next_double(),
                                       2.0 * kPi * rng.next_double());
    const Eigen::Vector2d v = polar(0.1 + 1.0 * rng.next_double(),
                                    2.0 * kPi * rng.next_double());
    const Eigen::Vector2d target = waistlab::exp_map(sph, base, v);
    const Eigen::Vector2d w = waistlab::log_map(sph, base, target);
    // log returns the minimizing velocity; for these short arcs it is v itself
    CHECK((w - v).norm() <= 1e-6 * (1.0 + v.norm()));
  }
}

TEST_CASE("meridian geodesics pass through the pole exactly") {
  const auto sph = waistlab::model_surface(1.0, kPi);
  // start at r0 = 0.5 heading inward with speed 1.2: crosses the pole and
  // comes out on the opposite meridian at r = 0.7
  const Eigen::Vector2d hit =
      waistlab::exp_map(sph, {0.5, 0.0}, {-1.2, 0.0});
  CHECK(hit(0) == doctest::Approx(-0.7).epsilon(1e-8));
  CHECK(hit(1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
  // distance through the pole
  CHECK(waistlab::surface_distance(sph, polar(0.5, 0.0), polar(0.5, kPi)) ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("Clairaut constant is conserved along geodesics") {
  // h(r) dtheta/ds stays constant; probe it by comparing chart angles of a
  // geodesic emitted at 45 degrees on the unit sphere surface against the
  // exact great-circle solution lifted to polar coordinates.
  const auto sph = waistlab::model_surface(1.0, kPi);
  const Eigen::Vector2d base = polar(kPi / 2, 0.0);  // on the equator
  const double s = 1.1;
  const Eigen::Vector2d v = polar(s, kPi / 4);       // 45-degree launch
  const Eigen::Vector2d end = waistlab::exp_map(sph, base, v);
  // lift both ends to the round sphere and compare the geodesic distance
  const auto lift = [](const Eigen::Vector2d& u) {
    const double r = u.norm();
    const double th = std::atan2(u(1), u(0));
    Eigen::VectorXd p(3);
    p << std::sin(r) * std::cos(th), std::sin(r) * std::sin(th), -std::cos(r);
    return p;
  };
  CHECK(waistlab::sphere_distance(lift(base), lift(end)) ==
        doctest::Approx(s).epsilon(1e-8));
}

TEST_CASE("curvature bound checker accepts models and flags the bulge") {
  const auto hyp = waistlab::model_surface(-1.0, 2.0);
  const auto ok = waistlab::check_curvature_bound(hyp, -1.0, 0.0, 2.0, 200);
  CHECK(ok.ok);
  CHECK(ok.worst_excess <= 1e-9);

  // sinh r + 0.1 r^3 keeps K <= -1 on (0, 1.6]
  const waistlab::RotSymSurface funnel(
      "steep-funnel", [](double r) { return std::sinh(r) + 0.1 * r * r * r; },
      [](double r) { return std::cosh(r) + 0.3 * r * r; },
      [](double r) { return std::sinh(r) + 0.6 * r; }, 1.6);
  CHECK(waistlab::check_curvature_bound(funnel, -1.0, 0.0, 1.6, 300).ok);

  // a profile pinched near the pole exceeds curvature 1 there
  const waistlab::RotSymSurface bulge(
      "pinched-bulge",
      [](double r) { return std::sin(r) * (1.0 - 0.2 * r * r); },
      [](double r) {
        return std::cos(r) * (1.0 - 0.2 * r * r) - 0.4 * r * std::sin(r);
      },
      [](double r) {
        return -std::sin(r) * (1.0 - 0.2 * r * r) - 0.8 * r * std::cos(r) -
               0.4 * std::sin(r);
      },
      1.5);
  const auto bad = waistlab::check_curvature_bound(bulge, 1.0, 0.0, 1.5, 300);
  CHECK_FALSE(bad.ok);
  CHECK(bad.worst_excess > 0.5);
  CHECK(bad.worst_radius < 0.5);  // the excess concentrates near the pole
}

TEST_CASE("finite-difference profile fallback tracks the analytic one") {
  const waistlab::RotSymSurface fd("fd-sphere", [](double r) { return std::sin(r); },
                                   2.5);
  CHECK(fd.profile_d(0.9) == doctest::Approx(std::cos(0.9)).epsilon(1e-6));
  CHECK(fd.gauss_curvature(0.9) == doctest::Approx(1.0).epsilon(1e-4));
}
