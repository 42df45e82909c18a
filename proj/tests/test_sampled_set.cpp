// SPDX-License-Identifier: Apache-2.0
#include <Eigen/Core>
#include <cmath>
#include <memory>

#include "doctest.h"
#include "waistlab/ambient.hpp"
#include "waistlab/model_geometry.hpp"
#include "waistlab/philox.hpp"
#include "waistlab/sampled_set.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

waistlab::Chart circle_chart(double radius) {
  waistlab::Chart c;
  c.k = 1;
  c.lo = Eigen::VectorXd::Zero(1);
  c.hi = Eigen::VectorXd::Constant(1, 2.0 * kPi);
  c.periodic = {1};
  c.map = [radius](const Eigen::VectorXd& u) {
    Eigen::VectorXd p(2);
    p << radius * std::cos(u(0)), radius * std::sin(u(0));
    return p;
  };
  return c;
}

waistlab::Chart segment_chart() {
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
  return c;
}

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("chart sampling produces an on-set cloud with a sane fill distance") {
  auto amb = std::make_shared<waistlab::EuclideanAmbient>(2);
  const auto set = waistlab::sample_chart(amb, circle_chart(1.0), {256});
  CHECK(set.cloud.size() == 256);
  CHECK(set.k == 1);
  for (const auto& p : set.cloud) {
    CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  // fill distance is about half the arc step of 2 pi / 256
  const double step = 2.0 * kPi / 256.0;
  CHECK(set.fill_distance > 0.2 * step);
  CHECK(set.fill_distance < 1.2 * step);
}

TEST_CASE("distance oracle answers within and distance queries on a circle") {
  auto amb = std::make_shared<waistlab::EuclideanAmbient>(2);
  const auto set = waistlab::sample_chart(amb, circle_chart(1.0), {512});
  waistlab::SetDistance dist(set, 1.0);

  // radial queries have exact distance |r - 1|
  CHECK(dist.within(vec2(1.3, 0.0), 0.3 + 1e-9));
  CHECK_FALSE(dist.within(vec2(1.5, 0.0), 0.3));
  CHECK(dist.distance_within(vec2(0.55, 0.0), 0.9) ==
        doctest::Approx(0.45).epsilon(1e-5));
  CHECK(dist.distance_within(vec2(1.0 + 0.72, 0.0), 0.9) ==
        doctest::Approx(0.72).epsilon(1e-5));
  // outside the cap the oracle reports infinity
  CHECK(dist.distance_within(vec2(3.0, 0.0), 0.9) == waistlab::kInf);

  // chart refinement beats the raw cloud resolution: place the query
  // opposite a sample midpoint, where the cloud error is maximal
  const double mid = kPi / 512.0;  // halfway between neighboring samples
  const Eigen::VectorXd q = 1.25 * vec2(std::cos(mid), std::sin(mid));
  CHECK(dist.distance_within(q, 0.5) == doctest::Approx(0.25).epsilon(1e-5));
}

TEST_CASE("periodic charts wrap without a seam") {
  auto amb = std::make_shared<waistlab::EuclideanAmbient>(2);
  const auto set = waistlab::sample_chart(amb, circle_chart(1.0), {128});
  waistlab::SetDistance dist(set, 1.0);
  // query just below angle 0, i.e. across the parameter seam
  const Eigen::VectorXd q = 1.2 * vec2(std::cos(-0.01), std::sin(-0.01));
  CHECK(dist.distance_within(q, 0.5) == doctest::Approx(0.2).epsilon(1e-4));
}

TEST_CASE("non-periodic segments respect their endpoints") {
  auto amb = std::make_shared<waistlab::EuclideanAmbient>(2);
  const auto set = waistlab::sample_chart(amb, segment_chart(), {256});
  waistlab::SetDistance dist(set, 2.0);
  // past the right endpoint the distance is to the corner point (1, 0)
  CHECK(dist.distance_within(vec2(1.5, 0.0), 1.0) ==
        doctest::Approx(0.5).epsilon(1e-4));
  CHECK(dist.distance_within(vec2(0.3, 0.4), 1.0) ==
        doctest::Approx(0.4).epsilon(1e-4));
  CHECK(dist.distance_within(vec2(-0.3, -0.4), 1.0) ==
        doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("spherical ambient measures geodesic distances") {
  auto amb = std::make_shared<waistlab::SphereAmbient>(2);
  waistlab::Chart equator;
  equator.k = 1;
  equator.lo = Eigen::VectorXd::Zero(1);
  equator.hi = Eigen::VectorXd::Constant(1, 2.0 * kPi);
  equator.periodic = {1};
  equator.map = [](const Eigen::VectorXd& u) {
    Eigen::VectorXd p(3);
    p << std::cos(u(0)), std::sin(u(0)), 0.0;
    return p;
  };
  const auto set = waistlab::sample_chart(amb, equator, {512});
  waistlab::SetDistance dist(set, 2.0);

  Eigen::VectorXd pole(3), tilted(3);
  pole << 0.0, 0.0, 1.0;
  const double ang = 0.4;
  tilted << std::cos(ang), 0.0, std::sin(ang);
  // the pole sits at geodesic distance pi/2 from the equator
  CHECK(dist.distance_within(pole, 1.7) == doctest::Approx(kPi / 2).epsilon(1e-4));
  CHECK(dist.distance_within(tilted, 1.0) == doctest::Approx(ang).epsilon(1e-4));
  CHECK(dist.within(tilted, ang + 1e-6));
  CHECK_FALSE(dist.within(pole, 1.0));
}

TEST_CASE("Poincare ambient uses hyperbolic distances") {
  auto amb = std::make_shared<waistlab::PoincareDiskAmbient>();
  // hyperbolic circle of radius 0.8 about the origin
  const double rho = waistlab::hyperbolic_chart_radius(0.8);
  const auto set = waistlab::sample_chart(amb, circle_chart(rho), {512});
  waistlab::SetDistance dist(set, 2.0);
  // the origin is at hyperbolic distance 0.8 from the circle
  CHECK(dist.distance_within(Eigen::VectorXd::Zero(2), 1.5) ==
        doctest::Approx(0.8).epsilon(1e-4));
  // a point further out along a radius: distance 1.3 - 0.8 = 0.5
  const double outer = waistlab::hyperbolic_chart_radius(1.3);
  CHECK(dist.distance_within(vec2(outer, 0.0), 1.5) ==
        doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("cloud sets have zero fill and exact point distances") {
  auto amb = std::make_shared<waistlab::EuclideanAmbient>(2);
  const auto set = waistlab::cloud_set(amb, {vec2(0, 0), vec2(2, 0)});
  CHECK(set.fill_distance == 0.0);
  CHECK(set.k == 0);
  waistlab::SetDistance dist(set, 5.0);
  CHECK(dist.distance_within(vec2(1.2, 0.0), 3.0) ==
        doctest::Approx(0.8).epsilon(1e-12));
  CHECK(dist.distance_within(vec2(-1.0, 0.0), 3.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("region samplers cover their advertised support") {
  auto amb = std::make_shared<waistlab::EuclideanAmbient>(2);
  const auto set = waistlab::sample_chart(amb, circle_chart(1.0), {64});
  const auto region = amb->sampling_region(set.cloud, 0.5);
  CHECK(region.measure > 0.0);
  waistlab::Philox4x32 rng(7, 7);
  for (int i = 0; i < 200; ++i) {
    const auto x = region.draw(rng);
    REQUIRE(x.size() == 2);
    // everything stays within a generous bounding disk
    CHECK(x.norm() <= 1.0 + 0.5 + 1.0);
  }

  // the uniform sphere sampler really is on the sphere, and the ball
  // sampler is inside the ball with |x|^n-distributed radii
  waistlab::Philox4x32 rng2(8, 8);
  double max_r = 0.0;
  for (int i = 0; i < 500; ++i) {
    const auto u = waistlab::sample_unit_sphere(rng2, 2);
    REQUIRE(u.size() == 3);
    CHECK(u.norm() == doctest::Approx(1.0).epsilon(1e-12));
    const auto b = waistlab::sample_unit_ball(rng2, 3);
    REQUIRE(b.size() == 3);
    CHECK(b.norm() <= 1.0);
    max_r = std::max(max_r, b.norm());
  }
  CHECK(max_r > 0.98);  // radii concentrate near the boundary in 3d
}
