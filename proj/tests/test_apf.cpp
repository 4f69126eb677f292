#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"

#include "gridnav/apf.hpp"
#include "oracles.hpp"

using namespace gridnav;

TEST_SUITE_BEGIN("apf");

namespace {

Obstacle point_obstacle(double cx, double cy) {
  Obstacle o;
  o.pixels = {{static_cast<int>(cx), static_cast<int>(cy)}};
  o.centroid_x = cx;
  o.centroid_y = cy;
  o.bbox = {static_cast<int>(cx), static_cast<int>(cy), static_cast<int>(cx),
            static_cast<int>(cy)};
  return o;
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_CASE("polar offsets follow the forward-axis convention") {
  const auto ahead = polar_to({10, 20}, {10, 13});
  CHECK(ahead.distance == doctest::Approx(7.0).epsilon(0));
  CHECK(ahead.angle == doctest::Approx(0.0).epsilon(0));

  const auto right = polar_to({10, 20}, {13, 20});
  CHECK(right.distance == doctest::Approx(3.0).epsilon(0));
  CHECK(right.angle == doctest::Approx(kPi / 2).epsilon(1e-15));

  const auto diag = polar_to({0, 0}, {3, -4});
  CHECK(diag.distance == doctest::Approx(5.0).epsilon(0));
  CHECK(diag.angle == doctest::Approx(std::atan2(3.0, 4.0)).epsilon(1e-15));

  CHECK_THROWS_AS(polar_to({1, 1}, {1, 1}), std::invalid_argument);
}

TEST_CASE("repulsive force sums inverse-square contributions") {
  CHECK(repulsive_force({5, 5}, {}, 1.0) == ForceVec{0.0, 0.0});

  const Obstacle ahead = point_obstacle(5, 3);  // straight ahead at d=2
  const Obstacle obstacles[1] = {ahead};
  const ForceVec f = repulsive_force({5, 5}, obstacles, 1.0);
  CHECK(f.lateral == doctest::Approx(0.0).epsilon(0));
  CHECK(f.forward == doctest::Approx(0.25).epsilon(1e-15));

  const Obstacle pair[2] = {point_obstacle(2, 1), point_obstacle(8, 1)};
  const ForceVec sym = repulsive_force({5, 5}, pair, 2.0);
  CHECK(sym.lateral == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(sym.forward > 0.0);

  const Obstacle on_top[1] = {point_obstacle(5, 5)};
  CHECK_THROWS_AS(repulsive_force({5, 5}, on_top, 1.0), std::invalid_argument);
}

TEST_CASE("attractive force matches the hand evaluations") {
  const ForceVec ahead = attractive_force({0, 7}, {0, 0}, 1.0);
  CHECK(ahead.lateral == doctest::Approx(0.0).epsilon(0));
  CHECK(ahead.forward == doctest::Approx(1.0 / 49.0).epsilon(1e-15));

  const ForceVec doubled = attractive_force({0, 7}, {0, 0}, 2.0);
  CHECK(doubled.forward == doctest::Approx(2.0 / 49.0).epsilon(1e-15));

  const ForceVec right = attractive_force({4, 4}, {5, 4}, 3.0);
  CHECK(right.lateral == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(right.forward == doctest::Approx(0.0).epsilon(0));
}

TEST_CASE("the resultant subtracts repulsion from attraction") {
  CHECK(resultant({0.5, 0.5}, {0, 0}) == ForceVec{0.5, 0.5});
  CHECK(resultant({0.3, 0.1}, {0.3, 0.1}) == ForceVec{0.0, 0.0});
  const ForceVec f = resultant({0.0, 0.5}, {0.1, 0.2});
  CHECK(f.lateral == doctest::Approx(-0.1).epsilon(1e-15));
  CHECK(f.forward == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("force sums match the trig-route oracle to 1e-12 relative") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Obstacle> obstacles;
    const int n = 1 + rng() % 6;
    for (int i = 0; i < n; ++i) {
      obstacles.push_back(point_obstacle((rng() % 6400) / 10.0, (rng() % 4800) / 10.0));
    }
    const PointD robot{320.25, 470.5};
    const double mu = 0.5 + (rng() % 100) / 50.0;
    const ForceVec got = repulsive_force(robot, obstacles, mu);
    const ForceVec expect = oracles::trig_repulsive(robot, obstacles, mu);
    CHECK(got.lateral == doctest::Approx(expect.lateral).epsilon(1e-12));
    CHECK(got.forward == doctest::Approx(expect.forward).epsilon(1e-12));

    const PointD dest{(rng() % 640) + 0.5, 1.0};
    const ForceVec ga = attractive_force(robot, dest, mu);
    const ForceVec ea = oracles::trig_attractive(robot, dest, mu);
    CHECK(ga.lateral == doctest::Approx(ea.lateral).epsilon(1e-12));
    CHECK(ga.forward == doctest::Approx(ea.forward).epsilon(1e-12));
  }
}

TEST_CASE("supercover covers straight, diagonal and corner cases") {
  // Straight right: all cells between.
  auto cells = supercover_cells({1, 2}, {4, 2});
  CHECK(cells == std::vector<PixelCoord>{{1, 2}, {2, 2}, {3, 2}, {4, 2}});

  // Exact corner crossing must include both side cells.
  cells = supercover_cells({0, 0}, {1, 1});
  REQUIRE(cells.size() == 4);
  CHECK(std::count(cells.begin(), cells.end(), PixelCoord{0, 0}) == 1);
  CHECK(std::count(cells.begin(), cells.end(), PixelCoord{1, 0}) == 1);
  CHECK(std::count(cells.begin(), cells.end(), PixelCoord{0, 1}) == 1);
  CHECK(std::count(cells.begin(), cells.end(), PixelCoord{1, 1}) == 1);

  // Degenerate segment: just the one cell.
  cells = supercover_cells({3.2, 3.2}, {3.2, 3.2});
  CHECK(cells == std::vector<PixelCoord>{{3, 3}});
}

TEST_CASE("plan on an empty map runs straight to the destination") {
  BinaryImage bin(101, 128, 1);
  APFConfig cfg;
  cfg.step_px = 5.0;
  cfg.reach_px = 2.0;
  const PointD start{50, 119};
  const PathPlan plan = plan_path(bin, {19, 50}, start, cfg);  // 100 px ahead
  CHECK(plan.status == PlanStatus::Reached);
  CHECK(plan.positions.size() == 21);  // start + 20 steps of 5 px
  for (const PointD& p : plan.positions) {
    CHECK(p.x == doctest::Approx(50.0).epsilon(1e-12));
  }
  CHECK(plan.positions.back().y == doctest::Approx(19.0).epsilon(1e-9));
  CHECK(oracles::path_collision_free(bin, plan.positions));
}

TEST_CASE("destination within reach yields a single-position plan") {
  BinaryImage bin(32, 32, 1);
  APFConfig cfg;
  cfg.reach_px = 2.0;
  const PathPlan plan = plan_path(bin, {30, 17}, {16.0, 31.0}, cfg);
  CHECK(plan.status == PlanStatus::Reached);
  CHECK(plan.positions.size() == 1);
}

TEST_CASE("a start ringed by obstacles blocks immediately") {
  BinaryImage bin(32, 32, 1);
  const int cx = 16, cy = 16;
  for (int dy = -2; dy <= 2; ++dy) {
    for (int dx = -2; dx <= 2; ++dx) {
      if (std::max(std::abs(dx), std::abs(dy)) == 2) bin.at(cy + dy, cx + dx) = 0;
    }
  }
  APFConfig cfg;
  cfg.step_px = 5.0;
  const PathPlan plan = plan_path(bin, {2, 16}, {16.0, 16.0}, cfg);
  CHECK(plan.status == PlanStatus::Blocked);
  CHECK(plan.positions.size() == 1);
}

TEST_CASE("plan rejects a non-road start") {
  BinaryImage bin(8, 8, 1);
  bin.at(7, 4) = 0;
  CHECK_THROWS_AS(plan_path(bin, {0, 4}, {4.0, 7.0}, {}), std::invalid_argument);
}

TEST_CASE("plans terminate within the step budget") {
  // Attraction against a wall the planner cannot pass: must stop Blocked or
  // Stalled, never loop.
  BinaryImage bin(64, 64, 1);
  for (int x = 0; x < 64; ++x) bin.at(30, x) = 0;
  APFConfig cfg;
  cfg.max_steps = 50;
  const PathPlan plan = plan_path(bin, {5, 32}, {32.0, 60.0}, cfg);
  CHECK(plan.status != PlanStatus::Reached);
  CHECK(plan.positions.size() <= 51);
}

TEST_CASE("scaling both gains leaves the waypoints unchanged") {
  BinaryImage bin(64, 64, 1);
  for (int y = 20; y < 30; ++y) {
    for (int x = 25; x < 35; ++x) bin.at(y, x) = 0;
  }
  APFConfig cfg;
  cfg.mu_a = 1.0;
  cfg.mu_r = 0.05;
  cfg.step_px = 3.0;
  const PathPlan base = plan_path(bin, {5, 40}, {40.0, 60.0}, cfg);
  APFConfig scaled = cfg;
  scaled.mu_a *= 7.5;
  scaled.mu_r *= 7.5;
  const PathPlan same = plan_path(bin, {5, 40}, {40.0, 60.0}, scaled);
  CHECK(base.status == same.status);
  REQUIRE(base.positions.size() == same.positions.size());
  for (std::size_t i = 0; i < base.positions.size(); ++i) {
    CHECK(base.positions[i].x == doctest::Approx(same.positions[i].x).epsilon(1e-9));
    CHECK(base.positions[i].y == doctest::Approx(same.positions[i].y).epsilon(1e-9));
  }
}

TEST_CASE("mirrored worlds produce mirrored paths") {
  // Symmetric 63-wide map, start on the centre column; mirror x -> 62 - x.
  std::mt19937 rng(88);
  for (int trial = 0; trial < 10; ++trial) {
    BinaryImage bin(63, 64, 1);
    for (int b = 0; b < 3; ++b) {
      const int bw = 4 + rng() % 8;
      const int bh = 4 + rng() % 8;
      const int bx = rng() % (63 - bw);
      const int by = 8 + rng() % 30;
      for (int y = by; y < by + bh; ++y) {
        for (int x = bx; x < bx + bw; ++x) bin.at(y, x) = 0;
      }
    }
    const PointD start{31.0, 62.0};
    if (bin.at(62, 31) != 1) continue;
    const int dest_col = 10 + static_cast<int>(rng() % 43);
    if (bin.at(2, dest_col) != 1 || bin.at(2, 62 - dest_col) != 1) continue;

    BinaryImage mirrored(63, 64, 1);
    for (int y = 0; y < 64; ++y) {
      for (int x = 0; x < 63; ++x) mirrored.at(y, x) = bin.at(y, 62 - x);
    }
    APFConfig cfg;
    cfg.mu_r = 0.05;
    cfg.step_px = 3.0;
    cfg.max_steps = 300;
    const PathPlan plan = plan_path(bin, {2, dest_col}, start, cfg);
    const PathPlan twin = plan_path(mirrored, {2, 62 - dest_col}, start, cfg);
    CHECK(plan.status == twin.status);
    REQUIRE(plan.positions.size() == twin.positions.size());
    for (std::size_t i = 0; i < plan.positions.size(); ++i) {
      CHECK(plan.positions[i].x == doctest::Approx(62.0 - twin.positions[i].x).epsilon(1e-6));
      CHECK(plan.positions[i].y == doctest::Approx(twin.positions[i].y).epsilon(1e-6));
    }
  }
}

TEST_CASE("reached plans are collision-free under the dense audit") {
  std::mt19937 rng(89);
  int reached = 0;
  for (int trial = 0; trial < 30; ++trial) {
    BinaryImage bin(64, 64, 1);
    for (int b = 0; b < 2; ++b) {
      const int bw = 4 + rng() % 6;
      const int bh = 4 + rng() % 6;
      const int bx = rng() % (64 - bw);
      const int by = 5 + rng() % 40;
      for (int y = by; y < by + bh; ++y) {
        for (int x = bx; x < bx + bw; ++x) bin.at(y, x) = 0;
      }
    }
    if (bin.at(63, 32) != 1) continue;
    const auto dest = find_destination(bin, {1.0 / 24.0});
    if (!dest) continue;
    APFConfig cfg;
    cfg.mu_r = 0.02;
    cfg.step_px = 2.0;
    cfg.max_steps = 400;
    const PathPlan plan = plan_path(bin, *dest, {32.0, 63.0}, cfg);
    if (plan.status == PlanStatus::Reached) {
      ++reached;
      CHECK(oracles::path_collision_free(bin, plan.positions));
    }
  }
  CHECK(reached > 5);
}

TEST_CASE("avoidance steps hand out five waypoints or a rotation") {
  const BinaryImage open(64, 64, 1);
  APFConfig cfg;
  cfg.step_px = 3.0;
  const AvoidanceStep go = avoidance_step(open, cfg, {}, default_start(open));
  REQUIRE(std::holds_alternative<ProceedDirective>(go.directive));
  const auto& proceed = std::get<ProceedDirective>(go.directive);
  CHECK(proceed.waypoints.size() == 5);
  CHECK(proceed.waypoints[0].y < 63.0);  // moving towards the top

  BinaryImage blocked_bottom(64, 64, 1);
  for (int x = 0; x < 64; ++x) blocked_bottom.at(63, x) = 0;
  const AvoidanceStep r0 = avoidance_step(blocked_bottom, cfg, {}, {32.0, 63.0}, 0);
  REQUIRE(std::holds_alternative<RotateDirective>(r0.directive));
  CHECK(std::get<RotateDirective>(r0.directive).degrees == doctest::Approx(15.0));
  const AvoidanceStep r1 = avoidance_step(blocked_bottom, cfg, {}, {32.0, 63.0}, 1);
  CHECK(std::get<RotateDirective>(r1.directive).degrees == doctest::Approx(-15.0));

  // A wall with an off-centre gap: the destination lands above it, the pull
  // runs straight into the wall, and the blocked plan turns into a rotation.
  BinaryImage walled(64, 64, 1);
  for (int x = 8; x < 64; ++x) walled.at(30, x) = 0;
  APFConfig ram = cfg;
  ram.mu_r = 1e-6;  // attraction dominates; the wall is hit, not skirted
  const AvoidanceStep w = avoidance_step(walled, ram, {}, default_start(walled));
  REQUIRE(w.plan.has_value());
  CHECK(w.plan->status == PlanStatus::Blocked);
  CHECK(std::holds_alternative<RotateDirective>(w.directive));
}

TEST_SUITE_END();
