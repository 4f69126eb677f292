#include "gridnav/apf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace gridnav {

PolarOffset polar_to(PointD robot, PointD target) {
  const double lateral = target.x - robot.x;
  const double forward = robot.y - target.y;  // -y is forward
  const double d = std::hypot(lateral, forward);
  if (d == 0.0) throw std::invalid_argument("polar_to: coincident points");
  return {d, std::atan2(lateral, forward)};
}

ForceVec repulsive_force(PointD robot, std::span<const Obstacle> obstacles, double mu_r) {
  double lateral = 0.0;
  double forward = 0.0;
  for (const Obstacle& obs : obstacles) {
    const double dx = obs.centroid_x - robot.x;
    const double dy = robot.y - obs.centroid_y;
    const double d2 = dx * dx + dy * dy;
    if (d2 == 0.0) {
      throw std::invalid_argument("repulsive_force: obstacle centroid coincides with robot");
    }
    const double d = std::sqrt(d2);
    // (1/d^2) * (sin, cos) with sin = dx/d, cos = dy/d.
    lateral += dx / (d2 * d);
    forward += dy / (d2 * d);
  }
  return {mu_r * lateral, mu_r * forward};
}

ForceVec attractive_force(PointD robot, PointD dest, double mu_a) {
  const double dx = dest.x - robot.x;
  const double dy = robot.y - dest.y;
  const double d2 = dx * dx + dy * dy;
  if (d2 == 0.0) throw std::invalid_argument("attractive_force: destination coincides with robot");
  const double d = std::sqrt(d2);
  return {mu_a * dx / (d2 * d), mu_a * dy / (d2 * d)};
}

ForceVec resultant(ForceVec attractive, ForceVec repulsive) {
  return {attractive.lateral - repulsive.lateral, attractive.forward - repulsive.forward};
}

namespace {

constexpr double kCornerEps = 1e-12;

void push_cell(std::vector<PixelCoord>& cells, int x, int y) { cells.push_back({x, y}); }

}  // namespace

std::vector<PixelCoord> supercover_cells(PointD a, PointD b) {
  // Shift by +0.5 so cell (i, j) covers [i, i+1) x [j, j+1).
  const double u0 = a.x + 0.5, v0 = a.y + 0.5;
  const double u1 = b.x + 0.5, v1 = b.y + 0.5;

  int ix = static_cast<int>(std::floor(u0));
  int iy = static_cast<int>(std::floor(v0));
  const int ix_end = static_cast<int>(std::floor(u1));
  const int iy_end = static_cast<int>(std::floor(v1));

  std::vector<PixelCoord> cells;
  push_cell(cells, ix, iy);

  const double du = u1 - u0;
  const double dv = v1 - v0;
  const int step_x = du > 0.0 ? 1 : (du < 0.0 ? -1 : 0);
  const int step_y = dv > 0.0 ? 1 : (dv < 0.0 ? -1 : 0);
  if (step_x == 0 && step_y == 0) return cells;

  const double inf = std::numeric_limits<double>::infinity();
  const double t_delta_x = step_x != 0 ? 1.0 / std::abs(du) : inf;
  const double t_delta_y = step_y != 0 ? 1.0 / std::abs(dv) : inf;
  double t_max_x = inf;
  double t_max_y = inf;
  if (step_x > 0) t_max_x = (std::floor(u0) + 1.0 - u0) / du;
  if (step_x < 0) t_max_x = (u0 - std::floor(u0)) / -du;
  if (step_y > 0) t_max_y = (std::floor(v0) + 1.0 - v0) / dv;
  if (step_y < 0) t_max_y = (v0 - std::floor(v0)) / -dv;

  // Bounded walk; the +4 covers the corner double-steps at either end.
  int guard = 2 * (std::abs(ix_end - ix) + std::abs(iy_end - iy)) + 4;
  while ((ix != ix_end || iy != iy_end) && guard-- > 0) {
    if (std::abs(t_max_x - t_max_y) < kCornerEps && step_x != 0 && step_y != 0) {
      // Exact corner crossing: the segment touches both side cells.
      push_cell(cells, ix + step_x, iy);
      push_cell(cells, ix, iy + step_y);
      ix += step_x;
      iy += step_y;
      t_max_x += t_delta_x;
      t_max_y += t_delta_y;
    } else if (t_max_x < t_max_y) {
      ix += step_x;
      t_max_x += t_delta_x;
    } else {
      iy += step_y;
      t_max_y += t_delta_y;
    }
    push_cell(cells, ix, iy);
  }
  return cells;
}

PointD default_start(const BinaryImage& bin) {
  return {static_cast<double>(bin.width() / 2), static_cast<double>(bin.height() - 1)};
}

namespace {

bool cell_is_road(const BinaryImage& bin, int x, int y) {
  if (x < 0 || x >= bin.width() || y < 0 || y >= bin.height()) return true;  // nothing out there
  return bin.at(y, x) == 1;
}

bool point_on_road(const BinaryImage& bin, PointD p) {
  const int x = static_cast<int>(std::llround(p.x));
  const int y = static_cast<int>(std::llround(p.y));
  if (x < 0 || x >= bin.width() || y < 0 || y >= bin.height()) return false;
  return bin.at(y, x) == 1;
}

bool segment_clear(const BinaryImage& bin, PointD from, PointD to) {
  for (const PixelCoord& c : supercover_cells(from, to)) {
    if (!cell_is_road(bin, c.x, c.y)) return false;
  }
  return true;
}

}  // namespace

PathPlan plan_path(const BinaryImage& bin, Destination dest, PointD start,
                   const APFConfig& cfg) {
  if (!point_on_road(bin, start)) {
    throw std::invalid_argument("plan_path: start is not a road pixel");
  }

  const PointD goal{static_cast<double>(dest.col), static_cast<double>(dest.row)};
  const std::vector<Obstacle> obstacles = connected_components(bin);

  PathPlan plan;
  plan.positions.push_back(start);
  PointD pos = start;

  for (int step = 0; step < cfg.max_steps; ++step) {
    if (std::hypot(goal.x - pos.x, goal.y - pos.y) <= cfg.reach_px) {
      plan.status = PlanStatus::Reached;
      return plan;
    }
    const ForceVec force =
        resultant(attractive_force(pos, goal, cfg.mu_a),
                  repulsive_force(pos, obstacles, cfg.mu_r));
    const double magnitude = std::hypot(force.lateral, force.forward);
    if (magnitude < cfg.min_force) {
      plan.forces.push_back(force);
      plan.status = PlanStatus::Stalled;
      return plan;
    }
    PointD next{pos.x + cfg.step_px * force.lateral / magnitude,
                pos.y - cfg.step_px * force.forward / magnitude};
    next.x = std::clamp(next.x, 0.0, static_cast<double>(bin.width() - 1));
    next.y = std::clamp(next.y, 0.0, static_cast<double>(bin.height() - 1));

    if (!segment_clear(bin, pos, next)) {
      plan.forces.push_back(force);
      plan.status = PlanStatus::Blocked;
      return plan;
    }
    plan.forces.push_back(force);
    plan.positions.push_back(next);
    pos = next;
  }
  plan.status = PlanStatus::Stalled;  // step budget exhausted
  return plan;
}

AvoidanceStep avoidance_step(const BinaryImage& bin, const APFConfig& apf_cfg,
                             const DestinationConfig& dest_cfg, PointD start,
                             int retry_index) {
  const double rotation = (retry_index % 2 == 0 ? 1.0 : -1.0) * apf_cfg.rotate_deg;

  AvoidanceStep result;
  result.destination = find_destination(bin, dest_cfg);
  if (!result.destination || !point_on_road(bin, start)) {
    result.directive = RotateDirective{rotation};
    return result;
  }

  result.plan = plan_path(bin, *result.destination, start, apf_cfg);
  if (result.plan->status != PlanStatus::Reached) {
    result.directive = RotateDirective{rotation};
    return result;
  }

  ProceedDirective proceed;
  const std::size_t available = result.plan->positions.size() - 1;
  const std::size_t take = std::min<std::size_t>(available, apf_cfg.steps_per_replan);
  proceed.waypoints.assign(result.plan->positions.begin() + 1,
                           result.plan->positions.begin() + 1 + take);
  result.directive = std::move(proceed);
  return result;
}

}  // namespace gridnav
