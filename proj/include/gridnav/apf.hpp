#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "gridnav/destination.hpp"
#include "gridnav/morphology.hpp"
#include "gridnav/raster.hpp"

namespace gridnav {

// Planner geometry: positions are (x, y) pixel coordinates, row 0 at the
// top. The robot's forward axis points towards the image top (-y); angles
// are measured from that axis, positive towards +x, in (-pi, pi].

struct PointD {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const PointD&, const PointD&) = default;
};

struct PolarOffset {
  double distance = 0.0;  // pixels
  double angle = 0.0;     // radians from the forward axis
};

/// Force components along +x (lateral) and -y (forward).
struct ForceVec {
  double lateral = 0.0;
  double forward = 0.0;
  friend bool operator==(const ForceVec&, const ForceVec&) = default;
};

struct APFConfig {
  double mu_r = 1.0;           // repulsive scaling
  double mu_a = 1.0;           // attractive scaling
  double step_px = 5.0;        // step length per iteration
  int max_steps = 1000;
  double reach_px = 2.0;       // arrival radius around the destination
  double min_force = 1e-9;     // stall threshold on |F|
  int steps_per_replan = 5;    // waypoints handed out per Proceed
  double rotate_deg = 15.0;    // rotation magnitude of the retry directive
};

enum class PlanStatus { Reached, Blocked, Stalled };

/// Trace of one planning run. forces[i] is the resultant that produced
/// positions[i+1]; a Blocked or Stalled run keeps the final evaluated force,
/// so forces may have one more entry than executed steps.
struct PathPlan {
  std::vector<PointD> positions;  // starts at the robot start
  std::vector<ForceVec> forces;
  PlanStatus status = PlanStatus::Stalled;
};

struct ProceedDirective {
  std::vector<PointD> waypoints;  // first steps_per_replan positions after start
};

struct RotateDirective {
  double degrees = 0.0;  // signed; sign alternates per retry
};

using Directive = std::variant<ProceedDirective, RotateDirective>;

struct AvoidanceStep {
  std::optional<Destination> destination;
  std::optional<PathPlan> plan;
  Directive directive;
};

/// Distance and bearing of target as seen from robot. Throws on coincident
/// points.
PolarOffset polar_to(PointD robot, PointD target);

/// mu_r * sum_i (1/d_i^2) (sin theta_i, cos theta_i) over obstacle
/// centroids. Empty list gives the zero vector; a centroid coinciding with
/// the robot throws.
ForceVec repulsive_force(PointD robot, std::span<const Obstacle> obstacles, double mu_r);

/// mu_a * (1/d_g^2) (sin theta_g, cos theta_g).
ForceVec attractive_force(PointD robot, PointD dest, double mu_a);

/// F = F_a - F_r.
ForceVec resultant(ForceVec attractive, ForceVec repulsive);

/// Every grid cell the segment from a to b passes through. Cells are the
/// unit squares centred on integer pixel coordinates; touching a cell corner
/// counts as passing through the bordering cells.
std::vector<PixelCoord> supercover_cells(PointD a, PointD b);

/// Iterates force steps of length step_px from start towards dest over the
/// smoothed binary image. Positions are clamped inside the image; a step
/// whose supercover crosses a non-road pixel blocks the plan. The start must
/// lie on road.
PathPlan plan_path(const BinaryImage& bin, Destination dest, PointD start,
                   const APFConfig& cfg);

/// Bottom-centre default start: (floor(w/2), h-1).
PointD default_start(const BinaryImage& bin);

/// find_destination then plan_path. A missing destination, an off-road
/// start, or a plan that does not reach yields RotateAndRescan with the sign
/// alternating by retry_index; otherwise Proceed carries the first
/// steps_per_replan waypoints.
AvoidanceStep avoidance_step(const BinaryImage& bin, const APFConfig& apf_cfg,
                             const DestinationConfig& dest_cfg, PointD start,
                             int retry_index = 0);

}  // namespace gridnav
