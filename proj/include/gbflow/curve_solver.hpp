#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gbflow/graph_solver.hpp"
#include "gbflow/sigma.hpp"
#include "gbflow/vec2.hpp"

namespace gbflow {

// Closed polygonal curve (implicit wraparound) with its misorientation.
struct CurveState {
  std::vector<Vec2> pts;
  double alpha = 0.0;
  double t = 0.0;

  // Validates m >= 16 and distinct consecutive vertices; optionally checks
  // the polygon is simple (the per-step path never re-verifies this).
  static CurveState make(std::vector<Vec2> pts, double alpha, double t = 0.0,
                         bool check_simple = true);
};

CurveState make_circle(double radius, int m, Vec2 center = {0.0, 0.0},
                       double alpha = 0.0);
CurveState make_ellipse(double a, double b, int m, Vec2 center = {0.0, 0.0},
                        double alpha = 0.0);

struct PolygonGeometry {
  std::vector<double> edge_length;   // |p_{i+1} - p_i|
  std::vector<double> vertex_ds;     // (|e_{i-1}| + |e_i|) / 2
  std::vector<Vec2> unit_tangent;    // edge-direction bisector at the vertex
  std::vector<Vec2> unit_normal;     // tangent rotated by +pi/2
  std::vector<double> curvature;     // turning-angle formula, signed
  double total_length = 0.0;
};

// Vertex curvature by the three-point turning-angle formula
//   kappa_i = 2 sin(dtheta_i / 2) / vertex_ds_i,
// sign from the turning direction. Exact 1/R on regular polygons.
PolygonGeometry polygon_geometry(const CurveState& curve);

// Explicit-step limit cfl_safety * (min segment)^2 / (mu * max stiffness).
double curve_stable_dt(const CurveState& curve, const Params& params,
                       const AnisotropicSigma& model);

// Moves each vertex by dt * mu * S * kappa_i along its unit normal, with
// S = sigma_thetatheta + sigma at the vertex normal angle (sigma(alpha) for
// isotropic lifts), alpha taken at the Heun midpoint. alpha itself advances
// by Heun with the discrete integral of sigma_alpha over the polygon.
// Throws on CFL violation; no silent sub-stepping.
CurveState step_curve(const CurveState& curve, double dt, const Params& params,
                      const AnisotropicSigma& model);
CurveState step_curve(const CurveState& curve, double dt, const Params& params,
                      const SigmaModel& model);

struct CurveDiagnosticsRow {
  double t = 0.0;
  double alpha = 0.0;
  double energy = 0.0;
  double perimeter = 0.0;
  double r_origin = 0.0;    // max |p_i|, the origin-centered enclosure radius
  double r_centroid = 0.0;  // max |p_i - centroid|
  double min_segment = 0.0;
  double sup_kappa = 0.0;
};

struct CurveSnapshot {
  std::size_t step = 0;
  double t = 0.0;
  double alpha = 0.0;
  std::vector<Vec2> pts;
};

struct CurveTrajectory {
  Params params;
  std::vector<CurveDiagnosticsRow> rows;
  std::vector<CurveSnapshot> snapshots;
};

enum class CurveStatus {
  ReachedTEnd,
  ExtinctPerimeter,
  CurvatureOverflow,
  TopologyBreakdown,
};

std::string to_string(CurveStatus status);

struct ExtinctionReport {
  CurveStatus status = CurveStatus::ReachedTEnd;
  double time = 0.0;
  double final_perimeter = 0.0;
  double extinction_threshold = 0.0;
};

struct CurveRunResult {
  CurveTrajectory trajectory;
  ExtinctionReport report;
};

// Integrates until t_end or an extinction trigger: perimeter below the
// threshold (default 10x the initial minimum segment) or curvature
// overflow. Every reparam_every steps the vertices are redistributed to
// equal arclength; self-intersection is tested there and stops the run with
// TopologyBreakdown. dt adapts to the CFL limit each step.
CurveRunResult run_curve(const CurveState& curve0, const Params& params,
                         const AnisotropicSigma& model,
                         std::size_t reparam_every = 50,
                         std::size_t snapshot_every = 1,
                         double extinction_threshold = 0.0);
CurveRunResult run_curve(const CurveState& curve0, const Params& params,
                         const SigmaModel& model, std::size_t reparam_every = 50,
                         std::size_t snapshot_every = 1,
                         double extinction_threshold = 0.0);

// Max-norm defect of the line-tension identity
//   T_s = (sigma_thetatheta + sigma) kappa n_hat,  T = sigma_theta n_hat + sigma b_hat,
// with T differentiated along the polygon by centered arclength differences.
// Converges to zero under refinement for smooth curves.
double line_tension_residual(const CurveState& curve, const AnisotropicSigma& model,
                             double alpha);

// Equal-arclength redistribution by linear interpolation along the polygon,
// anchored at vertex 0.
std::vector<Vec2> reparametrize_equal_arclength(const std::vector<Vec2>& pts);

// Coarse O(m^2) segment-pair test, adjacent pairs skipped.
bool polygon_self_intersects(const std::vector<Vec2>& pts);

}  // namespace gbflow
