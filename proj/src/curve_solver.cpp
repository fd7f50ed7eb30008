#include "gbflow/curve_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "gbflow/errors.hpp"

namespace gbflow {

namespace {

constexpr double kMinSegment = 1e-12;
constexpr double kCurvatureOverflow = 1e8;

double min_edge_length(const std::vector<Vec2>& pts) {
  const std::size_t m = pts.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 e = pts[(i + 1) % m] - pts[i];
    best = std::min(best, e.norm());
  }
  return best;
}

double normal_angle(const Vec2& n) { return std::atan2(n.y, n.x); }

// Discrete integral of sigma_alpha over the polygon.
double alpha_drive(const PolygonGeometry& geo, const AnisotropicSigma& model,
                   const std::vector<double>& theta, double alpha) {
  double sum = 0.0;
  for (std::size_t i = 0; i < geo.vertex_ds.size(); ++i)
    sum += model.d_alpha(theta[i], alpha) * geo.vertex_ds[i];
  return sum;
}

double polygon_energy(const PolygonGeometry& geo, const AnisotropicSigma& model,
                      const std::vector<double>& theta, double alpha) {
  double sum = 0.0;
  for (std::size_t i = 0; i < geo.vertex_ds.size(); ++i)
    sum += model.eval(theta[i], alpha) * geo.vertex_ds[i];
  return sum;
}

std::vector<double> vertex_normal_angles(const PolygonGeometry& geo) {
  std::vector<double> theta(geo.unit_normal.size());
  for (std::size_t i = 0; i < theta.size(); ++i)
    theta[i] = normal_angle(geo.unit_normal[i]);
  return theta;
}

CurveDiagnosticsRow make_curve_row(const CurveState& curve,
                                   const PolygonGeometry& geo,
                                   const AnisotropicSigma& model) {
  CurveDiagnosticsRow row;
  row.t = curve.t;
  row.alpha = curve.alpha;
  row.perimeter = geo.total_length;
  const std::vector<double> theta = vertex_normal_angles(geo);
  row.energy = polygon_energy(geo, model, theta, curve.alpha);
  Vec2 centroid{0.0, 0.0};
  for (const Vec2& p : curve.pts) centroid += p;
  centroid = centroid / static_cast<double>(curve.pts.size());
  double r_origin = 0.0, r_centroid = 0.0;
  for (const Vec2& p : curve.pts) {
    r_origin = std::max(r_origin, p.norm());
    r_centroid = std::max(r_centroid, (p - centroid).norm());
  }
  row.r_origin = r_origin;
  row.r_centroid = r_centroid;
  row.min_segment =
      *std::min_element(geo.edge_length.begin(), geo.edge_length.end());
  double sup_kappa = 0.0;
  for (double k : geo.curvature) sup_kappa = std::max(sup_kappa, std::abs(k));
  row.sup_kappa = sup_kappa;
  return row;
}

// Segment intersection with strict crossing test.
bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    return (q - p).cross(r - p);
  };
  const double o1 = orient(a, b, c);
  const double o2 = orient(a, b, d);
  const double o3 = orient(c, d, a);
  const double o4 = orient(c, d, b);
  return ((o1 > 0.0) != (o2 > 0.0)) && ((o3 > 0.0) != (o4 > 0.0)) &&
         o1 != 0.0 && o2 != 0.0 && o3 != 0.0 && o4 != 0.0;
}

void check_anisotropic_stiffness(const AnisotropicSigma& model, double alpha) {
  if (model.isotropic) return;
  const int samples = 256;
  for (int i = 0; i < samples; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / samples;
    if (!(stiffness(model, theta, alpha) > 0.0))
      throw ConfigError(
          "anisotropic stiffness sigma_thetatheta + sigma is nonpositive at "
          "theta = " +
          std::to_string(theta) + "; the evolution law is ill-posed there");
  }
}

}  // namespace

CurveState CurveState::make(std::vector<Vec2> pts, double alpha, double t,
                            bool check_simple) {
  if (pts.size() < 16) throw GeometryError("curve needs at least 16 vertices");
  if (min_edge_length(pts) <= kMinSegment)
    throw GeometryError("curve has consecutive vertices closer than 1e-12");
  if (check_simple && polygon_self_intersects(pts))
    throw GeometryError("initial curve is not simple");
  CurveState c;
  c.pts = std::move(pts);
  c.alpha = alpha;
  c.t = t;
  return c;
}

CurveState make_circle(double radius, int m, Vec2 center, double alpha) {
  if (!(radius > 0.0)) throw GeometryError("circle radius must be positive");
  std::vector<Vec2> pts(m);
  for (int i = 0; i < m; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / m;
    pts[i] = {center.x + radius * std::cos(phi), center.y + radius * std::sin(phi)};
  }
  return CurveState::make(std::move(pts), alpha, 0.0, false);
}

CurveState make_ellipse(double a, double b, int m, Vec2 center, double alpha) {
  if (!(a > 0.0 && b > 0.0)) throw GeometryError("ellipse axes must be positive");
  std::vector<Vec2> pts(m);
  for (int i = 0; i < m; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / m;
    pts[i] = {center.x + a * std::cos(phi), center.y + b * std::sin(phi)};
  }
  return CurveState::make(std::move(pts), alpha, 0.0, false);
}

PolygonGeometry polygon_geometry(const CurveState& curve) {
  const std::vector<Vec2>& p = curve.pts;
  const std::size_t m = p.size();
  PolygonGeometry geo;
  geo.edge_length.resize(m);
  geo.vertex_ds.resize(m);
  geo.unit_tangent.resize(m);
  geo.unit_normal.resize(m);
  geo.curvature.resize(m);

  std::vector<Vec2> dir(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 e = p[(i + 1) % m] - p[i];
    const double len = e.norm();
    if (len <= kMinSegment)
      throw GeometryError("degenerate polygon edge (repeated vertex)");
    geo.edge_length[i] = len;
    dir[i] = e / len;
    geo.total_length += len;
  }

  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t im = (i == 0) ? m - 1 : i - 1;
    geo.vertex_ds[i] = 0.5 * (geo.edge_length[im] + geo.edge_length[i]);
    const double turn = std::atan2(dir[im].cross(dir[i]), dir[im].dot(dir[i]));
    geo.curvature[i] = 2.0 * std::sin(0.5 * turn) / geo.vertex_ds[i];
    Vec2 bis = dir[im] + dir[i];
    const double bn = bis.norm();
    geo.unit_tangent[i] = (bn > kMinSegment) ? bis / bn : dir[i];
    geo.unit_normal[i] = geo.unit_tangent[i].rot90();
  }
  return geo;
}

double curve_stable_dt(const CurveState& curve, const Params& params,
                       const AnisotropicSigma& model) {
  const PolygonGeometry geo = polygon_geometry(curve);
  const std::vector<double> theta = vertex_normal_angles(geo);
  double max_s = 0.0;
  for (double th : theta)
    max_s = std::max(max_s, std::abs(stiffness(model, th, curve.alpha)));
  if (max_s == 0.0) return std::numeric_limits<double>::infinity();
  const double min_seg =
      *std::min_element(geo.edge_length.begin(), geo.edge_length.end());
  return params.cfl_safety * min_seg * min_seg / (params.mu * max_s);
}

CurveState step_curve(const CurveState& curve, double dt, const Params& params,
                      const AnisotropicSigma& model) {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  const double limit = curve_stable_dt(curve, params, model);
  if (dt > limit * (1.0 + 1e-9))
    throw ConfigError("curve step dt " + std::to_string(dt) +
                      " exceeds the CFL limit " + std::to_string(limit));

  const PolygonGeometry geo = polygon_geometry(curve);
  const std::vector<double> theta = vertex_normal_angles(geo);

  const double drive0 = alpha_drive(geo, model, theta, curve.alpha);
  const double predictor = curve.alpha - dt * params.gamma * drive0;
  const double drive1 = alpha_drive(geo, model, theta, predictor);
  const double alpha_next =
      curve.alpha - 0.5 * dt * params.gamma * (drive0 + drive1);
  const double alpha_half = 0.5 * (curve.alpha + alpha_next);

  CurveState next;
  next.alpha = alpha_next;
  next.t = curve.t + dt;
  next.pts.resize(curve.pts.size());
  for (std::size_t i = 0; i < curve.pts.size(); ++i) {
    const double s = stiffness(model, theta[i], alpha_half);
    if (!model.isotropic && !(s > 0.0))
      throw ConfigError(
          "anisotropic stiffness is nonpositive at a vertex normal angle");
    const double speed = params.mu * s * geo.curvature[i];
    next.pts[i] = curve.pts[i] + geo.unit_normal[i] * (dt * speed);
    if (!std::isfinite(next.pts[i].x) || !std::isfinite(next.pts[i].y))
      throw DivergenceError("non-finite vertex after curve step", 0, next.t);
  }
  return next;
}

CurveState step_curve(const CurveState& curve, double dt, const Params& params,
                      const SigmaModel& model) {
  return step_curve(curve, dt, params, AnisotropicSigma::lift(model));
}

std::string to_string(CurveStatus status) {
  switch (status) {
    case CurveStatus::ReachedTEnd:
      return "reached_t_end";
    case CurveStatus::ExtinctPerimeter:
      return "extinct";
    case CurveStatus::CurvatureOverflow:
      return "curvature_overflow";
    case CurveStatus::TopologyBreakdown:
      return "topology_breakdown";
  }
  return "unknown";
}

CurveRunResult run_curve(const CurveState& curve0, const Params& params,
                         const AnisotropicSigma& model, std::size_t reparam_every,
                         std::size_t snapshot_every, double extinction_threshold) {
  if (reparam_every < 1) throw ConfigError("reparam_every must be >= 1");
  if (snapshot_every < 1) throw ConfigError("snapshot_every must be >= 1");
  if (params.t_end < 0.0) throw ConfigError("t_end must be nonnegative");
  check_anisotropic_stiffness(model, curve0.alpha);
  if (polygon_self_intersects(curve0.pts))
    throw GeometryError("initial curve is not simple");

  CurveState state = curve0;
  CurveRunResult out;
  out.trajectory.params = params;

  PolygonGeometry geo = polygon_geometry(state);
  const double initial_min_seg =
      *std::min_element(geo.edge_length.begin(), geo.edge_length.end());
  const double threshold = extinction_threshold > 0.0 ? extinction_threshold
                                                      : 10.0 * initial_min_seg;
  out.report.extinction_threshold = threshold;

  out.trajectory.rows.push_back(make_curve_row(state, geo, model));
  out.trajectory.snapshots.push_back({0, state.t, state.alpha, state.pts});

  const double t_tol = 1e-12 * std::max(1.0, params.t_end);
  std::size_t step_idx = 0;
  CurveStatus status = CurveStatus::ReachedTEnd;

  while (state.t < params.t_end - t_tol) {
    const CurveDiagnosticsRow& last = out.trajectory.rows.back();
    if (last.perimeter < threshold) {
      status = CurveStatus::ExtinctPerimeter;
      break;
    }
    if (last.sup_kappa > kCurvatureOverflow || !std::isfinite(last.sup_kappa)) {
      status = CurveStatus::CurvatureOverflow;
      break;
    }

    double dt = std::min(params.dt, params.t_end - state.t);
    if (!params.force_dt) dt = std::min(dt, curve_stable_dt(state, params, model));
    if (!(dt > 0.0) || state.t + dt == state.t)
      throw ConfigError("step size collapsed to zero; check the sigma model");

    state = step_curve(state, dt, params, model);
    ++step_idx;

    if (step_idx % reparam_every == 0) {
      if (polygon_self_intersects(state.pts)) {
        status = CurveStatus::TopologyBreakdown;
        geo = polygon_geometry(state);
        out.trajectory.rows.push_back(make_curve_row(state, geo, model));
        break;
      }
      state.pts = reparametrize_equal_arclength(state.pts);
    }

    geo = polygon_geometry(state);
    out.trajectory.rows.push_back(make_curve_row(state, geo, model));
    if (step_idx % snapshot_every == 0)
      out.trajectory.snapshots.push_back({step_idx, state.t, state.alpha, state.pts});
  }

  if (out.trajectory.snapshots.back().step != step_idx)
    out.trajectory.snapshots.push_back({step_idx, state.t, state.alpha, state.pts});

  out.report.status = status;
  out.report.time = state.t;
  out.report.final_perimeter = out.trajectory.rows.back().perimeter;
  return out;
}

CurveRunResult run_curve(const CurveState& curve0, const Params& params,
                         const SigmaModel& model, std::size_t reparam_every,
                         std::size_t snapshot_every, double extinction_threshold) {
  return run_curve(curve0, params, AnisotropicSigma::lift(model), reparam_every,
                   snapshot_every, extinction_threshold);
}

double line_tension_residual(const CurveState& curve, const AnisotropicSigma& model,
                             double alpha) {
  const PolygonGeometry geo = polygon_geometry(curve);
  const std::size_t m = curve.pts.size();
  const std::vector<double> theta = vertex_normal_angles(geo);

  std::vector<Vec2> tension(m);
  for (std::size_t i = 0; i < m; ++i) {
    tension[i] = geo.unit_normal[i] * model.d_theta(theta[i], alpha) +
                 geo.unit_tangent[i] * model.eval(theta[i], alpha);
  }

  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t ip = (i + 1) % m;
    const std::size_t im = (i == 0) ? m - 1 : i - 1;
    const double ds = geo.edge_length[im] + geo.edge_length[i];
    const Vec2 tension_s = (tension[ip] - tension[im]) / ds;
    const Vec2 expected =
        geo.unit_normal[i] * (stiffness(model, theta[i], alpha) * geo.curvature[i]);
    worst = std::max(worst, (tension_s - expected).norm());
  }
  return worst;
}

std::vector<Vec2> reparametrize_equal_arclength(const std::vector<Vec2>& pts) {
  const std::size_t m = pts.size();
  std::vector<double> s(m + 1);
  s[0] = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    s[i + 1] = s[i] + (pts[(i + 1) % m] - pts[i]).norm();
  const double total = s[m];

  std::vector<Vec2> out(m);
  out[0] = pts[0];
  std::size_t seg = 0;
  for (std::size_t j = 1; j < m; ++j) {
    const double target = total * static_cast<double>(j) / m;
    while (seg + 1 < m && s[seg + 1] < target) ++seg;
    const double w = (target - s[seg]) / (s[seg + 1] - s[seg]);
    const Vec2& a = pts[seg];
    const Vec2& b = pts[(seg + 1) % m];
    out[j] = a + (b - a) * w;
  }
  return out;
}

bool polygon_self_intersects(const std::vector<Vec2>& pts) {
  const std::size_t m = pts.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2& a = pts[i];
    const Vec2& b = pts[(i + 1) % m];
    for (std::size_t j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;  // adjacent through the wrap
      const Vec2& c = pts[j];
      const Vec2& d = pts[(j + 1) % m];
      if (segments_cross(a, b, c, d)) return true;
    }
  }
  return false;
}

}  // namespace gbflow
