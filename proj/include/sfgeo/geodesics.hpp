#pragma once

#include "sfgeo/curves.hpp"
#include "sfgeo/surfaces.hpp"

#include <string>
#include <vector>

namespace sfgeo {

/// Intrinsic state of a unit-speed curve on a concircular surface:
/// T = sin(theta) X_t/sqrt(E) + cos(theta) X_z.
struct GeodesicState {
  double t;
  double z;
  double theta;
};

struct GeodesicSolution {
  std::vector<double> s;
  std::vector<GeodesicState> states;
  std::vector<Vec> embedded;
  std::vector<double> kappa_pred, tau_pred;
  int sigma = 1;   // sign branch of N_gamma vs the surface normal
  int sigma0 = 1;  // orientation of the completed binormal
};

double metric_E(const ConcircularSurface& S, double t, double z);

/// Integrates the geodesic system
///   t' = sin(theta)/sqrt(E),  z' = cos(theta),
///   theta' = t' (C R g(z/R) + f(z/R)(sin(a) m + cos(a) kappa_delta(t)))
/// and embeds the solution. kappa_pred and tau_pred carry the predicted
/// curvature sin(theta) t' (m cos a - sin a kappa_delta) and torsion
/// cos(theta) t' (-m cos a + sin a kappa_delta), with the normal and
/// orientation sign branches resolved at the start of the run.
GeodesicSolution integrate_geodesic(const ConcircularSurface& S, const GeodesicState& init,
                                    double s_start, double s_end, double step = kDefaultStep);

struct GeodesicDefect {
  double tangential;           // max || tangential part of (gamma'' + C gamma) ||
  double collinearity_angle;   // max angle between gamma'' + C gamma and the surface normal
};

GeodesicDefect geodesic_defect(const ConcircularSurface& S, const GeodesicSolution& sol);

/// Frenet apparatus on the embedded curve checked against the surface's axis:
/// a certified geodesic is a concircular helix.
HelixMeasure geodesic_is_helix(const ConcircularSurface& S, const GeodesicSolution& sol,
                               double kappa_floor = 1e-3);

struct RoundtripTolerances {
  double structure = 1e-4;
  double section = 1e-10;
  double section_geodesic = 1e-5;
  double reintegration = 1e-4;
};

struct RoundtripReport {
  bool pass = false;
  std::string failed_stage;  // empty when pass
  std::string detail;
  double case2_r1 = 0.0, case2_r2 = 0.0;
  double lambda = 0.0;
  double section_gap = 0.0;
  double section_geodesic_defect = 0.0;
  double reintegration_gap = 0.0;
  double window_coverage = 0.0;  // fraction of the helix range realized by the profile
};

/// The constructive direction of the helix/geodesic equivalence: build the
/// ruled surface over the helix, certify the z = 0 section is the curve and a
/// geodesic of the patch, then re-integrate the geodesic system on the
/// canonical-form surface and match the original curve.
RoundtripReport helix_roundtrip(const FrenetCurve& helix, double lambda,
                                const std::vector<double>& mu,
                                const RoundtripTolerances& tol = {});

}  // namespace sfgeo
