#pragma once

#include "sfgeo/concircular.hpp"
#include "sfgeo/curves.hpp"
#include "sfgeo/geodesics.hpp"
#include "sfgeo/surfaces.hpp"

#include <random>
#include <string>
#include <vector>

namespace sfgeo {

/// Seeded generators for the randomized certification corpora.
namespace corpus {

using Rng = std::mt19937_64;

SpaceForm random_space_form(Rng& rng);
ManifoldPoint random_point(const SpaceForm& sf, Rng& rng);
TangentVector random_unit_tangent(const SpaceForm& sf, const ManifoldPoint& p, Rng& rng);
ConcircularField random_field(const SpaceForm& sf, Rng& rng);

/// The designated non-concircular control: W(p) = (e2 <p, e3>)^tangential.
Vec negative_control_field(const SpaceForm& sf, const ManifoldPoint& p);

/// Gentle random curvature/torsion spec with kappa in [kappa_min, kappa_max].
CurveSpec random_smooth_spec(const SpaceForm& sf, Rng& rng, double kappa_min, double kappa_max,
                             double s_max);

UmbilicalSurface random_umbilical(const SpaceForm& sf, Rng& rng);
ConcircularSurface random_surface(const SpaceForm& sf, Rng& rng, double step);
HelixCase1Spec random_case1_spec(const SpaceForm& sf, Rng& rng);

/// Random geodesic on S whose predicted curvature stays >= kappa_floor;
/// throws after too many rejected draws.
GeodesicSolution random_geodesic(const ConcircularSurface& S, Rng& rng, double step,
                                 double kappa_floor = 0.05);

/// Joint draw with surface redraws: some surfaces admit no geodesic whose
/// curvature stays away from zero.
std::pair<ConcircularSurface, GeodesicSolution> random_surface_with_geodesic(
    const SpaceForm& sf, Rng& rng, double step, double kappa_floor = 0.05);

/// Umbilical chart point pushed off Q along eta2 by a smooth bump and
/// reprojected to M; genuinely non-umbilical.
Vec bump_patch(const UmbilicalSurface& Q, double amplitude, double u, double v);

}  // namespace corpus

/// Ruling z -> Psi(t0, z): tangential-ambient acceleration defect (the ruling
/// is an ambient geodesic) and misalignment of the axis' tangential part with
/// the ruling direction.
struct RulingCheck {
  double geodesic_defect;
  double axis_alignment_defect;
};
RulingCheck ruling_check(const ConcircularSurface& S, double t0, int nz = 9);

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

/// The full certification table: concircular-field identities, the field-space
/// dimension, the umbilical dichotomy, ruling geodesics, the ruled-surface
/// classification, the conical vertex, the geodesic curvature/torsion
/// formulas, and the helix/geodesic equivalence in both directions.
std::vector<CheckResult> run_theorem_checks(unsigned long long seed, double step);

}  // namespace sfgeo
