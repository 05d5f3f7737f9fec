#pragma once

#include "sfgeo/curves.hpp"
#include "sfgeo/geodesics.hpp"
#include "sfgeo/surfaces.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace sfgeo {

using Json = nlohmann::json;

// Curve file:
// { "space_form": {"C": ...}, "grid": [...], "points": [[x1..x4]...],
//   "frames": {"T": [...], "N": [...], "B": [...]}, "kappa": [...],
//   "tau": [...], "axis_p0": [x1..x4] (optional) }
Json curve_to_json(const FrenetCurve& curve, const Vec* axis_p0 = nullptr);
FrenetCurve curve_from_json(const Json& j, std::optional<Vec>* axis_out = nullptr);

// Surface file:
// { "umbilical": {"C":, "p0_hat": [...], "d":, "k":, "c":}, "angle_a":,
//   "profile": <curve schema with T = T_delta, N = N_delta, B = eta2,
//               kappa = kappa_delta, tau = 0>, "z_range": [z0, z1] }
Json surface_to_json(const ConcircularSurface& S);
ConcircularSurface surface_from_json(const Json& j);

// Geodesic file:
// { "surface": <inline surface>, "init": {"t":, "z":, "theta":},
//   "grid": [...], "states": [[t,z,theta]...], "kappa_pred": [...],
//   "tau_pred": [...] }
Json geodesic_to_json(const ConcircularSurface& S, const GeodesicState& init,
                      const GeodesicSolution& sol);

/// Fixed columns s,x1..x4,T1..T4,N1..N4,B1..B4,kappa,tau with a header row;
/// values printed with 17 significant digits for byte-stable goldens.
std::string curve_to_csv(const FrenetCurve& curve);

/// Row-major (t, z) lattice, quads split into two triangles. Vertices are the
/// stereographic image x_{i>=2}/(1 + x1); for nu = 1 this is the Poincare
/// ball model.
std::string surface_to_obj(const ConcircularSurface& S, int nt, int nz);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace sfgeo
