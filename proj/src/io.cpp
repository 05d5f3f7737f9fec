#include "sfgeo/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sfgeo {

namespace {

Json vec_to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    a.push_back(v[i]);
  }
  return a;
}

Vec vec_from_json(const Json& j, Eigen::Index expected) {
  if (!j.is_array() || (expected >= 0 && static_cast<Eigen::Index>(j.size()) != expected)) {
    throw std::runtime_error("schema: expected a coordinate array");
  }
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Json column_to_json(const std::vector<Vec>& col) {
  Json a = Json::array();
  for (const Vec& v : col) {
    a.push_back(vec_to_json(v));
  }
  return a;
}

std::vector<Vec> column_from_json(const Json& j, std::size_t n) {
  if (!j.is_array() || j.size() != n) {
    throw std::runtime_error("schema: column length does not match the grid");
  }
  std::vector<Vec> out;
  out.reserve(n);
  for (const Json& e : j) {
    out.push_back(vec_from_json(e, 4));
  }
  return out;
}

std::vector<double> scalars_from_json(const Json& j, std::size_t n) {
  if (!j.is_array() || j.size() != n) {
    throw std::runtime_error("schema: scalar column length does not match the grid");
  }
  std::vector<double> out;
  out.reserve(n);
  for (const Json& e : j) {
    out.push_back(e.get<double>());
  }
  return out;
}

const Json& require(const Json& j, const char* key) {
  if (!j.contains(key)) {
    throw std::runtime_error(std::string("schema: missing key '") + key + "'");
  }
  return j.at(key);
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

Json curve_to_json(const FrenetCurve& curve, const Vec* axis_p0) {
  Json j;
  j["space_form"] = Json{{"C", curve.sf.C()}};
  j["grid"] = curve.s;
  j["points"] = column_to_json(curve.gamma);
  j["frames"] = Json{{"T", column_to_json(curve.T)},
                     {"N", column_to_json(curve.N)},
                     {"B", column_to_json(curve.B)}};
  j["kappa"] = curve.kappa;
  j["tau"] = curve.tau;
  if (axis_p0 != nullptr) {
    j["axis_p0"] = vec_to_json(*axis_p0);
  }
  return j;
}

FrenetCurve curve_from_json(const Json& j, std::optional<Vec>* axis_out) {
  const SpaceForm sf(require(require(j, "space_form"), "C").get<double>());
  const Json& grid = require(j, "grid");
  if (!grid.is_array() || grid.size() < 2) {
    throw std::runtime_error("schema: grid must be an array of at least 2 samples");
  }
  const std::size_t n = grid.size();
  FrenetCurve curve{sf, {}, {}, {}, {}, {}, {}, {}};
  curve.s = scalars_from_json(grid, n);
  curve.gamma = column_from_json(require(j, "points"), n);
  const Json& frames = require(j, "frames");
  curve.T = column_from_json(require(frames, "T"), n);
  curve.N = column_from_json(require(frames, "N"), n);
  curve.B = column_from_json(require(frames, "B"), n);
  curve.kappa = scalars_from_json(require(j, "kappa"), n);
  curve.tau = scalars_from_json(require(j, "tau"), n);
  if (axis_out != nullptr) {
    if (j.contains("axis_p0")) {
      *axis_out = vec_from_json(j.at("axis_p0"), 4);
    } else {
      axis_out->reset();
    }
  }
  return curve;
}

Json surface_to_json(const ConcircularSurface& S) {
  const UmbilicalSurface& Q = S.umbilical();
  Json j;
  j["umbilical"] = Json{{"C", S.space_form().C()},
                        {"p0_hat", vec_to_json(Q.p0_hat())},
                        {"d", Q.d()},
                        {"k", Q.k()},
                        {"c", Q.c()}};
  j["angle_a"] = S.angle_a();

  const ProfileCurve& prof = S.profile();
  Json p;
  p["space_form"] = Json{{"C", S.space_form().C()}};
  p["grid"] = prof.t;
  p["points"] = column_to_json(prof.delta);
  p["frames"] = Json{{"T", column_to_json(prof.T)},
                     {"N", column_to_json(prof.N)},
                     {"B", column_to_json(prof.eta2)}};
  p["kappa"] = prof.kappa;
  p["tau"] = std::vector<double>(prof.size(), 0.0);
  j["profile"] = std::move(p);
  j["z_range"] = S.z_range();
  return j;
}

ConcircularSurface surface_from_json(const Json& j) {
  const Json& umb = require(j, "umbilical");
  const SpaceForm sf(require(umb, "C").get<double>());
  UmbilicalSurface Q =
      make_umbilical(sf, vec_from_json(require(umb, "p0_hat"), 4), require(umb, "d").get<double>());

  const Json& p = require(j, "profile");
  const Json& grid = require(p, "grid");
  const std::size_t n = grid.size();
  ProfileCurve prof;
  prof.t = scalars_from_json(grid, n);
  prof.delta = column_from_json(require(p, "points"), n);
  const Json& frames = require(p, "frames");
  prof.T = column_from_json(require(frames, "T"), n);
  prof.N = column_from_json(require(frames, "N"), n);
  prof.eta2 = column_from_json(require(frames, "B"), n);
  prof.kappa = scalars_from_json(require(p, "kappa"), n);

  const Json& zr = require(j, "z_range");
  if (!zr.is_array() || zr.size() != 2) {
    throw std::runtime_error("schema: z_range must be [z0, z1]");
  }
  return ConcircularSurface(std::move(Q), std::move(prof),
                            require(j, "angle_a").get<double>(),
                            {zr[0].get<double>(), zr[1].get<double>()});
}

Json geodesic_to_json(const ConcircularSurface& S, const GeodesicState& init,
                      const GeodesicSolution& sol) {
  Json j;
  j["surface"] = surface_to_json(S);
  j["init"] = Json{{"t", init.t}, {"z", init.z}, {"theta", init.theta}};
  j["grid"] = sol.s;
  Json states = Json::array();
  for (const GeodesicState& st : sol.states) {
    states.push_back(Json::array({st.t, st.z, st.theta}));
  }
  j["states"] = std::move(states);
  j["kappa_pred"] = sol.kappa_pred;
  j["tau_pred"] = sol.tau_pred;
  return j;
}

std::string curve_to_csv(const FrenetCurve& curve) {
  std::ostringstream os;
  os << "s,x1,x2,x3,x4,T1,T2,T3,T4,N1,N2,N3,N4,B1,B2,B3,B4,kappa,tau\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    os << fmt17(curve.s[i]);
    for (const std::vector<Vec>* col : {&curve.gamma, &curve.T, &curve.N, &curve.B}) {
      for (int c = 0; c < 4; ++c) {
        os << ',' << fmt17((*col)[i][c]);
      }
    }
    os << ',' << fmt17(curve.kappa[i]) << ',' << fmt17(curve.tau[i]) << '\n';
  }
  return os.str();
}

std::string surface_to_obj(const ConcircularSurface& S, int nt, int nz) {
  if (nt < 2 || nz < 2) {
    throw std::invalid_argument("surface_to_obj: need at least a 2x2 lattice");
  }
  const auto& tg = S.profile().t;
  const auto& zr = S.z_range();
  std::ostringstream os;
  for (int i = 0; i < nt; ++i) {
    const double t = tg.front() + (tg.back() - tg.front()) * i / (nt - 1.0);
    for (int k = 0; k < nz; ++k) {
      const double z = zr[0] + (zr[1] - zr[0]) * k / (nz - 1.0);
      const Vec p = S.eval_patch(t, z).point;
      const double den = 1.0 + p[0];
      os << "v " << fmt17(p[1] / den) << ' ' << fmt17(p[2] / den) << ' ' << fmt17(p[3] / den)
         << '\n';
    }
  }
  auto vid = [nz](int i, int k) { return i * nz + k + 1; };
  for (int i = 0; i + 1 < nt; ++i) {
    for (int k = 0; k + 1 < nz; ++k) {
      os << "f " << vid(i, k) << ' ' << vid(i, k + 1) << ' ' << vid(i + 1, k + 1) << '\n';
      os << "f " << vid(i, k) << ' ' << vid(i + 1, k + 1) << ' ' << vid(i + 1, k) << '\n';
    }
  }
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  f << content;
  if (!f) {
    throw std::runtime_error("write failed: " + path);
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("cannot open for reading: " + path);
  }
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace sfgeo
