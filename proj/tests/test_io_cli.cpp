#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sfgeo/checks.hpp"
#include "sfgeo/io.hpp"

#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <string>

using namespace sfgeo;
namespace fs = std::filesystem;

namespace {

Vec e(int i) { return Vec::Unit(4, i); }

fs::path work_dir() {
  const fs::path p = fs::temp_directory_path() / "sfgeo_io_cli_tests";
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args, const std::string& log = "cli.log") {
  const fs::path dir = work_dir();
  const std::string cmd = std::string(SFGEO_CLI_PATH) + " " + args + " > " +
                          (dir / log).string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

Case1Synthesis canonical_helix() {
  const SpaceForm sphere(1.0);
  return synthesize_case1(sphere, {1.0, 1.0, 1.0, 0.0}, 0.0, 2.0, 1e-3);
}

}  // namespace

TEST_CASE("curve json round trip") {
  const Case1Synthesis syn = canonical_helix();
  const Vec p0 = syn.axis.p0();
  const Json j = curve_to_json(syn.curve, &p0);
  std::optional<Vec> axis;
  const FrenetCurve back = curve_from_json(j, &axis);
  REQUIRE(back.size() == syn.curve.size());
  REQUIRE(axis.has_value());
  CHECK(coord_norm(*axis - p0) == 0.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < back.size(); ++i) {
    worst = std::max(worst, coord_norm(back.gamma[i] - syn.curve.gamma[i]));
    worst = std::max(worst, coord_norm(back.B[i] - syn.curve.B[i]));
    worst = std::max(worst, std::abs(back.kappa[i] - syn.curve.kappa[i]));
  }
  CHECK(worst == 0.0);  // doubles survive the JSON round trip exactly
}

TEST_CASE("curve json schema errors") {
  Json j = curve_to_json(canonical_helix().curve);
  j.erase("frames");
  CHECK_THROWS_AS(curve_from_json(j), std::runtime_error);
  Json j2 = curve_to_json(canonical_helix().curve);
  j2["kappa"] = Json::array({1.0, 2.0});
  CHECK_THROWS_AS(curve_from_json(j2), std::runtime_error);
}

TEST_CASE("surface json round trip") {
  const SpaceForm sphere(1.0);
  UmbilicalSurface Q = make_umbilical(sphere, e(3), 0.5);
  ProfileCurve prof = integrate_profile(
      Q, [](double t) { return 0.4 + 0.1 * std::sin(t); }, default_profile_frame(Q), -0.8, 0.8,
      1e-3);
  const ConcircularSurface S(std::move(Q), std::move(prof), 0.7, {-0.25, 0.25});
  const ConcircularSurface back = surface_from_json(surface_to_json(S));
  CHECK(back.angle_a() == S.angle_a());
  CHECK(back.z_range() == S.z_range());
  for (double t : {-0.7, 0.0, 0.6}) {
    for (double z : {-0.2, 0.1}) {
      CHECK(coord_norm(back.eval_patch(t, z).point - S.eval_patch(t, z).point) <= 1e-12);
    }
  }
}

TEST_CASE("geodesic json carries the solution") {
  const SpaceForm sphere(1.0);
  UmbilicalSurface Q = make_umbilical(sphere, e(3), 0.5);
  ProfileCurve prof = integrate_profile(
      Q, [](double) { return 0.4; }, default_profile_frame(Q), -0.8, 0.8, 1e-3);
  const ConcircularSurface S(std::move(Q), std::move(prof), 0.7, {-0.3, 0.5});
  const GeodesicState init{0.0, 0.0, 0.8};
  const GeodesicSolution sol = integrate_geodesic(S, init, 0.0, 0.4, 1e-3);
  const Json j = geodesic_to_json(S, init, sol);
  CHECK(j.at("grid").size() == sol.s.size());
  CHECK(j.at("states").size() == sol.s.size());
  CHECK(j.at("kappa_pred").size() == sol.s.size());
  CHECK(j.at("init").at("theta").get<double>() == 0.8);
  CHECK(j.contains("surface"));
}

TEST_CASE("csv format is fixed") {
  const std::string csv = curve_to_csv(canonical_helix().curve);
  CHECK(csv.rfind("s,x1,x2,x3,x4,T1,T2,T3,T4,N1,N2,N3,N4,B1,B2,B3,B4,kappa,tau\n", 0) == 0);
  const std::size_t rows = std::count(csv.begin(), csv.end(), '\n');
  CHECK(rows == canonical_helix().curve.size() + 1);
  // first data row starts at s = 0 on the canonical frame
  CHECK(csv.find("\n0,1,0,0,0,") != std::string::npos);
}

TEST_CASE("obj lattice is deterministic and well-formed") {
  const SpaceForm sphere(1.0);
  UmbilicalSurface Q = make_umbilical(sphere, e(3), 0.5);
  ProfileCurve prof = integrate_profile(
      Q, [](double) { return 0.4; }, default_profile_frame(Q), -0.8, 0.8, 1e-3);
  const ConcircularSurface S(std::move(Q), std::move(prof), 0.7, {-0.25, 0.25});
  const std::string obj = surface_to_obj(S, 9, 5);
  const auto count = [&](const std::string& prefix) {
    std::size_t c = 0, pos = 0;
    while ((pos = obj.find(prefix, pos)) != std::string::npos) {
      ++c;
      pos += prefix.size();
    }
    return c;
  };
  CHECK(count("v ") == 45);
  CHECK(count("f ") == 2 * 8 * 4);
  CHECK(surface_to_obj(S, 9, 5) == obj);
}

TEST_CASE("cli: helix synth contract and determinism") {
  const fs::path dir = work_dir();
  const std::string out1 = (dir / "h1.json").string();
  const std::string out2 = (dir / "h2.json").string();
  CHECK(run_cli("helix synth --C 1 --rho 1 --m 1 --mu0 1 --dmu0 0 --smax 2 --out " + out1) == 0);
  CHECK(run_cli("helix synth --C 1 --rho 1 --m 1 --mu0 1 --dmu0 0 --smax 2 --out " + out2) == 0);
  CHECK(read_text_file(out1) == read_text_file(out2));
  CHECK(run_cli("helix synth --rho 0") == 2);
  CHECK(run_cli("helix synth --C 0") == 2);
  CHECK(run_cli("helix synth --format nope") == 2);
  CHECK(run_cli("--help") == 0);
}

TEST_CASE("cli: verify accepts helices and rejects non-helices") {
  const fs::path dir = work_dir();
  const std::string helix = (dir / "verify_in.json").string();
  REQUIRE(run_cli("helix synth --C -1 --rho 1 --m 1 --mu0 1 --dmu0 0 --smax 2 --out " + helix) ==
          0);
  CHECK(run_cli("helix verify " + helix) == 0);

  // a generic curve written through the same schema must fail
  corpus::Rng rng(31u);
  const SpaceForm sphere(1.0);
  const CurveSpec spec = corpus::random_smooth_spec(sphere, rng, 0.5, 1.5, 2.0);
  const FrenetCurve c = integrate_frenet(sphere, spec, 1e-3);
  const std::string generic = (dir / "generic.json").string();
  write_text_file(generic, curve_to_json(c).dump() + "\n");
  CHECK(run_cli("helix verify " + generic) == 1);

  const std::string broken = (dir / "broken.json").string();
  write_text_file(broken, "{ not json");
  CHECK(run_cli("helix verify " + broken) == 2);
}

TEST_CASE("cli: surface and geodesic pipeline") {
  const fs::path dir = work_dir();
  const std::string surf = (dir / "surf.json").string();
  const std::string obj = (dir / "surf.obj").string();
  const std::string geo = (dir / "geo.json").string();
  CHECK(run_cli("surface build --C 1 --p0 0,0,0,1 --d 0.5 --a 0.7 --kappa-delta 0.4 --out " +
                surf) == 0);
  CHECK(run_cli("surface export " + surf + " --out " + obj + " --nt 12 --nz 6") == 0);
  CHECK(run_cli("geodesic integrate " + surf + " --theta 0.9 --s1 0.4 --out " + geo) == 0);
  CHECK(run_cli("surface build --C 1 --d 1.0 --out " + surf) == 2);  // empty slice

  const std::string helix = (dir / "roundtrip_helix.json").string();
  const std::string hsurf = (dir / "hsurf.json").string();
  REQUIRE(run_cli("helix synth --C 1 --rho 1 --m 1 --mu0 1 --dmu0 0 --smax 2 --out " + helix) ==
          0);
  CHECK(run_cli("surface from-helix " + helix + " --out " + hsurf) == 0);
  CHECK(run_cli("surface from-helix " + (dir / "missing.json").string()) == 2);
}

TEST_CASE("cli: theorem suite verdict stability across seeds") {
  const fs::path dir = work_dir();
  CHECK(run_cli("check-theorems --seed 42", "check42.log") == 0);
  CHECK(run_cli("check-theorems --seed 7", "check7.log") == 0);
  const std::string a = read_text_file((dir / "check42.log").string());
  const std::string b = read_text_file((dir / "check7.log").string());
  CHECK(a.find("FAIL") == std::string::npos);
  CHECK(b.find("FAIL") == std::string::npos);
}
