// Command-line surface over the space-form geometry library: helix synthesis
// and verification, concircular surface construction and export, geodesic
// integration, and the randomized theorem-certification suite.
//
// Exit codes: 0 success / certified, 1 certification failure, 2 bad flags,
// I/O, or schema errors.

#include "sfgeo/checks.hpp"
#include "sfgeo/io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace sfgeo;

double default_step() {
  if (const char* env = std::getenv("SFGEO_STEP")) {
    try {
      const double v = std::stod(env);
      if (v > 0) {
        return v;
      }
    } catch (...) {
    }
    std::cerr << "warning: ignoring invalid SFGEO_STEP\n";
  }
  return kDefaultStep;
}

Vec parse_vec4(const std::string& text) {
  Vec v(4);
  std::stringstream ss(text);
  std::string item;
  int i = 0;
  while (std::getline(ss, item, ',') && i < 4) {
    v[i++] = std::stod(item);
  }
  if (i != 4) {
    throw std::runtime_error("expected four comma-separated coordinates");
  }
  return v;
}

struct HelixSynthArgs {
  double C = 1.0, rho = 1.0, m = 1.0, mu0 = 1.0, dmu0 = 0.0;
  double smax = 2.0, step = 0.0, tol = 1e-6;
  std::string out = "helix.json";
  std::string format = "json";
};

int cmd_helix_synth(const HelixSynthArgs& a) {
  if (a.C == 0.0) {
    std::cerr << "error: flat case out of scope (C must be nonzero)\n";
    return 2;
  }
  if (a.rho == 0.0) {
    std::cerr << "error: planar excluded (rho must be nonzero)\n";
    return 2;
  }
  if (a.m == 0.0) {
    std::cerr << "error: m must be nonzero\n";
    return 2;
  }
  try {
    const SpaceForm sf(a.C);
    const HelixCase1Spec spec{a.rho, a.m, a.mu0, a.dmu0};
    const Case1Synthesis syn = synthesize_case1(sf, spec, 0.0, a.smax, a.step);
    const HelixMeasure hm = helix_defect(syn.curve, syn.axis);

    if (a.format == "csv") {
      write_text_file(a.out, curve_to_csv(syn.curve));
    } else {
      const Vec p0 = syn.axis.p0();
      write_text_file(a.out, curve_to_json(syn.curve, &p0).dump(2) + "\n");
    }
    std::printf("lambda = %.12g\n", hm.lambda_mean);
    std::printf("deviation = %.3e\n", hm.deviation);
    if (syn.truncated) {
      std::printf("range truncated to [0, %.6g] (kappa > 0 window)\n", syn.s_end_used);
    }
    std::printf("wrote %s\n", a.out.c_str());
    return hm.deviation <= a.tol ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

struct HelixVerifyArgs {
  std::string file;
  std::string axis;
  double tol = 1e-4;
};

int cmd_helix_verify(const HelixVerifyArgs& a) {
  FrenetCurve curve{SpaceForm(1.0), {}, {}, {}, {}, {}, {}, {}};
  std::optional<Vec> file_axis;
  try {
    curve = curve_from_json(Json::parse(read_text_file(a.file)), &file_axis);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::optional<Vec> axis_p0;
  if (!a.axis.empty()) {
    try {
      axis_p0 = parse_vec4(a.axis);
    } catch (const std::exception& e) {
      std::cerr << "error: --axis: " << e.what() << "\n";
      return 2;
    }
  } else if (file_axis) {
    axis_p0 = file_axis;
  }

  try {
    double tau_sup = 0.0, rho_lo = 0.0, rho_hi = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
      tau_sup = std::max(tau_sup, std::abs(curve.tau[i]));
      if (curve.kappa[i] > 1e-9) {
        const double rho = curve.tau[i] / curve.kappa[i];
        rho_lo = i == 0 ? rho : std::min(rho_lo, rho);
        rho_hi = i == 0 ? rho : std::max(rho_hi, rho);
      }
    }
    if (tau_sup < 1e-6) {
      std::printf("class = planar\n");
      std::printf("verdict: not a proper concircular helix (zero torsion)\n");
      return 1;
    }
    const char* klass = (rho_hi - rho_lo) <= 1e-6 ? "case1" : "case2";

    double lambda = 0.0;
    std::vector<double> mu;
    double structure_residual = 0.0;
    if (axis_p0) {
      const ConcircularField axis(curve.sf, *axis_p0);
      const AxisDecomposition dec = decompose_axis(curve, axis);
      structure_residual = dec.sup_residual();
      double mean = 0.0, dev = 0.0;
      for (double l : dec.lambda) {
        mean += l;
      }
      mean /= static_cast<double>(dec.lambda.size());
      for (double l : dec.lambda) {
        dev = std::max(dev, std::abs(l - mean));
      }
      lambda = mean;
      mu = dec.mu;
      structure_residual = std::max(structure_residual, dev);
    } else {
      const HelixStructure hs = estimate_helix_structure(curve);
      structure_residual = hs.residual;
      lambda = hs.lambda;
      mu = hs.mu;
    }

    std::printf("class = %s\n", klass);
    std::printf("lambda = %.12g\n", lambda);
    std::printf("structure residual = %.3e\n", structure_residual);
    bool ok = structure_residual <= a.tol && std::abs(lambda) > 1e-6;
    if (ok) {
      const Case2Residuals res = case2_residuals(curve, lambda, mu);
      std::printf("residual mu''+C mu+C lambda kappa = %.3e\n", res.r1);
      std::printf("residual (mu'/rho)'-C lambda tau = %.3e\n", res.r2);
      ok = res.r1 <= a.tol && res.r2 <= a.tol;
    }
    std::printf("verdict: %s\n", ok ? "proper concircular helix" : "not a concircular helix");
    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

struct SurfaceBuildArgs {
  double C = 1.0;
  std::string p0 = "0,0,0,1";
  double d = 0.5, a = 0.7, kappa_delta = 0.3;
  double t0 = -1.0, t1 = 1.0, z0 = -0.3, z1 = 0.3;
  double step = 0.0;
  std::string out = "surface.json";
};

int cmd_surface_build(const SurfaceBuildArgs& a) {
  if (a.C == 0.0) {
    std::cerr << "error: flat case out of scope (C must be nonzero)\n";
    return 2;
  }
  try {
    const SpaceForm sf(a.C);
    UmbilicalSurface Q = make_umbilical(sf, parse_vec4(a.p0), a.d);
    const double kd = a.kappa_delta;
    ProfileCurve prof = integrate_profile(
        Q, [kd](double) { return kd; }, default_profile_frame(Q), a.t0, a.t1, a.step);
    const ConcircularSurface S(std::move(Q), std::move(prof), a.a, {a.z0, a.z1});
    const SurfaceConcircularity sc = surface_concircularity_defect(S);
    write_text_file(a.out, surface_to_json(S).dump(2) + "\n");
    std::printf("k = %.12g, c = %.12g\n", S.umbilical().k(), S.umbilical().c());
    std::printf("lambda = %.12g (A cos a = %.12g)\n", sc.lambda_mean, sc.A * std::cos(a.a));
    std::printf("concircularity deviation = %.3e\n", sc.deviation);
    std::printf("wrote %s\n", a.out.c_str());
    return sc.deviation <= 1e-6 ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

struct FromHelixArgs {
  std::string file;
  std::string axis;
  std::string out = "surface.json";
  double tol = 1e-4;
};

int cmd_surface_from_helix(const FromHelixArgs& a) {
  std::optional<Vec> axis_p0;
  std::optional<FrenetCurve> curve;
  try {
    std::optional<Vec> file_axis;
    curve = curve_from_json(Json::parse(read_text_file(a.file)), &file_axis);
    if (!a.axis.empty()) {
      axis_p0 = parse_vec4(a.axis);
    } else {
      axis_p0 = file_axis;
    }
    if (!axis_p0) {
      std::cerr << "error: no axis: pass --axis or use a file with axis_p0\n";
      return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    const ConcircularField axis(curve->sf, *axis_p0);
    const HelixSurfaceDecomposition dec = surface_from_helix(*curve, axis);
    write_text_file(a.out, surface_to_json(dec.surface).dump(2) + "\n");
    std::printf("strike angle a = %.12g (spread %.3e)\n", dec.angle_a, dec.angle_spread);
    std::printf("window = [%.6g, %.6g] of [%.6g, %.6g]\n", dec.s_lo, dec.s_hi,
                curve->s.front(), curve->s.back());
    std::printf("wrote %s\n", a.out.c_str());
    return dec.angle_spread <= a.tol ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

struct ExportArgs {
  std::string file;
  std::string out = "surface.obj";
  int nt = 48, nz = 24;
};

int cmd_surface_export(const ExportArgs& a) {
  try {
    const ConcircularSurface S = surface_from_json(Json::parse(read_text_file(a.file)));
    write_text_file(a.out, surface_to_obj(S, a.nt, a.nz));
    std::printf("wrote %s (%d x %d lattice)\n", a.out.c_str(), a.nt, a.nz);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

struct GeodesicArgs {
  std::string file;
  double t = 0.0, z = 0.0, theta = 0.5;
  double s0 = 0.0, s1 = 0.8, step = 0.0;
  std::string out = "geodesic.json";
  std::string format = "json";
};

int cmd_geodesic_integrate(const GeodesicArgs& a) {
  std::optional<ConcircularSurface> surface;
  try {
    surface.emplace(surface_from_json(Json::parse(read_text_file(a.file))));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    const GeodesicState init{a.t, a.z, a.theta};
    const GeodesicSolution sol = integrate_geodesic(*surface, init, a.s0, a.s1, a.step);
    const GeodesicDefect gd = geodesic_defect(*surface, sol);
    if (a.format == "csv") {
      const FrenetCurve fc =
          frenet_apparatus(surface->space_form(), sol.embedded, sol.s[1] - sol.s[0], 1e-3);
      write_text_file(a.out, curve_to_csv(fc));
    } else {
      write_text_file(a.out, geodesic_to_json(*surface, init, sol).dump(2) + "\n");
    }
    std::printf("geodesic defect = %.3e (collinearity %.3e rad)\n", gd.tangential,
                gd.collinearity_angle);
    std::printf("wrote %s\n", a.out.c_str());
    return gd.tangential <= 1e-5 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

struct CheckArgs {
  unsigned long long seed = 42;
  double step = 0.0;
};

int cmd_check_theorems(const CheckArgs& a) {
  const std::vector<CheckResult> rows = run_theorem_checks(a.seed, a.step);
  bool all = true;
  for (const CheckResult& r : rows) {
    std::printf("%s  %-32s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    all = all && r.pass;
  }
  std::fflush(stdout);
  for (const CheckResult& r : rows) {
    if (!r.pass) {
      std::fprintf(stderr, "failed: %s\n", r.name.c_str());
    }
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"space-form concircular geometry toolkit"};
  app.require_subcommand(1);
  const double step0 = default_step();

  HelixSynthArgs hs;
  hs.step = step0;
  HelixVerifyArgs hv;
  SurfaceBuildArgs sb;
  sb.step = step0;
  FromHelixArgs fh;
  ExportArgs ex;
  GeodesicArgs ga;
  ga.step = step0;
  CheckArgs ck;
  ck.step = step0;

  CLI::App* helix = app.add_subcommand("helix", "concircular helices");
  helix->require_subcommand(1);
  CLI::App* synth = helix->add_subcommand("synth", "synthesize a constant-slope helix");
  synth->add_option("--C", hs.C, "space form curvature (nonzero)");
  synth->add_option("--rho", hs.rho, "Lancret curvature tau/kappa");
  synth->add_option("--m", hs.m, "curvature factor kappa = m mu");
  synth->add_option("--mu0", hs.mu0, "initial concircular factor");
  synth->add_option("--dmu0", hs.dmu0, "initial factor derivative");
  synth->add_option("--smax", hs.smax, "arclength range");
  synth->add_option("--step", hs.step, "integration step");
  synth->add_option("--tol", hs.tol, "certification tolerance");
  synth->add_option("--out", hs.out, "output path");
  synth->add_option("--format", hs.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

  CLI::App* verify = helix->add_subcommand("verify", "certify a curve file");
  verify->add_option("file", hv.file, "curve JSON")->required();
  verify->add_option("--axis", hv.axis, "axis vector x1,x2,x3,x4");
  verify->add_option("--tol", hv.tol, "certification tolerance");

  CLI::App* surface = app.add_subcommand("surface", "concircular ruled surfaces");
  surface->require_subcommand(1);
  CLI::App* build = surface->add_subcommand("build", "build over an umbilical slice");
  build->add_option("--C", sb.C, "space form curvature (nonzero)");
  build->add_option("--p0", sb.p0, "slice normal x1,x2,x3,x4");
  build->add_option("--d", sb.d, "slice offset");
  build->add_option("--a", sb.a, "strike angle");
  build->add_option("--kappa-delta", sb.kappa_delta, "profile geodesic curvature");
  build->add_option("--t0", sb.t0, "profile range start");
  build->add_option("--t1", sb.t1, "profile range end");
  build->add_option("--z0", sb.z0, "ruling range start");
  build->add_option("--z1", sb.z1, "ruling range end");
  build->add_option("--step", sb.step, "integration step");
  build->add_option("--out", sb.out, "output path");

  CLI::App* fromhelix = surface->add_subcommand("from-helix", "canonical form over a helix");
  fromhelix->add_option("file", fh.file, "curve JSON")->required();
  fromhelix->add_option("--axis", fh.axis, "axis vector x1,x2,x3,x4");
  fromhelix->add_option("--out", fh.out, "output path");
  fromhelix->add_option("--tol", fh.tol, "angle constancy tolerance");

  CLI::App* exp = surface->add_subcommand("export", "OBJ export (stereographic image)");
  exp->add_option("file", ex.file, "surface JSON")->required();
  exp->add_option("--out", ex.out, "output path");
  exp->add_option("--nt", ex.nt, "profile samples");
  exp->add_option("--nz", ex.nz, "ruling samples");

  CLI::App* geo = app.add_subcommand("geodesic", "geodesics on concircular surfaces");
  geo->require_subcommand(1);
  CLI::App* integ = geo->add_subcommand("integrate", "integrate the geodesic system");
  integ->add_option("file", ga.file, "surface JSON")->required();
  integ->add_option("--t", ga.t, "initial profile parameter");
  integ->add_option("--z", ga.z, "initial ruling parameter");
  integ->add_option("--theta", ga.theta, "initial angle");
  integ->add_option("--s0", ga.s0, "arclength start");
  integ->add_option("--s1", ga.s1, "arclength end");
  integ->add_option("--step", ga.step, "integration step");
  integ->add_option("--out", ga.out, "output path");
  integ->add_option("--format", ga.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

  CLI::App* check = app.add_subcommand("check-theorems", "run the certification table");
  check->add_option("--seed", ck.seed, "corpus seed");
  check->add_option("--step", ck.step, "integration step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (synth->parsed()) {
    return cmd_helix_synth(hs);
  }
  if (verify->parsed()) {
    return cmd_helix_verify(hv);
  }
  if (build->parsed()) {
    return cmd_surface_build(sb);
  }
  if (fromhelix->parsed()) {
    return cmd_surface_from_helix(fh);
  }
  if (exp->parsed()) {
    return cmd_surface_export(ex);
  }
  if (integ->parsed()) {
    return cmd_geodesic_integrate(ga);
  }
  if (check->parsed()) {
    return cmd_check_theorems(ck);
  }
  std::cerr << "error: missing subcommand\n";
  return 2;
}
