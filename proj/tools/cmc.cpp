// Command-line front end: generate, export, validate and audit rotational CMC surfaces.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cmc/cmc.hpp"

namespace {

using namespace cmc;

struct Options {
  std::string type;
  std::string profile;
  std::vector<std::string> consts;
  std::optional<double> C;
  std::string hsign = "+1";
  std::string eta = "+1";
  double A = 0.0;
  std::optional<double> u0;
  double phi0 = 0.0, c1 = 0.0, c2 = 0.0;
  std::string interval;
  double perturb_phi = 0.0;
  bool clip = false;

  std::size_t samples = 256;
  std::string out;
  std::string obj;
  std::string project = "x1,x3,x4";
  std::size_t nu = 41, nv = 41;
  std::string v_window;
  double fd_step = 1e-4;
  std::string report;

  std::string curve_csv;
  std::string components;
  std::string at;

  double a = 1.0, b = 0.0, d = 0.0, B = 1.0;
};

ConstantMap parse_constants(const std::vector<std::string>& items) {
  ConstantMap out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Error(ErrorCode::Usage, "--const expects name=value, got '" + item + "'");
    const std::string name = item.substr(0, eq);
    const Expr e = parse(item.substr(eq + 1), names_of(out));
    if (e.depends_on_u()) throw Error(ErrorCode::Usage, "constant " + name + " may not depend on u");
    out[name] = eval_jet(e, 0.0, out).val;
  }
  return out;
}

double parse_scalar(const std::string& text, const ConstantMap& consts) {
  const Expr e = parse(text, names_of(consts));
  if (e.depends_on_u()) throw Error(ErrorCode::Usage, "'" + text + "' may not depend on u");
  return eval_jet(e, 0.0, consts).val;
}

Interval parse_interval(const std::string& text, const ConstantMap& consts, const char* flag) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw Error(ErrorCode::Usage, std::string(flag) + " expects a:b, got '" + text + "'");
  const Interval iv{parse_scalar(text.substr(0, colon), consts),
                    parse_scalar(text.substr(colon + 1), consts)};
  if (!(iv.hi > iv.lo)) throw Error(ErrorCode::Usage, std::string(flag) + " needs a < b");
  return iv;
}

int parse_sign(const std::string& text, const char* flag) {
  if (text == "+1" || text == "1" || text == "+") return 1;
  if (text == "-1" || text == "-") return -1;
  throw Error(ErrorCode::Usage, std::string(flag) + " must be +1 or -1, got '" + text + "'");
}

RotationType parse_type(const std::string& text) {
  if (auto t = parse_rotation_type(text)) return *t;
  throw Error(ErrorCode::Usage,
              "--type must be elliptic, hyperbolicA, hyperbolicB or parabolic, got '" + text + "'");
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::Usage, what);
}

CmcParams make_params(const Options& o) {
  require(o.C.has_value(), "--C is required");
  CmcParams p;
  p.C = *o.C;
  p.h_sign = parse_sign(o.hsign, "--hsign");
  p.eta = parse_sign(o.eta, "--eta");
  p.A = o.A;
  p.u0 = o.u0;
  p.phi0 = o.phi0;
  p.c1 = o.c1;
  p.c2 = o.c2;
  p.phi_scale = 1.0 + o.perturb_phi;
  return p;
}

struct Generated {
  GeneratingCurve curve;
  std::optional<double> target_h2;
  std::string id;
};

Generated generate_from_options(const Options& o) {
  require(!o.type.empty(), "--type is required");
  require(!o.profile.empty(), "--profile is required");
  require(!o.interval.empty(), "--interval is required");
  const RotationType type = parse_type(o.type);
  const ConstantMap consts = parse_constants(o.consts);
  const ProfileFunction profile = ProfileFunction::from_text(o.profile, consts);
  const CmcParams params = make_params(o);
  Interval iv = parse_interval(o.interval, consts, "--interval");
  if (o.clip) {
    const auto valid = domain_validity(profile, params, iv, type);
    if (!valid.empty()) {
      Interval best = valid.front();
      for (const auto& v : valid)
        if (v.length() > best.length()) best = v;
      iv = best.shrunk(0.02 * best.length());
    }
  }
  return {generate(type, profile, params, iv), params.target_h2(),
          std::string(to_string(type)) + ":" + o.profile};
}

Generated curve_from_options(const Options& o) {
  if (o.curve_csv.empty()) return generate_from_options(o);
  std::ifstream in(o.curve_csv);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + o.curve_csv);
  std::optional<RotationType> type;
  if (!o.type.empty()) type = parse_type(o.type);
  Generated g{read_curve_csv(in, type), std::nullopt, o.curve_csv};
  if (o.C) g.target_h2 = parse_sign(o.hsign, "--hsign") * *o.C * *o.C;
  return g;
}

GridSpec grid_from_options(const Options& o, const GeneratingCurve& curve) {
  GridSpec g = default_grid(curve, o.fd_step, o.nu, o.nv);
  if (!o.v_window.empty()) g.v = parse_interval(o.v_window, parse_constants(o.consts), "--v-window");
  return g;
}

template <class Writer>
void emit(const std::string& path, Writer&& write) {
  std::ostringstream os;
  write(os);
  if (path.empty() || path == "-") {
    std::cout << os.str();
  } else {
    atomic_write(path, os.str());
  }
}

int cmd_curve(const Options& o) {
  const Generated g = generate_from_options(o);
  emit(o.out, [&](std::ostream& os) { write_curve_csv(os, g.curve, o.samples); });
  return 0;
}

int cmd_surface(const Options& o) {
  const Generated g = curve_from_options(o);
  const SurfacePatch patch = build_surface(g.curve);
  GridSpec grid = grid_from_options(o, g.curve);
  grid.u = g.curve.domain();
  emit(o.out, [&](std::ostream& os) { write_surface_csv(os, patch, grid); });
  if (!o.obj.empty()) {
    const auto proj = parse_projection(o.project);
    emit(o.obj, [&](std::ostream& os) { write_obj(os, patch, grid, proj); });
  }
  return 0;
}

int cmd_validate(const Options& o) {
  const Generated g = curve_from_options(o);
  ValidationConfig cfg;
  cfg.fd_step = o.fd_step;
  const ValidationReport rep = validate(g.curve, g.target_h2, grid_from_options(o, g.curve), cfg, g.id);
  const auto json = to_json(rep);
  if (!o.report.empty()) atomic_write(o.report, json.dump(2) + "\n");
  std::cout << (rep.passed() ? "PASS " : "FAIL ") << rep.surface_id;
  for (const char* key : {"max_cmc_residual", "max_cmc_residual_fd", "max_arclength_residual",
                          "max_frame_residual", "max_closed_vs_oracle"})
    std::cout << ' ' << key << '=' << json[key].dump();
  std::cout << " flagged=" << rep.flagged_points.size() << '\n';
  return rep.passed() ? 0 : 1;
}

int cmd_special(const Options& o) {
  require(!o.type.empty(), "--type is required");
  require(!o.interval.empty(), "--interval is required");
  const RotationType type = parse_type(o.type);
  const CmcParams params = make_params(o);
  const SpecialConstants k{o.a, o.b, o.d, o.A, o.B};
  const SpecialCaseReport rep =
      compare_special_case(type, k, params, parse_interval(o.interval, {}, "--interval"));
  const auto json = to_json(rep);
  if (!o.report.empty()) atomic_write(o.report, json.dump(2) + "\n");
  std::cout << to_string(rep.verdict) << ' ' << to_string(rep.type)
            << " max_discrepancy=" << json["max_discrepancy"].dump()
            << " worst_u=" << json["worst_u"].dump() << '\n';
  return rep.verdict == SpecialVerdict::Consistent ? 0 : 1;
}

int cmd_oracle(const Options& o) {
  require(!o.type.empty(), "--type is required");
  require(!o.components.empty(), "--components is required");
  require(!o.at.empty(), "--at is required");
  const RotationType type = parse_type(o.type);
  const ConstantMap consts = parse_constants(o.consts);
  std::array<std::string, 3> comps;
  {
    std::size_t start = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      const auto pos = o.components.find(';', start);
      require((i < 2) == (pos != std::string::npos), "--components expects three ';'-separated expressions");
      comps[i] = o.components.substr(start, pos == std::string::npos ? pos : pos - start);
      start = pos + 1;
    }
  }
  const auto colon = o.at.find(':');
  require(colon != std::string::npos, "--at expects u:v");
  const double u = parse_scalar(o.at.substr(0, colon), consts);
  const double v = parse_scalar(o.at.substr(colon + 1), consts);
  const Interval domain = o.interval.empty() ? Interval{u - 100.0 * o.fd_step, u + 100.0 * o.fd_step}
                                             : parse_interval(o.interval, consts, "--interval");
  const GeneratingCurve curve =
      analytic_curve(type, {comps[0], comps[1], comps[2]}, consts, domain);

  const SurfacePatch patch = build_surface(curve);
  const MeanCurvature jet = mean_curvature(patch, u, v);
  const MeanCurvature fd = mean_curvature(fd_patch(patch, o.fd_step), u, v);
  auto vec = [](const Vec4& w) { return nlohmann::ordered_json::array({w[0], w[1], w[2], w[3]}); };
  nlohmann::ordered_json j;
  j["type"] = std::string(to_string(type));
  j["u"] = u;
  j["v"] = v;
  j["arclength_defect"] = arclength_defect(type, curve(u));
  j["H"] = vec(jet.H);
  j["h2"] = jet.h2;
  j["H_fd"] = vec(fd.H);
  j["h2_fd"] = fd.h2;
  j["h2_closed"] = h2_closed(curve, u);
  if (type == RotationType::Elliptic) j["H_closed"] = vec(elliptic_H_closed(curve, u, v).H);
  if (is_hyperbolic(type)) j["H_closed"] = vec(hyperbolic_H_closed(curve, u, v).H);
  emit(o.out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  return 0;
}

void add_generation_flags(CLI::App* app, Options& o) {
  app->add_option("--type", o.type, "elliptic | hyperbolicA | hyperbolicB | parabolic");
  app->add_option("--profile", o.profile, "profile r(u) (f(u) for parabolic)");
  app->add_option("--const", o.consts, "named constant name=value (repeatable)");
  app->add_option("--C", o.C, "mean curvature constant, <H,H> = hsign C^2");
  app->add_option("--hsign", o.hsign, "sign of <H,H>: +1 or -1");
  app->add_option("--eta", o.eta, "sign of the angle rate: +1 or -1");
  app->add_option("--A", o.A, "parabolic angle constant");
  app->add_option("--u0", o.u0, "integration base point");
  app->add_option("--phi0", o.phi0, "angle at u0");
  app->add_option("--c1", o.c1, "first coordinate at u0");
  app->add_option("--c2", o.c2, "second coordinate at u0");
  app->add_option("--interval", o.interval, "generation interval a:b");
  app->add_flag("--clip", o.clip, "shrink the interval to its longest valid part");
  app->add_option("--perturb-phi", o.perturb_phi, "relative perturbation of the angle");
}

void add_grid_flags(CLI::App* app, Options& o) {
  app->add_option("--nu", o.nu, "grid points in u");
  app->add_option("--nv", o.nv, "grid points in v");
  app->add_option("--v-window", o.v_window, "v range a:b");
  app->add_option("--fd-step", o.fd_step, "finite-difference step");
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Constant mean curvature rotational surfaces in R^4_2"};
  app.require_subcommand(1);

  auto* curve = app.add_subcommand("curve", "generate a curve and write it as CSV");
  add_generation_flags(curve, o);
  curve->add_option("--samples", o.samples, "number of sample intervals");
  curve->add_option("--out", o.out, "output CSV (default stdout)");

  auto* surface = app.add_subcommand("surface", "sample the surface on a grid");
  add_generation_flags(surface, o);
  add_grid_flags(surface, o);
  surface->add_option("--curve", o.curve_csv, "read the curve from CSV instead");
  surface->add_option("--out", o.out, "output CSV (default stdout)");
  surface->add_option("--obj", o.obj, "also write an OBJ mesh");
  surface->add_option("--project", o.project, "OBJ coordinates, e.g. x1,x3,x4");

  auto* validate_cmd = app.add_subcommand("validate", "validate a generated or stored curve");
  add_generation_flags(validate_cmd, o);
  add_grid_flags(validate_cmd, o);
  validate_cmd->add_option("--curve", o.curve_csv, "read the curve from CSV instead");
  validate_cmd->add_option("--report", o.report, "JSON report path");

  auto* special = app.add_subcommand("special", "audit a closed-form special case");
  special->add_option("--type", o.type, "elliptic | hyperbolicA | hyperbolicB | parabolic");
  special->add_option("--a", o.a, "profile constant a");
  special->add_option("--b", o.b, "profile constant b");
  special->add_option("--d", o.d, "additive constant d");
  special->add_option("--A", o.A, "parabolic constant A");
  special->add_option("--B", o.B, "parabolic constant B");
  special->add_option("--C", o.C, "mean curvature constant");
  special->add_option("--hsign", o.hsign, "sign of <H,H>");
  special->add_option("--eta", o.eta, "angle sign");
  special->add_option("--interval", o.interval, "comparison interval a:b");
  special->add_option("--report", o.report, "JSON report path");

  auto* oracle = app.add_subcommand("oracle", "mean curvature of an analytic curve at one point");
  oracle->add_option("--type", o.type, "elliptic | hyperbolicA | hyperbolicB | parabolic");
  oracle->add_option("--components", o.components, "three expressions separated by ';'");
  oracle->add_option("--const", o.consts, "named constant name=value (repeatable)");
  oracle->add_option("--interval", o.interval, "curve domain a:b");
  oracle->add_option("--at", o.at, "evaluation point u:v");
  oracle->add_option("--fd-step", o.fd_step, "finite-difference step");
  oracle->add_option("--out", o.out, "output JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "ERROR[" << error_code_name(ErrorCode::Usage) << "]: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*curve) return cmd_curve(o);
    if (*surface) return cmd_surface(o);
    if (*validate_cmd) return cmd_validate(o);
    if (*special) return cmd_special(o);
    if (*oracle) return cmd_oracle(o);
  } catch (const Error& e) {
    std::cerr << "ERROR[" << error_code_name(e.code()) << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ERROR[" << error_code_name(ErrorCode::Io) << "]: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
