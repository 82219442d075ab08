#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "gl2ode/bryant.hpp"
#include "gl2ode/coframe.hpp"
#include "gl2ode/curvature.hpp"
#include "gl2ode/family.hpp"
#include "gl2ode/parse.hpp"
#include "gl2ode/sampling.hpp"
#include "gl2ode/verify.hpp"

using namespace gl2ode;
using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

// Usage and domain problems map to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// nlohmann prints the shortest round-trip form; reports use %.17g instead.
void write_json(std::ostream& os, const Json& j, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent) + 2, ' '), close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        os << (first ? "" : ",\n") << pad << Json(k).dump() << ": ";
        write_json(os, v, indent + 2);
        first = false;
      }
      os << "\n" << close << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        os << (i ? ",\n" : "") << pad;
        write_json(os, j[i], indent + 2);
      }
      os << "\n" << close << "]";
      return;
    }
    case Json::value_t::number_float:
      os << number(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

Json point_json(const std::vector<std::pair<std::string, double>>& p) {
  Json o = Json::object();
  for (const auto& [k, v] : p) o[k] = v;
  return o;
}

Json result_json(const ResidualReport& r) {
  Json o;
  o["label"] = r.label;
  o["pass"] = r.pass;
  o["max_residual"] = r.max_residual;
  o["tolerance"] = r.tolerance;
  o["worst_point"] = point_json(r.worst_point);
  if (!r.detail.empty()) o["detail"] = r.detail;
  if (r.skipped) o["skipped"] = r.skipped;
  if (!r.messages.empty()) o["messages"] = r.messages;
  return o;
}

Json result_json(const std::string& label, bool pass, double value, double tol) {
  Json o;
  o["label"] = label;
  o["pass"] = pass;
  o["max_residual"] = value;
  o["tolerance"] = tol;
  o["worst_point"] = Json::object();
  return o;
}

Json coefficients_json(const CurvatureCoefficients<double>& c) {
  const auto v = c.to_array();
  Json o;
  o["a"] = {v[0], v[1], v[2]};
  o["b"] = {v[3], v[4], v[5], v[6], v[7]};
  return o;
}

Json matrix_json(const Mat4<double>& m) {
  Json rows = Json::array();
  for (const auto& row : m) rows.push_back({row[0], row[1], row[2], row[3]});
  return rows;
}

struct Common {
  std::string F;
  std::vector<std::string> box;
  std::size_t samples = 20;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  std::string json_path;
};

void add_common(CLI::App* app, Common& c, bool with_F, double default_tol, std::size_t default_samples) {
  c.tol = default_tol;
  c.samples = default_samples;
  if (with_F) app->add_option("--F", c.F, "right-hand side F(x, y, y1, y2, y3)")->required();
  app->add_option("--box", c.box, "sampling range override, name=lo:hi (repeatable)");
  app->add_option("--samples", c.samples, "number of sample points")->check(CLI::PositiveNumber);
  app->add_option("--seed", c.seed, "mt19937_64 seed");
  app->add_option("--tol", c.tol, "pass tolerance")->check(CLI::PositiveNumber);
  app->add_option("--json", c.json_path, "write the JSON report to this path");
}

SampleBox make_box(SampleBox base, const Common& c) {
  try {
    for (const auto& spec : c.box) base.set(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return base;
}

Json config_json(const std::string& sub, const Common& c) {
  Json o;
  o["subcommand"] = sub;
  if (!c.F.empty()) o["F"] = c.F;
  o["box"] = c.box;
  o["samples"] = c.samples;
  o["seed"] = c.seed;
  o["tolerance"] = c.tol;
  return o;
}

Expr parse_F(const std::string& text) {
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw UsageError(std::string("cannot parse F: ") + e.what());
  }
}

bool all_results_pass(const Json& results) {
  for (const auto& r : results)
    if (!r["pass"].get<bool>()) return false;
  return true;
}

// check ---------------------------------------------------------------------

Json run_check(const Common& c) {
  const Expr F = parse_F(c.F);
  const BryantReport r = check_bryant(F, draw_samples(make_box(SampleBox::jet(), c), c.samples, c.seed), c.tol);
  return Json::array({result_json(r.r1), result_json(r.r2)});
}

// coframe -------------------------------------------------------------------

Json run_coframe(const Common& c, bool lifted, bool symbolic, Json& extra) {
  const Expr F = parse_F(c.F);
  const CoframeSet base = base_coframe(F);
  const CoframeSet frame = lifted ? lift_coframe(base) : base;
  const SampleBox box = make_box(lifted ? SampleBox::bundle() : SampleBox::jet(), c);
  if (symbolic) {
    Json forms;
    for (std::size_t i = 0; i < 8; ++i) {
      Json terms = Json::object();
      const KForm simplified = frame.forms[i].simplified();
      for (const auto& [key, coef] : simplified.terms())
        terms[key_to_string(frame.chart(), key)] = to_string(coef);
      forms[kSlotNames[i]] = terms;
    }
    extra["symbolic"] = forms;
  }
  Json points = Json::array();
  ResidualReport rank;
  rank.label = "coframe rank (1/|det|)";
  rank.tolerance = 1 / c.tol;
  for (const Binding& b : draw_samples(box, c.samples, c.seed)) {
    Json forms;
    for (std::size_t i = 0; i < 8; ++i) {
      Json terms = Json::object();
      for (const auto& [key, v] : eval_form(frame.forms[i], b).entries) terms[key_to_string(frame.chart(), key)] = v;
      forms[kSlotNames[i]] = terms;
    }
    Json p;
    p["point"] = point_json(describe(b));
    p["forms"] = forms;
    points.push_back(p);
    if (lifted) {
      // rank is checked through 1/|det|, so a degenerate frame is a large residual
      const double det = std::abs(coframe_determinant(frame, b));
      rank.observe(det > 0 ? 1 / det : INFINITY, describe(b));
    }
  }
  extra["points"] = points;
  if (!lifted) return Json::array();
  return Json::array({result_json(rank.finish())});
}

// curvature -----------------------------------------------------------------

Json run_curvature(const Common& c, Json& extra) {
  const Expr F = parse_F(c.F);
  JetDerivatives jet(F);
  const auto base = base_coefficients(jet);
  Json points = Json::array();
  double b_max = 0;
  for (const Binding& b : draw_samples(make_box(SampleBox::bundle(), c), c.samples, c.seed)) {
    Evaluator ev(b);
    const CurvatureCoefficients<double> c0 = evaluate(base, ev);
    const CurvatureCoefficients<double> ct =
        transformed_coefficients(c0, FiberPoint{b.get(Sym::A10), b.get(Sym::A11), b.get(Sym::A44)});
    Json p;
    p["point"] = point_json(describe(b));
    p["base"] = coefficients_json(c0);
    p["transformed"] = coefficients_json(ct);
    p["ricci"] = matrix_json(ricci(ct));
    p["I2"] = invariant_I2(ct);
    p["I3"] = invariant_I3(ct);
    points.push_back(p);
    for (double v : {ct.b0, ct.b1, ct.b2, ct.b3, ct.b4}) b_max = std::max(b_max, std::abs(v));
  }
  extra["points"] = points;
  extra["maxwell_flat"] = b_max < c.tol;
  return Json::array();
}

// verify --------------------------------------------------------------------

struct VerifyOptions {
  std::string suite = "structure";
  int eps1 = 1, eps2 = 1;
  std::string variant = "printed";
  std::size_t trials = 50;
};

Json run_verify(const Common& c, const VerifyOptions& v) {
  Json results = Json::array();
  const bool all = v.suite == "all";
  if (all || v.suite == "structure") {
    if (c.F.empty()) throw UsageError("verify --suite structure needs --F");
    const Expr F = parse_F(c.F);
    for (const auto& r : structure_residuals(F, draw_samples(make_box(SampleBox::bundle(), c), c.samples, c.seed), c.tol))
      results.push_back(result_json(r));
  }
  if (all || v.suite == "street") {
    if (!c.F.empty() && simplify(parse_F(c.F) - parse("(4/3)*y3^2/y2")) != Expr(0))
      throw UsageError("the street suite is defined for F = (4/3)*y3^2/y2 only");
    SampleBox box = SampleBox::jet();
    box.set(Sym::A44, {0.5, 2});
    for (const auto& r : street_model_check(draw_samples(make_box(box, c), c.samples, c.seed), c.tol))
      results.push_back(result_json(r));
  }
  if (all || v.suite == "eds") {
    const EdsVariant variant = v.variant == "swapped" ? EdsVariant::Swapped : EdsVariant::Printed;
    results.push_back(result_json(eds_closure_check(v.eps1, v.eps2, v.trials, c.seed, c.tol, variant)));
  }
  return results;
}

// family --------------------------------------------------------------------

struct FamilyOptions {
  std::string branch = "a";
  double z0 = 1, q0 = 1, qp0 = 1, step = 1e-3;
  std::size_t nodes = 500;
  std::string csv;
};

Json run_family(const Common& c, const FamilyOptions& f, Json& extra) {
  std::shared_ptr<const QSolution> sol;
  try {
    sol = std::make_shared<const QSolution>(integrate_q(parse_branch(f.branch), f.z0, f.q0, f.qp0, f.step, f.nodes));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!f.csv.empty()) {
    std::ofstream out(f.csv);
    if (!out) throw UsageError("cannot write " + f.csv);
    out << "z,q,qp,qpp\n";
    for (std::size_t i = 0; i < sol->z.size(); ++i)
      out << number(sol->z[i]) << ',' << number(sol->q[i]) << ',' << number(sol->qp[i]) << ',' << number(sol->qpp[i])
          << '\n';
  }
  const FamilyReport r = scan_family(sol, family_samples(sol, c.samples, c.seed), c.tol);
  Json rep;
  rep["nodes"] = sol->z.size();
  rep["z_range"] = {sol->z_min(), sol->z_max()};
  rep["truncated"] = sol->truncated;
  rep["special"] = r.special ? Json(r.special->to_string()) : Json(nullptr);
  rep["bryant_max"] = r.bryant_max;
  rep["I2_max"] = r.I2_max;
  rep["I3_max"] = r.I3_max;
  rep["theta_quartic_I4_max"] = r.I4_max;
  rep["b_cubic_invariant_max"] = r.cubic_max;
  rep["a2_max"] = r.a2_max;
  rep["b4_max"] = r.b4_max;
  rep["maxwell_flat"] = r.maxwell_flat;
  extra["family"] = rep;
  return Json::array({result_json("q node residual", sol->max_node_residual < 1e-8, sol->max_node_residual, 1e-8),
                      result_json("bryant", r.bryant_max < c.tol, r.bryant_max, c.tol),
                      result_json("I2", r.I2_max < c.tol, r.I2_max, c.tol),
                      result_json("I3", r.I3_max < c.tol, r.I3_max, c.tol)});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contact geometry of fourth order ODEs: Bryant conditions, coframe, curvature, checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Common check_c, coframe_c, curv_c, verify_c, family_c;
  auto* check = app.add_subcommand("check", "Bryant's two conditions on F");
  add_common(check, check_c, true, 1e-9, 100);

  bool lifted = false, symbolic = false;
  auto* coframe = app.add_subcommand("coframe", "dump the coframe at sample points");
  add_common(coframe, coframe_c, true, 1e-8, 3);
  coframe->add_flag("--lifted", lifted, "lift to the bundle (a10, a11, a44)");
  coframe->add_flag("--symbolic", symbolic, "also emit simplified symbolic coefficients");

  auto* curvature = app.add_subcommand("curvature", "curvature coefficients, Ricci matrix and invariants");
  add_common(curvature, curv_c, true, 1e-9, 3);

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "structure equations, street model, EDS closure");
  add_common(verify, verify_c, false, 1e-8, 20);
  verify->add_option("--F", verify_c.F, "right-hand side F (structure and street suites)");
  verify->add_option("--suite", vo.suite, "structure | street | eds | all")
      ->check(CLI::IsMember({"structure", "street", "eds", "all"}));
  verify->add_option("--eps1", vo.eps1, "sign eps1 (eds)")->check(CLI::IsMember({1, -1}));
  verify->add_option("--eps2", vo.eps2, "sign eps2 (eds)")->check(CLI::IsMember({1, -1}));
  verify->add_option("--variant", vo.variant, "printed | swapped (eds)")->check(CLI::IsMember({"printed", "swapped"}));
  verify->add_option("--trials", vo.trials, "random assignments (eds)")->check(CLI::PositiveNumber);

  FamilyOptions fo;
  auto* family = app.add_subcommand("family", "integrate q(z) and scan F = y2^2 q(y3^2/y2^3)");
  add_common(family, family_c, false, 1e-6, 20);
  family->add_option("--branch", fo.branch, "a | b")->check(CLI::IsMember({"a", "b"}));
  family->add_option("--z0", fo.z0, "initial z");
  family->add_option("--q0", fo.q0, "q(z0)");
  family->add_option("--qp0", fo.qp0, "q'(z0)");
  family->add_option("--step", fo.step, "signed RK4 step");
  family->add_option("--nodes", fo.nodes, "number of RK4 steps")->check(CLI::PositiveNumber);
  family->add_option("--csv", fo.csv, "write (z, q, q', q'') nodes to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const Common* common = nullptr;
  std::string name;
  Json extra = Json::object(), results;
  try {
    if (*check) {
      common = &check_c, name = "check";
      results = run_check(check_c);
    } else if (*coframe) {
      common = &coframe_c, name = "coframe";
      results = run_coframe(coframe_c, lifted, symbolic, extra);
    } else if (*curvature) {
      common = &curv_c, name = "curvature";
      results = run_curvature(curv_c, extra);
    } else if (*verify) {
      common = &verify_c, name = "verify";
      results = run_verify(verify_c, vo);
    } else {
      common = &family_c, name = "family";
      results = run_family(family_c, fo, extra);
    }
  } catch (const std::exception& e) {
    // parse errors, bad boxes, domain errors on every sample, singular input
    std::cerr << "gl2ode " << name << ": " << e.what() << "\n";
    return 2;
  }

  Json report;
  report["tool_version"] = kToolVersion;
  Json config = config_json(name, *common);
  if (name == "coframe") config["lifted"] = lifted, config["symbolic"] = symbolic;
  if (name == "verify") {
    config["suite"] = vo.suite;
    config["eps1"] = vo.eps1;
    config["eps2"] = vo.eps2;
    config["variant"] = vo.variant;
    config["trials"] = vo.trials;
  }
  if (name == "family") {
    config["branch"] = fo.branch;
    config["z0"] = fo.z0;
    config["q0"] = fo.q0;
    config["qp0"] = fo.qp0;
    config["step"] = fo.step;
    config["nodes"] = fo.nodes;
  }
  report["config"] = config;
  report["results"] = results;
  for (const auto& [k, v] : extra.items()) report[k] = v;

  std::ostringstream text;
  write_json(text, report);
  text << "\n";
  if (common->json_path.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream out(common->json_path);
    if (!out) {
      std::cerr << "gl2ode: cannot write " << common->json_path << "\n";
      return 2;
    }
    out << text.str();
  }
  const bool pass = all_results_pass(results);
  if (!common->json_path.empty())
    for (const auto& r : results)
      std::cout << (r["pass"].get<bool>() ? "PASS " : "FAIL ") << r["label"].get<std::string>() << "  max "
                << number(r["max_residual"].get<double>()) << "\n";
  return pass ? 0 : 1;
}
