#pragma once

#include "CLI11.hpp"
#include "qid/brst.hpp"
#include "qid/looptab.hpp"
#include "qid/powercount.hpp"
#include "qid/renorm.hpp"
#include "qid/rules.hpp"
#include "qid/symcore/serialize.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

namespace qid::cli {

using json = nlohmann::json;

/// Structured result of one invocation.
struct RunReport {
  std::string subcommand;
  std::vector<std::string> command;
  json inputs = json::object();
  json outputs = json::object();
  json verdicts = json::object();
  std::vector<std::string> latex;
  int exit_status = 0;

  [[nodiscard]] json to_json() const {
    return {{"command", command}, {"inputs", inputs}, {"outputs", outputs}, {"verdicts", verdicts}, {"exit_status", exit_status}};
  }
  void verdict(const std::string& name, bool pass, json detail = nullptr) {
    verdicts[name] = {{"pass", pass}, {"detail", std::move(detail)}};
    if (!pass) exit_status = 1;
  }
};

struct Suite {
  std::string name;
  bool pass = false;
  json detail;
};

namespace suites {

inline Suite table() {
  json d = json::array();
  bool ok = true;
  for (auto [r, n] : looptab::published_cases()) {
    auto oracle = looptab::reduce_oracle({r, n}).pole_coeff;
    bool m = equal(oracle, looptab::published(r, n)->pole_coeff);
    ok = ok && m;
    d.push_back({{"rank", r}, {"denoms", n}, {"match", m}});
  }
  return {"table", ok, d};
}

inline Suite bracket() {
  auto got = heatkernel::trace_ln_div(heatkernel::generic());
  auto residue = ibp_normal_form(got - heatkernel::published_trace_ln(), heatkernel::trace_ibp());
  json coeffs = json::array();
  auto stripped = heatkernel::strip_pole(got);
  auto ms = heatkernel::bracket_monomials();
  for (const auto& m : ms) coeffs.push_back(to_string(coefficient_of(stripped, m, heatkernel::trace_ibp().norm)));
  return {"bracket", residue.empty(), {{"coefficients", coeffs}}};
}

inline Suite closure() {
  auto c = heatkernel::covariant_simplify(heatkernel::from_covariant(heatkernel::generic_covariant()));
  bool ok = c.closes() && c.ff == Rational(1, 12) && c.ee == Rational(1, 2);
  return {"closure", ok, {{"ff", to_string(c.ff)}, {"ee", to_string(c.ee)}, {"residue_terms", c.residue.terms().size()}}};
}

inline Suite coefficient() {
  auto got = renorm::qid_divergent_action();
  bool ok = equal(got, renorm::published_divergent_action());
  json parts = {{"gauge", to_latex(renorm::determinant_div(renorm::Determinant::gauge))},
                {"ghost", to_latex(renorm::determinant_div(renorm::Determinant::ghost))},
                {"slope", to_string(renorm::qid_slope())}};
  return {"coefficient", ok, parts};
}

inline Suite nilpotency() {
  bool ok = true;
  json d = json::object();
  for (auto g : {brst::Generator::A, brst::Generator::omega, brst::Generator::omega_star, brst::Generator::h, brst::Generator::psi}) {
    auto r = brst::verify_nilpotent(g);
    d[brst::generator_name(g)] = r.ok();
    ok = ok && r.ok();
  }
  auto ex = brst::exactness_check();
  d["exactness"] = ex.ok();
  return {"nilpotency", ok && ex.ok(), d};
}

inline const std::vector<std::pair<std::string, Suite (*)()>>& all() {
  static const std::vector<std::pair<std::string, Suite (*)()>> s = {
      {"table", table}, {"bracket", bracket}, {"closure", closure}, {"coefficient", coefficient}, {"nilpotency", nilpotency}};
  return s;
}

}  // namespace suites

namespace detail {

inline void expr(RunReport& r, const std::string& key, const TensorExpr& e) {
  r.outputs[key] = to_json(e);
  r.latex.push_back(key + ": " + to_latex(e));
}

inline void expr(RunReport& r, const std::string& key, const GradedExpr& e) {
  r.outputs[key] = to_json(e);
  r.latex.push_back(key + ": " + to_latex(e));
}

inline renorm::MatterContent matter(const std::string& kind, bool higgs, const std::vector<int>& counts) {
  if (kind == "none") return {};
  if (kind == "sm") return renorm::MatterContent::standard_model(higgs);
  if (counts.size() != 5) throw std::invalid_argument("custom matter needs --counts gauge,dirac,chiral,doublet,complex");
  renorm::MatterContent c{counts[0], counts[1], counts[2], counts[3], counts[4]};
  c.validate();
  return c;
}

}  // namespace detail

/// Parses and runs one command line; the report goes to `out`, diagnostics to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"qid: symbolic checks for isometrodynamics", "qid"};
  app.require_subcommand(1);
  std::string format = "json";
  auto add_format = [&](CLI::App* s, std::vector<std::string> allowed = {"json", "latex"}) {
    s->add_option("--format", format)->check(CLI::IsMember(allowed));
  };

  auto* rules_cmd = app.add_subcommand("rules", "vertex factors and propagators");
  std::string vertex, propagator, xi;
  auto* vopt = rules_cmd->add_option("--vertex", vertex)->check(CLI::IsMember({"3", "4", "ghost"}));
  auto* popt = rules_cmd->add_option("--propagator", propagator)->check(CLI::IsMember({"gauge", "ghost"}));
  rules_cmd->add_option("--xi", xi);
  vopt->excludes(popt);
  add_format(rules_cmd);

  auto* pc_cmd = app.add_subcommand("power-count", "superficial degree of divergence");
  std::string graph;
  pc_cmd->add_option("--graph", graph)->required()->check(CLI::ExistingFile);
  add_format(pc_cmd);

  auto* div_cmd = app.add_subcommand("div-integral", "divergent part of a one-loop integral");
  int rank = 0, denoms = 1;
  bool numeric = false;
  div_cmd->add_option("--rank", rank)->required();
  div_cmd->add_option("--denoms", denoms)->required();
  div_cmd->add_flag("--numeric", numeric);
  add_format(div_cmd);

  auto* im_cmd = app.add_subcommand("inner-moment", "regularized inner-space moment");
  int degree = 0, dim = 4;
  std::string cutoff = "1";
  im_cmd->add_option("--degree", degree)->required();
  im_cmd->add_option("--dim", dim)->check(CLI::PositiveNumber);
  im_cmd->add_option("--cutoff", cutoff);
  im_cmd->add_flag("--numeric", numeric);
  add_format(im_cmd);

  auto* hk_cmd = app.add_subcommand("heat-kernel", "divergent part of Tr Ln");
  bool generic = false, covariant = false;
  auto* gflag = hk_cmd->add_flag("--generic", generic);
  auto* cflag = hk_cmd->add_flag("--covariant", covariant);
  gflag->excludes(cflag);
  add_format(hk_cmd);

  auto* beta_cmd = app.add_subcommand("beta", "one-loop beta function");
  int dimension = 4;
  std::string matter = "none", range;
  std::vector<int> counts;
  bool no_higgs = false;
  beta_cmd->add_option("--dimension", dimension)->check(CLI::PositiveNumber);
  beta_cmd->add_option("--matter", matter)->check(CLI::IsMember({"none", "sm", "custom"}));
  beta_cmd->add_option("--counts", counts, "gauge,dirac,chiral,doublet,complex")->delimiter(',');
  beta_cmd->add_flag("--no-higgs", no_higgs);
  beta_cmd->add_option("--range", range, "first:last dimension for table output");
  add_format(beta_cmd, {"json", "latex", "table"});

  auto* brst_cmd = app.add_subcommand("brst-check", "BRST nilpotency and exactness");
  std::string field;
  bool exactness = false;
  auto* fopt = brst_cmd->add_option("--field", field)->check(CLI::IsMember({"A", "omega", "omega-star", "h", "psi"}));
  auto* eflag = brst_cmd->add_flag("--exactness", exactness);
  fopt->excludes(eflag);
  add_format(brst_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "run the identity suites");
  std::vector<std::string> which;
  std::vector<std::string> names;
  for (const auto& [n, f] : suites::all()) names.push_back(n);
  verify_cmd->add_option("suites", which)->check(CLI::IsMember(names));
  add_format(verify_cmd);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  RunReport r;
  r.command = args;
  try {
    if (*rules_cmd) {
      r.subcommand = "rules";
      if (vertex.empty() == propagator.empty()) throw CLI::ValidationError("rules", "give exactly one of --vertex, --propagator");
      if (!vertex.empty()) {
        r.inputs["vertex"] = vertex;
        rules::RuleResult res;
        if (vertex == "3") res = rules::vertex3(rules::default_gauge_legs(3));
        if (vertex == "4") res = rules::vertex4(rules::default_gauge_legs(4));
        if (vertex == "ghost") res = rules::vertex_ghost(rules::default_ghost_legs());
        detail::expr(r, "vertex", res.expr);
        json cs = json::array();
        for (const auto& c : res.constraints) cs.push_back({{"space", c.space == Space::lorentz ? "lorentz" : "inner"}, {"legs", c.legs}});
        r.outputs["constraints"] = cs;
      } else {
        r.inputs["propagator"] = propagator;
        if (propagator == "gauge") {
          std::optional<Rational> x;
          if (!xi.empty()) x = parse_rational(xi);
          r.inputs["xi"] = xi.empty() ? json(nullptr) : json(xi);
          detail::expr(r, "propagator", rules::gauge_propagator(x, "1", lor_up("mu"), inn_up("M"), lor_up("nu"), inn_up("N")));
        } else {
          detail::expr(r, "propagator", rules::ghost_propagator("1", inn_up("R"), inn_up("S")));
        }
      }
    } else if (*pc_cmd) {
      r.subcommand = "power-count";
      r.inputs["graph"] = graph;
      std::ifstream in(graph);
      auto g = powercount::graph_from_json(json::parse(in));
      int omega = powercount::superficial_degree(g);
      int brute = powercount::brute_degree(g);
      r.outputs["external_legs"] = g.external_legs.size();
      r.outputs["superficial_degree"] = omega;
      r.outputs["brute_degree"] = brute;
      r.outputs["divergent"] = omega >= 0;
      r.latex.push_back("\\omega = " + std::to_string(omega));
      r.verdict("degree_formula", omega == brute);
    } else if (*div_cmd) {
      r.subcommand = "div-integral";
      r.inputs = {{"rank", rank}, {"denoms", denoms}, {"numeric", numeric}};
      auto d = looptab::div_part({rank, denoms});
      detail::expr(r, "pole_coeff", d.pole_coeff);
      r.outputs["pole"] = "Omega4/eps";
      if (numeric) r.outputs["omega4"] = 1 / (8 * M_PI * M_PI);
    } else if (*im_cmd) {
      r.subcommand = "inner-moment";
      r.inputs = {{"degree", degree}, {"dim", dim}, {"cutoff", cutoff}, {"numeric", numeric}};
      auto m = innerspace::moment(degree);
      detail::expr(r, "moment", m.result);
      if (!m.note.empty()) r.outputs["note"] = m.note;
      auto w = innerspace::omega_exact(dim);
      r.outputs["omega_exact"] = {{"coeff", to_string(w.coeff)}, {"pi_exp", to_string(w.pi_exp)}, {"value", w.value()}};
      if (numeric && !m.result.empty()) {
        double L = to_double(parse_rational(cutoff));
        double v = innerspace::omega_numeric(dim) * std::pow(L, dim + degree);
        for (int j = 0; j <= degree; j += 2) v /= (dim + j);
        r.outputs["numeric_coefficient"] = v;
      }
    } else if (*hk_cmd) {
      r.subcommand = "heat-kernel";
      r.inputs["mode"] = covariant ? "covariant" : "generic";
      if (covariant) {
        auto c = heatkernel::covariant_simplify(heatkernel::from_covariant(heatkernel::generic_covariant()));
        detail::expr(r, "closed", c.closed);
        r.outputs["ff"] = to_string(c.ff);
        r.outputs["ee"] = to_string(c.ee);
        r.verdict("closes", c.closes());
      } else {
        detail::expr(r, "trace_ln_div", heatkernel::trace_ln_div(heatkernel::generic()));
      }
    } else if (*beta_cmd) {
      r.subcommand = "beta";
      auto content = detail::matter(matter, !no_higgs, counts);
      auto b = renorm::beta(content);
      r.inputs = {{"dimension", dimension}, {"matter", matter}, {"higgs", !no_higgs}};
      r.inputs["counts"] = {content.n_gauge, content.n_dirac, content.n_chiral, content.n_scalar_doublet, content.n_complex_scalar};
      r.outputs["coefficient_formula"] = b.coefficient_string();
      r.outputs["coefficient"] = to_string(b.coefficient(dimension));
      r.outputs["units"] = "1/12";
      r.outputs["asymptotically_free"] = b.asymptotically_free(dimension);
      r.outputs["beta_over_g3"] = b.beta_over_g3(dimension);
      r.latex.push_back("\\beta(g) = " + b.beta_latex());
      r.latex.push_back("g_{\\mathrm{bare}} = " + b.coupling_latex());
      if (format == "table") {
        int lo = 1, hi = 12;
        if (!range.empty()) {
          auto colon = range.find(':');
          if (colon == std::string::npos) throw CLI::ValidationError("--range", "expected first:last");
          lo = std::stoi(range.substr(0, colon));
          hi = std::stoi(range.substr(colon + 1));
          if (lo < 1 || hi < lo) throw CLI::ValidationError("--range", "empty or non-positive range");
        }
        out << "D\tcoefficient[1/12]\tbeta(g)/g^3\tasymptotically_free\n";
        for (int D = lo; D <= hi; ++D)
          out << D << '\t' << to_string(b.coefficient(D)) << '\t' << b.beta_over_g3(D) + 0.0 << '\t'
              << (b.asymptotically_free(D) ? "yes" : "no") << '\n';
      }
    } else if (*brst_cmd) {
      r.subcommand = "brst-check";
      if (field.empty() == !exactness) throw CLI::ValidationError("brst-check", "give exactly one of --field, --exactness");
      if (exactness) {
        r.inputs["exactness"] = true;
        auto ex = brst::exactness_check();
        detail::expr(r, "delta", ex.delta);
        detail::expr(r, "s_psi", ex.s_psi);
        detail::expr(r, "residue", ex.residue);
        r.verdict("exact", ex.residue.empty());
        r.verdict("ghost_operator", ex.ghost_match.empty());
        r.verdict("s_s_psi", ex.s_s_psi.empty());
      } else {
        r.inputs["field"] = field;
        auto rep = brst::verify_nilpotent(brst::parse_generator(field));
        detail::expr(r, "s", rep.first);
        r.outputs["expansion"] = brst::detail::raw_latex(rep.expanded);
        r.outputs["expansion_terms"] = rep.expanded.terms().size();
        r.outputs["trace"] = rep.trace();
        detail::expr(r, "residue", rep.residue);
        r.latex = rep.trace();
        r.verdict("nilpotent", rep.ok());
      }
    } else if (*verify_cmd) {
      r.subcommand = "verify";
      if (which.empty()) which = names;
      r.inputs["suites"] = which;
      std::vector<std::future<Suite>> jobs;
      for (const auto& w : which)
        for (const auto& [n, f] : suites::all())
          if (n == w) jobs.push_back(std::async(std::launch::async, f));
      for (auto& j : jobs) {
        auto s = j.get();
        r.verdict(s.name, s.pass, s.detail);
        r.latex.push_back(s.name + ": " + (s.pass ? "pass" : "FAIL"));
      }
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }

  if (format == "json") out << r.to_json().dump(2) << '\n';
  if (format == "latex")
    for (const auto& l : r.latex) out << l << '\n';

  if (const char* dir = std::getenv("QID_REPORT_DIR")) {
    std::filesystem::create_directories(dir);
    std::ofstream f(std::filesystem::path(dir) / (r.subcommand + ".json"));
    f << r.to_json().dump(2) << '\n';
  }
  return r.exit_status;
}

}  // namespace qid::cli
