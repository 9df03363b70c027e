#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "cli_app.hpp"
#include "qlinz/errors.hpp"
#include "qlinz/feedback.hpp"
#include "qlinz/invertibility.hpp"
#include "qlinz/kalman.hpp"
#include "qlinz/smith.hpp"
#include "qlinz/zeros.hpp"
#include "report.hpp"
#include "spec_file.hpp"

namespace qlinz::cli {
namespace {

constexpr const char* kExitCodeHelp =
    "Exit codes:\n"
    "  0  success\n"
    "  1  a verification came out negative (check failed, methods disagree,\n"
    "     identity violated, no physical beamsplitter)\n"
    "  2  usage error or malformed spec file\n"
    "  3  invalid parameters or inconsistent dimensions\n"
    "  4  precondition failed (e.g. evaluation at a pole, singular synthesis)\n"
    "  5  method refused (hidden-mode condition or realizability fails)\n"
    "  6  exact arithmetic requested for non-rational input\n"
    "  7  numerical failure (ambiguous rank decision, non-convergence)\n";

struct Settings {
  Format format = Format::text;
  double tol = kDefaultTol;
  double match_tol = 1e-8;
  bool exact = false;
  std::uint64_t seed = 0;
  std::string batch;
};

struct Outcome {
  Json results;
  Json warnings = Json::array();
  int code = kExitOk;
};

Json settings_json(const Settings& s) {
  Json j;
  j["tol"] = s.tol;
  j["match_tol"] = s.match_tol;
  j["exact"] = s.exact;
  j["seed"] = s.seed;
  return j;
}

const StateSpace& require_system(const SystemSpec& spec) {
  if (!spec.system) {
    throw UsageError(spec.source + ": expected a params, annihilation or quadrature spec, got " +
                     to_string(spec.kind));
  }
  return *spec.system;
}

void require_exact_system(const StateSpace& ss, const std::string& what) {
  if (!ss.is_exact()) {
    throw ExactnessError(what + " needs exact input: write every entry as an integer or a \"p/q\" string");
  }
}

Json system_summary(const StateSpace& ss) {
  Json j;
  j["representation"] = to_string(ss.representation());
  j["states"] = ss.states();
  j["inputs"] = ss.inputs();
  j["outputs"] = ss.outputs();
  j["exact"] = ss.is_exact();
  return j;
}

// ---- check ----

Outcome cmd_check(const SystemSpec& spec, const Settings& s) {
  const StateSpace& ss = require_system(spec);
  const RealizabilityReport r = check_physical_realizability(ss, s.tol);
  Outcome o;
  o.results["system"] = system_summary(ss);
  o.results["realizable"] = r.pass;
  o.results["residuals"] = {{"dynamics", r.dynamics_residual},
                            {"coupling", r.coupling_residual},
                            {"feedthrough", r.feedthrough_residual},
                            {"structure", r.structure_residual}};
  o.results["notes"] = r.notes;
  if (!r.pass) o.code = kExitNegative;
  return o;
}

// ---- zeros ----

// The transmission routes act on the minimal realization; an already minimal
// system is used as given so that its structure (and exact copy) survives.
StateSpace minimal_for_transmission(const StateSpace& ss, double tol) {
  const KalmanReport k = kalman_decompose(ss, tol);
  return k.dim_co == ss.states() ? ss : k.minimal;
}

Outcome cmd_zeros(const SystemSpec& spec, const Settings& s, const std::string& kind,
                  const std::string& method) {
  const StateSpace& ss = require_system(spec);
  const bool transmission = kind == "transmission";
  if (!transmission && method == "smf") {
    throw UsageError("--method smf yields transmission zeros; use --kind transmission");
  }
  std::vector<std::string> methods;
  if (method == "all") {
    methods = transmission ? std::vector<std::string>{"smf", "pencil", "flat", "theorem"}
                           : std::vector<std::string>{"pencil", "flat", "theorem"};
  } else {
    methods = {method};
  }
  if (s.exact) require_exact_system(ss, "--exact");

  std::optional<StateSpace> reduced;
  auto target = [&]() -> const StateSpace& {
    if (!transmission) return ss;
    if (!reduced) reduced = minimal_for_transmission(ss, s.tol);
    return *reduced;
  };
  auto compute = [&](const std::string& m) -> Spectrum {
    if (m == "smf") {
      require_exact_system(ss, "the Smith-McMillan route");
      return transmission_zeros(ss, s.tol, false);
    }
    if (m == "pencil") return invariant_zeros_pencil(target(), s.tol);
    if (m == "flat") return invariant_zeros_flat(target(), s.tol);
    return invariant_zeros_via_theorem(target(), s.tol);
  };

  Outcome o;
  o.results["system"] = system_summary(ss);
  o.results["kind"] = kind;
  if (transmission && target().states() != ss.states()) {
    o.results["minimal_states"] = target().states();
  }
  Json per_method;
  std::vector<std::pair<std::string, std::vector<Complex>>> computed;
  for (const std::string& m : methods) {
    if (methods.size() == 1) {
      const Spectrum z = compute(m);
      per_method[m] = spectrum_json(z);
      computed.emplace_back(m, z.expanded());
      continue;
    }
    try {
      const Spectrum z = compute(m);
      per_method[m] = spectrum_json(z);
      computed.emplace_back(m, z.expanded());
    } catch (const RefusalError& e) {
      per_method[m] = {{"refused", e.what()}};
    } catch (const ExactnessError& e) {
      per_method[m] = {{"skipped", e.what()}};
    }
  }
  o.results["methods"] = std::move(per_method);
  if (computed.size() >= 2) {
    Json cross;
    double worst = 0.0;
    bool agree = true;
    Json names = Json::array();
    for (const auto& [name, values] : computed) names.push_back(name);
    for (std::size_t i = 1; i < computed.size(); ++i) {
      const MultisetMatch m = match_multisets(computed[i].second, computed[0].second, s.match_tol);
      agree = agree && m.matched;
      worst = std::max(worst, m.max_discrepancy);
    }
    cross["compared"] = std::move(names);
    cross["agree"] = agree;
    cross["max_discrepancy"] = std::isfinite(worst) ? Json(worst) : Json("inf");
    o.results["cross_check"] = std::move(cross);
    if (!agree) o.code = kExitNegative;
  }
  return o;
}

// ---- poles ----

Outcome cmd_poles(const SystemSpec& spec, const Settings& s) {
  const StateSpace& ss = require_system(spec);
  if (s.exact) require_exact_system(ss, "--exact");
  Outcome o;
  o.results["system"] = system_summary(ss);
  o.results["poles"] = spectrum_json(poles(ss, s.tol, !s.exact));
  o.results["eigenvalues"] = spectrum_json(Spectrum(eigenvalue_list(ss.a()), s.tol, SpectrumMethod::eigen));
  return o;
}

// ---- smf ----

Json rational_matrix_json(const RationalMatrix& g) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < g.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < g.cols(); ++j) row.push_back(g(i, j).str());
    rows.push_back(std::move(row));
  }
  return rows;
}

Outcome cmd_smf(const SystemSpec& spec, const Settings& s) {
  const StateSpace& ss = require_system(spec);
  require_exact_system(ss, "the Smith-McMillan form");
  const RationalMatrix g = transfer_matrix_exact(ss);
  const SmithMcMillanForm smf = smith_mcmillan(g);
  const SmfSpectra sp = zeros_poles_from_smf(smf, s.tol);
  Outcome o;
  o.results["system"] = system_summary(ss);
  o.results["transfer_matrix"] = rational_matrix_json(g);
  o.results["rank"] = smf.rank;
  Json diag = Json::array(), nums = Json::array(), dens = Json::array();
  const RationalMatrix d = smf.diagonal();
  for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i) diag.push_back(d(i, i).str());
  for (const Poly& a : smf.alphas) nums.push_back(a.str());
  for (const Poly& b : smf.betas) dens.push_back(b.str());
  o.results["diagonal"] = std::move(diag);
  o.results["numerators"] = std::move(nums);
  o.results["denominators"] = std::move(dens);
  o.results["transmission_zeros"] = spectrum_json(sp.zeros);
  o.results["poles"] = spectrum_json(sp.poles);
  const bool ok = verify_reconstruction(g, smf);
  o.results["reconstruction_exact"] = ok;
  const auto unit = determinant_unit(g, smf);
  o.results["determinant_unit"] = unit ? gr_json(*unit) : Json(nullptr);
  if (!ok) o.code = kExitNegative;
  return o;
}

// ---- kalman ----

Json hidden_mode_json(const HiddenModeReport& h) {
  Json j;
  j["holds"] = h.holds;
  j["real_part_tol"] = h.real_part_tol;
  Json off = Json::array();
  for (Complex z : h.offending_eigenvalues) off.push_back(complex_json(z));
  j["offending"] = std::move(off);
  return j;
}

Outcome cmd_kalman(const SystemSpec& spec, const Settings& s) {
  const StateSpace& ss = require_system(spec);
  const KalmanReport k = kalman_decompose(ss, s.tol);
  Outcome o;
  o.results["system"] = system_summary(ss);
  o.results["dimensions"] = {{"co", k.dim_co},
                             {"c_obar", k.dim_c_obar},
                             {"cbar_o", k.dim_cbar_o},
                             {"cbar_obar", k.dim_cbar_obar}};
  o.results["blocks"] = {{"co", spectrum_json(k.co)},
                         {"c_obar", spectrum_json(k.c_obar)},
                         {"cbar_o", spectrum_json(k.cbar_o)},
                         {"cbar_obar", spectrum_json(k.cbar_obar)}};
  o.results["observable"] = spectrum_json(k.observable);
  o.results["unobservable"] = spectrum_json(k.unobservable);
  o.results["rank_gap"] = std::isfinite(k.rank_gap) ? Json(k.rank_gap) : Json("inf");
  o.results["minimal_states"] = k.minimal.states();
  o.results["hidden_mode_condition"] = hidden_mode_json(check_hidden_mode_condition(k));
  return o;
}

// ---- invert ----

Outcome cmd_invert(const SystemSpec& spec, const Settings& s, std::size_t samples) {
  const StateSpace& ss = require_system(spec);
  const InvertibilityReport r = classify_left_invertibility(ss, s.tol);
  const std::vector<Complex> points = random_sample_points(s.seed, samples, 3.0);
  const InversionWitness w = inversion_witness(ss, points, s.tol);
  Outcome o;
  o.results["system"] = system_summary(ss);
  o.results["verdict"] = to_string(r.verdict);
  o.results["as_left_invertible"] = r.as_left_invertible;
  o.results["as_star_left_invertible"] = r.as_star_left_invertible;
  o.results["strong_left_invertibility"] = r.strong_left_invertibility;
  o.results["observable_eigenvalues"] = spectrum_json(r.observable_eigenvalues);
  o.results["min_real_part"] = std::isfinite(r.min_real_part) ? Json(r.min_real_part) : Json("inf");
  o.results["margin"] = r.margin;
  o.results["hidden_mode_condition"] = hidden_mode_json(r.hidden_mode);
  o.results["inverse_poles"] = spectrum_json(w.inverse_poles);
  o.results["inverse_identity"] = {{"pass", w.identity.pass},
                                   {"checked", w.identity.checked.size()},
                                   {"skipped", w.identity.skipped.size()},
                                   {"max_residual", w.identity.max_residual}};
  for (const auto& msg : w.identity.warnings) o.warnings.push_back(msg);
  if (!w.identity.pass) o.code = kExitNegative;
  return o;
}

// ---- identities ----

Outcome cmd_identities(const SystemSpec& spec, const Settings& s, std::size_t samples) {
  const StateSpace& ss = require_system(spec);
  if (s.exact) require_exact_system(ss, "--exact");
  Outcome o;
  o.results["system"] = system_summary(ss);

  const PencilIdentityReport p = verify_pencil_flat_identity(ss, s.tol);
  Json pj;
  pj["pass"] = p.pass;
  pj["exact"] = p.exact;
  if (p.exact) {
    pj["pencil_determinant"] = p.pencil_determinant.str();
    pj["flat_characteristic"] = p.flat_characteristic.str();
    pj["unit"] = gr_json(p.unit);
  } else {
    pj["max_residual"] = p.max_residual;
  }
  o.results["pencil_flat"] = std::move(pj);

  const MirrorReport m = verify_pole_zero_mirror(ss, s.match_tol * 10.0);
  o.results["pole_zero_mirror"] = {
      {"pass", m.pass},
      {"exact", m.exact},
      {"poles", spectrum_json(m.poles)},
      {"transmission_zeros", spectrum_json(m.zeros)},
      {"max_discrepancy", std::isfinite(m.max_discrepancy) ? Json(m.max_discrepancy) : Json("inf")}};

  const std::vector<Complex> points = random_sample_points(s.seed, samples, 3.0);
  const InverseIdentityReport inv = verify_inverse_identity(ss, points, s.tol);
  o.results["inverse_identity"] = {{"pass", inv.pass},
                                   {"checked", inv.checked.size()},
                                   {"skipped", inv.skipped.size()},
                                   {"max_residual", inv.max_residual}};
  for (const auto& msg : inv.warnings) o.warnings.push_back(msg);
  if (!p.pass || !m.pass || !inv.pass) o.code = kExitNegative;
  return o;
}

// ---- feedback ----

struct FeedbackOptions {
  std::string controller;
  std::optional<std::string> alpha;
  std::optional<std::string> solve_alpha;
  std::optional<std::string> synthesize;
  std::optional<std::string> sweep;
  std::optional<std::string> csv;
};

struct SweepRange {
  double from = 0.0;
  double to = 0.0;
  int points = 0;
};

SweepRange parse_sweep(const std::string& text) {
  SweepRange r;
  std::istringstream in(text);
  std::string a, b, c;
  if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c) || a.empty() ||
      b.empty() || c.empty()) {
    throw UsageError("--sweep expects from:to:points, got '" + text + "'");
  }
  try {
    std::size_t used = 0;
    r.from = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    r.to = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
    r.points = std::stoi(c, &used);
    if (used != c.size()) throw std::invalid_argument(c);
  } catch (const std::logic_error&) {
    throw UsageError("--sweep expects from:to:points, got '" + text + "'");
  }
  return r;
}

Json quad_plant_json(const QuadPlantParams& p) {
  const auto [g_q, g_p] = quadrature_transfer(p);
  Json j;
  j["omega_plus"] = gr_json(p.omega_plus);
  j["c_q"] = gr_json(p.c_q);
  j["c_p"] = gr_json(p.c_p);
  j["transfer_q"] = g_q.str();
  j["transfer_p"] = g_p.str();
  j["duality"] = check_quadrature_duality(g_q, g_p);
  return j;
}

bool finite_at_origin(const QuadPlantParams& p) {
  const auto [g_q, g_p] = quadrature_transfer(p);
  return !g_q.den().eval(GR(0)).is_zero() && !g_p.den().eval(GR(0)).is_zero();
}

Json value_at_origin(const RationalFn& f) {
  try {
    return gr_json(f.eval(GR(0)));
  } catch (const PoleEvaluationError&) {
    return "pole";
  }
}

QuadPlantParams require_plant(const SystemSpec& spec) {
  if (!spec.plant) {
    throw UsageError(spec.source + ": feedback needs a quad_plant spec, got " + to_string(spec.kind));
  }
  return *spec.plant;
}

Rational parse_alpha(const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const ParameterError& e) {
    throw UsageError(std::string("--alpha: ") + e.what());
  }
}

Outcome cmd_feedback(const SystemSpec& plant_spec, const Settings& s, const FeedbackOptions& f,
                     const std::string& controller_source, std::ostream& out) {
  const QuadPlantParams plant = require_plant(plant_spec);
  const int modes = (f.solve_alpha ? 1 : 0) + (f.synthesize ? 1 : 0) + (f.alpha && !f.synthesize ? 1 : 0);
  if (modes != 1) {
    throw UsageError("feedback needs exactly one of --alpha, --solve-alpha q|p, or --synthesize +|- (with --alpha)");
  }
  Outcome o;
  o.results["plant"] = quad_plant_json(plant);

  std::optional<QuadPlantParams> controller;
  Json controller_echo;
  if (!f.controller.empty()) {
    const SystemSpec cs = load_spec(f.controller, s.exact);
    controller = require_plant(cs);
    controller_echo = {{"source", controller_source}, {"spec", cs.echo}};
  }

  std::optional<Rational> alpha;
  if (f.synthesize) {
    if (!f.alpha) throw UsageError("--synthesize needs --alpha");
    if (f.synthesize->size() != 1) throw UsageError("--synthesize expects + or -");
    alpha = parse_alpha(*f.alpha);
    static_cast<void>(Beamsplitter(*alpha));
    const ControllerSynthesis syn = synthesize_matched_controller(plant, *alpha, (*f.synthesize)[0]);
    controller = QuadPlantParams{syn.omega_plus, plant.c_q, plant.c_p};
    o.results["synthesis"] = {{"sign", *f.synthesize},
                              {"quadrature", to_string(syn.quadrature)},
                              {"omega_plus", gr_json(syn.omega_plus)},
                              {"imaginary", syn.imaginary},
                              {"residual", gr_json(syn.residual)}};
    if (!syn.imaginary) {
      o.warnings.push_back("synthesized omega_plus is not purely imaginary: outside the parameter regime");
      o.code = kExitNegative;
      return o;
    }
  } else if (!controller) {
    throw UsageError("feedback needs a controller spec unless --synthesize is given");
  }
  o.results["controller"] = quad_plant_json(*controller);
  if (!controller_echo.is_null()) o.results["controller_input"] = std::move(controller_echo);

  const auto [x, y] = squeezing_terms(plant, *controller);
  o.results["squeezing_terms"] = {{"X", gr_json(x)}, {"Y", gr_json(y)}};

  if (f.solve_alpha) {
    const Quadrature quad = parse_quadrature(*f.solve_alpha);
    const AlphaSolution sol = solve_alpha_for_squeezing(plant, *controller, quad);
    Json j;
    j["quadrature"] = to_string(quad);
    j["solvable"] = sol.solvable;
    j["alpha"] = sol.alpha ? Json(rational_to_string(*sol.alpha)) : Json(nullptr);
    j["alpha_value"] = sol.alpha ? Json(sol.alpha->get_d()) : Json(nullptr);
    j["physical"] = sol.physical;
    j["method"] = sol.method;
    if (!sol.note.empty()) j["note"] = sol.note;
    o.results["alpha_solution"] = std::move(j);
    if (!sol.solvable || !sol.physical) {
      o.code = kExitNegative;
      return o;
    }
    alpha = *sol.alpha;
  } else if (!alpha) {
    alpha = parse_alpha(*f.alpha);
  }

  const FeedbackNetwork net{plant, *controller, Beamsplitter(*alpha)};
  o.results["beamsplitter"] = {{"alpha", rational_to_string(*alpha)},
                               {"beta_squared", rational_to_string(net.bs.beta_squared())}};
  const ClosedLoop cl = closed_loop(net);
  for (const auto& w : cl.warnings) o.warnings.push_back(w);
  o.results["closed_loop"] = {{"T_q", cl.t_q.str()},
                              {"T_p", cl.t_p.str()},
                              {"duality", check_quadrature_duality(cl.t_q, cl.t_p)},
                              {"T_q_at_0", value_at_origin(cl.t_q)},
                              {"T_p_at_0", value_at_origin(cl.t_p)}};
  o.results["squeezing_residual"] = {{"q", gr_json(squeezing_residual(net, Quadrature::q))},
                                     {"p", gr_json(squeezing_residual(net, Quadrature::p))}};
  if (!finite_at_origin(plant) || !finite_at_origin(*controller)) {
    o.warnings.push_back(
        "plant or controller has a pole at s = 0: the squeezing residual does not decide T(0) = 0; "
        "use T_q_at_0 / T_p_at_0");
  }
  const auto [k_q, k_p] = quadrature_transfer(*controller);
  if (k_q == RationalFn::constant(GR(1)) && k_p == RationalFn::constant(GR(1))) {
    Json unit;
    for (Quadrature quad : {Quadrature::q, Quadrature::p}) {
      const UnitControllerAlpha u = unit_controller_alpha(plant, quad);
      unit[to_string(quad)] = {{"direct", u.direct ? Json(rational_to_string(*u.direct)) : Json(nullptr)},
                               {"closed_form", u.closed_form ? Json(rational_to_string(*u.closed_form))
                                                             : Json(nullptr)},
                               {"closed_form_residual", gr_json(u.closed_form_residual)},
                               {"agree", u.agree}};
      if (!u.agree) {
        o.warnings.push_back("unit controller, quadrature " + to_string(quad) +
                             ": closed-form alpha disagrees with the direct T(0) = 0 solution");
      }
    }
    o.results["unit_controller_alpha"] = std::move(unit);
  }

  if (f.sweep) {
    const SweepRange r = parse_sweep(*f.sweep);
    const std::vector<SweepRow> rows = frequency_sweep(net, r.from, r.to, r.points);
    if (f.csv) {
      std::ofstream file(*f.csv, std::ios::binary);
      if (!file) throw UsageError("cannot write --csv file '" + *f.csv + "'");
      write_sweep_csv(file, rows);
      o.results["sweep"] = {{"from", r.from}, {"to", r.to}, {"points", r.points}, {"csv", *f.csv}};
    } else {
      write_sweep_csv(out, rows);
      o.results = nullptr;
    }
  }
  return o;
}

// ---- dispatch ----

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e)) return kExitUsage;
  if (dynamic_cast<const ParameterError*>(&e) || dynamic_cast<const DimensionError*>(&e)) return kExitParameter;
  if (dynamic_cast<const PreconditionError*>(&e) || dynamic_cast<const PoleEvaluationError*>(&e)) {
    return kExitPrecondition;
  }
  if (dynamic_cast<const RefusalError*>(&e)) return kExitRefusal;
  if (dynamic_cast<const ExactnessError*>(&e)) return kExitExactness;
  return kExitNumerical;
}

std::string error_kind(int code) {
  switch (code) {
    case kExitUsage: return "usage";
    case kExitParameter: return "parameter";
    case kExitPrecondition: return "precondition";
    case kExitRefusal: return "refusal";
    case kExitExactness: return "exactness";
    default: return "numerical";
  }
}

std::vector<std::string> read_batch(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open batch file '" + path + "'");
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  std::vector<std::string> specs;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    std::filesystem::path p = line.substr(first, last - first + 1);
    if (p.is_relative()) p = base / p;
    specs.push_back(p.generic_string());
  }
  return specs;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zeros, poles, invertibility and coherent feedback of linear quantum systems.", "qlinz"};
  app.footer(kExitCodeHelp);
  app.fallthrough();
  app.require_subcommand(1);

  Settings s;
  std::string format = "text";
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--tol", s.tol, "Tolerance for rank, pole and residual decisions")
      ->check(CLI::PositiveNumber);
  app.add_option("--match-tol", s.match_tol, "Tolerance for comparing spectra across methods")
      ->check(CLI::PositiveNumber);
  app.add_flag("--exact", s.exact, "Require rational input and use the exact routes");
  app.add_option("--seed", s.seed, "Seed for random sample points");
  app.add_option("--batch", s.batch, "File listing one spec path per line");

  std::string spec_path;
  auto add_spec = [&](CLI::App* sub) { sub->add_option("spec", spec_path, "System spec file (JSON)"); };

  CLI::App* check = app.add_subcommand("check", "Physical realizability residuals");
  add_spec(check);

  std::string kind = "invariant", method = "all";
  CLI::App* zeros = app.add_subcommand("zeros", "Invariant or transmission zeros");
  add_spec(zeros);
  zeros->add_option("--kind", kind)->check(CLI::IsMember({"invariant", "transmission"}));
  zeros->add_option("--method", method)->check(CLI::IsMember({"pencil", "flat", "smf", "theorem", "all"}));

  CLI::App* poles_cmd = app.add_subcommand("poles", "Poles of the transfer matrix and eigenvalues of A");
  add_spec(poles_cmd);
  CLI::App* smf = app.add_subcommand("smf", "Exact transfer matrix and Smith-McMillan form");
  add_spec(smf);
  CLI::App* kalman = app.add_subcommand("kalman", "Kalman decomposition and hidden-mode condition");
  add_spec(kalman);

  std::size_t samples = 10;
  CLI::App* invert = app.add_subcommand("invert", "Left invertibility and the inversion witness");
  add_spec(invert);
  invert->add_option("--samples", samples, "Sample points for G(s) G(-s*) adjoint = I");
  CLI::App* identities =
      app.add_subcommand("identities", "Pencil determinant, pole/zero mirror and inverse identities");
  add_spec(identities);
  identities->add_option("--samples", samples, "Sample points for the inverse identity");

  FeedbackOptions fb;
  CLI::App* feedback = app.add_subcommand("feedback", "Coherent feedback through a beamsplitter");
  add_spec(feedback);
  feedback->add_option("controller", fb.controller, "Controller spec (quad_plant)");
  feedback->add_option("--alpha", fb.alpha, "Beamsplitter alpha, e.g. 1/4 or 0.25");
  feedback->add_option("--solve-alpha", fb.solve_alpha, "Solve alpha for T(0) = 0 on q or p")
      ->check(CLI::IsMember({"q", "p"}));
  feedback->add_option("--synthesize", fb.synthesize, "Matched controller for sign + (p) or - (q)")
      ->check(CLI::IsMember({"+", "-"}));
  feedback->add_option("--sweep", fb.sweep, "Log-spaced frequency sweep from:to:points (CSV)");
  feedback->add_option("--csv", fb.csv, "Write the sweep CSV here instead of standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  s.format = format == "json" ? Format::json : Format::text;

  CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();

  std::vector<std::string> sources;
  if (!s.batch.empty()) {
    if (command == "feedback") {
      err << "qlinz: usage: --batch does not apply to feedback\n";
      return kExitUsage;
    }
    if (!spec_path.empty()) {
      err << "qlinz: usage: give either a spec file or --batch\n";
      return kExitUsage;
    }
    try {
      sources = read_batch(s.batch);
    } catch (const UsageError& e) {
      err << "qlinz: usage: " << e.what() << '\n';
      return kExitUsage;
    }
  } else {
    if (spec_path.empty()) {
      err << "qlinz: usage: " << command << " needs a spec file\n" << chosen->help();
      return kExitUsage;
    }
    sources.push_back(spec_path);
  }

  auto analyze = [&](const std::string& source, Json& report) -> int {
    report["command"] = command;
    report["source"] = source;
    try {
      const SystemSpec spec = load_spec(source, s.exact);
      report["spec"] = spec.echo;
      report["settings"] = settings_json(s);
      Outcome o;
      if (command == "check") o = cmd_check(spec, s);
      else if (command == "zeros") o = cmd_zeros(spec, s, kind, method);
      else if (command == "poles") o = cmd_poles(spec, s);
      else if (command == "smf") o = cmd_smf(spec, s);
      else if (command == "kalman") o = cmd_kalman(spec, s);
      else if (command == "invert") o = cmd_invert(spec, s, samples);
      else if (command == "identities") o = cmd_identities(spec, s, samples);
      else o = cmd_feedback(spec, s, fb, fb.controller, out);
      if (o.results.is_null()) {
        report = nullptr;
        return o.code;
      }
      report["results"] = std::move(o.results);
      report["warnings"] = std::move(o.warnings);
      report["exit_code"] = o.code;
      return o.code;
    } catch (const std::exception& e) {
      const int code = exit_code_for(e);
      report["error"] = {{"kind", error_kind(code)}, {"message", e.what()}};
      report["exit_code"] = code;
      return code;
    }
  };

  int worst = kExitOk;
  Json batch = Json::array();
  for (const std::string& source : sources) {
    Json report;
    const int code = analyze(source, report);
    worst = std::max(worst, code);
    if (report.is_null()) continue;
    if (report.contains("error")) {
      err << "qlinz: " << report["error"]["kind"].get<std::string>() << ": "
          << report["error"]["message"].get<std::string>() << '\n';
    }
    if (s.batch.empty()) {
      if (!report.contains("error") || s.format == Format::json) render(out, report, s.format);
    } else {
      batch.push_back(std::move(report));
    }
  }
  if (!s.batch.empty()) {
    if (s.format == Format::json) {
      render(out, Json{{"batch", std::move(batch)}}, s.format);
    } else {
      bool first = true;
      for (const Json& r : batch) {
        if (!first) out << "---\n";
        render(out, r, s.format);
        first = false;
      }
    }
  }
  return worst;
}

}  // namespace qlinz::cli
