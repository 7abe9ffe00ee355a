// wfx: weighted function space toolkit.
//
// Exit codes: 0 success or PASS, 1 FAIL, 2 INCONCLUSIVE, 3 usage error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "io.hpp"
#include "wfx/basis.hpp"
#include "wfx/error.hpp"
#include "wfx/harness.hpp"
#include "wfx/maximal.hpp"
#include "wfx/muckenhoupt.hpp"
#include "wfx/operators.hpp"
#include "wfx/rdf.hpp"
#include "wfx/spaces.hpp"
#include "wfx/verify/suite.hpp"
#include "wfx/young.hpp"

namespace {

using namespace wfx;
using wfx::cli::json;
using wfx::cli::num;
using wfx::cli::UsageError;
namespace fs = std::filesystem;

constexpr const char* kSchema = "wfx/1";

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::pass: return 0;
    case Verdict::fail: return 1;
    case Verdict::inconclusive: return 2;
  }
  return 2;
}

json report(const char* command) {
  json j;
  j["schema"] = kSchema;
  j["command"] = command;
  return j;
}

json box_json(const Box& b) { return json::array({{b.lo[0], b.lo[1]}, {b.hi[0], b.hi[1]}}); }

json checks_json(const std::vector<Check>& checks) {
  json a = json::array();
  for (const auto& c : checks)
    a.push_back({{"name", c.name}, {"lhs", num(c.lhs)}, {"bound", num(c.bound)}, {"tol", num(c.tol)}, {"ok", c.ok()}});
  return a;
}

json values_json(const GridFunction& f) {
  json a = json::array();
  for (double x : f.values()) a.push_back(num(x));
  return a;
}

double parse_extended(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw UsageError("not a number: " + s);
  }
}

void require_output_dir(const std::string& path) {
  if (path.empty()) return;
  const fs::path parent = fs::absolute(path).parent_path();
  if (!fs::is_directory(parent)) throw UsageError("output directory does not exist: " + parent.string());
}

/// Output options shared by every subcommand.
struct Output {
  std::string report, csv;
};

void emit(const json& j, const Output& out, const std::string& csv = {}) {
  const std::string text = j.dump(2) + "\n";
  if (!out.report.empty()) cli::write_atomic(out.report, text);
  if (!out.csv.empty()) cli::write_atomic(out.csv, csv);
  std::fwrite(text.data(), 1, text.size(), stdout);
}

std::string csv_of(const GridFunction& f) {
  std::ostringstream os;
  os.precision(17);
  os << "cell,x,value\n";
  for (std::size_t i = 0; i < f.size(); ++i) os << i << ',' << f.grid().center(i) << ',' << f[i] << '\n';
  return os.str();
}

struct SpecInput {
  json doc;
  fs::path base;
};

SpecInput read_spec(const std::string& path) {
  return {cli::read_json(path), fs::path(path).parent_path()};
}

Weight load_weight_or_ones(const std::string& path, const SpacePtr& sp) {
  return path.empty() ? Weight::ones(sp) : Weight(cli::load_function(path, sp));
}

SpacePtr default_line(std::size_t n) { return MeasureSpace::lebesgue({n}, 1.0 / static_cast<double>(n)); }

json extrapolation_json(const ExtrapolationReport& r) {
  json j = report("extrapolate");
  j["mode"] = r.mode;
  j["family"] = r.family;
  j["space"] = r.space;
  j["p0"] = num(r.p0);
  if (r.exponent) j["exponent"] = num(*r.exponent);
  j["N1"] = num(r.N1);
  j["N2"] = num(r.N2);
  j["psi_argument"] = num(r.psi_argument);
  j["psi_value"] = num(r.psi_value);
  j["constant"] = num(r.constant);
  json cal = json::array();
  for (const auto& p : r.calibration.points)
    cal.push_back({{"weight", p.label}, {"constant", num(p.constant)}, {"ratio", num(p.ratio)}});
  j["calibration"] = cal;
  j["psi_table"] = {{"a", r.calibration.psi.a}, {"psi", r.calibration.psi.psi}};
  j["tolerance"] = {{"truncation", r.tol.truncation},
                    {"bisection", r.tol.bisection},
                    {"slack", r.tol.slack},
                    {"tabulation", r.tol.tabulation},
                    {"total", r.tol.total()}};
  json pairs = json::array();
  for (const auto& p : r.pairs)
    pairs.push_back(
        {{"label", p.label}, {"lhs", num(p.lhs)}, {"rhs", num(p.rhs)}, {"ratio", num(p.ratio())}, {"ok", p.ok}});
  j["pairs"] = pairs;
  j["construction"] = checks_json(r.construction);
  if (r.worst) j["worst"] = r.pairs[*r.worst].label;
  j["notes"] = r.notes;
  j["verdict"] = to_string(r.verdict);
  return j;
}

std::string extrapolation_csv(const ExtrapolationReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "label,lhs,rhs,ratio,ok\n";
  for (const auto& p : r.pairs) os << '"' << p.label << "\"," << p.lhs << ',' << p.rhs << ',' << p.ratio() << ',' << p.ok << '\n';
  return os.str();
}

json weight_report_json(const WeightConstruction& wc, const char* mode) {
  json j = report("rdf");
  j["mode"] = mode;
  const auto& r = wc.report;
  j["weight"] = values_json(wc.w.function());
  j["ap_constant"] = num(r.ap_constant);
  j["paper_bound"] = num(r.ap_bound);
  j["p0"] = num(r.p0);
  j["N1"] = num(r.N1);
  j["N2"] = num(r.N2);
  j["K"] = r.K;
  json emb = json::object();
  for (const auto& c : r.checks)
    if (c.name.rfind("embedding", 0) == 0)
      emb[c.name] = {{"lhs", num(c.lhs)}, {"bound", num(c.bound)}, {"tol", num(c.tol)}, {"ok", c.ok()}};
  j["embeddings"] = emb;
  j["checks"] = checks_json(r.checks);
  if (r.exponents) {
    const auto& e = *r.exponents;
    j["exponents"] = {{"pminus", num(e.pminus)}, {"pplus", num(e.pplus)}, {"pstar", num(e.pstar)},
                      {"s", num(e.s)},           {"alpha1", num(e.alpha1)}, {"alpha2", num(e.alpha2)},
                      {"tau", num(e.tau)},       {"c0", num(e.c0)}};
  }
  j["notes"] = r.notes;
  j["verdict"] = r.ok() ? "PASS" : "FAIL";
  return j;
}

// ---------------------------------------------------------------------------

int run(int argc, char** argv) {
  CLI::App app{"wfx: weighted inequalities, extrapolation and their numerical certificates"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  Output out;
  std::uint64_t seed = 0;
  std::string basis_name = "intervals";
  auto common = [&](CLI::App* sub, bool csv = false) {
    sub->add_option("--report,--out", out.report, "Also write the JSON report to this file");
    if (csv) sub->add_option("--csv", out.csv, "Write a CSV table to this file");
    sub->add_option("--seed", seed, "Seed for every generator");
  };
  auto basis_opt = [&](CLI::App* sub) {
    sub->add_option("--basis", basis_name, "dyadic|intervals|cubes|rectangles")
        ->check(CLI::IsMember({"dyadic", "intervals", "cubes", "rectangles"}));
  };

  // space
  auto* c_space = app.add_subcommand("space", "Describe or construct a measure space");
  std::vector<std::size_t> sp_n;
  double sp_h = 0.0;
  std::string sp_in, sp_masses;
  c_space->add_option("--n", sp_n, "Cells per axis (one or two powers of two)");
  c_space->set_help_flag("--help", "Print this help message and exit");
  c_space->add_option("--h", sp_h, "Cell width (default 1/n)");
  c_space->add_option("--masses", sp_masses, "Grid function file with per-cell masses");
  c_space->add_option("--in", sp_in, "Space descriptor file to validate");
  common(c_space);

  // maximal
  auto* c_max = app.add_subcommand("maximal", "Maximal operators over a basis");
  std::string mx_in, mx_dual, mx_orlicz;
  int mx_iter = 1;
  bool mx_centered = false;
  c_max->add_option("--in", mx_in, "Input grid function")->required();
  c_max->add_option("--dual", mx_dual, "Weight v for M'_v f = M(fv)/v");
  c_max->add_option("--iterate", mx_iter, "Apply M k times")->check(CLI::PositiveNumber);
  c_max->add_option("--orlicz", mx_orlicz, "Young function file for M_Φ");
  c_max->add_flag("--centered", mx_centered, "Centered maximal function (1D)");
  basis_opt(c_max);
  common(c_max, true);

  // weight constants
  std::string w_in;
  std::string w_p = "2", w_q, w_s = "2";
  double w_pmax = 16.0;
  auto weight_cmd = [&](const char* name, const char* help) {
    auto* c = app.add_subcommand(name, help);
    c->add_option("--weight,--in", w_in, "Weight (or, for bmo, function) file")->required();
    basis_opt(c);
    common(c);
    return c;
  };
  auto* c_ap = weight_cmd("ap", "A_p constant");
  c_ap->add_option("--p", w_p, "Exponent p > 1");
  auto* c_a1 = weight_cmd("a1", "A_1 constant");
  auto* c_ainf = weight_cmd("ainf", "A_∞ constant as the infimum of A_p constants");
  c_ainf->add_option("--pmax", w_pmax, "Largest p searched");
  auto* c_rh = weight_cmd("rh", "Reverse Hölder constant");
  c_rh->add_option("--s", w_s, "Exponent s > 1 or inf");
  auto* c_apq = weight_cmd("apq", "A_{p,q} constant");
  c_apq->add_option("--p", w_p, "Exponent p");
  c_apq->add_option("--q", w_q, "Exponent q")->required();
  auto* c_bmo = weight_cmd("bmo", "BMO seminorm");

  // norm
  auto* c_norm = app.add_subcommand("norm", "Norm of a function in a weighted space");
  std::string nm_in, nm_space;
  bool nm_assoc = false;
  c_norm->add_option("--in", nm_in, "Grid function")->required();
  c_norm->add_option("--space", nm_space, "Space spec file")->required();
  c_norm->add_flag("--associate", nm_assoc, "Norm in the associate space instead");
  common(c_norm);

  // young
  auto* c_young = app.add_subcommand("young", "Young function diagnostics");
  std::string yg_phi;
  std::vector<double> yg_t;
  c_young->add_option("--phi", yg_phi, "Young function file")->required();
  c_young->add_option("--t", yg_t, "Sample points");
  common(c_young, true);

  // rdf
  auto* c_rdf = app.add_subcommand("rdf", "Rubio de Francia majorants and extremal weights");
  std::string rd_mode, rd_f, rd_g, rd_space, rd_phi, rd_u, rd_v;
  double rd_p0 = 2.0, rd_theta = 1.0, rd_pminus = 1.0, rd_pstar = 0.0;
  std::string rd_pplus = "inf";
  int rd_K = 40;
  std::optional<double> rd_N1, rd_N2;
  c_rdf->add_option("mode", rd_mode, "majorize|weight|weight-a1|weight-modular|weight-limited")
      ->required()
      ->check(CLI::IsMember({"majorize", "weight", "weight-a1", "weight-modular", "weight-limited"}));
  c_rdf->add_option("--f", rd_f, "f (or h for majorize)")->required();
  c_rdf->add_option("--g", rd_g, "g");
  c_rdf->add_option("--space", rd_space, "Space spec file");
  c_rdf->add_option("--p0", rd_p0, "Exponent p0");
  c_rdf->add_option("--K", rd_K, "Truncation order")->check(CLI::PositiveNumber);
  c_rdf->add_option("--N1", rd_N1, "Primal maximal bound (estimated when absent)");
  c_rdf->add_option("--N2", rd_N2, "Dual maximal bound (estimated when absent)");
  c_rdf->add_option("--phi", rd_phi, "Young function file (modular)");
  c_rdf->add_option("--u", rd_u, "Weight u (modular)");
  c_rdf->add_option("--v", rd_v, "Weight v (modular)");
  c_rdf->add_option("--theta", rd_theta, "Modular variant θ ∈ (0, 1]");
  c_rdf->add_option("--pminus", rd_pminus, "Limited range p_-");
  c_rdf->add_option("--pplus", rd_pplus, "Limited range p_+ (or inf)");
  c_rdf->add_option("--pstar", rd_pstar, "Limited range p* (midpoint when 0)");
  basis_opt(c_rdf);
  common(c_rdf);

  // extrapolate
  auto* c_ex = app.add_subcommand("extrapolate", "Verify an extrapolation theorem on a pair family");
  std::string ex_family = "hilbert", ex_space, ex_mode = "bfs", ex_phi, ex_u, ex_v, ex_b, ex_F;
  double ex_p0 = 2.0, ex_p = 1.0, ex_pminus = 1.0, ex_pstar = 0.0, ex_t0 = 0.05, ex_kappa = 1.0;
  std::string ex_pplus = "inf";
  std::optional<double> ex_q;
  std::size_t ex_n = 256, ex_inputs = 16, ex_batch = 8;
  int ex_k = 1, ex_K = 40;
  c_ex->add_option("--family", ex_family,
                   "identity|hilbert|maximal-pair|coifman-fefferman|commutator|calderon|sqfn|poisson");
  c_ex->add_option("--space", ex_space, "Space spec file (not used by the modular modes)");
  c_ex->add_option("--mode", ex_mode, "bfs|vector|ainf|modular|modular-ainf|limited")
      ->check(CLI::IsMember({"bfs", "vector", "ainf", "modular", "modular-ainf", "limited"}));
  c_ex->add_option("--p0", ex_p0, "Exponent p0");
  c_ex->add_option("--p", ex_p, "Power p for the A_∞ modes");
  c_ex->add_option("--q", ex_q, "ℓ^q exponent for vector-valued checks");
  c_ex->add_option("--phi", ex_phi, "Young function file (modular modes)");
  c_ex->add_option("--u", ex_u, "Weight u (modular modes)");
  c_ex->add_option("--v", ex_v, "Weight v (modular modes)");
  c_ex->add_option("--pminus", ex_pminus, "Limited range p_-");
  c_ex->add_option("--pplus", ex_pplus, "Limited range p_+ (or inf)");
  c_ex->add_option("--pstar", ex_pstar, "Limited range p*");
  c_ex->add_option("--n", ex_n, "Grid size when no file fixes the grid");
  c_ex->add_option("--inputs", ex_inputs, "Input functions in the family")->check(CLI::PositiveNumber);
  c_ex->add_option("--batch", ex_batch, "Batch size for ℓ^q aggregates")->check(CLI::PositiveNumber);
  c_ex->add_option("--k", ex_k, "Commutator order");
  c_ex->add_option("--b", ex_b, "Commutator symbol file");
  c_ex->add_option("--F", ex_F, "Calderón profile file");
  c_ex->add_option("--t0", ex_t0, "Square function truncation");
  c_ex->add_option("--kappa", ex_kappa, "Cone aperture (poisson family)");
  c_ex->add_option("--K", ex_K, "Truncation order")->check(CLI::PositiveNumber);
  basis_opt(c_ex);
  common(c_ex, true);

  // dirichlet
  auto* c_dir = app.add_subcommand("dirichlet", "Solve the half-plane Dirichlet problem with a norm certificate");
  std::string dr_data, dr_space, dr_phi, dr_u, dr_v;
  double dr_kappa = 1.0;
  std::optional<double> dr_N1;
  c_dir->add_option("--data", dr_data, "Boundary data file")->required();
  c_dir->add_option("--space", dr_space, "Space spec file (norm certificate)");
  c_dir->add_option("--phi", dr_phi, "Young function file (modular certificate)");
  c_dir->add_option("--u", dr_u, "Weight u (modular)");
  c_dir->add_option("--v", dr_v, "Weight v (modular)");
  c_dir->add_option("--kappa", dr_kappa, "Cone aperture")->check(CLI::PositiveNumber);
  c_dir->add_option("--N1", dr_N1, "Maximal operator bound (estimated when absent)");
  basis_opt(c_dir);
  common(c_dir, true);

  // op
  auto* c_op = app.add_subcommand("op", "Apply an operator");
  std::string op_kind, op_in, op_b, op_F;
  int op_k = 1;
  double op_t0 = 0.05, op_m = 1.0, op_kappa = 1.0;
  int op_per_octave = 16;
  c_op->add_option("kind", op_kind, "hilbert|commutator|calderon|sqfn|poisson|derivative")
      ->required()
      ->check(CLI::IsMember({"hilbert", "commutator", "calderon", "sqfn", "poisson", "derivative"}));
  c_op->add_option("--in", op_in, "Input grid function")->required();
  c_op->add_option("--b", op_b, "Commutator symbol file");
  c_op->add_option("--k", op_k, "Commutator order")->check(CLI::NonNegativeNumber);
  c_op->add_option("--F", op_F, "Calderón profile file");
  c_op->add_option("--t0", op_t0, "Square function truncation");
  c_op->add_option("--m", op_m, "Square function kernel order");
  c_op->add_option("--per-octave", op_per_octave, "Square function levels per octave")->check(CLI::PositiveNumber);
  c_op->add_option("--kappa", op_kappa, "Cone aperture for poisson")->check(CLI::PositiveNumber);
  common(c_op, true);

  // suite
  auto* c_suite = app.add_subcommand("suite", "Run the acceptance battery");
  std::string su_preset;
  std::vector<int> su_only;
  bool su_timings = false;
  c_suite->add_option("--preset", su_preset, "paper-core")->required()->check(CLI::IsMember({"paper-core"}));
  c_suite->add_option("--only", su_only, "Criterion ids to run")->delimiter(',');
  c_suite->add_flag("--timings", su_timings, "Include wall-clock times (reports are then not reproducible)");
  common(c_suite);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  require_output_dir(out.report);
  require_output_dir(out.csv);
  const BasisKind bkind = parse_basis_kind(basis_name);

  if (c_space->parsed()) {
    SpacePtr sp;
    if (!sp_in.empty()) {
      sp = cli::parse_space(cli::read_json(sp_in));
    } else {
      if (sp_n.empty() || sp_n.size() > 2) throw UsageError("space needs --n with one or two entries, or --in");
      const double h = sp_h > 0.0 ? sp_h : 1.0 / static_cast<double>(sp_n[0]);
      if (sp_masses.empty()) {
        sp = MeasureSpace::lebesgue(sp_n, h);
      } else {
        const auto m = cli::load_function(sp_masses, MeasureSpace::lebesgue(sp_n, h));
        sp = MeasureSpace::with_masses(sp_n, h, {m.values().begin(), m.values().end()});
      }
    }
    json j = report("space");
    j["space"] = cli::space_json(*sp);
    j["cells"] = sp->size();
    j["total_mass"] = num(sp->total_mass());
    emit(j, out);
    return 0;
  }

  if (c_max->parsed()) {
    const auto f = cli::load_function(mx_in);
    GridFunction Mf = f;
    std::string what;
    if (mx_centered) {
      Mf = centered_maximal(f);
      what = "centered";
    } else {
      const auto basis = Basis::enumerate(f.space(), bkind);
      if (!mx_dual.empty()) {
        const Weight v(cli::load_function(mx_dual, f.space()));
        Mf = f;
        for (int k = 0; k < mx_iter; ++k) Mf = dual_maximal(Mf, basis, v);
        what = "dual";
      } else if (!mx_orlicz.empty()) {
        const auto phi = cli::parse_young(cli::read_json(mx_orlicz));
        for (int k = 0; k < mx_iter; ++k) Mf = orlicz_maximal(Mf, basis, phi);
        what = "orlicz(" + phi.describe() + ")";
      } else {
        Mf = iterate_maximal(f, basis, mx_iter);
        what = "basis";
      }
    }
    json j = report("maximal");
    j["operator"] = what;
    j["basis"] = mx_centered ? "centered" : to_string(bkind);
    j["iterate"] = mx_iter;
    j["result"] = cli::function_json(Mf);
    emit(j, out, csv_of(Mf));
    return 0;
  }

  for (auto* c : {c_ap, c_a1, c_ainf, c_rh, c_apq, c_bmo}) {
    if (!c->parsed()) continue;
    const auto f = cli::load_function(w_in);
    const auto basis = Basis::enumerate(f.space(), bkind);
    json j = report(c->get_name().c_str());
    j["basis"] = to_string(bkind);
    const std::string name = c->get_name();
    if (name == "bmo") {
      const auto r = bmo_norm(f, basis);
      j["value"] = num(r.value);
      j["argmax_box"] = box_json(r.argmax);
    } else {
      const Weight w(f);
      Constant r;
      if (name == "ap") {
        j["p"] = parse_extended(w_p);
        r = ap_constant(w, basis, parse_extended(w_p));
      } else if (name == "a1") {
        r = a1_constant(w, basis);
      } else if (name == "rh") {
        const double s = parse_extended(w_s);
        j["s"] = num(s);
        r = std::isinf(s) ? rhinf_constant(w, basis) : rh_constant(w, basis, s);
      } else if (name == "apq") {
        j["p"] = parse_extended(w_p);
        j["q"] = num(parse_extended(w_q));
        r = apq_constant(w, basis, parse_extended(w_p), parse_extended(w_q));
      } else {
        const auto a = ainf_constant(w, basis, w_pmax);
        j["value"] = num(a.value);
        j["p"] = num(a.p);
        emit(j, out);
        return 0;
      }
      j["value"] = num(r.value);
      j["argmax_box"] = box_json(r.argmax);
    }
    emit(j, out);
    return 0;
  }

  if (c_norm->parsed()) {
    const auto in = read_spec(nm_space);
    SpacePtr sp = cli::spec_space(in.doc, in.base);
    const auto f = cli::load_function(nm_in, sp);
    const auto spec = cli::parse_spec(in.doc, f.space(), in.base);
    json j = report("norm");
    if (nm_assoc) {
      const auto a = associate_norm(f, spec);
      j["space"] = associate_spec(spec).describe();
      j["value"] = num(a.value);
      j["factor"] = num(a.factor);
    } else {
      j["space"] = spec.describe();
      j["value"] = num(norm(f, spec));
    }
    emit(j, out);
    return 0;
  }

  if (c_young->parsed()) {
    const auto phi = cli::parse_young(cli::read_json(yg_phi));
    json j = report("young");
    j["phi"] = phi.describe();
    const auto d2 = delta2_constant(phi);
    j["delta2"] = {{"holds", d2.holds}, {"constant", num(d2.constant)}};
    const auto ia = dilation_indices(phi, true), in = dilation_indices(phi, false);
    j["indices"] = {{"analytic", {{"lower", num(ia.lower)}, {"upper", num(ia.upper)}}},
                    {"numeric", {{"lower", num(in.lower)}, {"upper", num(in.upper)}}}};
    std::ostringstream csv;
    csv.precision(17);
    csv << "t,phi,inverse,complementary,complementary_inverse,young_product\n";
    json samples = json::array();
    if (phi.family() != YoungFunction::Family::linear) {
      const auto& bar = phi.complementary();
      j["complementary_tabulation_error"] = num(bar.tabulation_error());
      if (yg_t.empty())
        for (int k = -6; k <= 6; ++k) yg_t.push_back(std::pow(10.0, k / 2.0));
      for (double t : yg_t) {
        const double prod = phi.inverse(t) * bar.inverse(t);
        samples.push_back({{"t", num(t)},
                           {"phi", num(phi(t))},
                           {"inverse", num(phi.inverse(t))},
                           {"complementary", num(bar(t))},
                           {"complementary_inverse", num(bar.inverse(t))},
                           {"young_product", num(prod)}});
        csv << t << ',' << phi(t) << ',' << phi.inverse(t) << ',' << bar(t) << ',' << bar.inverse(t) << ',' << prod
            << '\n';
      }
    }
    j["samples"] = samples;
    emit(j, out, csv.str());
    return 0;
  }

  if (c_rdf->parsed()) {
    RdfConfig rc;
    rc.K = rd_K;
    rc.N1 = rd_N1;
    rc.N2 = rd_N2;
    rc.seed = seed;
    const bool modular = rd_mode == "weight-modular";
    std::optional<SpecInput> in;
    SpacePtr sp;
    if (!modular) {
      if (rd_space.empty()) throw UsageError("rdf " + rd_mode + " needs --space");
      in = read_spec(rd_space);
      sp = cli::spec_space(in->doc, in->base);
    }
    const auto f = cli::load_function(rd_f, sp);
    sp = f.space();
    const auto basis = Basis::enumerate(sp, bkind);
    if (rd_mode == "majorize") {
      const auto spec = cli::parse_spec(in->doc, sp, in->base);
      const GridFunction h = abs(f);
      const double N = rd_N1 ? *rd_N1
                             : std::max(estimate_maximal_norm(spec, basis, NormMode::primal, rc.trials, seed).value(),
                                        iterate_growth(h, spec, basis, NormMode::primal));
      const auto R = rdf_majorant(h, basis, N, rd_K);
      const double a1 = a1_constant(Weight(R.value), basis).value;
      const double nh = norm(h, spec), nR = norm(R.value, spec);
      const double tolK = truncation_tolerance(rd_K);
      std::vector<Check> checks = {{"a1_R", a1, 2.0 * N, tolK + 1e-12},
                                   {"rdf_norm", nR, 2.0 * nh, R.tail_factor + kNormTol}};
      bool below = true;
      for (std::size_t i = 0; i < h.size(); ++i) below = below && h[i] <= R.value[i];
      json j = report("rdf");
      j["mode"] = "majorize";
      j["weight"] = values_json(R.value);
      j["N"] = num(N);
      j["K"] = rd_K;
      j["a1_constant"] = num(a1);
      j["paper_bound"] = num(2.0 * N);
      j["norm_h"] = num(nh);
      j["norm_Rh"] = num(nR);
      j["pointwise_majorant"] = below;
      j["checks"] = checks_json(checks);
      const bool ok = below && all_ok(checks);
      j["verdict"] = ok ? "PASS" : "FAIL";
      emit(j, out);
      return ok ? 0 : 1;
    }
    if (rd_g.empty()) throw UsageError("rdf " + rd_mode + " needs --g");
    const auto g = cli::load_function(rd_g, sp);
    std::optional<WeightConstruction> wc;
    if (modular) {
      if (rd_phi.empty()) throw UsageError("rdf weight-modular needs --phi");
      const auto phi = cli::parse_young(cli::read_json(rd_phi));
      wc = build_modular_weight(f, g, phi, load_weight_or_ones(rd_u, sp), load_weight_or_ones(rd_v, sp), basis, rd_p0,
                                rd_theta, rc);
    } else {
      const auto spec = cli::parse_spec(in->doc, sp, in->base);
      if (rd_mode == "weight") {
        wc = build_ap_weight(f, g, spec, basis, rd_p0, rc);
      } else if (rd_mode == "weight-a1") {
        wc = build_a1_weight(f, g, spec, basis, rc);
      } else {
        wc = build_limited_range_weight(f, g, spec, basis, rd_pminus, parse_extended(rd_pplus), rd_pstar, rc);
      }
    }
    const json j = weight_report_json(*wc, rd_mode.c_str());
    emit(j, out);
    return wc->report.ok() ? 0 : 1;
  }

  if (c_ex->parsed()) {
    const bool modular = ex_mode == "modular" || ex_mode == "modular-ainf";
    std::optional<SpecInput> in;
    SpacePtr sp;
    if (!modular) {
      if (ex_space.empty()) throw UsageError("extrapolate --mode " + ex_mode + " needs --space");
      in = read_spec(ex_space);
      sp = cli::spec_space(in->doc, in->base);
    }
    if (!sp && modular && !ex_u.empty()) sp = cli::load_function(ex_u).space();
    if (!sp && modular && !ex_v.empty()) sp = cli::load_function(ex_v).space();
    if (!sp) sp = default_line(ex_n);

    FamilyOptions fo;
    fo.inputs = ex_inputs;
    fo.seed = seed;
    fo.k = ex_k;
    fo.t0 = ex_t0;
    fo.kappa = ex_kappa;
    fo.basis = bkind;
    if (!ex_b.empty()) fo.b = cli::load_function(ex_b, sp);
    if (!ex_F.empty()) fo.F = cli::load_function(ex_F, sp);
    const FamilyKind kind = parse_family_kind(ex_family);
    if (kind == FamilyKind::custom) throw UsageError("custom families are library-only");
    const auto F = make_family(kind, sp, fo);
    const auto basis = Basis::enumerate(sp, bkind);
    ExtrapolationConfig cfg;
    cfg.seed = seed;
    cfg.rdf.seed = seed;
    cfg.rdf.K = ex_K;
    cfg.batch = ex_batch;

    ExtrapolationReport r;
    if (modular) {
      if (ex_phi.empty()) throw UsageError("extrapolate --mode " + ex_mode + " needs --phi");
      const auto phi = cli::parse_young(cli::read_json(ex_phi));
      const Weight u = load_weight_or_ones(ex_u, sp), v = load_weight_or_ones(ex_v, sp);
      r = ex_mode == "modular" ? verify_modular_extrapolation(F, phi, u, v, basis, ex_p0, cfg)
                               : verify_modular_ainf(F, phi, u, v, basis, ex_p, cfg);
    } else {
      const auto spec = cli::parse_spec(in->doc, sp, in->base);
      if (ex_mode == "bfs") {
        r = verify_bfs_extrapolation(F, spec, basis, ex_p0, cfg);
      } else if (ex_mode == "vector") {
        r = verify_vector_valued(F, spec, basis, ex_p0, ex_q.value_or(ex_p0), cfg);
      } else if (ex_mode == "ainf") {
        r = verify_ainf_extrapolation(F, spec, basis, ex_p, cfg, ex_q);
      } else {
        r = verify_limited_range(F, spec, basis, ex_pminus, parse_extended(ex_pplus), cfg, ex_pstar);
      }
    }
    emit(extrapolation_json(r), out, extrapolation_csv(r));
    return exit_code(r.verdict);
  }

  if (c_dir->parsed()) {
    const bool modular = !dr_phi.empty();
    if (!modular && dr_space.empty()) throw UsageError("dirichlet needs --space or --phi");
    std::optional<SpecInput> in;
    SpacePtr sp;
    if (!modular) {
      in = read_spec(dr_space);
      sp = cli::spec_space(in->doc, in->base);
    }
    const auto f = cli::load_function(dr_data, sp);
    sp = f.space();
    const auto basis = Basis::enumerate(sp, bkind);
    const ConeSpec cone{dr_kappa};
    std::optional<DirichletSolution> sol;
    std::string space_desc;
    if (modular) {
      const auto phi = cli::parse_young(cli::read_json(dr_phi));
      space_desc = "modular(" + phi.describe() + ")";
      sol = solve_dirichlet_modular(f, phi, load_weight_or_ones(dr_u, sp), load_weight_or_ones(dr_v, sp), cone, basis,
                                    dr_N1);
    } else {
      const auto spec = cli::parse_spec(in->doc, sp, in->base);
      space_desc = spec.describe();
      sol = solve_dirichlet(f, spec, cone, basis, dr_N1);
    }
    const auto& c = sol->certificate;
    json j = report("dirichlet");
    j["space"] = space_desc;
    j["kappa"] = dr_kappa;
    j["certificate"] = {{"boundary_norm", num(c.boundary_norm)},
                        {"nontangential_norm", num(c.nontangential_norm)},
                        {"upper_bound", num(c.upper_bound)},
                        {"sandwich", num(c.sandwich)},
                        {"N1", num(c.N1)},
                        {"trace_gap", num(c.trace_gap)},
                        {"lower_ok", c.lower_ok},
                        {"upper_ok", c.upper_ok},
                        {"note", c.note}};
    j["levels"] = sol->field.t;
    j["nontangential"] = values_json(sol->nontangential);
    j["verdict"] = to_string(c.verdict);
    emit(j, out, csv_of(sol->nontangential));
    return exit_code(c.verdict);
  }

  if (c_op->parsed()) {
    const auto f = cli::load_function(op_in);
    const auto& sp = f.space();
    json j = report("op");
    j["operator"] = op_kind;
    std::optional<GridFunction> result;
    if (op_kind == "hilbert") {
      result = hilbert(f);
    } else if (op_kind == "derivative") {
      result = derivative(f);
    } else if (op_kind == "commutator") {
      if (op_b.empty()) throw UsageError("op commutator needs --b");
      result = commutator("hilbert", cli::load_function(op_b, sp), op_k, f);
      j["k"] = op_k;
    } else if (op_kind == "calderon") {
      if (op_F.empty()) throw UsageError("op calderon needs --F");
      const auto r = calderon_commutator(cli::load_function(op_F, sp), f);
      result = r.value;
      j["first_commutator"] = values_json(r.first_commutator);
      j["residual"] = num(r.residual);
    } else if (op_kind == "sqfn") {
      SquareFunctionParams prm;
      prm.m = op_m;
      prm.per_octave = op_per_octave;
      result = square_function(f, op_t0, prm);
      j["t0"] = op_t0;
    } else {
      const auto field = poisson_extend(f);
      result = nontangential_maximal(field, f, ConeSpec{op_kappa});
      j["kappa"] = op_kappa;
      j["levels"] = field.t;
      json u = json::array();
      for (const auto& level : field.u) {
        json row = json::array();
        for (double x : level) row.push_back(num(x));
        u.push_back(std::move(row));
      }
      j["field"] = std::move(u);
    }
    j["result"] = cli::function_json(*result);
    emit(j, out, csv_of(*result));
    return 0;
  }

  if (c_suite->parsed()) {
    verify::SuiteOptions so;
    so.seed = seed;
    so.only = su_only;
    for (int id : su_only)
      if (id < 1 || id > verify::kCriterionCount) throw UsageError("--only ids must lie in 1.." + std::to_string(verify::kCriterionCount));
    json j = report("suite");
    j["preset"] = su_preset;
    json crit = json::array();
    verify::SuiteReport rep;
    for (int id = 1; id <= verify::kCriterionCount; ++id) {
      if (!su_only.empty() && std::find(su_only.begin(), su_only.end(), id) == su_only.end()) continue;
      auto r = verify::run_criterion(id, so);
      std::fprintf(stderr, "%s criterion %d: %s (%.1f s)\n", r.verdict == Verdict::pass ? "PASS" : "FAIL", id,
                   r.name.c_str(), r.seconds);
      json c = {{"id", r.id},           {"name", r.name},
                {"verdict", to_string(r.verdict)}, {"checks", r.checks},
                {"failed", r.failure_count}, {"detail", r.detail},
                {"failures", r.failures}};
      if (su_timings) c["seconds"] = r.seconds;
      crit.push_back(std::move(c));
      rep.criteria.push_back(std::move(r));
    }
    j["criteria"] = crit;
    j["verdict"] = to_string(rep.overall());
    emit(j, out);
    return exit_code(rep.overall());
  }
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "wfx: %s\n", e.what());
    return 3;
  } catch (const wfx::Error& e) {
    std::fprintf(stderr, "wfx: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "wfx: internal error: %s\n", e.what());
    return 3;
  }
}
