#include "cli_app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cdpoly/cdpoly.hpp"

namespace cdpoly::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  int max_degree = -1;  // -1 selects the subcommand default
  double tol = kCDTol;
  int quad_points = kDefaultQuadPoints;
  std::string mode = "float";
  std::string out_path;
  std::string csv_path;
  bool print_json = false;
  bool no_convergence = false;
  std::string gens;
  std::size_t nvars = 0;
  std::string moments_path;
  std::string factors = "legendre,legendre";
  std::string in_path;
};

int degree_or(const Config& c, int fallback) { return c.max_degree >= 0 ? c.max_degree : fallback; }

void require_degree(int n, int max, const std::string& what) {
  if (n > max) throw UsageError(what + " supports --max-degree up to " + std::to_string(max));
}

void require_float_mode(const Config& c, const std::string& what) {
  if (c.mode == "rational") throw UsageError("--mode rational is not available for " + what);
}

PipelineTolerances tolerances(const Config& c) {
  PipelineTolerances t;
  t.cd = c.tol;
  return t;
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

std::size_t nvars_for(const Config& c, const std::string& text) {
  const std::size_t n = c.nvars > 0 ? c.nvars : infer_nvars(text);
  if (n == 0) throw UsageError("cannot infer the number of variables; pass --nvars");
  return n;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

void write_artifacts(const Config& c, const nlohmann::json& report, const std::vector<Check>& checks,
                     std::ostream& out) {
  if (!c.out_path.empty()) {
    std::ofstream f(c.out_path);
    if (!f) throw UsageError("cannot write " + c.out_path);
    f << report.dump(2) << '\n';
  }
  if (!c.csv_path.empty()) {
    std::ofstream f(c.csv_path);
    if (!f) throw UsageError("cannot write " + c.csv_path);
    f << "name,value,threshold,pass\n";
    for (const auto& ch : checks)
      f << csv_quote(ch.name) << ',' << detail::format_double(ch.value) << ',' << detail::format_double(ch.threshold) << ','
        << (ch.pass ? "true" : "false") << '\n';
  }
  if (c.print_json) out << report.dump(2) << '\n';
}

int summarize(const Config& c, const PipelineReport& rep, std::ostream& out, std::ostream& err) {
  const nlohmann::json j = to_json(rep);
  write_artifacts(c, j, rep.checks, out);
  if (!c.print_json) {
    for (const auto& ch : rep.checks)
      out << (ch.pass ? "PASS  " : "FAIL  ") << ch.name << "  " << detail::format_double(ch.value) << " (threshold "
          << detail::format_double(ch.threshold) << ")\n";
    for (const auto& n : rep.notices) out << "note: " << n << '\n';
  }
  if (const Check* bad = first_failure(rep.checks)) {
    err << rep.pipeline << ": failing check: " << bad->name << " = " << detail::format_double(bad->value)
        << " exceeds " << detail::format_double(bad->threshold) << '\n';
    return kExitFail;
  }
  if (!c.print_json) out << rep.pipeline << ": all " << rep.checks.size() << " checks passed\n";
  return kExitPass;
}

PipelineReport run_circle(const Config& c) {
  CircleOptions o;
  o.max_degree = degree_or(c, 5);
  require_degree(o.max_degree, kCircleMaxDegree, "circle");
  o.rational = c.mode == "rational";
  o.tol = tolerances(c);
  return circle_pipeline(o);
}

PipelineReport run_lemniscate(const Config& c) {
  require_float_mode(c, "lemniscate (quadrature-backed moments)");
  LemniscateOptions o;
  o.max_degree = degree_or(c, 6);
  require_degree(o.max_degree, kLemniscateMaxDegree, "lemniscate");
  o.quad_points = c.quad_points;
  o.convergence = !c.no_convergence;
  o.tol = tolerances(c);
  return lemniscate_pipeline(o);
}

PipelineReport run_favard(const Config& c) {
  FavardOptions o;
  o.max_degree = degree_or(c, 8);
  require_degree(o.max_degree, kFavardMaxDegree, "favard1d");
  o.tol = tolerances(c);
  return favard1d_pipeline(o);
}

PipelineReport run_tensor(const Config& c) {
  require_float_mode(c, "tensor");
  TensorOptions o;
  o.max_degree = degree_or(c, 6);
  require_degree(o.max_degree, kTensorMaxDegree, "tensor");
  const auto comma = c.factors.find(',');
  o.first = c.factors.substr(0, comma);
  o.second = comma == std::string::npos ? o.first : c.factors.substr(comma + 1);
  for (const auto& f : {o.first, o.second})
    if (f != "legendre" && f != "chebyshev" && f != "uniform01")
      throw UsageError("unknown factor '" + f + "' (expected legendre, chebyshev or uniform01)");
  o.tol = tolerances(c);
  return tensor_pipeline(o);
}

PipelineReport run_generic(const Config& c) {
  require_float_mode(c, "generic");
  GenericOptions o;
  o.max_degree = degree_or(c, 4);
  o.moments = moment_table_from_json(read_json(c.moments_path));
  const std::size_t nvars = c.nvars > 0 ? c.nvars : o.moments.nvars;
  if (nvars != o.moments.nvars) throw UsageError("--nvars does not match the moment table");
  o.generators = parse_generators(c.gens, nvars);
  o.tol = tolerances(c);
  return generic_pipeline(o);
}

int run_dims(const Config& c, std::ostream& out) {
  const int n = degree_or(c, 8);
  const std::size_t nvars = nvars_for(c, c.gens);
  const Ideal v = make_ideal(parse_generators(c.gens, nvars), nvars);
  const QuotientProfile prof = v.quotient_profile(n);
  std::ostringstream line;
  for (std::size_t k = 0; k < prof.d_V.size(); ++k) line << (k ? " " : "") << prof.d_V[k];
  const nlohmann::json kappa = prof.kappa ? nlohmann::json(*prof.kappa) : nlohmann::json("infinity");
  std::vector<std::string> gb;
  for (const auto& g : v.basis()) gb.push_back(format_polynomial(g));
  const nlohmann::json report = {{"schema", kReportSchema}, {"pipeline", "dims"}, {"config", {{"max_degree", n}, {"nvars", nvars}}},
                                 {"groebner_basis", gb}, {"d_V", prof.d_V}, {"kappa_V", kappa}};
  write_artifacts(c, report, {}, out);
  if (!c.print_json) {
    out << line.str() << '\n';
    out << "kappa_V: " << (prof.kappa ? std::to_string(*prof.kappa) : std::string("infinity")) << '\n';
  }
  return kExitPass;
}

PipelineReport run_verify_cd(const Config& c) {
  const nlohmann::json in = read_json(c.in_path);
  if (!in.contains("basis") || !in.contains("recurrence"))
    throw UsageError(c.in_path + ": expected \"basis\" and \"recurrence\" objects");
  const ScopedZeroTolerance working(kWorkingZeroTol);
  const RigidBasis basis = basis_from_json(in.at("basis"));
  const RecurrenceData rec = recurrence_from_json(in.at("recurrence"));
  if (rec.nvars != basis.nvars()) throw UsageError("basis and recurrence differ in nvars");
  const int limit = basis.terminal_degree ? *basis.terminal_degree : basis.max_degree() - 1;
  if (rec.degrees() - 1 > limit) throw UsageError("recurrence reaches beyond the stored basis");

  PipelineReport rep;
  rep.pipeline = "verify-cd";
  rep.config = {{"input", c.in_path}, {"tol", c.tol}};
  const QuotientProfile prof = basis.ideal->quotient_profile(basis.max_degree());
  std::vector<int> expected(prof.d_V.begin(), prof.d_V.begin() + static_cast<long>(basis.columns.size()));
  rep.checks.push_back(make_flag("column sizes equal d_V", basis.dims() == expected));

  const Ideal v2 = double_ideal(*basis.ideal);
  const CDTolerance tol{c.tol, kCDAbsoluteThrough, kCDRelativeTol};
  const CDReport cd = cd_report(v2, basis, rec, rec.degrees() - 1, tol);
  for (std::size_t j = 0; j < cd.residuals.size(); ++j)
    for (std::size_t i = 0; i < cd.degrees.size(); ++i)
      rep.checks.push_back(make_check("cd residual n=" + std::to_string(cd.degrees[i]) + " j=" + std::to_string(j + 1),
                                      cd.residuals[j][i], cd.thresholds[i]));
  const RecurrenceReport rr = verify_recurrence(*basis.ideal, basis, rec, kRecurrenceTol);
  rep.checks.push_back(make_check("recurrence residual", rr.max_residual, kRecurrenceTol));
  rep.cd = cd;
  return rep;
}

void add_output_options(CLI::App* sub, Config& c) {
  sub->add_option("--out", c.out_path, "Write the JSON report to this file");
  sub->add_option("--csv", c.csv_path, "Write the checks as CSV to this file");
  sub->add_flag("--json", c.print_json, "Print the JSON report instead of the summary");
}

void add_pipeline_options(CLI::App* sub, Config& c) {
  sub->add_option("--max-degree", c.max_degree, "Largest degree N of the recurrence and CD data")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--tol", c.tol, "Absolute CD residual threshold for degrees 0..4")->check(CLI::PositiveNumber);
  sub->add_option("--mode", c.mode, "Coefficient mode")->check(CLI::IsMember({"float", "rational"}));
  add_output_options(sub, c);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"cdpoly: orthonormal column polynomials modulo an ideal, matrix recurrences and "
               "Christoffel-Darboux kernels"};
  app.name("cdpoly");
  app.require_subcommand(1, 1);

  auto* circle = app.add_subcommand("circle", "Unit circle, closed-form basis");
  add_pipeline_options(circle, c);
  auto* lemn = app.add_subcommand("lemniscate", "Bernoulli lemniscate, quadrature-backed moments");
  add_pipeline_options(lemn, c);
  lemn->add_option("--quad-points", c.quad_points, "Gauss-Jacobi nodes (power of two, 8..1024)");
  lemn->add_flag("--no-convergence", c.no_convergence, "Skip the rerun at doubled nodes");
  auto* favard = app.add_subcommand("favard1d", "One variable, V = {0}: Legendre and uniform [0,1]");
  add_pipeline_options(favard, c);
  auto* tensor = app.add_subcommand("tensor", "Tensor product of two one-variable functionals, V = {0}");
  add_pipeline_options(tensor, c);
  tensor->add_option("--factors", c.factors, "One or two of legendre, chebyshev, uniform01, comma separated (one name is used for both)");
  auto* generic = app.add_subcommand("generic", "User ideal generators and moment table");
  add_pipeline_options(generic, c);
  generic->add_option("--gens", c.gens, "Generators separated by ',' or ';' (empty: zero ideal)");
  generic->add_option("--moments", c.moments_path, "Moment table JSON {nvars, entries:[{exps, value}]}")->required();
  generic->add_option("--nvars", c.nvars, "Number of variables");
  auto* dims = app.add_subcommand("dims", "Print d_V(0..N) and kappa_V");
  dims->add_option("--gens", c.gens, "Generators separated by ',' or ';'")->required();
  dims->add_option("--max-degree", c.max_degree, "Largest degree N")->check(CLI::NonNegativeNumber);
  dims->add_option("--nvars", c.nvars, "Number of variables (default: largest index in --gens)");
  dims->add_option("--mode", c.mode, "Coefficient mode (dims is always exact)")->check(CLI::IsMember({"float", "rational"}));
  add_output_options(dims, c);
  auto* verify = app.add_subcommand("verify-cd", "Re-check a stored basis and recurrence");
  verify->add_option("--in", c.in_path, "Report JSON containing basis and recurrence")->required();
  verify->add_option("--tol", c.tol, "Absolute CD residual threshold for degrees 0..4")->check(CLI::PositiveNumber);
  add_output_options(verify, c);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  }

  try {
    if (lemn->parsed()) {
      const int q = c.quad_points;
      if (q < 8 || q > 1024 || (q & (q - 1)) != 0)
        throw UsageError("--quad-points must be a power of two between 8 and 1024");
    }
    if (dims->parsed()) return run_dims(c, out);
    PipelineReport rep;
    if (circle->parsed()) rep = run_circle(c);
    else if (lemn->parsed()) rep = run_lemniscate(c);
    else if (favard->parsed()) rep = run_favard(c);
    else if (tensor->parsed()) rep = run_tensor(c);
    else if (generic->parsed()) rep = run_generic(c);
    else rep = run_verify_cd(c);
    return summarize(c, rep, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DimensionError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "usage error: malformed input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFail;
  }
}

}  // namespace cdpoly::cli
