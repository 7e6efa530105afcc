// varlp: command-line front end. Every subcommand prints one report (JSON by
// default, CSV with --format csv); exit codes are listed in --help.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "varlp/varlp.hpp"

namespace {

using varlp::json;
using varlp::num;

enum Exit : int { kOk = 0, kDomain = 1, kNumerical = 2, kViolation = 3, kUsage = 64 };

constexpr const char* kVersion = "0.1.0";

const char* kFooter = R"(Exit codes: 0 success, 1 domain or precondition error, 2 numerical failure,
3 soundness violation (verify), 64 usage error or malformed description.

Profiles:  const:c  power:a  power:a,coeff:c  power:a,cutoff:R  exp:c (e^{c r})
           logpower:a,b  twostep:q1,q2,r0  linear-x  grid:file.csv
Exponents: a number, or any profile description
Domains:   whole  ball:R  shell:t,R  exterior:t  halfline:a,inf  interval:a,b

VARLP_RMAX sets the default finite stand-in for infinity (1e6).)";

double default_rmax() {
  if (const char* env = std::getenv("VARLP_RMAX")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && v > 0.0 && std::isfinite(v)) return v;
    std::cerr << "varlp: ignoring invalid VARLP_RMAX='" << env << "'\n";
  }
  return 1e6;
}

std::string cell(double v) { return varlp::detail::spec_number(v); }

struct Report {
  std::string command;
  json config = json::object();
  json result = json::object();
  std::vector<std::string> notes;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
  bool violation = false;
};

struct Global {
  std::string format = "json";
  bool no_timestamp = false;
  std::string output;
  double rmax = 1e6;
};

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json envelope(const Report& r, const Global& g, const std::string& status, int code) {
  json j;
  j["tool"] = "varlp";
  j["version"] = kVersion;
  j["command"] = r.command;
  j["status"] = status;
  j["exit_code"] = code;
  j["config"] = r.config;
  j["config"]["rmax"] = num(g.rmax);
  j["result"] = r.result;
  j["notes"] = r.notes;
  if (!g.no_timestamp) j["timestamp"] = timestamp();
  return j;
}

void write(const std::string& text, const Global& g) {
  if (g.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(g.output);
  out << text;
}

int emit(const Report& r, const Global& g) {
  const int code = r.violation ? kViolation : kOk;
  if (g.format == "csv") {
    std::ostringstream ss;
    for (std::size_t i = 0; i < r.csv_header.size(); ++i) ss << (i ? "," : "") << r.csv_header[i];
    ss << "\n";
    for (const auto& row : r.csv_rows) {
      for (std::size_t i = 0; i < row.size(); ++i) ss << (i ? "," : "") << row[i];
      ss << "\n";
    }
    write(ss.str(), g);
  } else {
    write(envelope(r, g, r.violation ? "violation" : "ok", code).dump(2) + "\n", g);
  }
  return code;
}

int emit_error(Report r, const Global& g, int code, const std::string& kind, const std::string& message) {
  std::cerr << "varlp " << r.command << ": " << message << "\n";
  if (g.format == "json") {
    r.result = {{"error", {{"type", kind}, {"message", message}}}};
    write(envelope(r, g, "error", code).dump(2) + "\n", g);
  }
  return code;
}

std::vector<double> operator_grid(double lo, double hi, int count, const std::vector<double>& at) {
  if (!at.empty()) return at;
  return varlp::log_grid(lo, hi, count);
}

// ---- norm

struct NormArgs {
  int n = 1;
  std::string domain = "whole";
  std::string f;
  std::string w = "const:1";
  std::string exponent = "2";
  bool two_valued = false;
  bool one_two = false;
  double a1 = 0.0, a2 = 0.0;
  double rel_tol = 1e-12;
};

void run_norm(const NormArgs& a, const Global& g, Report& rep) {
  if (a.two_valued || a.one_two) {
    rep.config = {{"mode", a.two_valued ? "two-valued" : "one-two"}, {"a1", num(a.a1)}, {"a2", num(a.a2)}};
    const double v = a.two_valued ? varlp::norm_two_valued(a.a1, a.a2) : varlp::norm_one_two(a.a1, a.a2);
    rep.result = {{"norm", num(v)}, {"method", "cardano"}};
    rep.csv_header = {"norm"};
    rep.csv_rows = {{cell(v)}};
    return;
  }
  if (a.f.empty()) throw varlp::parse_error("--f", "a profile is required (or use --two-valued)");
  const auto f = varlp::parse_profile(a.f, "--f");
  const auto w = varlp::parse_profile(a.w, "--w");
  const auto p = varlp::parse_exponent(a.exponent, "--exponent");
  auto dom = varlp::parse_domain(a.domain, a.n, "--domain");
  dom.r_max = std::min(dom.outer, g.rmax);
  rep.config = {{"n", a.n},     {"domain", varlp::domain_label(dom)}, {"f", f.label()},
                {"w", w.label()}, {"exponent", a.exponent},            {"rel_tol", num(a.rel_tol)}};
  varlp::NormOptions opt;
  opt.rel_tol = a.rel_tol;
  const auto r = varlp::norm(f, w, p, dom, opt);
  rep.result = r;
  if (r.method != varlp::NormMethod::bisection) {
    // cross-check the closed form against plain bisection on the modular
    auto slow = opt;
    slow.fast_paths = false;
    const auto b = varlp::norm(f, w, p, dom, slow);
    rep.result["bisection_check"] = {{"norm", num(b.norm)},
                                     {"relative_difference", num(std::abs(b.norm - r.norm) / r.norm)}};
  }
  if (r.method == varlp::NormMethod::transcendental) {
    const double mu = r.norm / (std::abs(f(1.0)) * w(1.0));
    rep.notes.push_back("modular in closed form; the norm solves mu^a ln mu = k with mu = " + cell(mu));
    if (dom.inner == 1.0 && dom.measure == varlp::Measure::interval) {
      rep.notes.push_back("for f = 1, p(x) = x on [1, inf) the norm is the root of lambda ln lambda = 1, "
                          "about 1.76322; the value 1.7712 sometimes quoted for this case gives "
                          "lambda ln lambda = " + cell(1.7712 * std::log(1.7712)) + " and is not the root");
    }
  }
  if (r.tail_warning) rep.notes.push_back("more than 1% of the modular lies beyond r_max");
  rep.csv_header = {"norm", "method", "modular_at_norm", "iterations", "tail_share"};
  rep.csv_rows = {{cell(r.norm), varlp::to_string(r.method), cell(r.modular_at_norm), std::to_string(r.iterations),
                   cell(r.tail_share)}};
}

// ---- hardy / gmean

struct OperatorArgs {
  int n = 1;
  std::string f;
  std::vector<double> at;
  double grid_lo = 1e-4;
  double grid_hi = 0.0;  // 0: rmax
  int count = 200;
  double beta = 0.0;  // gmean only: averaged power mean when > 0
};

void run_operator(bool geometric, const OperatorArgs& a, const Global& g, Report& rep) {
  const auto f = varlp::parse_profile(a.f, "--f");
  const auto grid = operator_grid(a.grid_lo, a.grid_hi > 0.0 ? a.grid_hi : g.rmax, a.count, a.at);
  rep.config = {{"n", a.n}, {"f", f.label()}, {"grid", varlp::nums(grid)}};
  varlp::OperatorOutput out;
  if (!geometric) {
    out = varlp::hardy(f, a.n, grid);
  } else if (a.beta > 0.0) {
    rep.config["beta"] = num(a.beta);
    out = varlp::averaged_hardy_beta(f, a.beta, a.n, grid);
  } else {
    out = varlp::geometric_mean(f, a.n, grid);
  }
  rep.result = out;
  rep.csv_header = {"r", "value", "error"};
  for (std::size_t i = 0; i < out.nodes.size(); ++i)
    rep.csv_rows.push_back({cell(out.nodes[i]), cell(out.values[i]), cell(out.errors[i])});
}

// ---- criterion-a / criterion-d

struct CriterionArgs {
  int n = 1;
  std::string v = "const:1";
  std::string w = "const:1";
  double p = 2.0;
  std::string q = "2";
  std::optional<double> parameter;
  double t_lo = 1e-6;
  double t_hi = 0.0;  // 0: rmax
  int t_count = 400;
  bool no_refine = false;
};

void run_criterion(bool hardy, const CriterionArgs& a, const Global& g, Report& rep) {
  const auto v = varlp::parse_profile(a.v, "--v");
  const auto w = varlp::parse_profile(a.w, "--w");
  const auto q = varlp::parse_exponent(a.q, "--q");
  varlp::CriterionOptions opt;
  opt.t_lo = a.t_lo;
  opt.t_hi = a.t_hi > 0.0 ? a.t_hi : g.rmax;
  opt.t_count = a.t_count;
  opt.refine = !a.no_refine;
  rep.config = {{"n", a.n},          {"v", v.label()},         {"w", w.label()},         {"p", num(a.p)},
                {"q", a.q},          {"t_lo", num(opt.t_lo)},  {"t_hi", num(opt.t_hi)}, {"t_count", opt.t_count},
                {"refine", opt.refine}};
  if (a.parameter) {
    rep.config[hardy ? "alpha" : "s"] = num(*a.parameter);
    const auto r = hardy ? varlp::criterion_a(v, w, a.p, q, *a.parameter, a.n, opt)
                         : varlp::criterion_d(v, w, a.p, q, *a.parameter, a.n, opt);
    rep.result = r;
    rep.notes = r.notes;
    rep.csv_header = {"t", "value"};
    for (std::size_t i = 0; i < r.t_grid.size(); ++i) rep.csv_rows.push_back({cell(r.t_grid[i]), cell(r.values[i])});
    return;
  }
  const auto b = hardy ? varlp::hardy_constant_bounds(v, w, a.p, q, a.n, opt)
                       : varlp::gmean_constant_bounds(v, w, a.p, q, a.n, opt);
  rep.result = b;
  rep.notes = b.notes;
  rep.csv_header = {hardy ? "alpha" : "s", "criterion", "lower_term", "upper_term"};
  for (std::size_t i = 0; i < b.parameters.size(); ++i)
    rep.csv_rows.push_back(
        {cell(b.parameters[i]), cell(b.criterion_values[i]), cell(b.lower_terms[i]), cell(b.upper_terms[i])});
}

// ---- corollary

struct CorollaryArgs {
  int which = 1;
  int n = 1;
  double beta = 0.0;
  double gamma = 0.0;
  double p = 2.0;
  double q = 2.0;
  double s = 1.25;
  std::string balance = "literal";
};

void run_corollary(const CorollaryArgs& a, const Global& g, Report& rep) {
  if (a.which == 1) {
    if (a.balance != "literal" && a.balance != "dimensional")
      throw varlp::parse_error("--balance", "expected literal or dimensional");
    const auto mode = a.balance == "literal" ? varlp::Balance::literal : varlp::Balance::dimensional;
    rep.config = {{"which", 1},         {"n", a.n},         {"beta", num(a.beta)},
                  {"gamma", num(a.gamma)}, {"p", num(a.p)}, {"q", num(a.q)}, {"balance", a.balance}};
    const auto r = varlp::corollary1_check(a.beta, a.gamma, a.p, a.q, a.n, mode);
    rep.result = r;
    rep.notes = r.notes;
    rep.csv_header = {"compatible", "lower", "upper", "sharp"};
    rep.csv_rows = {{r.compatible ? "true" : "false", cell(r.lower), cell(r.upper), r.sharp ? "true" : "false"}};
    return;
  }
  if (a.which != 2) throw varlp::parse_error("--which", "expected 1 or 2");
  varlp::CriterionOptions opt;
  opt.t_hi = g.rmax;
  rep.config = {{"which", 2}, {"n", a.n}, {"beta", num(a.beta)}, {"p", num(a.p)}, {"s", num(a.s)}};
  const auto r = varlp::corollary2_dprime(a.beta, a.p, a.s, a.n, opt);
  rep.result = r;
  rep.notes = r.report.notes;
  rep.csv_header = {"t", "value"};
  for (std::size_t i = 0; i < r.report.t_grid.size(); ++i)
    rep.csv_rows.push_back({cell(r.report.t_grid[i]), cell(r.report.values[i])});
}

// ---- solve / k

struct ProblemArgs {
  double p = 2.0;
  std::string q = "2";
  std::string omega1 = "const:1";
  std::string omega2 = "power:-1";
  double lambda = 2.0;
  double anchor = 1.0;
  double grid_lo = 1e-6;
  double grid_hi = 100.0;
  int grid_count = 200;
};

void add_problem_options(CLI::App* sub, ProblemArgs& a) {
  sub->add_option("--p", a.p, "exponent p > 1")->capture_default_str();
  sub->add_option("--q", a.q, "exponent q(x) >= p")->capture_default_str();
  sub->add_option("--omega1", a.omega1, "right weight (closed-form derivative required)")->capture_default_str();
  sub->add_option("--omega2", a.omega2, "left weight")->capture_default_str();
  sub->add_option("--lambda", a.lambda, "lambda > 0")->capture_default_str();
  sub->add_option("--anchor", a.anchor, "normalization point a of y0(a) = 1")->capture_default_str();
  sub->add_option("--grid-lo", a.grid_lo, "smallest grid node")->capture_default_str();
  sub->add_option("--grid-hi", a.grid_hi, "largest grid node")->capture_default_str();
  sub->add_option("--grid-count", a.grid_count, "grid nodes (log-spaced)")->capture_default_str();
}

varlp::GurkaProblem make_problem(const ProblemArgs& a, json& config) {
  varlp::GurkaProblem prob;
  prob.p = a.p;
  prob.q = varlp::parse_exponent(a.q, "--q");
  prob.omega1 = varlp::parse_profile(a.omega1, "--omega1");
  prob.omega2 = varlp::parse_profile(a.omega2, "--omega2");
  prob.lambda = a.lambda;
  prob.anchor = a.anchor;
  prob.grid = varlp::log_grid(a.grid_lo, a.grid_hi, a.grid_count);
  config["problem"] = {{"p", num(a.p)},
                       {"q", a.q},
                       {"omega1", prob.omega1.label()},
                       {"omega2", prob.omega2.label()},
                       {"lambda", num(a.lambda)},
                       {"anchor", num(a.anchor)},
                       {"grid", {num(a.grid_lo), num(a.grid_hi), a.grid_count}}};
  prob.validate();
  return prob;
}

struct SolveArgs {
  ProblemArgs problem;
  std::string f0 = "power:1,coeff:4";
  std::string y;
  std::string y_init = "power:0.5";
  int max_iter = 50;
  double tol = 1e-10;
  int outer_max = 20;
};

void run_solve(const SolveArgs& a, Report& rep) {
  const auto prob = make_problem(a.problem, rep.config);
  const auto f0 = varlp::parse_profile(a.f0, "--f0");
  rep.config["f0"] = f0.label();
  rep.config["max_iter"] = a.max_iter;
  rep.config["tol"] = num(a.tol);
  const auto& grid = prob.grid;
  if (!a.y.empty()) {
    // y given: iterate the integral equation for w and rebuild y0 from it
    const auto y = varlp::parse_profile(a.y, "--y");
    rep.config["mode"] = "fixed-y";
    rep.config["y"] = y.label();
    json yres;
    try {
      yres = varlp::equation_residual(y, prob, grid).residual;
    } catch (const varlp::side_condition_error& e) {
      yres = e.what();
    }
    const auto P = varlp::source_P(y, prob, grid);
    const auto st = varlp::picard_iterate(f0, prob, y, P, a.max_iter, a.tol);
    const auto y0 = varlp::reconstruct_y0(st.w, prob.anchor, grid);
    const double res0 = varlp::equation_residual(y0, prob, grid).residual;
    rep.result = {{"y_residual", yres},
                  {"inner", st},
                  {"y0", varlp::sampled_json(y0, grid)},
                  {"y0_residual", num(res0)},
                  {"source_P", varlp::sampled_json(P, grid)}};
    if (!st.converged)
      rep.notes.push_back("successive approximation stopped after " + std::to_string(st.iteration) +
                          " iterations without reaching the tolerance");
    rep.csv_header = {"x", "w", "y0"};
    for (std::size_t i = 0; i < grid.size(); ++i) rep.csv_rows.push_back({cell(grid[i]), cell(st.values[i]), cell(y0(grid[i]))});
    return;
  }
  const auto y_init = varlp::parse_profile(a.y_init, "--y-init");
  rep.config["mode"] = "outer-loop";
  rep.config["y_init"] = y_init.label();
  rep.config["outer_max"] = a.outer_max;
  const auto sol = varlp::solve_gurka(f0, prob, y_init, a.outer_max, a.max_iter, a.tol);
  rep.result = sol;
  if (!sol.outer_converged) rep.notes.push_back("outer loop did not settle within " + std::to_string(a.outer_max) + " rounds");
  rep.csv_header = {"x", "w", "y0"};
  for (std::size_t i = 0; i < grid.size(); ++i)
    rep.csv_rows.push_back({cell(grid[i]), cell(sol.state.values[i]), cell(sol.y0(grid[i]))});
}

struct KArgs {
  ProblemArgs problem;
  std::string y = "power:0.5";
  std::vector<double> slopes;
};

void run_k(const KArgs& a, Report& rep) {
  const auto prob = make_problem(a.problem, rep.config);
  const auto y = varlp::parse_profile(a.y, "--y");
  std::vector<double> slopes = a.slopes;
  if (slopes.empty())
    for (double c = 1.25; c <= 8.0; c += 0.25) slopes.push_back(c);
  std::vector<varlp::RadialProfile> family;
  for (double c : slopes) family.push_back(varlp::RadialProfile::power(1.0, c));
  rep.config["y"] = y.label();
  rep.config["family"] = {{"kind", "c x"}, {"slopes", varlp::nums(slopes)}};
  const auto P = varlp::source_P(y, prob, prob.grid);
  const auto k = varlp::compute_k(family, y, P, prob);
  rep.result = k;
  for (const auto& w : k.warnings) rep.notes.push_back(w);
  rep.notes.push_back("K is estimated from above over a finite family of admissible functions");
  rep.csv_header = {"slope", "sup"};
  for (std::size_t i = 0; i < slopes.size(); ++i) rep.csv_rows.push_back({cell(slopes[i]), cell(k.member_sup[i])});
}

// ---- verify

struct VerifyArgs {
  std::string target = "gmean";
  std::string family = "knopp";
  std::uint64_t seed = 1;
  int count = 8;
  int n = 1;
  std::string v = "const:1";
  std::string w = "const:1";
  double p = 1.0;
  std::string q = "1";
  std::vector<double> params;
  double cutoff = 1.0;
  std::string function = "one-plus-xy";
  std::string px = "1";
  std::string qy = "2";
  int nx = 64, ny = 64;
  ProblemArgs problem;
};

varlp::TestFamily make_family(const VerifyArgs& a) {
  using varlp::TestFamily;
  if (a.family == "knopp") return a.params.empty() ? TestFamily::knopp() : TestFamily::knopp(a.params);
  if (a.family == "power-cutoff")
    return TestFamily::power_cutoff(a.params.empty() ? std::vector<double>{-0.45, -0.25, 0.0, 1.0} : a.params, a.cutoff);
  if (a.family == "exponential")
    return TestFamily::exponentials(a.params.empty() ? std::vector<double>{0.5, 1.0, 2.0, 4.0} : a.params);
  if (a.family == "splines") return TestFamily::random_splines(a.seed, a.count);
  if (a.family == "smooth-u") return TestFamily::smooth_u();
  throw varlp::parse_error("--family", "unknown family '" + a.family + "'");
}

std::function<double(double, double)> sample_function(const std::string& name) {
  if (name == "one-plus-xy") return [](double x, double y) { return 1.0 + x * y; };
  if (name == "separable") return [](double x, double y) { return std::exp(x - 2.0 * y) + x; };
  if (name == "wave") return [](double x, double y) { return std::sin(3.0 * x + y) + 1.5; };
  throw varlp::parse_error("--function", "expected one-plus-xy, separable or wave");
}

void run_verify(const VerifyArgs& a, Report& rep) {
  if (a.target == "theorem1") {
    const auto px = varlp::parse_exponent(a.px, "--px");
    const auto qy = varlp::parse_exponent(a.qy, "--qy");
    rep.config = {{"target", a.target}, {"function", a.function}, {"px", a.px}, {"qy", a.qy}, {"grid", {a.nx, a.ny}}};
    const auto r = varlp::verify_theorem1(sample_function(a.function), px, qy, a.nx, a.ny);
    rep.result = r;
    rep.violation = !r.holds;
    rep.csv_header = {"lhs", "rhs", "factor", "holds"};
    rep.csv_rows = {{cell(r.lhs), cell(r.rhs), cell(r.factor), r.holds ? "true" : "false"}};
    return;
  }
  if (a.target == "theorem4") {
    const auto prob = make_problem(a.problem, rep.config);
    rep.config["target"] = a.target;
    const auto r = varlp::theorem4_demo(prob);
    rep.result = r;
    rep.notes = r.notes;
    rep.violation = r.estimate && r.estimate->violation;
    rep.csv_header = {"solution_direction", "inequality_direction", "equation_residual", "k_estimate"};
    rep.csv_rows = {{r.solution_direction ? "true" : "false", r.inequality_direction ? "true" : "false",
                     cell(r.equation_residual), cell(r.k_estimate)}};
    return;
  }
  varlp::InequalitySetup s;
  if (a.target == "hardy")
    s.kind = varlp::InequalityKind::hardy;
  else if (a.target == "gmean")
    s.kind = varlp::InequalityKind::gmean;
  else if (a.target == "derivative")
    s.kind = varlp::InequalityKind::derivative;
  else
    throw varlp::parse_error("--target", "expected hardy, gmean, derivative, theorem1 or theorem4");
  const auto fam = make_family(a);
  rep.config = {{"target", a.target}, {"family", fam.name}, {"seed", a.seed}, {"count", a.count}};
  if (s.kind == varlp::InequalityKind::derivative) {
    const auto prob = make_problem(a.problem, rep.config);
    s.p = prob.p;
    s.q = prob.q;
    s.v = prob.omega1;
    s.w = prob.omega2;
    s.lambda = prob.lambda;
    rep.notes.push_back("the upper bound assumes the equation is solvable at this lambda (see `solve`)");
  } else {
    s.n = a.n;
    s.p = a.p;
    s.q = varlp::parse_exponent(a.q, "--q");
    s.v = varlp::parse_profile(a.v, "--v");
    s.w = varlp::parse_profile(a.w, "--w");
    rep.config["n"] = a.n;
    rep.config["v"] = s.v.label();
    rep.config["w"] = s.w.label();
    rep.config["p"] = num(a.p);
    rep.config["q"] = a.q;
  }
  rep.config["parameters"] = varlp::nums(a.params);
  const auto est = varlp::estimate_constant(s, fam);
  rep.result = est;
  rep.notes.insert(rep.notes.end(), est.notes.begin(), est.notes.end());
  rep.violation = est.violation;
  rep.csv_header = {"member", "lhs", "rhs", "ratio"};
  for (std::size_t i = 0; i < est.ratios.size(); ++i)
    rep.csv_rows.push_back({std::to_string(i), cell(est.lhs[i]), cell(est.rhs[i]), cell(est.ratios[i])});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norms, operators, two-weight criteria and best-constant checks in variable exponent Lebesgue spaces",
               "varlp"};
  app.footer(kFooter);
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  g.rmax = default_rmax();
  app.add_option("--format", g.format, "report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_flag("--no-timestamp", g.no_timestamp, "omit the timestamp so reports are byte-reproducible");
  app.add_option("--output,-o", g.output, "write the report to a file instead of stdout");
  app.add_option("--rmax", g.rmax, "finite stand-in for infinity (default from VARLP_RMAX or 1e6)")
      ->check(CLI::PositiveNumber);

  NormArgs norm_args;
  auto* norm = app.add_subcommand("norm", "Luxemburg norm of a radial profile (CSV: norm,method,modular_at_norm,iterations,tail_share)");
  norm->add_option("--n", norm_args.n, "dimension")->capture_default_str();
  norm->add_option("--domain", norm_args.domain, "domain description")->capture_default_str();
  norm->add_option("--f", norm_args.f, "profile f");
  norm->add_option("--w", norm_args.w, "weight w")->capture_default_str();
  norm->add_option("--exponent,--p", norm_args.exponent, "exponent p(x)")->capture_default_str();
  norm->add_flag("--two-valued", norm_args.two_valued, "norm for exponents 2 and 3 with masses a1, a2");
  norm->add_flag("--one-two", norm_args.one_two, "norm for exponents 1 and 2 with masses a1, a2");
  norm->add_option("--a1", norm_args.a1, "mass of the smaller exponent");
  norm->add_option("--a2", norm_args.a2, "mass of the larger exponent");
  norm->add_option("--rel-tol", norm_args.rel_tol, "relative tolerance of the norm")->capture_default_str();

  OperatorArgs hardy_args, gmean_args;
  auto* hardy = app.add_subcommand("hardy", "Hf(r) = integral of f over B(0, r) (CSV: r,value,error)");
  auto* gmean = app.add_subcommand("gmean", "Gf(r) = exp of the ball average of ln f (CSV: r,value,error)");
  for (auto [sub, args] : {std::pair{hardy, &hardy_args}, std::pair{gmean, &gmean_args}}) {
    sub->add_option("--n", args->n, "dimension")->capture_default_str();
    sub->add_option("--f", args->f, "profile f")->required();
    sub->add_option("--at", args->at, "evaluate at these radii instead of a grid");
    sub->add_option("--grid-lo", args->grid_lo, "smallest grid radius")->capture_default_str();
    sub->add_option("--grid-hi", args->grid_hi, "largest grid radius (default rmax)");
    sub->add_option("--count", args->count, "grid radii (log-spaced)")->capture_default_str();
  }
  gmean->add_option("--beta", gmean_args.beta, "power mean (ball average of f^beta)^(1/beta) instead");

  CriterionArgs ca_args, cd_args;
  auto* crit_a = app.add_subcommand(
      "criterion-a", "Hardy two-weight criterion A(alpha), or constant bounds without --alpha (CSV: t,value or alpha,...)");
  auto* crit_d = app.add_subcommand(
      "criterion-d", "geometric mean criterion D(s), or constant bounds without --s (CSV: t,value or s,...)");
  for (auto [sub, args] : {std::pair{crit_a, &ca_args}, std::pair{crit_d, &cd_args}}) {
    sub->add_option("--n", args->n, "dimension")->capture_default_str();
    sub->add_option("--v", args->v, "right weight v")->capture_default_str();
    sub->add_option("--w", args->w, "left weight w")->capture_default_str();
    sub->add_option("--p", args->p, "exponent p")->capture_default_str();
    sub->add_option("--q", args->q, "exponent q(x)")->capture_default_str();
    sub->add_option("--t-lo", args->t_lo, "smallest radius of the sup grid")->capture_default_str();
    sub->add_option("--t-hi", args->t_hi, "largest radius of the sup grid (default rmax)");
    sub->add_option("--t-count", args->t_count, "radii in the sup grid")->capture_default_str();
    sub->add_flag("--no-refine", args->no_refine, "skip golden-section refinement of the sup");
  }
  crit_a->add_option("--alpha", ca_args.parameter, "alpha in (0, 1)");
  crit_d->add_option("--s", cd_args.parameter, "s > 1");

  CorollaryArgs cor_args;
  auto* cor = app.add_subcommand("corollary", "power-weight corollaries (CSV: compatible,lower,upper,sharp or t,value)");
  cor->add_option("--which", cor_args.which, "1: power weights with constant exponents; 2: the two-step exponent")
      ->capture_default_str();
  cor->add_option("--n", cor_args.n, "dimension")->capture_default_str();
  cor->add_option("--beta", cor_args.beta, "weight exponent beta")->capture_default_str();
  cor->add_option("--gamma", cor_args.gamma, "weight exponent gamma (which = 1)")->capture_default_str();
  cor->add_option("--p", cor_args.p, "exponent p")->capture_default_str();
  cor->add_option("--q", cor_args.q, "exponent q (which = 1)")->capture_default_str();
  cor->add_option("--s", cor_args.s, "parameter s (which = 2)")->capture_default_str();
  cor->add_option("--balance", cor_args.balance, "literal or dimensional (which = 1)")->capture_default_str();

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "nonlinear equation for y by successive approximation (CSV: x,w,y0)");
  add_problem_options(solve, solve_args.problem);
  solve->add_option("--f0", solve_args.f0, "seed of the iteration")->capture_default_str();
  solve->add_option("--y", solve_args.y, "fixed y: iterate once for w and rebuild y0");
  solve->add_option("--y-init", solve_args.y_init, "starting y of the outer loop")->capture_default_str();
  solve->add_option("--max-iter", solve_args.max_iter, "inner iterations")->capture_default_str();
  solve->add_option("--tol", solve_args.tol, "inner tolerance")->capture_default_str();
  solve->add_option("--outer-max", solve_args.outer_max, "outer rounds")->capture_default_str();

  KArgs k_args;
  auto* k = app.add_subcommand("k", "threshold K over the family f = c x (CSV: slope,sup)");
  add_problem_options(k, k_args.problem);
  k->add_option("--y", k_args.y, "positive increasing y")->capture_default_str();
  k->add_option("--slopes", k_args.slopes, "slopes c of the family (default 1.25, 1.5, ..., 8)");

  VerifyArgs ver_args;
  auto* ver = app.add_subcommand("verify", "empirical checks against the theoretical bounds (CSV: member,lhs,rhs,ratio)");
  ver->add_option("--target", ver_args.target, "hardy, gmean, derivative, theorem1 or theorem4")->capture_default_str();
  ver->add_option("--family", ver_args.family, "knopp, power-cutoff, exponential, splines or smooth-u")
      ->capture_default_str();
  ver->add_option("--params", ver_args.params, "family parameters (delta, exponents or rates)");
  ver->add_option("--cutoff", ver_args.cutoff, "cutoff radius of the power-cutoff family")->capture_default_str();
  ver->add_option("--seed", ver_args.seed, "seed of the spline family")->capture_default_str();
  ver->add_option("--count", ver_args.count, "members of the spline family")->capture_default_str();
  ver->add_option("--n", ver_args.n, "dimension")->capture_default_str();
  ver->add_option("--v", ver_args.v, "right weight v")->capture_default_str();
  ver->add_option("--w", ver_args.w, "left weight w")->capture_default_str();
  ver->add_option("--p", ver_args.p, "exponent p")->capture_default_str();
  ver->add_option("--q", ver_args.q, "exponent q(x)")->capture_default_str();
  ver->add_option("--function", ver_args.function, "theorem1: one-plus-xy, separable or wave")->capture_default_str();
  ver->add_option("--px", ver_args.px, "theorem1: exponent in x")->capture_default_str();
  ver->add_option("--qy", ver_args.qy, "theorem1: exponent in y")->capture_default_str();
  ver->add_option("--nx", ver_args.nx, "theorem1: grid in x")->capture_default_str();
  ver->add_option("--ny", ver_args.ny, "theorem1: grid in y")->capture_default_str();
  auto* problem_group = ver->add_option_group("problem", "derivative and theorem4 targets");
  add_problem_options(problem_group, ver_args.problem);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  Report rep;
  rep.command = app.get_subcommands().front()->get_name();
  try {
    if (norm->parsed()) run_norm(norm_args, g, rep);
    else if (hardy->parsed()) run_operator(false, hardy_args, g, rep);
    else if (gmean->parsed()) run_operator(true, gmean_args, g, rep);
    else if (crit_a->parsed()) run_criterion(true, ca_args, g, rep);
    else if (crit_d->parsed()) run_criterion(false, cd_args, g, rep);
    else if (cor->parsed()) run_corollary(cor_args, g, rep);
    else if (solve->parsed()) run_solve(solve_args, rep);
    else if (k->parsed()) run_k(k_args, rep);
    else if (ver->parsed()) run_verify(ver_args, rep);
  } catch (const varlp::parse_error& e) {
    std::cerr << "varlp " << rep.command << ": " << e.what() << "\n" << "Run with --help for more information.\n";
    return kUsage;
  } catch (const varlp::domain_error& e) {
    return emit_error(rep, g, kDomain, "domain", e.what());
  } catch (const varlp::numerical_error& e) {
    return emit_error(rep, g, kNumerical, "numerical", e.what());
  } catch (const std::exception& e) {
    return emit_error(rep, g, kNumerical, "numerical", e.what());
  }
  return emit(rep, g);
}
