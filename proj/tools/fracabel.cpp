// fracabel: command-line front end for the fractional operators, the Abel
// inverters, the descent-time tools and the bead simulator.
//
// Exit codes: 0 success, 1 verify found a failing property, 2 validation
// error, 3 numerical failure (including a bead that never arrives).

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fracabel/abel.hpp"
#include "fracabel/curve.hpp"
#include "fracabel/dynamics.hpp"
#include "fracabel/error.hpp"
#include "fracabel/fracops.hpp"
#include "fracabel/function_file.hpp"
#include "fracabel/tautochrone.hpp"
#include "fracabel/verify.hpp"

namespace {

using namespace fracabel;

struct ExitError {
  int code;
  std::string tag;
  std::string message;
};

struct Output {
  std::string format = "csv";
  std::string path;
};

void add_output(CLI::App* app, Output& o) {
  app->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--out", o.path, "Output path (default stdout)");
}

void emit(const Output& o, const Table& table) {
  std::ostringstream text;
  if (o.format == "json") write_json(text, table); else write_csv(text, table);
  if (o.path.empty()) {
    std::cout << text.str();
    return;
  }
  std::ofstream file(o.path, std::ios::binary);
  if (!file) throw ExitError{2, "E_IO", "cannot open output file '" + o.path + "'"};
  file << text.str();
}

Table load_table(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw ExitError{2, "E_IO", "cannot open input file '" + path + "'"};
  return read_table(file);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw ExitError{2, "E_ARGS", what + ": '" + text + "' is not a finite number"};
  }
  return v;
}

// "kind:key=value,key=value"
std::pair<std::string, std::map<std::string, double>> parse_kind_params(const std::string& spec, const std::string& what) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  std::map<std::string, double> params;
  if (colon != std::string::npos) {
    for (const auto& item : split(spec.substr(colon + 1), ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ExitError{2, "E_ARGS", what + ": expected key=value, got '" + item + "'"};
      params[item.substr(0, eq)] = parse_number(item.substr(eq + 1), what);
    }
  }
  return {kind, params};
}

double param(const std::map<std::string, double>& params, const std::string& key, const std::string& what) {
  const auto it = params.find(key);
  if (it == params.end()) throw ExitError{2, "E_ARGS", what + ": missing parameter '" + key + "'"};
  return it->second;
}

Curve parse_curve(const std::string& spec, const std::string& file) {
  if (!file.empty()) {
    const Table t = load_table(file);
    return Curve::from_arclength(t.numeric_column("y"), t.numeric_column("s"));
  }
  const auto [kind, params] = parse_kind_params(spec, "--curve");
  if (kind == "cycloid") return Curve::cycloid(param(params, "r", "--curve"));
  if (kind == "line") return Curve::line(param(params, "h", "--curve"), param(params, "L", "--curve"));
  if (kind == "circle") return Curve::circle(param(params, "R", "--curve"));
  throw ExitError{2, "E_ARGS", "--curve: unknown kind '" + kind + "' (cycloid, line, circle)"};
}

std::function<double(double)> builtin(const std::string& name) {
  if (name == "one") return [](double) { return 1.0; };
  if (name == "x") return [](double x) { return x; };
  if (name == "x2") return [](double x) { return x * x; };
  if (name == "sinx") return [](double x) { return std::sin(x); };
  throw ExitError{2, "E_ARGS", "--fn: unknown builtin '" + name + "' (one, x, x2, sinx)"};
}

struct Source {
  std::string fn;
  std::string in;
  std::size_t grid_n = 513;
  double x_max = 1.0;

  void attach(CLI::App* app, const char* fn_help) {
    app->add_option("--fn", fn, fn_help);
    app->add_option("--in", in, "Input FunctionFile (columns x,f)");
    app->add_option("--grid-n", grid_n, "Grid nodes")->check(CLI::Range(std::size_t{5}, std::size_t{1} << 20));
    app->add_option("--x-max", x_max, "Grid end point");
  }

  SampledFunction load(const char* option) const {
    if (!in.empty() && !fn.empty()) throw ExitError{2, "E_ARGS", std::string("give either ") + option + " or --in"};
    if (!in.empty()) return to_function(load_table(in));
    if (fn.empty()) throw ExitError{2, "E_ARGS", std::string("one of ") + option + " or --in is required"};
    return SampledFunction::sample(Grid(x_max, grid_n), builtin(fn));
  }
};

std::vector<std::pair<std::string, Cell>> grid_meta(const SampledFunction& f) {
  return {{"grid_n", static_cast<double>(f.size())}, {"x_max", f.grid().x_max()}};
}

Point parse_point(const std::string& text, const std::string& what) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw ExitError{2, "E_ARGS", what + ": expected x,y"};
  return {parse_number(parts[0], what), parse_number(parts[1], what)};
}

// ---------------------------------------------------------------------------

struct OperatorCmd {
  Source source;
  Output output;
  double alpha = 0.5;
};

void run_operator(const std::string& name, const OperatorCmd& c) {
  const SampledFunction f = c.source.load("--fn");
  SampledFunction result = f;
  if (name == "fracint") {
    result = rl_integral(f, FracOrder(c.alpha));
  } else if (name == "fracdiff") {
    result = rl_derivative(f, FracOrder(c.alpha));
  } else {
    result = caputo_derivative(f, FracOrder(c.alpha));
  }
  auto meta = grid_meta(f);
  meta.insert(meta.begin(), {"alpha", c.alpha});
  emit(c.output, from_function(result, name, meta));
}

struct AbelCmd {
  Source source;
  Output output;
  double n = 0.5;
  std::string psi;
};

void run_abel(const std::string& mode, const AbelCmd& c) {
  const AbelKernel kernel(c.n);
  auto meta = std::vector<std::pair<std::string, Cell>>{{"n", c.n}};
  if (mode == "forward") {
    const SampledFunction f = c.source.load("--fn");
    const auto gm = grid_meta(f);
    meta.insert(meta.end(), gm.begin(), gm.end());
    emit(c.output, from_function(forward(f, kernel), "abel forward", meta));
    return;
  }
  std::optional<SampledFunction> psi;
  if (!c.psi.empty()) {
    if (!c.source.in.empty()) throw ExitError{2, "E_ARGS", "give either --psi or --in"};
    const auto colon = c.psi.find(':');
    const std::string kind = c.psi.substr(0, colon);
    if (colon == std::string::npos) throw ExitError{2, "E_ARGS", "--psi: expected kind:value"};
    const double v = parse_number(c.psi.substr(colon + 1), "--psi");
    std::function<double(double)> fn;
    if (kind == "const") fn = [v](double) { return v; };
    else if (kind == "sqrt") fn = [v](double a) { return v * std::sqrt(a); };
    else if (kind == "linear") fn = [v](double a) { return v * a; };
    else throw ExitError{2, "E_ARGS", "--psi: unknown kind '" + kind + "' (const, sqrt, linear)"};
    psi = SampledFunction::sample(Grid(c.source.x_max, c.source.grid_n), fn);
  } else {
    psi = c.source.load("--psi");
  }
  const AbelProblem problem{kernel, *psi};
  const AbelSolution sol =
      mode == "invert-remarkable" ? invert_remarkable_solution(problem) : invert_fractional_solution(problem);
  const auto gm = grid_meta(*psi);
  meta.insert(meta.end(), gm.begin(), gm.end());
  emit(c.output, from_function(sol.density, "abel " + mode, meta, {{"s", &sol.cumulative}}));
}

struct TautoCmd {
  Output output;
  std::string curve = "cycloid:r=1";
  std::string curve_file;
  double g = 9.81;
  std::vector<double> heights;
  double t0 = 0.0;
  std::string profile_in;
  std::size_t grid_n = 513;
  double y_start = 1.0;
  double y_mid = 0.5;
  std::string a;
  std::string b;
};

void run_tautochrone(const std::string& action, const TautoCmd& c) {
  Table table;
  table.command = "tautochrone " + action;
  if (action == "time-table") {
    const Curve curve = parse_curve(c.curve, c.curve_file);
    std::vector<double> heights = c.heights;
    if (heights.empty()) {
      for (double q : {0.05, 0.25, 0.5, 0.75, 0.95}) heights.push_back(q * curve.max_height());
    }
    table.meta = {{"curve", curve.name()}, {"g", c.g}};
    table.header = {"y0", "T"};
    for (double y0 : heights) table.rows.push_back({y0, descent_time(curve, y0, c.g)});
  } else if (action == "reconstruct") {
    const bool from_file = !c.profile_in.empty();
    if (from_file == (c.t0 > 0.0)) throw ExitError{2, "E_ARGS", "give exactly one of --T0 or --in"};
    const DescentProfile profile = from_file ? DescentProfile::sampled(to_function(load_table(c.profile_in)))
                                             : DescentProfile::constant(c.t0);
    const auto rec = reconstruct_tautochrone(profile, c.g, c.grid_n);
    const SampledFunction x = horizontal_profile(rec);
    table.meta = {{"g", c.g}, {"grid_n", static_cast<double>(rec.arclength.size())}};
    if (rec.radius) table.meta.emplace_back("radius", *rec.radius);
    table.header = {"y", "s", "x"};
    for (std::size_t i = 0; i < rec.arclength.size(); ++i) {
      table.rows.push_back({rec.arclength.x(i), rec.arclength[i], x[i]});
    }
  } else if (action == "prop26") {
    const Curve curve = parse_curve(c.curve, c.curve_file);
    const ArcTimeRatio q = huygens_prop26_ratio(curve, c.y_start, c.y_mid, c.g);
    table.meta = {{"curve", curve.name()}, {"y_start", c.y_start}, {"y_mid", c.y_mid}};
    table.header = {"time_ratio", "arc_ratio"};
    table.rows.push_back({q.time_ratio, q.arc_ratio});
  } else {
    if (c.a.empty() || c.b.empty()) throw ExitError{2, "E_ARGS", "brachistochrone needs --a and --b"};
    const BrachistochroneTable bt = brachistochrone_compare(parse_point(c.a, "--a"), parse_point(c.b, "--b"), c.g);
    table.meta = {{"g", c.g}, {"cycloid_radius", bt.cycloid_radius}, {"cycloid_angle", bt.cycloid_angle}};
    table.header = {"path", "time"};
    for (const auto& [path, t] : bt.rows()) table.rows.push_back({path, t});
  }
  emit(c.output, table);
}

struct SimulateCmd {
  Output output;
  std::string curve = "cycloid:r=1";
  std::string curve_file;
  double g = 9.81;
  std::optional<double> y0;
  std::vector<double> heights;
  double dt = 0.0;
  double max_time = 0.0;
  std::size_t stride = 100;
};

void run_simulate(const SimulateCmd& c) {
  const Curve curve = parse_curve(c.curve, c.curve_file);
  Table table;
  table.command = "simulate";
  if (c.y0) {
    SimConfig config{curve, *c.y0, c.g, c.dt, c.max_time};
    config.trace_stride = c.stride;
    const SimResult run = simulate(config);
    table.meta = {{"curve", curve.name()}, {"g", c.g}, {"y0", *c.y0}, {"dt", run.dt}};
    table.meta.emplace_back("arrival_time", run.arrival_time ? Cell(*run.arrival_time) : Cell(std::string("none")));
    table.meta.emplace_back("energy_drift", run.energy_drift);
    table.header = {"t", "s", "v", "y", "energy"};
    for (const auto& p : run.samples) table.rows.push_back({p.t, p.s, p.v, p.y, p.energy});
    emit(c.output, table);
    if (!run.arrival_time) throw ExitError{3, "E_NO_ARRIVAL", "bead did not reach the vertex within max_time"};
    return;
  }
  std::vector<double> heights = c.heights;
  if (heights.empty()) {
    for (double q : {0.05, 0.25, 0.5, 0.75, 0.95}) heights.push_back(q * curve.max_height());
  }
  table.meta = {{"curve", curve.name()}, {"g", c.g}};
  table.header = {"y0", "arrival_time", "descent_time", "energy_drift"};
  bool all_arrived = true;
  for (double y0 : heights) {
    SimConfig config{curve, y0, c.g, c.dt, c.max_time};
    config.trace_stride = std::size_t{1} << 30;
    const SimResult run = simulate(config);
    all_arrived = all_arrived && run.arrival_time.has_value();
    table.rows.push_back({y0, run.arrival_time ? Cell(*run.arrival_time) : Cell(std::string("none")),
                          descent_time(curve, y0, c.g), run.energy_drift});
  }
  emit(c.output, table);
  if (!all_arrived) throw ExitError{3, "E_NO_ARRIVAL", "a bead did not reach the vertex within max_time"};
}

struct VerifyCmd {
  Output output;
  bool quick = false;
  bool inject_fault = false;
  double fault_size = 0.05;
};

int run_verify_cmd(const VerifyCmd& c) {
  VerifyOptions options;
  options.quick = c.quick;
  if (c.inject_fault) options.weight_fault = c.fault_size;
  const auto results = run_verify(options);
  bool all = true;
  std::ostringstream text;
  if (c.output.format == "json") {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& r : results) {
      doc.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"measured", r.measured},
                     {"tolerance", r.tolerance}, {"detail", r.detail}});
    }
    text << doc.dump(1) << '\n';
  } else {
    for (const auto& r : results) text << format_check(r) << '\n';
  }
  for (const auto& r : results) all = all && r.passed;
  if (c.output.path.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream file(c.output.path, std::ios::binary);
    if (!file) throw ExitError{2, "E_IO", "cannot open output file '" + c.output.path + "'"};
    file << text.str();
  }
  return all ? 0 : 1;
}

int fail(int code, const std::string& tag, const std::string& message) {
  std::cerr << "ERROR " << tag << ": " << message << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional operators, Abel inversion and tautochrone tools"};
  app.require_subcommand(1);

  std::map<std::string, OperatorCmd> op_cmds{{"fracint", {}}, {"fracdiff", {}}, {"caputo", {}}};
  const std::map<std::string, std::string> op_help{{"fracint", "Riemann-Liouville integral I^alpha f"},
                                                   {"fracdiff", "Riemann-Liouville derivative D^alpha f"},
                                                   {"caputo", "Caputo derivative"}};
  for (auto& [name, cmd] : op_cmds) {
    auto* sub = app.add_subcommand(name, op_help.at(name));
    sub->add_option("--alpha", cmd.alpha, "Order")->required();
    cmd.source.attach(sub, "Builtin function: one, x, x2, sinx");
    add_output(sub, cmd.output);
  }

  AbelCmd abel_cmd;
  auto* abel = app.add_subcommand("abel", "Abel integral equation psi(a) = int f(x) (a-x)^(-n) dx");
  abel->require_subcommand(1);
  for (const char* mode : {"forward", "invert-remarkable", "invert-fractional"}) {
    auto* sub = abel->add_subcommand(mode);
    sub->add_option("--n", abel_cmd.n, "Kernel exponent in (0, 1)");
    abel_cmd.source.attach(sub, "Builtin density: one, x, x2, sinx");
    if (std::string(mode) != "forward") sub->add_option("--psi", abel_cmd.psi, "Data: const:K, sqrt:C or linear:C");
    add_output(sub, abel_cmd.output);
  }

  TautoCmd tauto_cmd;
  auto* tauto = app.add_subcommand("tautochrone", "Descent times, reconstruction and comparisons");
  tauto->require_subcommand(1);
  {
    auto* sub = tauto->add_subcommand("time-table", "Descent time for each release height");
    sub->add_option("--curve", tauto_cmd.curve, "cycloid:r=.., line:h=..,L=.., circle:R=..");
    sub->add_option("--curve-file", tauto_cmd.curve_file, "Sampled curve with columns y,s");
    sub->add_option("--g", tauto_cmd.g, "Gravity");
    sub->add_option("--heights", tauto_cmd.heights, "Release heights")->delimiter(',');
    add_output(sub, tauto_cmd.output);
  }
  {
    auto* sub = tauto->add_subcommand("reconstruct", "Arc length s(y) from a descent-time profile");
    sub->add_option("--T0", tauto_cmd.t0, "Constant descent time");
    sub->add_option("--in", tauto_cmd.profile_in, "Descent-time profile as FunctionFile (x = height, f = time)");
    sub->add_option("--g", tauto_cmd.g, "Gravity");
    sub->add_option("--grid-n", tauto_cmd.grid_n, "Grid nodes")->check(CLI::Range(std::size_t{5}, std::size_t{1} << 20));
    add_output(sub, tauto_cmd.output);
  }
  {
    auto* sub = tauto->add_subcommand("prop26", "Time ratio against arc ratio on the cycloid");
    sub->add_option("--curve", tauto_cmd.curve, "Cycloid, e.g. cycloid:r=1");
    sub->add_option("--ystart", tauto_cmd.y_start, "Release height");
    sub->add_option("--ymid", tauto_cmd.y_mid, "Intermediate height");
    sub->add_option("--g", tauto_cmd.g, "Gravity");
    add_output(sub, tauto_cmd.output);
  }
  {
    auto* sub = tauto->add_subcommand("brachistochrone", "Chord, circular arc and cycloid between two points");
    sub->add_option("--a", tauto_cmd.a, "Start point x,y")->required();
    sub->add_option("--b", tauto_cmd.b, "End point x,y")->required();
    sub->add_option("--g", tauto_cmd.g, "Gravity");
    add_output(sub, tauto_cmd.output);
  }

  SimulateCmd sim_cmd;
  auto* sim = app.add_subcommand("simulate", "Bead released from rest; trace or height sweep");
  sim->add_option("--curve", sim_cmd.curve, "cycloid:r=.., line:h=..,L=.., circle:R=..");
  sim->add_option("--curve-file", sim_cmd.curve_file, "Sampled curve with columns y,s");
  sim->add_option("--g", sim_cmd.g, "Gravity");
  sim->add_option("--y0", sim_cmd.y0, "Release height (trace mode)");
  sim->add_option("--heights", sim_cmd.heights, "Release heights (sweep mode)")->delimiter(',');
  sim->add_option("--dt", sim_cmd.dt, "Time step (default 1e-4 natural time scales)");
  sim->add_option("--max-time", sim_cmd.max_time, "Time limit");
  sim->add_option("--stride", sim_cmd.stride, "Trace every k-th step")->check(CLI::PositiveNumber);
  add_output(sim, sim_cmd.output);

  VerifyCmd verify_cmd;
  auto* ver = app.add_subcommand("verify", "Run the property suite");
  ver->add_flag("--quick", verify_cmd.quick, "Smaller grids");
  ver->add_flag("--inject-fault", verify_cmd.inject_fault, "Corrupt the fractional weight tables");
  ver->add_option("--fault-size", verify_cmd.fault_size, "Relative corruption for --inject-fault");
  add_output(ver, verify_cmd.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(2, "E_ARGS", e.what());
  }

  try {
    for (auto& [name, cmd] : op_cmds) {
      if (app.got_subcommand(name)) run_operator(name, cmd);
    }
    for (auto* sub : abel->get_subcommands()) run_abel(sub->get_name(), abel_cmd);
    for (auto* sub : tauto->get_subcommands()) run_tautochrone(sub->get_name(), tauto_cmd);
    if (app.got_subcommand("simulate")) run_simulate(sim_cmd);
    if (app.got_subcommand("verify")) return run_verify_cmd(verify_cmd);
  } catch (const ExitError& e) {
    return fail(e.code, e.tag, e.message);
  } catch (const DomainError& e) {
    return fail(2, "E_DOMAIN", e.what());
  } catch (const NumericalError& e) {
    return fail(3, "E_NUMERIC", e.what());
  } catch (const std::exception& e) {
    return fail(3, "E_INTERNAL", e.what());
  }
  return 0;
}
