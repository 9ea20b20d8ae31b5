#include "noether/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "noether/catalog.hpp"
#include "noether/errors.hpp"
#include "noether/flow.hpp"
#include "noether/integrability.hpp"
#include "noether/json_io.hpp"
#include "noether/noether.hpp"
#include "noether/sampling.hpp"

namespace noether::cli {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "UsageError"; }
};

class PointSyntaxError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "PointSyntaxError"; }
};

const char* command_name(Command c) {
  switch (c) {
    case Command::derive: return "derive";
    case Command::verify: return "verify";
    case Command::flow: return "flow";
    case Command::action: return "action";
    case Command::integrability: return "integrability";
    case Command::catalog: return "catalog";
  }
  return "";
}

struct LoadedSystem {
  std::string label;
  SystemSpec spec;
  SamplingOptions domain;
  std::vector<std::string> notes;
};

LoadedSystem load_system(const RunConfig& c) {
  if (c.system.has_value() == c.system_file.has_value()) {
    throw UsageError("exactly one of --system and --system-file is required");
  }
  LoadedSystem out;
  if (c.system) {
    CatalogEntry e = builtin(*c.system);
    out.label = e.name;
    out.spec = std::move(e.spec);
    out.domain = std::move(e.domain);
    out.notes = std::move(e.notes);
  } else {
    out.label = *c.system_file;
    out.spec = load_system_file(*c.system_file);
  }
  out.domain.min_abs_rho = c.min_rho;
  return out;
}

PhasePoint parse_point(const std::string& text, std::size_t n) {
  std::vector<double> coords;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    std::string item = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                     : comma - start);
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    item = first == std::string::npos ? std::string() : item.substr(first, last - first + 1);
    if (!item.empty() && item.front() == '+') item.erase(0, 1);
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw PointSyntaxError("invalid coordinate '" + item + "' in point '" + text + "'");
    }
    coords.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  const std::size_t expected = extended_dim(n);
  if (coords.size() != expected) {
    throw PointSyntaxError("point '" + text + "' has " + std::to_string(coords.size()) +
                           " coordinates; expected " + std::to_string(expected) +
                           " (t,q1..q" + std::to_string(n) + ",p1..p" + std::to_string(n) + ")");
  }
  return PhasePoint::from_flat(coords);
}

std::vector<PhasePoint> parse_points(const RunConfig& c, std::size_t n) {
  std::vector<PhasePoint> pts;
  for (const auto& s : c.points) pts.push_back(parse_point(s, n));
  return pts;
}

const PhasePoint& single_point(const std::vector<PhasePoint>& pts) {
  if (pts.size() != 1) throw UsageError("exactly one --point is required");
  return pts.front();
}

struct NamedIntegral {
  std::string name;
  Expression expr;
};

std::vector<NamedIntegral> resolve_integrals(const RunConfig& c, const SystemSpec& sys) {
  std::vector<NamedIntegral> out;
  if (c.integrals.empty()) {
    for (const auto& [name, expr] : sys.integrals) out.push_back({name, expr});
    return out;
  }
  for (const auto& text : c.integrals) {
    if (const Expression* e = sys.integrals.find(text)) {
      out.push_back({text, *e});
    } else {
      out.push_back({text, sys.parse(text)});
    }
  }
  return out;
}

Json point_json(const PhasePoint& x) {
  Json a = Json::array();
  for (double v : x.flat()) a.push_back(v);
  return a;
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json names_json(const std::vector<NamedIntegral>& ints) {
  Json a = Json::array();
  for (const auto& i : ints) a.push_back(i.name);
  return a;
}

SystemSpec without_beta(SystemSpec sys) {
  sys.beta.reset();
  return sys;
}

std::vector<PhasePoint> sample_for(const RunConfig& c, const LoadedSystem& ls,
                                   const std::vector<NamedIntegral>& ints) {
  std::vector<PhasePoint> pts = parse_points(c, ls.spec.n);
  if (!pts.empty()) return pts;
  std::vector<Expression> exprs;
  for (const auto& i : ints) exprs.push_back(i.expr);
  return sample_points(ls.spec, c.samples, c.seed, ls.domain, exprs);
}

struct Outcome {
  Json results;
  Json diagnostics = Json::object();
  int code = 0;
};

Outcome run_derive(const RunConfig& c, const LoadedSystem& ls) {
  const SystemSpec& sys = ls.spec;
  const auto ints = resolve_integrals(c, sys);
  if (ints.size() != 1) throw UsageError("derive needs exactly one --integral");
  const PhasePoint x = single_point(parse_points(c, sys.n));
  const Expression& F = ints.front().expr;

  const FieldValue zeta = inverse_noether(sys, F, x);
  const double f = F.value(x, sys.params);
  const double contraction = pc_contract(without_beta(sys), zeta, x);
  const double zf = directional_derivative(sys, F, characteristic_field(sys, x), x);
  const bool warn = std::abs(zf) > 1e-8 * (1.0 + std::abs(f));

  Outcome o;
  o.results["integral"] = ints.front().name;
  o.results["expression"] = F.source();
  o.results["point"] = point_json(x);
  o.results["rho"] = elementary_action(sys, x);
  o.results["tau"] = zeta.tau;
  o.results["xi"] = zeta.xi;
  o.results["eta"] = zeta.eta;
  o.results["F"] = f;
  o.results["i_zeta_alpha"] = contraction;
  o.results["identity_residual"] = std::abs(contraction - f);
  o.results["Z_of_F"] = zf;
  o.results["Z_of_F_warning"] = warn;
  Json warnings = Json::array();
  if (warn) warnings.push_back("Z(F) is not zero at the point: F may not be a first integral");
  o.diagnostics["warnings"] = std::move(warnings);
  return o;
}

Outcome run_verify(const RunConfig& c, const LoadedSystem& ls) {
  const SystemSpec& sys = ls.spec;
  const SystemSpec plain = without_beta(sys);
  const auto ints = resolve_integrals(c, sys);
  if (ints.empty()) throw UsageError("no integrals to verify");
  const auto pts = sample_for(c, ls, ints);

  Outcome o;
  Json entries = Json::array();
  double worst = 0.0;
  bool ok = true;
  for (const auto& in : ints) {
    const SymmetryCandidate zeta = SymmetryCandidate::from_integral(sys, in.name, in.expr);
    double max_rel = 0.0, r1 = 0.0, r2 = 0.0, r3 = 0.0, identity = 0.0, zf = 0.0;
    for (const PhasePoint& x : pts) {
      const ResidualReport rep = symmetry_residuals(sys, zeta, x);
      max_rel = std::max(max_rel, rep.max_rel);
      for (double v : rep.r1) r1 = std::max(r1, std::abs(v));
      for (double v : rep.r2) r2 = std::max(r2, std::abs(v));
      r3 = std::max(r3, std::abs(rep.r3));
      const double f = in.expr.value(x, sys.params);
      const FieldValue v = zeta(x);
      identity = std::max(identity, std::abs(pc_contract(plain, v, x) - f) / (1.0 + std::abs(f)));
      zf = std::max(zf, std::abs(directional_derivative(sys, in.expr,
                                                        characteristic_field(sys, x), x)) /
                            (1.0 + std::abs(f)));
    }
    const bool pass = max_rel <= c.tol && identity <= 1e-12;
    ok = ok && pass;
    worst = std::max(worst, max_rel);
    Json e;
    e["name"] = in.name;
    e["expression"] = in.expr.source();
    e["max_rel"] = max_rel;
    e["max_abs_r1"] = r1;
    e["max_abs_r2"] = r2;
    e["max_abs_r3"] = r3;
    e["identity_residual"] = identity;
    e["max_rel_Z_of_F"] = zf;
    e["pass"] = pass;
    entries.push_back(std::move(e));
  }
  o.results["tolerance"] = c.tol;
  o.results["points"] = pts.size();
  o.results["integrals"] = std::move(entries);
  o.results["max_rel"] = worst;
  o.results["pass"] = ok;
  o.code = ok ? 0 : 2;
  return o;
}

Outcome run_flow(const RunConfig& c, const LoadedSystem& ls, std::ostream& out) {
  const SystemSpec& sys = ls.spec;
  const PhasePoint x0 = single_point(parse_points(c, sys.n));
  std::optional<SymmetryCandidate> zeta;
  std::string generator = "characteristic";
  Trajectory traj;
  if (!c.integrals.empty()) {
    const auto ints = resolve_integrals(c, sys);
    if (ints.size() != 1) throw UsageError("flow takes at most one --integral");
    zeta = SymmetryCandidate::from_integral(sys, ints.front().name, ints.front().expr);
    generator = "symmetry:" + ints.front().name;
    traj = flow_symmetry(sys, *zeta, x0, c.s, c.step);
  } else {
    traj = integrate_characteristic(sys, x0, c.duration, c.step);
  }

  Outcome o;
  Json drift = Json::object();
  for (const auto& [name, expr] : sys.integrals) {
    drift[name] = conservation_drift(expr, traj, sys.params);
  }
  if (zeta) {
    drift["J"] = conservation_drift(
        [&](const PhasePoint& x) { return noether_integral(sys, *zeta, std::nullopt, x); }, traj);
  }
  o.results["generator"] = generator;
  o.results["step"] = traj.step;
  o.results["samples"] = traj.samples.size();
  o.results["initial"] = point_json(traj.samples.front());
  o.results["final"] = point_json(traj.samples.back());
  o.results["drift"] = std::move(drift);

  if (c.format == Format::csv) {
    if (c.output) {
      std::ofstream f(*c.output);
      if (!f) throw Error("cannot open output '" + *c.output + "'");
      write_trajectory_csv(traj, f);
    } else {
      write_trajectory_csv(traj, out);
      o.code = -1;  // CSV already written to the stream; suppress JSON
    }
  }
  return o;
}

Outcome run_action(const RunConfig& c, const LoadedSystem& ls) {
  const SystemSpec& sys = ls.spec;
  const PhasePoint x0 = single_point(parse_points(c, sys.n));
  const Trajectory traj = integrate_characteristic(sys, x0, c.duration, c.step);
  FieldValue dir = FieldValue::zero(sys.n);
  for (double& v : dir.xi) v = 1.0;
  const StationarityResult res =
      stationarity_probe(sys, traj, bump_profile(dir), {-1e-2, -1e-3, 1e-3, 1e-2});
  Outcome o;
  o.results["profile"] = "sin(pi theta) dq";
  o.results["base_action"] = res.base_action;
  o.results["slope"] = res.slope;
  o.results["curvature"] = res.curvature;
  o.results["cubic"] = res.cubic;
  Json table = Json::array();
  for (const auto& [a, s] : res.samples) {
    Json row;
    row["amplitude"] = a;
    row["action"] = s;
    table.push_back(std::move(row));
  }
  o.results["table"] = std::move(table);
  return o;
}

Json rank_json(const IndependenceResult& r, std::size_t expected) {
  Json o;
  o["rank"] = r.rank;
  o["expected"] = expected;
  Json svs = Json::array();
  for (const auto& v : r.singular_values) svs.push_back(v);
  o["singular_values"] = std::move(svs);
  return o;
}

Outcome run_integrability(const RunConfig& c, const LoadedSystem& ls) {
  const SystemSpec& sys = ls.spec;
  const auto ints = resolve_integrals(c, sys);
  if (ints.empty()) throw UsageError("no integrals given");
  const std::size_t r = c.r.value_or(ints.size());
  if (r > ints.size()) throw UsageError("--r exceeds the number of integrals");
  const auto pts = sample_for(c, ls, ints);

  std::vector<SymmetryCandidate> syms;
  std::vector<Expression> exprs;
  for (const auto& in : ints) {
    syms.push_back(SymmetryCandidate::from_integral(sys, in.name, in.expr));
    exprs.push_back(in.expr);
  }
  IntegrabilityOptions opts;
  opts.bracket_tol = c.bracket_tol;
  opts.sv_tol = c.sv_tol;
  opts.invariance_tol = c.invariance_tol;
  const IntegrabilityReport rep = integrability_report(sys, syms, exprs, r, pts, opts);

  Outcome o;
  o.results["integrals"] = names_json(ints);
  o.results["n"] = rep.n;
  o.results["m"] = rep.m;
  o.results["r"] = rep.r;
  o.results["dimension_condition"] = rep.dimension_condition;
  Json comm;
  comm["brackets"] = matrix_json(rep.commutation.brackets);
  comm["kernel_defects"] = matrix_json(rep.commutation.kernel_defects);
  comm["z_brackets"] = rep.commutation.z_brackets;
  comm["max_residual"] = rep.commutation.max_residual;
  comm["tolerance"] = c.bracket_tol;
  comm["pass"] = rep.commutation_ok;
  o.results["commutation"] = std::move(comm);
  Json indep = rank_json(rep.independence, ints.size());
  indep["field_rank"] = rep.fields.rank;
  indep["pass"] = rep.independence_ok;
  o.results["independence"] = std::move(indep);
  Json inv;
  inv["mean"] = matrix_json(rep.invariance.mean);
  inv["stddev"] = matrix_json(rep.invariance.stddev);
  inv["max_abs"] = matrix_json(rep.invariance.max_abs);
  inv["tolerance"] = c.invariance_tol;
  inv["pass"] = rep.invariance_ok;
  o.results["invariance"] = std::move(inv);
  Json sp = Json::array();
  for (const auto& x : rep.sample_points) sp.push_back(point_json(x));
  o.results["sample_points"] = std::move(sp);
  o.results["hypotheses_hold"] = rep.hypotheses_hold();
  o.code = rep.hypotheses_hold() ? 0 : 2;
  return o;
}

void emit(const RunConfig& c, const Json& doc, std::ostream& out) {
  if (c.output) {
    std::ofstream f(*c.output, std::ios::binary);
    if (!f) throw Error("cannot open output '" + *c.output + "'");
    write_json(doc, f);
  } else {
    write_json(doc, out);
  }
}

Json params_json(const Params& p) {
  Json o = Json::object();
  for (const auto& [k, v] : p) o[k] = v;
  return o;
}

int run_catalog(const RunConfig& c, std::ostream& out) {
  if (c.list == c.export_name.has_value()) {
    throw UsageError("catalog needs exactly one of --list and --export NAME");
  }
  if (c.export_name) {
    const CatalogEntry e = builtin(*c.export_name);
    emit(c, system_to_json(e.spec), out);
    return 0;
  }
  Json doc;
  doc["schema_version"] = "1";
  doc["command"] = "catalog";
  doc["system"] = nullptr;
  doc["params"] = Json::object();
  Json names = Json::array();
  for (const auto& n : builtin_names()) names.push_back(n);
  doc["results"]["systems"] = std::move(names);
  doc["diagnostics"] = Json::object();
  emit(c, doc, out);
  return 0;
}

void validate(const RunConfig& c) {
  for (double v : {c.step, c.tol, c.bracket_tol, c.invariance_tol, c.sv_tol}) {
    if (!(v > 0.0)) throw UsageError("step and tolerances must be positive");
  }
  if (!(c.duration > 0.0)) throw UsageError("duration must be positive");
  if (c.min_rho < 0.0) throw UsageError("min-rho must be nonnegative");
}

}  // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    validate(c);
    if (c.command == Command::catalog) return run_catalog(c, out);
    const LoadedSystem ls = load_system(c);
    Outcome o;
    switch (c.command) {
      case Command::derive: o = run_derive(c, ls); break;
      case Command::verify: o = run_verify(c, ls); break;
      case Command::flow: o = run_flow(c, ls, out); break;
      case Command::action: o = run_action(c, ls); break;
      case Command::integrability: o = run_integrability(c, ls); break;
      case Command::catalog: break;
    }
    if (o.code == -1) return 0;
    Json doc;
    doc["schema_version"] = "1";
    doc["command"] = command_name(c.command);
    Json system;
    system["name"] = ls.label;
    system["n"] = ls.spec.n;
    system["hamiltonian"] = ls.spec.hamiltonian.source();
    doc["system"] = std::move(system);
    doc["params"] = params_json(ls.spec.params);
    doc["results"] = std::move(o.results);
    Json diag = std::move(o.diagnostics);
    diag["seed"] = c.seed;
    if (c.command == Command::verify || c.command == Command::integrability) {
      diag["samples"] = c.points.empty() ? c.samples : c.points.size();
      diag["min_abs_rho"] = c.min_rho;
    }
    doc["diagnostics"] = std::move(diag);
    if (c.format == Format::csv && c.command != Command::flow) {
      throw UsageError("csv output is only available for flow");
    }
    emit(c, doc, out);
    return o.code;
  } catch (const Error& e) {
    Json doc;
    doc["error"]["kind"] = e.kind();
    doc["error"]["message"] = e.what();
    write_json(doc, err);
    return 1;
  } catch (const std::exception& e) {
    Json doc;
    doc["error"]["kind"] = "Error";
    doc["error"]["message"] = e.what();
    write_json(doc, err);
    return 1;
  }
}

std::optional<int> parse_command_line(int argc, const char* const* argv, RunConfig& config,
                                      std::ostream& out, std::ostream& err) {
  CLI::App app{"Noether symmetries of time-dependent Hamiltonian systems"};
  app.require_subcommand(1);

  std::string format = "json";
  std::optional<std::size_t> r;
  auto common = [&](CLI::App* sub, bool sampling) {
    sub->add_option("--system", config.system, "built-in system name");
    sub->add_option("--system-file", config.system_file, "JSON system spec");
    sub->add_option("--integral", config.integrals, "integral name or expression")
        ->delimiter(',');
    sub->add_option("--point", config.points, "t,q1..qn,p1..pn");
    sub->add_option("--output", config.output, "output path (default stdout)");
    sub->add_option("--seed", config.seed, "sampling seed");
    if (sampling) {
      sub->add_option("--samples", config.samples, "number of sampled points");
      sub->add_option("--min-rho", config.min_rho, "sampling guard on |rho|");
    }
  };

  auto* derive = app.add_subcommand("derive", "symmetry of an integral at a point");
  common(derive, false);
  auto* verify = app.add_subcommand("verify", "symmetry conditions at sampled points");
  common(verify, true);
  verify->add_option("--tol", config.tol, "relative residual tolerance");
  auto* flow = app.add_subcommand("flow", "characteristic or symmetry flow");
  common(flow, false);
  flow->add_option("--step", config.step);
  flow->add_option("--duration", config.duration);
  flow->add_option("--s", config.s, "symmetry flow parameter length");
  flow->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  auto* action = app.add_subcommand("action", "stationarity probe of the action");
  common(action, false);
  action->add_option("--step", config.step);
  action->add_option("--duration", config.duration);
  auto* integ = app.add_subcommand("integrability", "integrability hypotheses report");
  common(integ, true);
  integ->add_option("--r", r, "size of the commuting subset (default all)");
  integ->add_option("--bracket-tol", config.bracket_tol);
  integ->add_option("--invariance-tol", config.invariance_tol);
  integ->add_option("--sv-tol", config.sv_tol);
  auto* catalog = app.add_subcommand("catalog", "list or export built-in systems");
  catalog->add_flag("--list", config.list);
  catalog->add_option("--export", config.export_name);
  catalog->add_option("--output", config.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    Json doc;
    doc["error"]["kind"] = "UsageError";
    doc["error"]["message"] = e.what();
    write_json(doc, err);
    return 1;
  }
  if (derive->parsed()) config.command = Command::derive;
  if (verify->parsed()) config.command = Command::verify;
  if (flow->parsed()) config.command = Command::flow;
  if (action->parsed()) config.command = Command::action;
  if (integ->parsed()) config.command = Command::integrability;
  if (catalog->parsed()) config.command = Command::catalog;
  config.format = format == "csv" ? Format::csv : Format::json;
  config.r = r;

  if (const char* env = std::getenv("NOETHER_SEED"); env && *env) {
    std::uint64_t seed = 0;
    const std::string_view s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), seed);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      Json doc;
      doc["error"]["kind"] = "UsageError";
      doc["error"]["message"] = "NOETHER_SEED must be an unsigned integer";
      write_json(doc, err);
      return 1;
    }
    config.seed = seed;
  }
  return std::nullopt;
}

}  // namespace noether::cli
