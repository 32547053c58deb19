// cqt: verification suites and trace computations for the cyclic quantum Teichmuller representations.

#include "cqt/suites.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>

namespace {

using namespace cqt;

struct Options {
  std::vector<int> Ns;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  std::string surface = "torus1";
  std::vector<std::string> mapclass;
  std::string coeffs = "auto";
  std::string out;
  int samples = 20;
  std::string library;
  std::string polarization;
  std::string suite = "all";
  std::string lagrangian = "a";
  std::optional<int> lambda;
  int weight = 0;
  std::string r = "1", s = "1", lam = "1";
};

// Failed checks exit 1; everything else that goes wrong before a check is a usage error.
struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Output {
  json doc;
  std::vector<Check> checks;

  void add(const std::string& name, double residual, double tol, const std::string& note = "") {
    checks.push_back({name, residual, tol, std::isfinite(residual) && residual <= tol, note});
  }
  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
};

cplx parse_complex(const std::string& s) {
  auto c = s.find(',');
  try {
    if (c == std::string::npos) return {std::stod(s), 0.0};
    return {std::stod(s.substr(0, c)), std::stod(s.substr(c + 1))};
  } catch (const std::exception&) {
    throw Usage("expected a complex number as RE or RE,IM, got '" + s + "'");
  }
}

int single_N(const Options& o) {
  if (o.Ns.size() > 1) throw Usage("this command takes a single --N");
  return o.Ns.empty() ? 5 : o.Ns.front();
}

RootData root(const Options& o, int N) { return make_root_data(N, o.tol); }

SurfaceLibrary library(const Options& o) { return o.library.empty() ? SurfaceLibrary{} : load_surfaces(o.library); }

DottedTriangulation surface(const Options& o, const SurfaceLibrary& lib) {
  if (lib.surfaces.count(o.surface)) return lib.surfaces.at(o.surface);
  return builtin_surface(o.surface);
}

MappingClassSpec mapclass(const std::string& name, const SurfaceLibrary& lib) {
  if (lib.mapclasses.count(name)) return lib.mapclasses.at(name);
  return builtin_mapping_class(name);
}

std::vector<std::string> mapclasses(const Options& o, std::vector<std::string> fallback) {
  return o.mapclass.empty() ? fallback : o.mapclass;
}

CoefficientTuple coefficients(const Options& o, const RootData& rd, const std::string& mc) {
  if (o.coeffs == "auto") return builtin_invariant_tuple(rd, mc);
  return load_coefficients(rd, o.coeffs);
}

json config_json(const Options& o, const std::string& cmd) {
  json c{{"command", cmd}, {"N", o.Ns}, {"tol", o.tol}, {"seed", o.seed}, {"samples", o.samples}};
  if (cmd != "verify" && cmd != "pentagon" && cmd != "uqsl2") {
    c["surface"] = o.surface;
    c["mapclass"] = o.mapclass;
    c["coeffs"] = o.coeffs;
  }
  return c;
}

json tuple_json(const CoefficientTuple& t) {
  json j = json::object();
  for (auto& [e, p] : t) j[std::to_string(e)] = {{"p+", to_json(p.pp)}, {"p-", to_json(p.pm)}};
  return j;
}

json point_json(const FermatPoint& p) { return {{"p+", to_json(p.pp)}, {"p-", to_json(p.pm)}}; }

// ---- commands ---------------------------------------------------------------------------

void cmd_verify(const Options& o, Output& out) {
  SuiteConfig cfg;
  if (!o.Ns.empty()) cfg.Ns = o.Ns;
  for (int N : cfg.Ns) make_root_data(N);
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  cfg.tol = o.tol;
  auto names = suite_names();
  if (std::find(names.begin(), names.end(), o.suite) == names.end()) throw Usage("unknown suite " + o.suite);
  auto rep = run_suite(o.suite, cfg);
  out.checks = rep.checks;
  out.doc["data"] = rep.data;
}

void cmd_trace(const Options& o, Output& out) {
  auto lib = library(o);
  json res = json::array();
  for (int N : o.Ns.empty() ? std::vector<int>{5} : o.Ns) {
    auto rd = root(o, N);
    for (auto& mc : mapclasses(o, {"Ta"})) {
      auto spec = mapclass(mc, lib);
      auto t = coefficients(o, rd, mc);
      auto inv = check_phi_invariance(rd, spec, t);
      out.add(detail::tagN("phi-invariance " + mc, N), inv.residual, 1e-9);
      if (!inv.invariant) continue;
      auto V = intertwiner(rd, spec, t);
      cplx tr = V.op.m.trace();
      double z = std::abs(tr);
      json row{{"N", N}, {"mapclass", mc}, {"trace", to_json(tr)}, {"Z", z}, {"coeffs", tuple_json(t)}};
      double det = std::abs(V.op.m.determinant());
      row["abs_det"] = det;
      if (spec.initial.name == "torus1") out.add(detail::tagN("|det V| " + mc, N), std::abs(det - 1.0), 1e-9);
      if ((mc == "Ta" || mc == "Tb_inv") && o.coeffs == "auto") {
        double ex = dehn_closed_form(rd, mc);
        row["closed_form"] = ex;
        out.add(detail::tagN("trace closed form " + mc, N), std::abs(z - ex) / std::max(1.0, ex), 1e-8);
      }
      res.push_back(row);
    }
  }
  out.doc["results"] = res;
}

void cmd_reduced_trace(const Options& o, Output& out) {
  int N = single_N(o);
  auto rd = root(o, N);
  auto torus = builtin_surface("torus1");
  json res = json::array();
  for (auto& mc : mapclasses(o, {"Ta"})) {
    if (mc != "Ta" && mc != "Tb_inv") throw Usage("reduced-trace supports Ta and Tb_inv");
    auto t = coefficients(o, rd, mc);
    auto V = intertwiner(rd, builtin_mapping_class(mc), t);
    auto F = builtin_F(rd, mc);
    std::vector<int> lams;
    if (o.lambda) lams = {mod(*o.lambda, N)};
    else
      for (int l = 0; l < N; ++l) lams.push_back(l);
    for (int lam : lams) {
      auto sub = polarized_subspace(rd, torus, torus_polarization(o.lagrangian, lam));
      auto R = reduced_intertwiner(rd, V, sub, F);
      cplx tr = R.block.trace();
      double z = std::abs(tr), det = std::abs(R.block.determinant());
      json row{{"mapclass", mc}, {"lambda", lam}, {"dim", sub.dim}, {"trace", to_json(tr)}, {"Zbar", z},
               {"abs_det", det}, {"F", mc == "Tb_inv" ? "gamma(h_b)^(1/2)" : "identity"}};
      std::string tag = mc + " lambda=" + std::to_string(lam);
      out.add(detail::tagN("reduced |det| " + tag, N), std::abs(det - 1.0), 1e-8);
      if (o.lagrangian == "a" && o.coeffs == "auto") {
        double ex = reduced_closed_form(rd, mc, lam);
        row["closed_form"] = ex;
        out.add(detail::tagN("reduced trace closed form " + tag, N), std::abs(z - ex) / std::max(1.0, ex), 1e-8);
      }
      res.push_back(row);
    }
  }
  out.doc["results"] = res;
}

void cmd_decompose(const Options& o, Output& out) {
  int N = single_N(o);
  auto rd = root(o, N);
  auto lib = library(o);
  auto d = surface(o, lib);
  long long total = 0;
  json blocks = json::array();
  auto record = [&](const PolarizationSpec& ps, json label) {
    int dim = 0;
    try {
      dim = polarized_subspace(rd, d, ps).dim;
    } catch (const Error& e) {
      if (e.code != Errc::EmptyCharacter) throw;
    }
    total += dim;
    if (dim > 0) blocks.push_back({{"weights", label}, {"dim", dim}});
  };
  if (!o.polarization.empty()) {
    std::ifstream f(o.polarization);
    if (!f) throw Usage("cannot open " + o.polarization);
    json j;
    try {
      f >> j;
    } catch (const json::exception& e) {
      throw Error(Errc::ParseError, e.what());
    }
    auto ps = polarization_from_json(d, j);
    record(ps, j.at("lambda"));
    out.doc["results"] = {{"surface", d.name}, {"blocks", blocks}};
    return;
  }
  // Peripheral classes, plus the class a on the torus; every weight tuple is enumerated.
  std::vector<EdgePath> classes;
  std::vector<std::string> names;
  for (int v : punctures(d)) {
    classes.push_back(puncture_path(d, v));
    names.push_back("puncture " + std::to_string(v));
  }
  auto vs = vertices(d);
  for (std::size_t i = 0; i < boundary_components(d, vs).size(); ++i) {
    classes.push_back(boundary_path(d, static_cast<int>(i)));
    names.push_back("boundary " + std::to_string(i));
  }
  std::size_t lag = 0;
  if (d.name == "torus1") {
    classes.insert(classes.begin(), builtin_path("torus1", o.lagrangian));
    names.insert(names.begin(), o.lagrangian);
    lag = 1;
  }
  long long count = 1;
  for (std::size_t i = 0; i < classes.size(); ++i) count *= N;
  if (count > 100000) throw Usage("too many characters to enumerate");
  for (long long c = 0; c < count; ++c) {
    PolarizationSpec ps;
    json label = json::object();
    long long x = c;
    for (std::size_t i = 0; i < classes.size(); ++i) {
      int w = static_cast<int>(x % N);
      x /= N;
      if (i < lag) {
        ps.generators.push_back(classes[i]);
        ps.weights.push_back(w);
      } else {
        ps.peripheral.push_back(classes[i]);
        ps.peripheral_weights.push_back(w);
      }
      label[names[i]] = w;
    }
    record(ps, label);
  }
  long long dim = d.space(N).dim();
  out.add(detail::tagN("block dimensions sum to dim V", N), static_cast<double>(std::llabs(total - dim)), 0.0);
  out.doc["results"] = {{"surface", d.name}, {"dim_V", dim}, {"classes", names}, {"blocks", blocks}};
}

void cmd_pentagon(const Options& o, Output& out) {
  int N = single_N(o);
  auto rd = root(o, N);
  SuiteConfig cfg{{N}, o.samples, o.seed, o.tol};
  auto rep = pentagon_suite(cfg);
  out.checks = rep.checks;
  out.doc["data"] = rep.data;
  auto g = detail::rng(cfg, "pentagon-cli", N);
  json samples = json::array();
  for (int i = 0; i < o.samples; ++i) {
    auto s = solve_pentagon_params(rd, random_fermat_branch_safe(rd, g), random_fermat_branch_safe(rd, g));
    samples.push_back({{"p", point_json(s.p)}, {"r", point_json(s.r)}, {"p'", point_json(s.p_prime)},
                       {"r'", point_json(s.r_prime)}, {"p''", point_json(s.p_dprime)}});
  }
  out.doc["results"] = samples;
}

void cmd_uqsl2(const Options& o, Output& out) {
  int N = single_N(o);
  auto rd = root(o, N);
  auto rep = uqsl2_module(rd, o.weight, parse_complex(o.r), parse_complex(o.s), parse_complex(o.lam));
  for (auto& [k, v] : rep.residuals) out.add(detail::tagN("uqsl2 " + k, N), v, 1e-9);
  out.add(detail::tagN("uqsl2 subspace dim N", N), std::abs(rep.subspace_dim - N), 0.0);
  out.doc["results"] = {{"weight", o.weight}, {"subspace_dim", rep.subspace_dim}};
}

void cmd_shape(const Options& o, Output& out) {
  auto lib = library(o);
  json res = json::array();
  for (int N : o.Ns.empty() ? std::vector<int>{5} : o.Ns) {
    auto rd = root(o, N);
    for (auto& mc : mapclasses(o, {"Ta", "word:Ta,Tb_inv"})) {
      auto rep = shape_assignment_check(rd, mapclass(mc, lib), coefficients(o, rd, mc));
      out.add(detail::tagN("tetrahedron relation " + mc, N), rep.max_tetra, 1e-9);
      if (rep.edges.empty()) out.checks.push_back({detail::tagN("edge relation " + mc, N), 0.0, 0.0, false,
                                                   "no complete edge lifetime"});
      else
        out.add(detail::tagN("edge relation " + mc, N), rep.max_edge, 1e-9);
      json tets = json::array(), edges = json::array();
      for (auto& t : rep.tetrahedra)
        tets.push_back({{"period", t.period}, {"step", t.step}, {"w0", to_json(t.w0)}, {"w1", to_json(t.w1)},
                        {"w2", to_json(t.w2)}, {"residual", t.residual}});
      for (auto& e : rep.edges)
        edges.push_back({{"created", e.created_step}, {"destroyed", e.destroyed_step},
                         {"product", to_json(e.product)}, {"residual", e.residual}});
      res.push_back({{"N", N}, {"mapclass", mc}, {"tetrahedra", tets}, {"edges", edges}, {"notes", rep.notes}});
    }
  }
  out.doc["results"] = res;
}

// CSV: one row per (N, mapclass, lambda); lambda and the reduced columns are empty where undefined.
void cmd_trace_table(const Options& o, std::ostream& os, Output& out) {
  std::vector<int> Ns = o.Ns.empty() ? std::vector<int>{3, 5, 7, 9} : o.Ns;
  auto lib = library(o);
  os << "N,mapclass,trace_re,trace_im,Z,lambda,reduced_re,reduced_im,Zbar\n";
  os << std::setprecision(12);
  for (int N : Ns) {
    auto rd = root(o, N);
    for (auto& mc : mapclasses(o, {"Ta", "Tb_inv", "word:Ta,Tb_inv"})) {
      auto t = coefficients(o, rd, mc);
      auto inv = check_phi_invariance(rd, mapclass(mc, lib), t);
      out.add(detail::tagN("phi-invariance " + mc, N), inv.residual, 1e-9);
      if (!inv.invariant) continue;
      auto V = intertwiner(rd, mapclass(mc, lib), t);
      cplx tr = V.op.m.trace();
      std::string head = std::to_string(N) + ",\"" + mc + "\",";
      std::ostringstream base;
      base << std::setprecision(12) << tr.real() << "," << tr.imag() << "," << std::abs(tr);
      if (mc != "Ta" && mc != "Tb_inv") {
        os << head << base.str() << ",,,,\n";
        continue;
      }
      auto F = builtin_F(rd, mc);
      auto torus = builtin_surface("torus1");
      for (int lam = 0; lam < N; ++lam) {
        auto R = reduced_intertwiner(rd, V, polarized_subspace(rd, torus, torus_polarization("a", lam)), F);
        cplx rt = R.block.trace();
        os << head << base.str() << "," << lam << "," << rt.real() << "," << rt.imag() << "," << std::abs(rt)
           << "\n";
      }
    }
  }
}

void write(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Usage("cannot write " + path);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cyclic quantum Teichmuller representations: verification and traces"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c) {
    c->add_option("--N", o.Ns, "Root order(s), odd; comma separated")->delimiter(',');
    c->add_option("--tol", o.tol, "Numerical tolerance for root data");
    c->add_option("--seed", o.seed, "Random seed");
    c->add_option("--samples", o.samples, "Random samples per check")->check(CLI::PositiveNumber);
    c->add_option("--out", o.out, "Write the report to a file instead of stdout");
  };
  auto geometry = [&](CLI::App* c) {
    c->add_option("--surface", o.surface, "Surface name");
    c->add_option("--mapclass", o.mapclass, "Mapping class (Ta, Tb_inv, word:Ta,Tb_inv, id); repeatable");
    c->add_option("--coeffs", o.coeffs, "Coefficient tuple: JSON file or 'auto' for the built-in invariant tuple");
    c->add_option("--library", o.library, "Extra surfaces and mapping classes in the text format");
  };

  auto* verify = app.add_subcommand("verify", "Run verification suites");
  common(verify);
  verify->add_option("--suite", o.suite, "dilog | groupoid | cfalg | homology | all");
  auto* trace = app.add_subcommand("trace", "Quantum trace of a mapping class");
  common(trace);
  geometry(trace);
  auto* reduced = app.add_subcommand("reduced-trace", "Reduced quantum traces on torus1");
  common(reduced);
  geometry(reduced);
  reduced->add_option("--lagrangian", o.lagrangian, "Lagrangian class (a or b)");
  reduced->add_option("--lambda", o.lambda, "Character weight; all weights if omitted");
  auto* decompose = app.add_subcommand("decompose", "Dimensions of the polarized blocks");
  common(decompose);
  geometry(decompose);
  decompose->add_option("--lagrangian", o.lagrangian, "Lagrangian class on torus1");
  decompose->add_option("--polarization", o.polarization, "Polarization JSON file");
  auto* pentagon = app.add_subcommand("pentagon", "Sample pentagon parameters and check the identity");
  common(pentagon);
  auto* uq = app.add_subcommand("uqsl2", "Cyclic U_q(sl2) module on disk1_2");
  common(uq);
  uq->add_option("--r", o.r, "Parameter r as RE or RE,IM");
  uq->add_option("--s", o.s, "Parameter s as RE or RE,IM");
  uq->add_option("--lambda", o.lam, "Parameter lambda as RE or RE,IM");
  uq->add_option("--weight", o.weight, "Puncture weight p");
  auto* shape = app.add_subcommand("shape-check", "Quantum shape assignment along a mapping class");
  common(shape);
  geometry(shape);
  auto* table = app.add_subcommand("trace-table", "CSV table of traces and reduced traces");
  common(table);
  geometry(table);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::string cmd = app.get_subcommands().front()->get_name();
  Output out;
  try {
    out.doc = {{"schema", 1}, {"config", config_json(o, cmd)}};
    if (cmd == "trace-table") {
      std::ostringstream csv;
      cmd_trace_table(o, csv, out);
      write(o.out, csv.str());
      for (auto& c : out.checks)
        if (!c.pass) std::cerr << "FAIL " << c.name << "\n";
      return out.ok() ? 0 : 1;
    }
    if (cmd == "verify") cmd_verify(o, out);
    else if (cmd == "trace") cmd_trace(o, out);
    else if (cmd == "reduced-trace") cmd_reduced_trace(o, out);
    else if (cmd == "decompose") cmd_decompose(o, out);
    else if (cmd == "pentagon") cmd_pentagon(o, out);
    else if (cmd == "uqsl2") cmd_uqsl2(o, out);
    else if (cmd == "shape-check") cmd_shape(o, out);
  } catch (const Usage& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    bool numeric = e.code == Errc::NotInvariant || e.code == Errc::DegenerateParameter ||
                   e.code == Errc::SubspaceMismatch || e.code == Errc::NotCyclic;
    std::cerr << "error: " << e.what() << "\n";
    if (!numeric) return 2;
    out.checks.push_back({cmd, std::numeric_limits<double>::infinity(), 0.0, false, e.what()});
  }

  json checks = json::array();
  for (auto& c : out.checks) checks.push_back(to_json(c));
  out.doc["checks"] = checks;
  out.doc["pass"] = out.ok();
  try {
    write(o.out, out.doc.dump(2) + "\n");
  } catch (const Usage& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return out.ok() ? 0 : 1;
}
