#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

#include "gpfluct/circle_exact.hpp"
#include "gpfluct/errors.hpp"
#include "gpfluct/io.hpp"
#include "gpfluct/moments.hpp"
#include "gpfluct/montecarlo.hpp"
#include "gpfluct/symtest.hpp"

namespace gpfluct::cli {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// Doubles in JSON output go through the same 12-digit formatting so runs
// are byte-identical across platforms.
Json jnum(double v) { return Json::parse(fmt(v) == "inf" || fmt(v) == "nan" ? "null" : fmt(v)); }

Multigraph load_graph(const std::string& path) { return graph_from_json(read_json_file(path)); }

struct ExactMomentArgs {
  std::string graph;
  int r = 1;
  std::string basis = "monomial";
  bool require_exact = false;
  bool json = false;
};

int exact_moment(const ExactMomentArgs& a, std::ostream& out, std::ostream& err) {
  const Multigraph g = load_graph(a.graph);
  const PolynomialResult res = exact_moment_polynomial(g, a.r);
  if (a.json) {
    Json j;
    j["r"] = a.r;
    j["graph"] = graph_to_json(g);
    j["exact"] = res.exact;
    j["polynomial"] = a.basis == "falling" ? polynomial_to_json(res.poly) : polynomial_to_json(res.poly.to_standard());
    Json fb = Json::array();
    for (const auto& k : res.fallback_graphs) fb.push_back(k.hex());
    j["fallback_graphs"] = fb;
    out << j.dump(2) << "\n";
  } else {
    out << (a.basis == "falling" ? res.poly.to_string() : res.poly.to_standard().to_string()) << "\n";
  }
  if (!res.exact) {
    err << "warning: " << res.fallback_graphs.size()
        << " graph class(es) were integrated numerically; coefficients are approximate\n";
    if (a.require_exact) return kExitInexact;
  }
  return kExitOk;
}

struct LimitsArgs {
  std::string graph;
  int rmax = 3;
  bool json = false;
};

int limits(const LimitsArgs& a, std::ostream& out, std::ostream& err) {
  const Multigraph g = load_graph(a.graph);
  const LimitReport rep = limit_report(g, a.rmax);
  if (a.json) {
    Json j;
    j["sigma_sq"] = to_string(rep.sigma_sq);
    j["L"] = rep.L ? Json(to_string(*rep.L)) : Json(nullptr);
    j["sigma_hom_sq"] = to_string(rep.sigma_hom_sq);
    Json ar = Json::object();
    if (rep.a_r)
      for (std::size_t i = 0; i < rep.a_r->size(); ++i) ar[std::to_string(i + 2)] = jnum((*rep.a_r)[i]);
    j["a_r"] = rep.a_r ? ar : Json(nullptr);
    Json lead = Json::object();
    for (std::size_t i = 0; i < rep.leading_coefficients.size(); ++i)
      lead[std::to_string(i + 2)] = to_string(rep.leading_coefficients[i]);
    j["leading_coefficients"] = lead;
    j["regime"] = to_string(rep.regime);
    j["exact"] = rep.exact;
    out << j.dump(2) << "\n";
  } else {
    out << "sigma_sq = " << to_string(rep.sigma_sq) << "\n";
    out << "L = " << (rep.L ? to_string(*rep.L) : std::string("n/a")) << "\n";
    out << "sigma_hom_sq = " << to_string(rep.sigma_hom_sq) << "\n";
    if (rep.a_r) {
      for (std::size_t i = 0; i < rep.a_r->size(); ++i) out << "a_" << i + 2 << " = " << fmt((*rep.a_r)[i]) << "\n";
    } else {
      out << "a_r undefined (sigma_hom_sq = 0)\n";
    }
    out << "regime = " << to_string(rep.regime) << "\n";
  }
  if (!rep.exact) err << "warning: some values were integrated numerically\n";
  return kExitOk;
}

struct SimulateArgs {
  std::string space = "circle";
  std::vector<long> n;
  std::string graph;
  std::size_t replicates = 1000;
  std::uint64_t seed = 1;
  std::string emit;
  std::string out_path;
  double epsilon = 0.5;
};

// Exact mean, variance and third cumulant of Phi(X_n) on the circle.
std::optional<std::array<double, 3>> exact_circle_summary(const Multigraph& g, long n) {
  const int p = g.vertex_count();
  if (3 * p > kMaxPartitionSize) return std::nullopt;
  CircleEngine engine;
  const double np = std::pow(static_cast<double>(n), p);
  std::array<double, 3> out{};
  for (int r = 1; r <= 3; ++r) {
    const PolynomialResult k = exact_cumulant_polynomial(g, r, engine, SweepFilter::row_connected);
    out[r - 1] = k.poly(n).get_d() / std::pow(np, r);
  }
  return out;
}

int simulate(const SimulateArgs& a, std::ostream& out, std::ostream&) {
  const Multigraph g = load_graph(a.graph);
  const auto space = make_space(a.space, SpaceParams{a.epsilon});
  const ObservableSpec obs = MonomialObservable{g};

  if (a.n.size() > 1) {
    if (!a.emit.empty()) throw DomainError("--emit takes a single --n");
    out << "n,mean,var,n*var,n^2*var\n";
    for (long n : a.n) {
      const ReplicateSample s = replicate(*space, n, obs, a.replicates, a.seed);
      const SampleMoments m = sample_moments(s.values);
      const double dn = static_cast<double>(n);
      out << n << "," << fmt(m.mean) << "," << fmt(m.variance) << "," << fmt(dn * m.variance) << ","
          << fmt(dn * dn * m.variance) << "\n";
    }
    return kExitOk;
  }

  const long n = a.n.front();
  const ReplicateSample s = replicate(*space, n, obs, a.replicates, a.seed);
  if (!a.emit.empty()) {
    const std::string body = a.emit == "csv" ? to_csv(s) : sample_to_json(s).dump(2) + "\n";
    if (a.out_path.empty()) {
      out << body;
      return kExitOk;
    }
    std::ofstream f(a.out_path);
    if (!f) throw ParseError("cannot write '" + a.out_path + "'");
    f << body;
  }
  const auto k = empirical_cumulants(s.values, 3);
  const SampleMoments m = sample_moments(s.values);
  out << "space = " << s.space << "\nobservable = " << s.observable << "\nn = " << n << "\nreplicates = "
      << s.values.size() << "\nseed = " << s.seed << "\n";
  out << "mean = " << fmt(m.mean) << "\nvar = " << fmt(m.variance) << "\nkappa3 = " << fmt(k[2]) << "\n";
  if (a.space == "circle") {
    if (auto ex = exact_circle_summary(g, n)) {
      out << "exact_mean = " << fmt((*ex)[0]) << "\nexact_var = " << fmt((*ex)[1]) << "\nexact_kappa3 = "
          << fmt((*ex)[2]) << "\n";
    }
  }
  return kExitOk;
}

struct SymmetryArgs {
  std::string space;
  std::string data;
  double alpha = 0.05;
  long n = 200;
  std::uint64_t seed = 1;
  std::optional<double> A;
  double epsilon = 0.9;
};

int symmetry_test(const SymmetryArgs& a, std::ostream& out, std::ostream&) {
  TestConfig config;
  config.alpha = a.alpha;
  TestReport rep;
  Json j;
  if (!a.data.empty()) {
    const SplitDistanceData d = split_distances_from_json(read_json_file(a.data));
    config.A = a.A.value_or(1.0);
    rep = run_test_on_distances(d.distances, d.n, config);
    j["source"] = a.data;
  } else {
    const auto space = make_space(a.space, SpaceParams{a.epsilon});
    config.A = a.A.value_or(space->diameter_bound());
    Rng rng(a.seed);
    rep = simulate_test(*space, a.n, config, rng);
    j["space"] = space->name();
    j["seed"] = a.seed;
  }
  j["n"] = rep.n;
  j["alpha"] = jnum(config.alpha);
  j["A"] = jnum(config.A);
  j["Z_n"] = jnum(rep.Z_n);
  j["t_alpha"] = jnum(rep.t_alpha);
  j["x_alpha"] = jnum(rep.x_alpha);
  j["phi_first"] = jnum(rep.phi_first);
  j["phi_second"] = jnum(rep.phi_second);
  j["reject"] = rep.reject;
  out << j.dump(2) << "\n";
  return rep.reject ? kExitReject : kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fluctuations of polynomial observables of random metric measure spaces"};
  app.name("gpfluct");
  app.require_subcommand(1);

  ExactMomentArgs em;
  auto* em_cmd = app.add_subcommand("exact-moment", "Exact polynomial n^{pr} E[M_G(X_n)^r] on the circle");
  em_cmd->add_option("--graph", em.graph, "Graph JSON file")->required()->check(CLI::ExistingFile);
  em_cmd->add_option("--r", em.r, "Moment order")->required()->check(CLI::Range(1, 12));
  em_cmd->add_option("--basis", em.basis, "Output basis")->check(CLI::IsMember({"monomial", "falling"}));
  em_cmd->add_flag("--require-exact", em.require_exact, "Exit 4 if any numerical fallback was needed");
  em_cmd->add_flag("--json", em.json, "JSON output");

  LimitsArgs lim;
  auto* lim_cmd = app.add_subcommand("limits", "Limit parameters sigma^2, L, sigma_hom^2, a_r on the circle");
  lim_cmd->add_option("--graph", lim.graph, "Graph JSON file")->required()->check(CLI::ExistingFile);
  lim_cmd->add_option("--rmax", lim.rmax, "Largest cumulant order (2..4)")->check(CLI::Range(2, 4));
  lim_cmd->add_flag("--json", lim.json, "JSON output");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo replicates of Phi(X_n)");
  sim_cmd->add_option("--space", sim.space, "Space name")->check(CLI::IsMember(builtin_space_names()));
  sim_cmd->add_option("--n", sim.n, "Sample size; several values print a scaling table")
      ->required()
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--graph", sim.graph, "Graph JSON file")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("--replicates", sim.replicates, "Number of replicates")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim.seed, "Master seed");
  sim_cmd->add_option("--emit", sim.emit, "Write the sample as csv or json")->check(CLI::IsMember({"csv", "json"}));
  sim_cmd->add_option("--out", sim.out_path, "File for --emit (stdout if absent)");
  sim_cmd->add_option("--epsilon", sim.epsilon, "Amplitude of density_circle")->check(CLI::Range(0.0, 0.999999));

  SymmetryArgs sym;
  auto* sym_cmd = app.add_subcommand("symmetry-test", "Test for homogeneity; exit 3 on rejection");
  auto* space_opt =
      sym_cmd->add_option("--space", sym.space, "Simulate from a built-in space")->check(CLI::IsMember(builtin_space_names()));
  auto* data_opt = sym_cmd->add_option("--data", sym.data, "JSON file {n, distances}")->check(CLI::ExistingFile);
  space_opt->excludes(data_opt);
  sym_cmd->add_option("--alpha", sym.alpha, "Significance level")->check(CLI::Range(1e-12, 1.0 - 1e-12));
  sym_cmd->add_option("--n", sym.n, "Points per half (simulation mode)")->check(CLI::PositiveNumber);
  sym_cmd->add_option("--seed", sym.seed, "Seed (simulation mode)");
  sym_cmd->add_option("--A", sym.A, "Cap of phi = min(A, d); default diameter bound (1 for data)")
      ->check(CLI::PositiveNumber);
  sym_cmd->add_option("--epsilon", sym.epsilon, "Amplitude of density_circle")->check(CLI::Range(0.0, 0.999999));

  try {
    app.parse(argc, argv);
    if (sym_cmd->parsed() && sym.space.empty() && sym.data.empty()) {
      throw CLI::ValidationError("symmetry-test needs --space or --data");
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (em_cmd->parsed()) return exact_moment(em, out, err);
    if (lim_cmd->parsed()) return limits(lim, out, err);
    if (sim_cmd->parsed()) return simulate(sim, out, err);
    if (sym_cmd->parsed()) return symmetry_test(sym, out, err);
  } catch (const gpfluct::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace gpfluct::cli
