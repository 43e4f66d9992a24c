// rw: coherence and asymmetry quantifiers from the command line.
//
// Exit status: 0 success, 1 a check failed or a solve was not certified,
// 2 usage or configuration error.

#include "rw/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

namespace {

using namespace rw;
namespace h = rw::harness;

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct MeasureArgs {
  std::string state;
  std::string measure;
  std::string rep;
  bool json = false;
  bool bits = false;
  bool no_shortcut = false;
  bool trace = false;
};

struct ExperimentArgs {
  std::string name;
  int dim = 3;
  int samples = 1000;
  std::uint64_t seed = 42;
  std::string out = "-";
  int denv = 4;
  double tol = h::kPropertyTol;
};

void emit(const h::Table& t, const std::string& out) {
  if (out == "-") {
    h::write_csv(std::cout, t);
    return;
  }
  std::ofstream f(out);
  if (!f) throw std::invalid_argument("cannot write " + out);
  h::write_csv(f, t);
}

/// Summary lines go to stdout when the CSV went to a file, else stderr.
std::ostream& summary(const std::string& out) { return out == "-" ? std::cerr : std::cout; }

int run_measure(const MeasureArgs& a) {
  const DensityMatrix rho = h::parse_state(a.state);
  std::optional<UnitaryRep> rep;
  if (!a.rep.empty()) rep = h::parse_rep(a.rep);
  auto need_rep = [&]() -> const UnitaryRep& {
    if (!rep) throw std::invalid_argument("--measure " + a.measure + " needs --rep");
    return *rep;
  };
  const FreeSet free = rep ? FreeSet(*rep) : FreeSet(Dephasing{});

  MeasureOptions opt;
  opt.pure_shortcut = !a.no_shortcut;
  if (a.trace) {
    opt.solver.on_iteration = [](const IterationLog& it) {
      std::cerr << io::json{{"iteration", it.iteration},     {"primal", it.primal_objective},
                            {"dual", it.dual_objective},     {"gap", it.gap},
                            {"mu", it.complementarity},      {"primal_residual", it.primal_residual},
                            {"dual_residual", it.dual_residual}, {"primal_step", it.primal_step},
                            {"dual_step", it.dual_step}}
                       .dump()
                << '\n';
    };
  }
  const double unit = a.bits ? 1.0 / std::numbers::ln2 : 1.0;

  std::optional<MeasureReport> report;
  io::json j;
  if (a.measure == "cw") {
    report = coherence_weight(rho, opt);
  } else if (a.measure == "aw") {
    report = asymmetry_weight(rho, need_rep(), opt);
  } else if (a.measure == "cr") {
    report = robustness_coherence(rho, opt);
  } else if (a.measure == "ar") {
    report = robustness_asymmetry(rho, need_rep(), opt);
  } else if (a.measure == "cl1") {
    j = {{"measure", "cl1"}, {"value", l1_coherence(rho)}};
  } else if (a.measure == "crel") {
    j = {{"measure", "crel"}, {"value", rel_entropy_coherence(rho) * unit}, {"unit", a.bits ? "bits" : "nats"}};
  } else if (a.measure == "arel") {
    j = {{"measure", "arel"},
         {"value", rel_entropy_asymmetry(rho, need_rep()) * unit},
         {"unit", a.bits ? "bits" : "nats"}};
  } else if (a.measure == "hsbound") {
    const auto b = hs_lower_bound(rho, free);
    j = {{"measure", "hsbound"}, {"value", b.sharp}, {"sharp", b.sharp}, {"loose", b.loose}};
  } else {
    throw std::invalid_argument("unknown measure '" + a.measure + "'");
  }
  if (report) j = io::to_json(a.measure, *report);

  if (a.json) {
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << a.measure << ' ' << h::format_double(j["value"].get<double>());
    if (report) std::cout << " gap " << h::format_double(report->gap);
    if (j.contains("loose")) std::cout << " loose " << h::format_double(j["loose"].get<double>());
    std::cout << '\n';
  }
  return kOk;
}

int run_experiment(const ExperimentArgs& a) {
  h::ExperimentConfig cfg{a.name, {a.dim}, a.samples, a.seed, a.out, a.tol};
  h::validate(cfg);
  std::ostream& sum = summary(a.out);

  if (a.name == "scatter") {
    const auto res = h::run_scatter(a.dim, a.samples, a.seed, a.tol);
    emit(h::to_table(res), a.out);
    for (const auto& v : res.violations) {
      std::cerr << "violation: " << v.check << " at sample " << v.index << " margin " << h::format_double(v.margin)
                << " state " << v.state_json << '\n';
    }
    sum << "scatter d=" << a.dim << " samples=" << a.samples << " violations=" << res.violations.size() << '\n';
    return res.violations.empty() ? kOk : kFail;
  }
  if (a.name == "violation") {
    const auto res = h::run_violation_search(a.samples, a.seed, a.denv);
    emit(h::to_table(res), a.out);
    sum << "violation samples=" << a.samples << " denv=" << a.denv << " negative_weight=" << res.negative_weight
        << " negative_robustness=" << res.negative_robustness << " min_weight=" << h::format_double(res.min_weight)
        << " min_robustness=" << h::format_double(res.min_robustness) << '\n';
    return kOk;
  }
  if (a.name == "closed-forms") {
    const auto checks = h::run_closed_forms(a.tol);
    emit(h::to_table(checks), a.out);
    const auto failed = std::count_if(checks.begin(), checks.end(), [](const h::Check& c) { return !c.pass(); });
    sum << "closed-forms checks=" << checks.size() << " failed=" << failed << '\n';
    return failed == 0 ? kOk : kFail;
  }
  h::PropertySuiteOptions o;
  o.seed = a.seed;
  o.tol = a.tol;
  const auto results = h::run_property_suite(o);
  emit(h::to_table(results), a.out);
  bool ok = true;
  for (const auto& r : results) {
    if (r.pass()) continue;
    ok = false;
    const auto& f = *r.first_failure;
    std::cerr << "FAIL " << r.label << ": " << r.failures << " of " << r.samples << ", first at sample " << f.index
              << " margin " << h::format_double(f.margin) << " state " << f.state_json << '\n';
  }
  sum << "properties " << (ok ? "all pass" : "FAILED") << '\n';
  return ok ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weight and robustness quantifiers of coherence and asymmetry"};
  app.require_subcommand(1);
  app.footer("Environment: RW_LOG=quiet|error|info|debug sets log verbosity (default error).");

  MeasureArgs ma;
  auto* measure = app.add_subcommand("measure", "Evaluate one quantifier on one state");
  measure
      ->add_option("--state", ma.state,
                   "werner:d=3,alpha=0.5 | gisin:lambda=0.8,theta=0.7854 | haar-mixed:d=4,denv=4,seed=42 | "
                   "haar-pure:d=3,seed=7 | max-coherent:d=4 | file:<path.json>")
      ->required();
  measure->add_option("--measure", ma.measure, "Quantifier")
      ->required()
      ->check(CLI::IsMember({"cw", "aw", "cr", "cl1", "crel", "ar", "arel", "hsbound"}));
  measure->add_option("--rep", ma.rep, "Representation for aw, ar, arel, hsbound: swap:d | cyclic:d,n");
  measure->add_flag("--json", ma.json, "Print the full report as JSON");
  measure->add_flag("--bits", ma.bits, "Relative entropies in bits instead of nats");
  measure->add_flag("--no-shortcut", ma.no_shortcut, "Solve the SDP for pure states too");
  measure->add_flag("--trace", ma.trace, "Dump solver iterates to stderr as JSON lines");

  ExperimentArgs ea;
  auto* experiment = app.add_subcommand("experiment", "Run a batch experiment and write CSV");
  experiment->add_option("--name", ea.name, "Experiment")
      ->required()
      ->check(CLI::IsMember(h::experiment_names()));
  experiment->add_option("--dim", ea.dim, "Dimension for scatter (2..8)")->capture_default_str();
  experiment->add_option("--samples", ea.samples, "Number of samples")->capture_default_str();
  experiment->add_option("--seed", ea.seed, "64-bit seed")->capture_default_str();
  experiment->add_option("--out", ea.out, "CSV output path, - for stdout")->capture_default_str();
  experiment->add_option("--denv", ea.denv, "Environment dimension for violation (1 = pure states)")
      ->capture_default_str();
  experiment->add_option("--tol", ea.tol, "Tolerance for property checks")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*measure) return run_measure(ma);
    return run_experiment(ea);
  } catch (const SolverError& e) {
    std::cerr << "rw: " << e.what() << '\n';
    return kFail;
  } catch (const std::logic_error& e) {  // bad spec, parameter or input matrix
    std::cerr << "rw: " << e.what() << '\n';
    return kUsage;
  }
}
