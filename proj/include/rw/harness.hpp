#pragma once

// Experiment drivers behind the `rw` CLI: the random-state scatter, the
// marginal-inequality violation search, closed-form regression tables and
// the sampled property suite. Every sample i draws from its own stream
// derive_seed(seed, i), so results are independent of evaluation order.

#include "rw/io.hpp"
#include "rw/measures.hpp"

#include <charconv>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace rw::harness {

// ---------------------------------------------------------------- logging

enum class LogLevel { quiet = 0, error = 1, info = 2, debug = 3 };

/// Level from RW_LOG (quiet|error|info|debug or 0-3); default error.
inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("RW_LOG");
    if (!env) return LogLevel::error;
    const std::string v(env);
    if (v == "quiet" || v == "0") return LogLevel::quiet;
    if (v == "info" || v == "2") return LogLevel::info;
    if (v == "debug" || v == "3") return LogLevel::debug;
    return LogLevel::error;
  }();
  return level;
}

inline void log(LogLevel level, const std::string& msg) {
  if (static_cast<int>(level) <= static_cast<int>(log_level())) std::cerr << "rw: " << msg << '\n';
}

// ------------------------------------------------------------ formatting

/// Locale-independent, 12 significant digits.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

/// Flat CSV table; first row is the header.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline void write_csv(std::ostream& out, const Table& t) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

// --------------------------------------------------------------- parsing

/// "key=value,key=value" after the family name.
inline std::map<std::string, std::string> parse_params(std::string_view s) {
  std::map<std::string, std::string> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    const std::string_view item = s.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw std::invalid_argument("expected key=value, got '" + std::string(item) + "'");
    }
    out[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

inline double to_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

inline long long to_int(const std::string& s) {
  std::size_t pos = 0;
  const long long v = std::stoll(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

inline std::uint64_t to_seed(const std::string& s) {
  std::size_t pos = 0;
  const unsigned long long v = std::stoull(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("not a seed: '" + s + "'");
  return v;
}

/// State spec strings:
///   werner:d=3,alpha=0.5          gisin:lambda=0.8,theta=0.7854
///   haar-mixed:d=4,denv=4,seed=42 haar-pure:d=3,seed=7
///   max-coherent:d=4              file:<path.json>
/// Throws std::invalid_argument on bad syntax and std::domain_error on
/// invalid parameters.
inline DensityMatrix parse_state(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("state spec needs 'family:params': " + spec);
  const std::string family = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  if (family == "file") return io::density_from_json(io::read_json_file(rest));

  const auto p = parse_params(rest);
  auto need = [&](const char* key) -> const std::string& {
    const auto it = p.find(key);
    if (it == p.end()) throw std::invalid_argument(family + ": missing parameter '" + key + "'");
    return it->second;
  };
  if (family == "werner") return werner(static_cast<int>(to_int(need("d"))), to_double(need("alpha")));
  if (family == "gisin") return gisin(to_double(need("lambda")), to_double(need("theta")));
  if (family == "haar-mixed") {
    return haar_random_mixed(static_cast<int>(to_int(need("d"))), static_cast<int>(to_int(need("denv"))),
                             to_seed(need("seed")));
  }
  if (family == "haar-pure") return haar_random_pure(static_cast<int>(to_int(need("d"))), to_seed(need("seed")));
  if (family == "max-coherent") return maximally_coherent(static_cast<int>(to_int(need("d"))));
  throw std::invalid_argument("unknown state family '" + family + "'");
}

/// Representation specs: "swap:d" or "cyclic:d,n" (also "swap:d=2",
/// "cyclic:d=3,n=4").
inline UnitaryRep parse_rep(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("rep spec needs 'name:args': " + spec);
  const std::string name = spec.substr(0, colon);
  std::string rest = spec.substr(colon + 1);
  for (const char* key : {"d=", "n="}) {
    for (auto pos = rest.find(key); pos != std::string::npos; pos = rest.find(key)) rest.erase(pos, 2);
  }
  std::vector<long long> args;
  std::stringstream ss(rest);
  for (std::string item; std::getline(ss, item, ',');) args.push_back(to_int(item));
  if (name == "swap" && args.size() == 1) return rep_swap(static_cast<int>(args[0]));
  if (name == "cyclic" && args.size() == 2) {
    return rep_cyclic(static_cast<int>(args[0]), static_cast<int>(args[1]));
  }
  throw std::invalid_argument("unknown rep spec '" + spec + "'");
}

// ---------------------------------------------------------- experiments

inline constexpr double kPropertyTol = 1e-6;

struct ExperimentConfig {
  std::string name;
  std::vector<int> dims;
  int samples = 1;
  std::uint64_t seed = 42;
  std::string out;
  double tolerance = kPropertyTol;
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"scatter", "violation", "closed-forms", "properties"};
  return names;
}

inline void validate(const ExperimentConfig& c) {
  if (std::find(experiment_names().begin(), experiment_names().end(), c.name) == experiment_names().end()) {
    throw std::invalid_argument("unknown experiment '" + c.name + "'");
  }
  if (c.samples < 1) throw std::invalid_argument("sample count must be >= 1");
  if (!(c.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
}

/// One failed assertion: what, where, by how much, and the offending state.
struct Violation {
  std::string check;
  std::size_t index;
  double margin;  // negative: how far the inequality is broken
  std::string state_json;
};

// Scatter ----------------------------------------------------------------

struct ScatterRow {
  double c_w;
  double c_l1;
  double c_rob;
  double c_rel;
  double hs_bound;
};

struct ScatterResult {
  int dim;
  std::vector<ScatterRow> rows;
  std::vector<Violation> violations;
};

/// Chain of lower bounds on C_w at dimension d; returns (name, margin) pairs
/// where margin >= -tol means the inequality holds.
inline std::vector<std::pair<const char*, double>> bound_chain(const ScatterRow& r, int d) {
  const double dm1 = d - 1.0;
  return {{"C_w >= C_R/(d-1)", r.c_w - r.c_rob / dm1},
          {"C_w >= C_l1/(d-1)", r.c_w - r.c_l1 / dm1},
          {"C_w >= C_r/ln d", r.c_w - r.c_rel / std::log(static_cast<double>(d))},
          {"C_w >= HS bound", r.c_w - r.hs_bound},
          {"C_R <= C_l1", r.c_l1 - r.c_rob}};
}

inline ScatterRow scatter_row(const DensityMatrix& rho) {
  return {coherence_weight(rho).value, l1_coherence(rho), robustness_coherence(rho).value,
          rel_entropy_coherence(rho), hs_lower_bound(rho, Dephasing{}).sharp};
}

/// n states rho_i = Tr_env |psi_i><psi_i| with |psi_i> Haar on C^d ⊗ C^d.
inline ScatterResult run_scatter(int d, int n, std::uint64_t seed, double tol = kPropertyTol) {
  if (d < 2 || d > 8) throw std::invalid_argument("scatter: d must be in 2..8");
  if (n < 1) throw std::invalid_argument("scatter: n must be >= 1");
  ScatterResult res{d, {}, {}};
  res.rows.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const DensityMatrix rho = haar_random_mixed(d, d, derive_seed(seed, static_cast<std::uint64_t>(i)));
    res.rows.push_back(scatter_row(rho));
    for (const auto& [name, margin] : bound_chain(res.rows.back(), d)) {
      if (margin < -tol) {
        res.violations.push_back({name, static_cast<std::size_t>(i), margin, io::to_json(rho).dump()});
      }
    }
    if ((i + 1) % 1000 == 0) log(LogLevel::info, "scatter d=" + std::to_string(d) + ": " + std::to_string(i + 1));
  }
  return res;
}

inline Table to_table(const ScatterResult& r) {
  Table t{{"index", "c_w", "c_l1", "c_robustness", "c_rel_entropy", "hs_bound"}, {}};
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& x = r.rows[i];
    t.rows.push_back({std::to_string(i), format_double(x.c_w), format_double(x.c_l1), format_double(x.c_rob),
                      format_double(x.c_rel), format_double(x.hs_bound)});
  }
  return t;
}

// Violation search --------------------------------------------------------

struct MarginalDeltas {
  double weight;      // C_w(rho) + C_w(rho1) C_w(rho2) - (C_w(rho1) + C_w(rho2))
  double robustness;  // C_R(rho) - (C_R(rho1) + C_R(rho2))
};

inline MarginalDeltas marginal_deltas(const DensityMatrix& rho, BipartiteDims dims) {
  const auto r1 = partial_trace(rho, dims, Subsystem::first);
  const auto r2 = partial_trace(rho, dims, Subsystem::second);
  const double w = coherence_weight(rho).value;
  const double w1 = coherence_weight(r1).value;
  const double w2 = coherence_weight(r2).value;
  const double r = robustness_coherence(rho).value;
  return {w + w1 * w2 - (w1 + w2), r - (robustness_coherence(r1).value + robustness_coherence(r2).value)};
}

struct ViolationResult {
  int d_env;
  std::vector<MarginalDeltas> deltas;
  int negative_weight = 0;      // delta < -threshold
  int negative_robustness = 0;
  double min_weight = 0.0;
  double min_robustness = 0.0;
  double threshold;
};

/// Two-qubit states traced from Haar pure states on C^4 ⊗ C^d_env
/// (d_env = 1 gives pure two-qubit states).
inline ViolationResult run_violation_search(int n, std::uint64_t seed, int d_env = 4, double threshold = 1e-5) {
  if (n < 1) throw std::invalid_argument("violation: n must be >= 1");
  ViolationResult res{d_env, {}, 0, 0, 0.0, 0.0, threshold};
  res.deltas.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const DensityMatrix rho = haar_random_mixed(4, d_env, derive_seed(seed, static_cast<std::uint64_t>(i)));
    const MarginalDeltas d = marginal_deltas(rho, {2, 2});
    res.deltas.push_back(d);
    if (d.weight < -threshold) ++res.negative_weight;
    if (d.robustness < -threshold) ++res.negative_robustness;
    res.min_weight = i == 0 ? d.weight : std::min(res.min_weight, d.weight);
    res.min_robustness = i == 0 ? d.robustness : std::min(res.min_robustness, d.robustness);
    if ((i + 1) % 1000 == 0) log(LogLevel::info, "violation: " + std::to_string(i + 1));
  }
  return res;
}

inline Table to_table(const ViolationResult& r) {
  Table t{{"index", "delta_weight", "delta_robustness"}, {}};
  for (std::size_t i = 0; i < r.deltas.size(); ++i) {
    t.rows.push_back({std::to_string(i), format_double(r.deltas[i].weight), format_double(r.deltas[i].robustness)});
  }
  return t;
}

// Check tables ------------------------------------------------------------

struct Check {
  std::string name;
  double expected;
  double actual;
  double tolerance;
  bool pass() const { return std::abs(actual - expected) <= tolerance; }
};

inline Table to_table(const std::vector<Check>& checks) {
  Table t{{"check", "expected", "actual", "error", "pass"}, {}};
  for (const auto& c : checks) {
    t.rows.push_back({c.name, format_double(c.expected), format_double(c.actual),
                      format_double(std::abs(c.actual - c.expected)), c.pass() ? "1" : "0"});
  }
  return t;
}

inline std::vector<Check> run_closed_forms(double tol = kPropertyTol) {
  std::vector<Check> out;
  for (int d : {2, 3}) {
    for (double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const auto rho = werner(d, alpha);
      const std::string tag = "werner(d=" + std::to_string(d) + ",alpha=" + format_double(alpha) + ")";
      out.push_back({tag + " C_w", alpha, coherence_weight(rho).value, tol});
      out.push_back({tag + " C_R", alpha, robustness_coherence(rho).value, tol});
      out.push_back({tag + " C_l1", alpha, l1_coherence(rho), tol});
    }
  }
  const double pi = std::numbers::pi;
  for (double lambda : {0.2, 0.5, 0.8, 1.0}) {
    for (double theta : {pi / 8, pi / 4, 3 * pi / 8}) {
      const auto rho = gisin(lambda, theta);
      const double coh = lambda * std::abs(std::sin(2 * theta));
      const std::string tag = "gisin(lambda=" + format_double(lambda) + ",theta=" + format_double(theta) + ")";
      out.push_back({tag + " C_w", lambda, coherence_weight(rho).value, tol});
      out.push_back({tag + " C_R", coh, robustness_coherence(rho).value, tol});
      out.push_back({tag + " C_l1", coh, l1_coherence(rho), tol});
    }
  }
  return out;
}

// Property suite ------------------------------------------------------------

struct PropertyResult {
  std::string label;
  int samples = 0;
  int failures = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::optional<Violation> first_failure;
  bool pass() const { return failures == 0; }
};

/// Accumulates margins of one sampled property.
class PropertyRecorder {
 public:
  PropertyRecorder(std::string label, double tol) : tol_(tol) { r_.label = std::move(label); }

  void sample() { ++r_.samples; }

  /// margin >= -tol passes.
  void check(double margin, std::size_t index, const std::function<std::string()>& state) {
    r_.worst_margin = std::min(r_.worst_margin, margin);
    if (margin >= -tol_) return;
    ++r_.failures;
    if (!r_.first_failure) r_.first_failure = Violation{r_.label, index, margin, state()};
  }

  const PropertyResult& result() const { return r_; }

 private:
  PropertyResult r_;
  double tol_;
};

/// Deviation of (1 -+ value) sigma* +- value tau* from rho, Frobenius norm.
inline double decomposition_error(const DensityMatrix& rho, const MeasureReport& r) {
  if (!r.free_state) return std::numeric_limits<double>::infinity();
  const Matrix& sigma = r.free_state->matrix();
  const Matrix tau = r.residual_state ? r.residual_state->matrix() : Matrix::Zero(rho.dim(), rho.dim());
  const Matrix rebuilt = r.kind == MeasureKind::weight ? Matrix((1.0 - r.value) * sigma + r.value * tau)
                                                       : Matrix((1.0 + r.value) * sigma - r.value * tau);
  return (rebuilt - rho.matrix()).norm();
}

/// Worst witness-feasibility excess of a weight report: max(lambda_max(P(W)),
/// lambda_max(W) - 1, |Tr[rho W] - value|), or 0 without a witness.
inline double witness_error(const DensityMatrix& rho, const MeasureReport& r, const FreeSet& free) {
  if (!r.witness) return 0.0;
  const Matrix& w = r.witness->matrix();
  const double a = eigenvalues(hermitian_part(free_projection(free, w))).maxCoeff();
  const double b = eigenvalues(w).maxCoeff() - 1.0;
  const double c = std::abs(trace_product(rho.hermitian(), *r.witness) - r.value);
  return std::max({a, b, c, 0.0});
}

struct PropertySuiteOptions {
  std::uint64_t seed = 42;
  double tol = kPropertyTol;
  int convexity_triples = 500;
  int asym_convexity_triples = 200;
  int monotonicity_channels = 100;
  int monotonicity_states = 100;
  int covariant_channels = 20;
  int covariant_states = 20;
  int tensor_pairs = 200;
  int pure_marginals = 200;
  int x_specs = 200;
  int bound_samples = 1000;
  int encoding_samples = 100;
  int asym_samples = 100;
};

inline std::vector<PropertyResult> run_property_suite(const PropertySuiteOptions& o = {}) {
  std::vector<PropertyResult> out;
  const double tol = o.tol;
  auto js = [](const DensityMatrix& r) { return [&r] { return io::to_json(r).dump(); }; };
  // Sub-suites draw from disjoint stream families.
  auto stream = [&](std::uint64_t family, std::uint64_t i) { return derive_seed(derive_seed(o.seed, family), i); };
  auto random_state = [&](int d, std::uint64_t s) {
    Xoshiro256 rng(s);
    const int d_env = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(d));
    return haar_random_mixed(d, d_env, rng);
  };
  const UnitaryRep swap = rep_swap(2);

  {  // convexity of C_w, with decomposition and witness certificates
    PropertyRecorder conv("convexity C_w (d=3)", tol);
    PropertyRecorder cert("certificates C_w (d=3)", tol);
    for (int i = 0; i < o.convexity_triples; ++i) {
      Xoshiro256 rng(stream(1, i));
      const auto a = random_state(3, rng());
      const auto b = random_state(3, rng());
      const double p = rng.uniform();
      const auto m = mix(p, a, b);
      const auto ra = coherence_weight(a);
      const auto rb = coherence_weight(b);
      const auto rm = coherence_weight(m);
      conv.sample();
      conv.check(p * ra.value + (1 - p) * rb.value - rm.value, i, js(m));
      cert.sample();
      cert.check(-decomposition_error(m, rm), i, js(m));
      cert.check(-witness_error(m, rm, Dephasing{}), i, js(m));
    }
    out.push_back(conv.result());
    out.push_back(cert.result());
  }
  {  // convexity of A_w under the two-qubit swap
    PropertyRecorder conv("convexity A_w (swap, d=4)", tol);
    for (int i = 0; i < o.asym_convexity_triples; ++i) {
      Xoshiro256 rng(stream(2, i));
      const auto a = random_state(4, rng());
      const auto b = random_state(4, rng());
      const double p = rng.uniform();
      const auto m = mix(p, a, b);
      conv.sample();
      conv.check(p * asymmetry_weight(a, swap).value + (1 - p) * asymmetry_weight(b, swap).value -
                     asymmetry_weight(m, swap).value,
                 i, js(m));
    }
    out.push_back(conv.result());
  }
  {  // monotonicity on average under incoherent channels
    PropertyRecorder mono("monotonicity C_w, incoherent channels (d=3)", tol);
    for (int c = 0; c < o.monotonicity_channels; ++c) {
      const int k = 2 + c % 3;
      const auto channel = random_incoherent_kraus(3, k, stream(3, c));
      for (int s = 0; s < o.monotonicity_states; ++s) {
        const std::size_t idx = static_cast<std::size_t>(c) * o.monotonicity_states + s;
        const auto rho = random_state(3, stream(4, idx));
        double avg = 0.0;
        for (std::size_t i = 0; i < channel.size(); ++i) {
          const auto br = channel.branch(rho, i);
          if (br.state) avg += br.probability * coherence_weight(*br.state).value;
        }
        mono.sample();
        mono.check(coherence_weight(rho).value - avg, idx, js(rho));
      }
    }
    out.push_back(mono.result());
  }
  {  // monotonicity on average under swap-covariant channels
    PropertyRecorder mono("monotonicity A_w, covariant channels (swap, d=4)", tol);
    for (int c = 0; c < o.covariant_channels; ++c) {
      const auto channel = random_covariant_kraus(swap, 2 + c % 2, stream(5, c));
      for (int s = 0; s < o.covariant_states; ++s) {
        const std::size_t idx = static_cast<std::size_t>(c) * o.covariant_states + s;
        const auto rho = random_state(4, stream(6, idx));
        double avg = 0.0;
        for (std::size_t i = 0; i < channel.size(); ++i) {
          const auto br = channel.branch(rho, i);
          if (br.state) avg += br.probability * asymmetry_weight(*br.state, swap).value;
        }
        mono.sample();
        mono.check(asymmetry_weight(rho, swap).value - avg, idx, js(rho));
      }
    }
    out.push_back(mono.result());
  }
  {  // bound chain and C_R <= C_l1 at d = 3
    PropertyRecorder chain("bound chain (d=3)", tol);
    for (int i = 0; i < o.bound_samples; ++i) {
      const auto rho = haar_random_mixed(3, 3, stream(7, i));
      chain.sample();
      for (const auto& [name, margin] : bound_chain(scatter_row(rho), 3)) chain.check(margin, i, js(rho));
    }
    out.push_back(chain.result());
  }
  {  // tensor products of qubit states
    PropertyRecorder tw("tensor C_w (qubit pairs)", tol);
    PropertyRecorder tr("tensor C_R (qubit pairs)", tol);
    for (int i = 0; i < o.tensor_pairs; ++i) {
      Xoshiro256 rng(stream(8, i));
      const auto a = random_state(2, rng());
      const auto b = random_state(2, rng());
      const auto ab = kron(a, b);
      const double wa = coherence_weight(a).value;
      const double wb = coherence_weight(b).value;
      const double ra = robustness_coherence(a).value;
      const double rb = robustness_coherence(b).value;
      tw.sample();
      tw.check(wa + wb - wa * wb - coherence_weight(ab).value, i, js(ab));
      tr.sample();
      tr.check(ra + rb + ra * rb - robustness_coherence(ab).value, i, js(ab));
    }
    out.push_back(tw.result());
    out.push_back(tr.result());
  }
  {  // pure two-qubit states against their marginals
    PropertyRecorder pr("pure marginals C_R (2x2)", tol);
    PropertyRecorder pw("pure marginals C_w (2x2)", tol);
    for (int i = 0; i < o.pure_marginals; ++i) {
      const auto rho = haar_random_pure(4, stream(9, i));
      const auto r1 = partial_trace(rho, {2, 2}, Subsystem::first);
      const auto r2 = partial_trace(rho, {2, 2}, Subsystem::second);
      const double w1 = coherence_weight(r1).value;
      const double w2 = coherence_weight(r2).value;
      pr.sample();
      pr.check(robustness_coherence(rho).value - robustness_coherence(r1).value - robustness_coherence(r2).value,
               i, js(rho));
      pw.sample();
      pw.check(coherence_weight(rho).value - (w1 + w2 - w1 * w2), i, js(rho));
    }
    out.push_back(pr.result());
    out.push_back(pw.result());
  }
  {  // generalised X states: C_R = C_l1, and C_w >= C_l1 via the phase test
    PropertyRecorder eq("X states C_R = C_l1 (d=2,4)", tol);
    PropertyRecorder p6("X states phase test and C_w >= C_l1", tol);
    for (int i = 0; i < o.x_specs; ++i) {
      const int d = i % 2 == 0 ? 2 : 4;
      const auto rho = generalized_x(random_x_spec(d, stream(10, i)));
      const double l1 = l1_coherence(rho);
      eq.sample();
      eq.check(-std::abs(robustness_coherence(rho).value - l1), i, js(rho));
      p6.sample();
      const bool phases = prop6_applicable(rho).has_value();
      p6.check(phases ? coherence_weight(rho).value - l1 : -1.0, i, js(rho));
    }
    out.push_back(eq.result());
    out.push_back(p6.result());
  }
  {  // the two C_w encodings agree on random d = 3 states
    PropertyRecorder enc("C_w encodings agree (d=3)", tol);
    MeasureOptions no_shortcut;
    no_shortcut.pure_shortcut = false;
    for (int i = 0; i < o.encoding_samples; ++i) {
      const auto rho = haar_random_mixed(3, 3, stream(11, i));
      const auto a = solve(encode_coherence_weight(rho));
      const auto b = solve(encode_coherence_weight_dual(rho));
      enc.sample();
      const bool ok = a.status == SolveStatus::optimal && b.status == SolveStatus::optimal;
      enc.check(ok ? -std::abs((1.0 - a.primal_value) - b.primal_value) : -1.0, i, js(rho));
    }
    out.push_back(enc.result());
  }
  {  // asymmetry relations under the two-qubit swap
    PropertyRecorder rel("A_r <= ln d A_w (swap, d=4)", tol);
    PropertyRecorder rob("A_R <= (d-1) A_w (swap, d=4)", tol);
    PropertyRecorder hs("HS bound <= A_w (swap, d=4)", tol);
    PropertyRecorder cert("certificates A_w (swap, d=4)", tol);
    for (int i = 0; i < o.asym_samples; ++i) {
      const auto rho = random_state(4, stream(12, i));
      const auto aw = asymmetry_weight(rho, swap);
      rel.sample();
      rel.check(std::log(4.0) * aw.value - rel_entropy_asymmetry(rho, swap), i, js(rho));
      rob.sample();
      rob.check(3.0 * aw.value - robustness_asymmetry(rho, swap).value, i, js(rho));
      hs.sample();
      hs.check(aw.value - hs_lower_bound(rho, swap).sharp, i, js(rho));
      cert.sample();
      cert.check(-decomposition_error(rho, aw), i, js(rho));
      cert.check(-witness_error(rho, aw, swap), i, js(rho));
    }
    out.push_back(rel.result());
    out.push_back(rob.result());
    out.push_back(hs.result());
    out.push_back(cert.result());
  }
  return out;
}

inline Table to_table(const std::vector<PropertyResult>& results) {
  Table t{{"property", "samples", "failures", "worst_margin", "pass"}, {}};
  for (const auto& r : results) {
    t.rows.push_back({"\"" + r.label + "\"", std::to_string(r.samples), std::to_string(r.failures),
                      format_double(r.worst_margin), r.pass() ? "1" : "0"});
  }
  return t;
}

}  // namespace rw::harness
