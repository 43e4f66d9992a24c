// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "rw/harness.hpp"
#include "rw/oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace rw;
namespace h = rw::harness;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail, double seconds) {
  std::printf("%s %s (%.1fs) %s\n", ok ? "PASS" : "FAIL", name.c_str(), seconds, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

/// Runs body; a thrown exception counts as failure.
void criterion(const std::string& name, const std::function<bool(std::ostringstream&)>& body) {
  const auto t0 = Clock::now();
  std::ostringstream detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
  }
  report(name, ok, detail.str(), std::chrono::duration<double>(Clock::now() - t0).count());
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool closed_form_subset(std::ostringstream& out, const std::string& prefix, double budget) {
  const auto t0 = Clock::now();
  const auto checks = h::run_closed_forms();
  double worst = 0.0;
  int n = 0;
  bool ok = true;
  for (const auto& c : checks) {
    if (c.name.rfind(prefix, 0) != 0) continue;
    ++n;
    worst = std::max(worst, std::abs(c.actual - c.expected));
    if (!c.pass()) {
      ok = false;
      out << "[" << c.name << " got " << c.actual << "] ";
    }
  }
  const double t = seconds_since(t0);
  out << n << " checks, worst error " << worst << ", " << t << "s of " << budget << "s budget";
  return ok && n > 0 && t < budget;
}

MeasureOptions no_shortcut() {
  MeasureOptions o;
  o.pure_shortcut = false;
  return o;
}

}  // namespace

int main() {
  criterion("werner closed form", [](auto& out) { return closed_form_subset(out, "werner", 30.0); });
  criterion("gisin closed form", [](auto& out) { return closed_form_subset(out, "gisin", 10.0); });

  criterion("pure-state weights", [](auto& out) {
    double worst = 0.0;
    for (int d : {2, 3, 4}) {
      for (int i = 0; i < 100; ++i) {
        const auto psi = haar_random_pure(d, derive_seed(derive_seed(42, static_cast<std::uint64_t>(d)), i));
        worst = std::max(worst, std::abs(coherence_weight(psi, no_shortcut()).value - 1.0));
      }
    }
    const auto ket01 = DensityMatrix::pure(basis_vector(4, 1));
    const double aw = asymmetry_weight(ket01, rep_swap(2), no_shortcut()).value;
    out << "worst |C_w - 1| = " << worst << ", A_w(|01>) = " << aw;
    return worst <= 1e-6 && std::abs(aw - 1.0) <= 1e-6;
  });

  criterion("bound chain d=3,4", [](auto& out) {
    bool ok = true;
    for (int d : {3, 4}) {
      const auto r = h::run_scatter(d, 10000, derive_seed(42, static_cast<std::uint64_t>(d)));
      double worst = std::numeric_limits<double>::infinity();
      for (const auto& row : r.rows) {
        for (const auto& [name, margin] : h::bound_chain(row, d)) worst = std::min(worst, margin);
      }
      out << "d=" << d << ": " << r.rows.size() << " states, " << r.violations.size()
          << " violations, worst margin " << worst << "; ";
      ok = ok && r.violations.empty() && r.rows.size() == 10000;
    }
    return ok;
  });

  criterion("violation existence", [](auto& out) {
    const auto mixed = h::run_violation_search(10000, 42, 4, 1e-5);
    const auto pure = h::run_violation_search(1000, 42, 1, 1e-5);
    out << "mixed: " << mixed.negative_weight << " weight / " << mixed.negative_robustness
        << " robustness violations (min " << mixed.min_weight << ", " << mixed.min_robustness << "); pure: "
        << pure.negative_weight << " / " << pure.negative_robustness << " (min " << pure.min_weight << ", "
        << pure.min_robustness << ")";
    return mixed.negative_weight >= 1 && mixed.negative_robustness >= 1 && pure.negative_weight == 0 &&
           pure.negative_robustness == 0;
  });

  criterion("oracle equivalence", [](auto& out) {
    double qubit = 0.0;
    for (int i = 0; i < 200; ++i) {
      const auto rho = haar_random_mixed(2, 1 + i % 3, derive_seed(7, static_cast<std::uint64_t>(i)));
      qubit = std::max(qubit, std::abs(coherence_weight(rho, no_shortcut()).value - oracle::qubit_cw(rho)));
    }
    const auto ket01 = DensityMatrix::pure(basis_vector(4, 1));
    const std::vector<DensityMatrix> picked{
        ket01,
        mix(0.5, singlet(), ket01),
        haar_random_mixed(4, 4, 42),
        haar_random_mixed(4, 2, 43),
        mix(0.3, werner(2, 0.6), haar_random_mixed(4, 4, 44)),
    };
    double swap = 0.0;
    for (const auto& rho : picked) {
      swap = std::max(swap, std::abs(asymmetry_weight(rho, rep_swap(2), no_shortcut()).value - oracle::swap_aw(rho)));
    }
    out << "qubit worst " << qubit << ", swap worst " << swap;
    return qubit <= 1e-4 && swap <= 1e-4;
  });

  criterion("sampled properties", [](auto& out) {
    const auto results = h::run_property_suite();
    bool ok = true;
    for (const auto& r : results) {
      out << "[" << r.label << ": " << r.samples << " samples, worst " << r.worst_margin;
      if (!r.pass()) out << ", " << r.failures << " FAILED";
      out << "] ";
      ok = ok && r.pass() && r.samples > 0;
    }
    return ok;
  });

  // Runs last so the tally covers every solve above.
  criterion("solver certification", [](auto& out) {
    double enc = 0.0;
    for (int i = 0; i < 100; ++i) {
      const auto rho = haar_random_mixed(3, 3, derive_seed(9, static_cast<std::uint64_t>(i)));
      const auto a = solve(encode_coherence_weight(rho));
      const auto b = solve(encode_coherence_weight_dual(rho));
      if (a.status != SolveStatus::optimal || b.status != SolveStatus::optimal) {
        out << "non-optimal solve at sample " << i << "; ";
        return false;
      }
      enc = std::max(enc, std::abs((1.0 - a.primal_value) - b.primal_value));
    }
    const auto& t = solve_tally();
    out << t.optimal << "/" << t.solves << " solves optimal, worst gap " << t.worst_gap << ", worst residual "
        << t.worst_residual << ", encoding disagreement " << enc;
    return t.solves > 0 && t.optimal == t.solves && t.worst_gap <= 1e-7 && t.worst_residual <= 1e-8 &&
           enc <= 1e-6;
  });

  std::printf("%s: %d failing criteria\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
