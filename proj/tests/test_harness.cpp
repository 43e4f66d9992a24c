#include "rw/harness.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace rw;
namespace h = rw::harness;

namespace {

std::string csv(const h::Table& t) {
  std::ostringstream out;
  h::write_csv(out, t);
  return out.str();
}

}  // namespace

TEST(Format, TwelveSignificantDigits) {
  EXPECT_EQ(h::format_double(0.5), "0.5");
  EXPECT_EQ(h::format_double(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(h::format_double(-2.5e-9), "-2.5e-09");
}

TEST(Parse, StateSpecs) {
  EXPECT_LE((h::parse_state("werner:d=3,alpha=0.5").matrix() - werner(3, 0.5).matrix()).norm(), 1e-15);
  EXPECT_LE((h::parse_state("gisin:lambda=0.8,theta=0.7854").matrix() - gisin(0.8, 0.7854).matrix()).norm(), 1e-15);
  EXPECT_EQ(h::parse_state("haar-mixed:d=4,denv=4,seed=42").matrix(), haar_random_mixed(4, 4, 42).matrix());
  EXPECT_EQ(h::parse_state("haar-pure:d=3,seed=7").matrix(), haar_random_pure(3, 7).matrix());
  EXPECT_EQ(h::parse_state("max-coherent:d=2").dim(), 2);
  EXPECT_THROW(h::parse_state("werner:d=3"), std::invalid_argument);
  EXPECT_THROW(h::parse_state("nothing:d=3"), std::invalid_argument);
  EXPECT_THROW(h::parse_state("werner"), std::invalid_argument);
  EXPECT_THROW(h::parse_state("werner:d=3,alpha=x"), std::invalid_argument);
  EXPECT_THROW(h::parse_state("werner:d=3,alpha=2"), std::domain_error);
}

TEST(Parse, FileSpecRoundTrip) {
  const auto rho = haar_random_mixed(3, 2, 9);
  const std::string path = ::testing::TempDir() + "rw_state.json";
  {
    std::ofstream f(path);
    f << io::to_json(rho).dump();
  }
  EXPECT_LE((h::parse_state("file:" + path).matrix() - rho.matrix()).norm(), 1e-15);

  io::json bad = io::to_json(rho);
  bad["im"][0][1] = 0.25;
  bad["im"][1][0] = 0.25;
  EXPECT_THROW(io::hermitian_from_json(bad), std::domain_error);
  bad = io::to_json(rho);
  bad["dim"] = 4;
  EXPECT_THROW(io::hermitian_from_json(bad), std::domain_error);
  EXPECT_THROW(h::parse_state("file:/nonexistent/x.json"), std::domain_error);
  std::remove(path.c_str());
}

TEST(Parse, RepSpecs) {
  EXPECT_EQ(h::parse_rep("swap:2").dim(), 4);
  EXPECT_EQ(h::parse_rep("swap:d=3").dim(), 9);
  const auto c = h::parse_rep("cyclic:3,5");
  EXPECT_EQ(c.dim(), 3);
  EXPECT_EQ(c.size(), 5u);
  EXPECT_EQ(h::parse_rep("cyclic:d=2,n=4").size(), 4u);
  EXPECT_THROW(h::parse_rep("swap"), std::invalid_argument);
  EXPECT_THROW(h::parse_rep("cyclic:3"), std::invalid_argument);
  EXPECT_THROW(h::parse_rep("rotation:3"), std::invalid_argument);
}

TEST(Config, Validation) {
  h::ExperimentConfig c{"scatter", {3}, 10, 42, "-", 1e-6};
  EXPECT_NO_THROW(h::validate(c));
  c.samples = 0;
  EXPECT_THROW(h::validate(c), std::invalid_argument);
  c.samples = 1;
  c.name = "histogram";
  EXPECT_THROW(h::validate(c), std::invalid_argument);
  EXPECT_THROW(h::run_scatter(9, 1, 1), std::invalid_argument);
  EXPECT_THROW(h::run_scatter(1, 1, 1), std::invalid_argument);
}

TEST(Scatter, DeterministicAndSatisfiesChain) {
  const auto a = h::run_scatter(3, 1, 42);
  const auto b = h::run_scatter(3, 1, 42);
  EXPECT_EQ(csv(h::to_table(a)), csv(h::to_table(b)));
  const auto r = h::run_scatter(4, 50, 7);
  EXPECT_TRUE(r.violations.empty());
  const std::string text = csv(h::to_table(r));
  EXPECT_EQ(text.substr(0, text.find('\n')), "index,c_w,c_l1,c_robustness,c_rel_entropy,hs_bound");
  // shard independence: sample i of a long run equals sample i of a short one
  EXPECT_EQ(h::to_table(h::run_scatter(4, 3, 7)).rows[2], h::to_table(r).rows[2]);
}

TEST(Scatter, BoundChainFlagsBrokenInequalities) {
  h::ScatterRow bad{0.1, 0.9, 0.5, 0.2, 0.05};
  const auto chain = h::bound_chain(bad, 3);
  int broken = 0;
  for (const auto& [name, margin] : chain) broken += margin < -1e-6;
  EXPECT_EQ(broken, 3);  // C_R/2, C_l1/2 and C_r/ln 3 all exceed 0.1
}

TEST(Violation, PureStatesDoNotViolate) {
  const auto r = h::run_violation_search(100, 42, 1);
  EXPECT_EQ(r.negative_weight, 0);
  EXPECT_EQ(r.negative_robustness, 0);
  EXPECT_GE(r.min_weight, -1e-6);
  EXPECT_GE(r.min_robustness, -1e-6);
}

TEST(Violation, DeterministicOutput) {
  EXPECT_EQ(csv(h::to_table(h::run_violation_search(5, 3))), csv(h::to_table(h::run_violation_search(5, 3))));
}

TEST(ClosedForms, AllPass) {
  const auto checks = h::run_closed_forms();
  EXPECT_EQ(checks.size(), 2u * 5u * 3u + 4u * 3u * 3u);
  for (const auto& c : checks) EXPECT_TRUE(c.pass()) << c.name << " got " << c.actual;
}

TEST(Properties, SmallSuitePasses) {
  h::PropertySuiteOptions o;
  o.convexity_triples = 20;
  o.asym_convexity_triples = 10;
  o.monotonicity_channels = 5;
  o.monotonicity_states = 5;
  o.covariant_channels = 3;
  o.covariant_states = 3;
  o.tensor_pairs = 10;
  o.pure_marginals = 10;
  o.x_specs = 10;
  o.bound_samples = 20;
  o.encoding_samples = 10;
  o.asym_samples = 10;
  const auto results = h::run_property_suite(o);
  EXPECT_FALSE(results.empty());
  for (const auto& r : results) {
    EXPECT_TRUE(r.pass()) << r.label << " worst " << r.worst_margin;
    EXPECT_GT(r.samples, 0);
  }
}

TEST(Properties, RecorderKeepsFirstFailure) {
  h::PropertyRecorder rec("demo", 1e-6);
  rec.sample();
  rec.check(0.5, 0, [] { return std::string("a"); });
  rec.check(-1.0, 1, [] { return std::string("b"); });
  rec.check(-2.0, 2, [] { return std::string("c"); });
  const auto& r = rec.result();
  EXPECT_EQ(r.failures, 2);
  EXPECT_EQ(r.worst_margin, -2.0);
  ASSERT_TRUE(r.first_failure);
  EXPECT_EQ(r.first_failure->index, 1u);
  EXPECT_EQ(r.first_failure->state_json, "b");
}
