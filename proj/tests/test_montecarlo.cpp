#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "ifm/montecarlo.hpp"

namespace {

using ifm::ApparatusGeometry;
using ifm::BinWindow;
using ifm::CounterRng;
using ifm::Normalization;
using ifm::SampledPattern;
using ifm::SlitHypothesis;

const ApparatusGeometry figure_geometry{1000.0, 500.0, 6e6, ifm::k_wavenumber};

SampledPattern make_pattern(std::vector<double> d, Normalization n = Normalization::UnitMass) {
  SampledPattern p;
  p.window = {0.0, static_cast<double>(d.size()), 1.0};
  p.densities = std::move(d);
  ifm::normalize(p, n);
  return p;
}

TEST(CounterRng, StreamIsPureFunctionOfKeyAndCounter) {
  CounterRng a(7, 123), b(7, 123), c(7, 124), d(8, 123);
  const auto a1 = a.next(), b1 = b.next();
  EXPECT_EQ(a1, b1);
  EXPECT_NE(a1, c.next());
  EXPECT_NE(a1, d.next());
  std::set<std::uint64_t> seen;
  for (std::uint64_t t = 0; t < 10000; ++t)
    seen.insert(CounterRng(42, t).next());
  EXPECT_EQ(seen.size(), 10000u);
}

TEST(CounterRng, UniformMomentsMatch) {
  CounterRng r(1, 0);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += u;
    s2 += u * u;
  }
  EXPECT_NEAR(s / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(s2 / n - (s / n) * (s / n), 1.0 / 12.0, 2e-3);
}

TEST(BinnedSampler, TwoBinFrequencies) {
  const ifm::BinnedSampler s(make_pattern({1.0, 3.0}));
  const int n = 100000;
  int first = 0;
  for (int t = 0; t < n; ++t)
    first += s.sample_index(CounterRng(5, static_cast<std::uint64_t>(t)).uniform()) == 0 ? 1 : 0;
  EXPECT_NEAR(static_cast<double>(first) / n, 0.25, 4.0 * std::sqrt(0.25 * 0.75 / n));
}

TEST(BinnedSampler, SingleBinAndEmptyBins) {
  const ifm::BinnedSampler one(make_pattern({2.0}));
  for (double u : {0.0, 0.3, 0.999999})
    EXPECT_EQ(one.sample_index(u), 0u);
  const ifm::BinnedSampler gap(make_pattern({1.0, 0.0, 1.0}));
  for (int i = 0; i <= 1000; ++i)
    EXPECT_NE(gap.sample_index(std::nextafter(i / 1000.0, 0.0)), 1u);
  EXPECT_EQ(gap.sample_index(0.5), 2u);
}

TEST(BinnedSampler, RejectsUnsuitablePatterns) {
  SampledPattern zero;
  zero.window = {0.0, 2.0, 1.0};
  zero.densities = {0.0, 0.0};
  zero.normalization = Normalization::UnitMass;
  EXPECT_THROW(ifm::BinnedSampler{zero}, std::domain_error);
  EXPECT_THROW(ifm::BinnedSampler{make_pattern({1.0, 2.0}, Normalization::PeakOne)}, std::domain_error);
}

TEST(BinnedSampler, ChiSquareAgainstScreenPattern) {
  const auto p = ifm::pattern(SlitHypothesis::Bomb, figure_geometry, BinWindow::symmetric(25000.0, 5000.0),
                              Normalization::UnitMass);
  const ifm::BinnedSampler s(p);
  const int n = 100000;
  std::vector<int> counts(p.size(), 0);
  for (int t = 0; t < n; ++t) {
    CounterRng r(99, static_cast<std::uint64_t>(t));
    ++counts[s.sample_index(r)];
  }
  double chi2 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double expected = n * p.densities[i] * p.bin_width();
    chi2 += (counts[i] - expected) * (counts[i] - expected) / expected;
  }
  EXPECT_LT(chi2, 27.88); // 9 degrees of freedom, p = 0.001
}

class Experiment : public ::testing::Test {
protected:
  static ifm::ExperimentConfig config(std::uint64_t n) {
    ifm::ExperimentConfig c;
    c.n_bomb = n;
    c.n_empty = n;
    c.seed = 2024;
    return c;
  }
};

TEST_F(Experiment, TalliesAreConsistent) {
  const auto r = ifm::run_experiment(figure_geometry, config(20000));
  for (const auto *t : {&r.bomb, &r.empty})
    EXPECT_EQ(t->n_correct + t->n_incorrect + t->n_inconclusive + t->n_explosions, t->n_total);
  EXPECT_EQ(r.bomb.n_total, 20000u);
  EXPECT_EQ(r.empty.n_explosions, 0u);
}

TEST_F(Experiment, ExplosionFrequencyMatchesRatio) {
  const auto r = ifm::run_experiment(figure_geometry, config(100000));
  const double f = static_cast<double>(r.bomb.n_explosions) / static_cast<double>(r.bomb.n_total);
  EXPECT_NEAR(f, 0.5, 4.0 * std::sqrt(0.25 / 1e5));
}

TEST_F(Experiment, ConclusiveFractionsMatchIntegratedRates) {
  const auto cfg = config(100000);
  const auto r = ifm::run_experiment(figure_geometry, cfg);
  const auto table = ifm::build_likelihood_table(figure_geometry, cfg.window);
  // Oracle: probability mass of the detection density in bins claiming each label.
  double bomb_right = 0.0, empty_right = 0.0;
  for (std::size_t i = 0; i < table.window.bins(); ++i) {
    if (table.raw_bomb[i] <= 0.0 && table.raw_no_bomb[i] <= 0.0)
      continue;
    const auto label = ifm::classify_posterior(table.bin_posterior(i, cfg.classifier),
                                               cfg.classifier.threshold)
                           .label;
    if (label == ifm::Label::BombPresent)
      bomb_right += table.bomb.densities[i] * table.window.bin_width;
    if (label == ifm::Label::BombAbsent)
      empty_right += table.no_bomb.densities[i] * table.window.bin_width;
  }
  bomb_right /= 0.5; // conditional on detection
  const double nb = static_cast<double>(r.bomb.detections());
  const double ne = static_cast<double>(r.empty.detections());
  EXPECT_NEAR(*r.conclusive_bomb_fraction(), bomb_right,
              4.0 * std::sqrt(bomb_right * (1 - bomb_right) / nb));
  EXPECT_NEAR(*r.conclusive_empty_fraction(), empty_right,
              4.0 * std::sqrt(empty_right * (1 - empty_right) / ne));
}

TEST_F(Experiment, IdenticalAcrossThreadCounts) {
  const auto cfg = config(30000);
  std::vector<ifm::TrialRecord> log1, log3;
  const auto a = ifm::run_experiment(figure_geometry, cfg, 1, &log1);
  const auto b = ifm::run_experiment(figure_geometry, cfg, 3, &log3);
  EXPECT_EQ(ifm::to_json(a).dump(), ifm::to_json(b).dump());
  std::ostringstream s1, s3;
  ifm::write_trial_log(s1, log1);
  ifm::write_trial_log(s3, log3);
  EXPECT_EQ(s1.str(), s3.str());
}

TEST_F(Experiment, SeedChangesOutcome) {
  auto cfg = config(20000);
  const auto a = ifm::run_experiment(figure_geometry, cfg);
  cfg.seed = 2025;
  const auto b = ifm::run_experiment(figure_geometry, cfg);
  EXPECT_NE(ifm::to_json(a).dump(), ifm::to_json(b).dump());
}

TEST_F(Experiment, TrialLogLayout) {
  auto cfg = config(3);
  std::vector<ifm::TrialRecord> log;
  ifm::run_experiment(figure_geometry, cfg, 1, &log);
  ASSERT_EQ(log.size(), 6u);
  std::ostringstream os;
  ifm::write_trial_log(os, log);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "trial,true_class,outcome,x2,posterior,label");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    const std::string prefix = std::to_string(rows - 1) + (rows <= 3 ? ",bomb," : ",no_bomb,");
    EXPECT_EQ(line.rfind(prefix, 0), 0u) << line;
  }
  EXPECT_EQ(rows, 6);
}

TEST_F(Experiment, ZeroTrialsGiveUndefinedRatios) {
  auto cfg = config(0);
  const auto r = ifm::run_experiment(figure_geometry, cfg);
  EXPECT_FALSE(r.conclusive_bomb_fraction().has_value());
  EXPECT_TRUE(ifm::to_json(r)["bomb"]["conclusive_fraction"].is_null());
}

} // namespace
