#pragma once
/**
 * @file montecarlo.hpp
 * @brief Seeded single-photon trials and the slit classification experiment.
 *
 * Detections are drawn by inverse-CDF sampling over the same bins used by
 * eta_tilde, which targets the binned density exactly (the rejection sampler
 * it replaces has the same target). Every trial owns a random stream keyed by
 * (seed, trial index), so a report depends only on the seed and the
 * configuration, never on how trials were scheduled across threads.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "ifm/format.hpp"
#include "ifm/inference.hpp"
#include "ifm/parallel.hpp"
#include "ifm/pattern.hpp"

namespace ifm {

/// Counter-based generator: the stream for (key, counter) is a pure function
/// of both, built from the SplitMix64 finalizer.
class CounterRng {
public:
  CounterRng(std::uint64_t key, std::uint64_t counter) noexcept
      : state_(mix(key ^ mix(counter + 0x9e3779b97f4a7c15ULL))) {}

  std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

/// Inverse-CDF sampler over the bins of a pattern.
class BinnedSampler {
public:
  explicit BinnedSampler(const SampledPattern &p) : window_(p.window) {
    if (p.normalization != Normalization::UnitMass && p.normalization != Normalization::FluxMass)
      throw std::domain_error("BinnedSampler: pattern must be UnitMass or FluxMass normalized");
    cumulative_.resize(p.size());
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      s += p.densities[i];
      cumulative_[i] = s;
    }
    if (!(s > 0.0))
      throw std::domain_error("BinnedSampler: zero-mass pattern");
  }

  [[nodiscard]] std::size_t sample_index(double u) const noexcept {
    const double target = u * cumulative_.back();
    // upper_bound never lands on an empty bin.
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    if (it == cumulative_.end())
      --it;
    return static_cast<std::size_t>(it - cumulative_.begin());
  }

  [[nodiscard]] std::size_t sample_index(CounterRng &rng) const noexcept {
    return sample_index(rng.uniform());
  }
  [[nodiscard]] double sample(CounterRng &rng) const noexcept {
    return window_.center(sample_index(rng));
  }
  [[nodiscard]] std::size_t bins() const noexcept { return cumulative_.size(); }
  [[nodiscard]] const BinWindow &window() const noexcept { return window_; }

private:
  BinWindow window_;
  std::vector<double> cumulative_;
};

inline BinnedSampler build_sampler(const SampledPattern &p) { return BinnedSampler(p); }

struct TrialOutcome {
  enum class Kind { Explosion, Detection };
  Kind kind{Kind::Detection};
  std::size_t bin{0};
  double x2{0.0};

  [[nodiscard]] bool exploded() const noexcept { return kind == Kind::Explosion; }
};

/// Single-photon trial model for one geometry and window: the photon has
/// reached the open slit; under the bomb hypothesis it explodes with
/// probability b/w, otherwise it lands on the screen.
class TrialSimulator {
public:
  TrialSimulator(const ApparatusGeometry &g, LikelihoodTable table)
      : table_(std::move(table)), no_bomb_(table_.no_bomb), bomb_(table_.bomb) {
    g.validate();
    explosion_probability_ = 1.0 - survival_probability(SlitHypothesis::Bomb, g);
  }

  TrialSimulator(const ApparatusGeometry &g, const BinWindow &window, unsigned threads = 1)
      : TrialSimulator(g, build_likelihood_table(g, window, threads)) {}

  [[nodiscard]] TrialOutcome simulate(SlitHypothesis h, CounterRng &rng) const noexcept {
    if (h == SlitHypothesis::Bomb) {
      if (rng.uniform() < explosion_probability_)
        return {TrialOutcome::Kind::Explosion, 0, 0.0};
      const auto i = bomb_.sample_index(rng);
      return {TrialOutcome::Kind::Detection, i, table_.window.center(i)};
    }
    const auto i = no_bomb_.sample_index(rng);
    return {TrialOutcome::Kind::Detection, i, table_.window.center(i)};
  }

  [[nodiscard]] const LikelihoodTable &table() const noexcept { return table_; }

private:
  LikelihoodTable table_;
  BinnedSampler no_bomb_;
  BinnedSampler bomb_;
  double explosion_probability_{0.0};
};

inline TrialOutcome simulate_trial(SlitHypothesis h, const TrialSimulator &sim, CounterRng &rng) {
  return sim.simulate(h, rng);
}

/// Tallies for one true class. Explosions are not classifier claims.
struct ClassTally {
  std::uint64_t n_total{0};
  std::uint64_t n_correct{0};
  std::uint64_t n_incorrect{0};
  std::uint64_t n_inconclusive{0};
  std::uint64_t n_explosions{0};

  [[nodiscard]] std::uint64_t detections() const noexcept { return n_total - n_explosions; }

  ClassTally &operator+=(const ClassTally &o) noexcept {
    n_total += o.n_total;
    n_correct += o.n_correct;
    n_incorrect += o.n_incorrect;
    n_inconclusive += o.n_inconclusive;
    n_explosions += o.n_explosions;
    return *this;
  }
};

struct ExperimentConfig {
  std::uint64_t n_bomb{100000};
  std::uint64_t n_empty{100000};
  std::uint64_t seed{42};
  ClassifierConfig classifier;
  BinWindow window{-1e6, 1e6, 10.0};
};

struct ExperimentReport {
  ApparatusGeometry geometry;
  ExperimentConfig config;
  ClassTally bomb;
  ClassTally empty;
  Warnings warnings;

  [[nodiscard]] static std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
    if (den == 0)
      return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  }
  /// Fraction of a class's detections that were classified correctly.
  [[nodiscard]] std::optional<double> conclusive_bomb_fraction() const {
    return ratio(bomb.n_correct, bomb.detections());
  }
  [[nodiscard]] std::optional<double> conclusive_empty_fraction() const {
    return ratio(empty.n_correct, empty.detections());
  }
  /// Of all "bomb present" claims, the fraction made on bomb slits.
  [[nodiscard]] std::optional<double> claim_accuracy_bomb() const {
    return ratio(bomb.n_correct, bomb.n_correct + empty.n_incorrect);
  }
  /// Of all "bomb absent" claims, the fraction made on empty slits.
  [[nodiscard]] std::optional<double> claim_accuracy_empty() const {
    return ratio(empty.n_correct, empty.n_correct + bomb.n_incorrect);
  }
  /// Within one true class, correct claims over all claims made on it.
  [[nodiscard]] std::optional<double> class_accuracy_bomb() const {
    return ratio(bomb.n_correct, bomb.n_correct + bomb.n_incorrect);
  }
  [[nodiscard]] std::optional<double> class_accuracy_empty() const {
    return ratio(empty.n_correct, empty.n_correct + empty.n_incorrect);
  }
  /// IFM detections / (IFM detections + explosions) under the bomb hypothesis.
  [[nodiscard]] std::optional<double> eta_tilde_estimate() const {
    return ratio(bomb.n_correct, bomb.n_correct + bomb.n_explosions);
  }

  /// Claim accuracies if both classes produced equal numbers of detections.
  struct Projection {
    std::optional<double> bomb_claims;
    std::optional<double> empty_claims;
  };
  [[nodiscard]] Projection equal_number_projection() const {
    const auto rb = [&](std::uint64_t n) { return ratio(n, bomb.detections()); };
    const auto re = [&](std::uint64_t n) { return ratio(n, empty.detections()); };
    Projection p;
    const auto bc = rb(bomb.n_correct), bi = rb(bomb.n_incorrect);
    const auto ec = re(empty.n_correct), ei = re(empty.n_incorrect);
    if (bc && ei && (*bc + *ei) > 0.0)
      p.bomb_claims = *bc / (*bc + *ei);
    if (ec && bi && (*ec + *bi) > 0.0)
      p.empty_claims = *ec / (*ec + *bi);
    return p;
  }
};

/// One row of the optional per-trial log.
struct TrialRecord {
  SlitHypothesis true_class;
  TrialOutcome outcome;
  double posterior{0.0};
  Label label{Label::Inconclusive};
};

/// Runs n_bomb bomb-slit trials (indices [0, n_bomb)) followed by n_empty
/// empty-slit trials, classifying every detection.
inline ExperimentReport run_experiment(const ApparatusGeometry &g, const ExperimentConfig &cfg,
                                       unsigned threads = 1,
                                       std::vector<TrialRecord> *log = nullptr) {
  g.validate();
  cfg.classifier.validate();
  cfg.window.validate();
  const TrialSimulator sim(g, cfg.window, threads);
  const auto &table = sim.table();

  // Per-bin labels; bins where neither hypothesis has mass are never drawn.
  const std::size_t bins = table.window.bins();
  std::vector<Label> labels(bins, Label::Inconclusive);
  std::vector<double> posteriors(bins, 0.0);
  parallel_for(bins, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      if (table.raw_bomb[i] <= 0.0 && table.raw_no_bomb[i] <= 0.0)
        continue;
      const auto c = classify_posterior(table.bin_posterior(i, cfg.classifier),
                                        cfg.classifier.threshold);
      labels[i] = c.label;
      posteriors[i] = c.posterior;
    }
  });

  const std::uint64_t total = cfg.n_bomb + cfg.n_empty;
  if (log)
    log->assign(total, TrialRecord{});

  const unsigned workers = resolve_threads(threads);
  std::vector<ClassTally> bomb_tallies(workers), empty_tallies(workers);
  std::vector<std::size_t> slot_of_chunk;
  std::mutex slot_mutex;
  std::size_t next_slot = 0;

  parallel_for(total, workers, [&](std::size_t begin, std::size_t end) {
    std::size_t slot;
    {
      std::lock_guard lock(slot_mutex);
      slot = next_slot++;
    }
    ClassTally tb, te;
    for (std::size_t t = begin; t < end; ++t) {
      const bool is_bomb = t < cfg.n_bomb;
      const SlitHypothesis h = is_bomb ? SlitHypothesis::Bomb : SlitHypothesis::NoBomb;
      CounterRng rng(cfg.seed, t);
      const TrialOutcome out = sim.simulate(h, rng);
      ClassTally &tally = is_bomb ? tb : te;
      ++tally.n_total;
      TrialRecord rec{h, out, 0.0, Label::Inconclusive};
      if (out.exploded()) {
        ++tally.n_explosions;
      } else {
        rec.label = labels[out.bin];
        rec.posterior = posteriors[out.bin];
        const Label right = is_bomb ? Label::BombPresent : Label::BombAbsent;
        if (rec.label == Label::Inconclusive)
          ++tally.n_inconclusive;
        else if (rec.label == right)
          ++tally.n_correct;
        else
          ++tally.n_incorrect;
      }
      if (log)
        (*log)[t] = rec;
    }
    bomb_tallies[slot] = tb;
    empty_tallies[slot] = te;
  });

  ExperimentReport report;
  report.geometry = g;
  report.config = cfg;
  report.warnings = table.warnings;
  for (const auto &t : bomb_tallies)
    report.bomb += t;
  for (const auto &t : empty_tallies)
    report.empty += t;
  return report;
}

namespace detail {
inline nlohmann::ordered_json optional_json(const std::optional<double> &v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}
inline nlohmann::ordered_json tally_json(const ClassTally &t) {
  nlohmann::ordered_json j;
  j["n_total"] = t.n_total;
  j["n_detections"] = t.detections();
  j["n_correct"] = t.n_correct;
  j["n_incorrect"] = t.n_incorrect;
  j["n_inconclusive"] = t.n_inconclusive;
  j["n_explosions"] = t.n_explosions;
  return j;
}
} // namespace detail

inline nlohmann::ordered_json to_json(const ExperimentReport &r) {
  using detail::optional_json;
  nlohmann::ordered_json j;
  j["bomb"] = detail::tally_json(r.bomb);
  j["bomb"]["conclusive_fraction"] = optional_json(r.conclusive_bomb_fraction());
  j["bomb"]["class_accuracy"] = optional_json(r.class_accuracy_bomb());
  j["empty"] = detail::tally_json(r.empty);
  j["empty"]["conclusive_fraction"] = optional_json(r.conclusive_empty_fraction());
  j["empty"]["class_accuracy"] = optional_json(r.class_accuracy_empty());
  j["claim_accuracy_bomb"] = optional_json(r.claim_accuracy_bomb());
  j["claim_accuracy_empty"] = optional_json(r.claim_accuracy_empty());
  const auto proj = r.equal_number_projection();
  j["equal_number_projection"] = {{"bomb_claims", optional_json(proj.bomb_claims)},
                                  {"empty_claims", optional_json(proj.empty_claims)}};
  j["eta_tilde_estimate"] = optional_json(r.eta_tilde_estimate());
  j["seed"] = r.config.seed;
  nlohmann::ordered_json cfg;
  cfg["w"] = r.geometry.w;
  cfg["b"] = r.geometry.b;
  cfg["l2"] = r.geometry.l2;
  cfg["window"] = {r.config.window.lo, r.config.window.hi};
  cfg["bin_width"] = r.config.window.bin_width;
  cfg["threshold"] = r.config.classifier.threshold;
  cfg["prior"] = r.config.classifier.prior_bomb;
  cfg["mode"] = to_string(r.config.classifier.mode);
  cfg["n_bomb"] = r.config.n_bomb;
  cfg["n_empty"] = r.config.n_empty;
  j["config"] = cfg;
  j["warnings"] = r.warnings.messages();
  return j;
}

/// `trial,true_class,outcome,x2,posterior,label`; x2 and posterior are empty
/// for explosions.
inline void write_trial_log(std::ostream &os, const std::vector<TrialRecord> &log) {
  os << "trial,true_class,outcome,x2,posterior,label\n";
  for (std::size_t t = 0; t < log.size(); ++t) {
    const auto &r = log[t];
    os << t << ',' << to_string(r.true_class) << ',';
    if (r.outcome.exploded())
      os << "explosion,,,\n";
    else
      os << "detection," << format_double(r.outcome.x2) << ',' << format_double(r.posterior)
         << ',' << to_string(r.label) << '\n';
  }
}

} // namespace ifm
