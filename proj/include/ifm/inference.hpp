#pragma once
/**
 * @file inference.hpp
 * @brief Two-hypothesis Bayesian inference from a single screen detection,
 *        the threshold classifier, and interaction-free efficiencies.
 */

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ifm/apertures.hpp"
#include "ifm/pattern.hpp"
#include "ifm/screen.hpp"

namespace ifm {

/// How P(x|Bomb) is normalized relative to P(x|NoBomb).
enum class LikelihoodMode {
  /// A screen hit is the observed event: the bomb density integrates to the
  /// survival probability (w-b)/w, the no-bomb density to 1.
  FluxAware,
  /// Both densities integrate to 1.
  UnitNormalized,
};

inline const char *to_string(LikelihoodMode m) noexcept {
  return m == LikelihoodMode::FluxAware ? "flux_aware" : "unit_normalized";
}

inline LikelihoodMode parse_likelihood_mode(const std::string &s) {
  if (s == "flux_aware")
    return LikelihoodMode::FluxAware;
  if (s == "unit_normalized")
    return LikelihoodMode::UnitNormalized;
  throw std::invalid_argument("unknown likelihood mode '" + s +
                              "' (expected flux_aware or unit_normalized)");
}

struct ClassifierConfig {
  double prior_bomb{0.5};
  double threshold{0.99};
  LikelihoodMode mode{LikelihoodMode::FluxAware};

  void validate() const {
    if (!(prior_bomb >= 0.0 && prior_bomb <= 1.0))
      throw std::domain_error("ClassifierConfig: prior must lie in [0, 1]");
    if (!(threshold > 0.5 && threshold <= 1.0))
      throw std::domain_error("ClassifierConfig: threshold must lie in (0.5, 1]");
  }
};

/// Raised when neither hypothesis can produce the observation.
class UndefinedPosterior : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

struct Likelihoods {
  double bomb;
  double no_bomb;
};

/// Likelihoods from raw screen intensities (unit amplitude convention).
inline Likelihoods likelihoods_from_intensity(double bomb_intensity, double no_bomb_intensity,
                                              const ApparatusGeometry &g, LikelihoodMode mode) {
  const double nb = no_bomb_intensity / screen_intensity_total(SlitHypothesis::NoBomb, g);
  double bo = bomb_intensity / screen_intensity_total(SlitHypothesis::Bomb, g);
  if (mode == LikelihoodMode::FluxAware)
    bo *= survival_probability(SlitHypothesis::Bomb, g);
  return {bo, nb};
}

inline Likelihoods likelihoods(double x2, const ApparatusGeometry &g, LikelihoodMode mode) {
  return likelihoods_from_intensity(screen_intensity(SlitHypothesis::Bomb, x2, g),
                                    screen_intensity(SlitHypothesis::NoBomb, x2, g), g, mode);
}

/// Bayes' rule for the bomb hypothesis.
inline double posterior_from_likelihoods(const Likelihoods &l, double prior_bomb) {
  const double num = l.bomb * prior_bomb;
  const double den = num + l.no_bomb * (1.0 - prior_bomb);
  if (!(den > 0.0))
    throw UndefinedPosterior("posterior: both weighted likelihoods vanish");
  return num / den;
}

inline double posterior(double x2, const ApparatusGeometry &g, const ClassifierConfig &cfg) {
  g.validate();
  if (!(cfg.prior_bomb >= 0.0 && cfg.prior_bomb <= 1.0))
    throw std::domain_error("posterior: prior must lie in [0, 1]");
  return posterior_from_likelihoods(likelihoods(x2, g, cfg.mode), cfg.prior_bomb);
}

enum class Label { BombPresent, BombAbsent, Inconclusive };

inline const char *to_string(Label l) noexcept {
  switch (l) {
  case Label::BombPresent:
    return "bomb_present";
  case Label::BombAbsent:
    return "bomb_absent";
  case Label::Inconclusive:
    return "inconclusive";
  }
  return "unknown";
}

struct Classification {
  Label label;
  double posterior;
};

/// Threshold rule; equality with T counts as a claim.
inline Classification classify_posterior(double p, double threshold) {
  if (p >= threshold)
    return {Label::BombPresent, p};
  if (1.0 - p >= threshold)
    return {Label::BombAbsent, p};
  return {Label::Inconclusive, p};
}

inline Classification classify(double x2, const ApparatusGeometry &g, const ClassifierConfig &cfg) {
  cfg.validate();
  return classify_posterior(posterior(x2, g, cfg), cfg.threshold);
}

/// Binned likelihoods shared by the efficiency integral and the sampler.
///
/// Bin posteriors use exactly the arithmetic of posterior(), so the binned
/// classifier agrees with classify() at every bin center.
struct LikelihoodTable {
  ApparatusGeometry geometry;
  BinWindow window;
  /// FluxMass patterns: no-bomb mass 1, bomb mass (w-b)/w.
  SampledPattern no_bomb;
  SampledPattern bomb;
  /// Raw intensities at bin centers.
  std::vector<double> raw_no_bomb;
  std::vector<double> raw_bomb;
  Warnings warnings;

  [[nodiscard]] double bin_posterior(std::size_t i, const ClassifierConfig &cfg) const {
    return posterior_from_likelihoods(
        likelihoods_from_intensity(raw_bomb[i], raw_no_bomb[i], geometry, cfg.mode),
        cfg.prior_bomb);
  }
};

inline LikelihoodTable build_likelihood_table(const ApparatusGeometry &g, const BinWindow &window,
                                              unsigned threads = 1) {
  g.validate();
  window.validate();
  LikelihoodTable t;
  t.geometry = g;
  t.window = window;
  t.no_bomb = pattern(SlitHypothesis::NoBomb, g, window, Normalization::SharedPeak, threads, 1.0);
  t.bomb = pattern(SlitHypothesis::Bomb, g, window, Normalization::SharedPeak, threads, 1.0);
  t.raw_no_bomb = t.no_bomb.densities;
  t.raw_bomb = t.bomb.densities;
  normalize(t.no_bomb, Normalization::FluxMass, survival_probability(SlitHypothesis::NoBomb, g));
  normalize(t.bomb, Normalization::FluxMass, survival_probability(SlitHypothesis::Bomb, g));
  t.warnings.merge(t.no_bomb.warnings);
  t.warnings.merge(t.bomb.warnings);
  return t;
}

struct EfficiencyResult {
  double eta_tilde{0.0};
  /// Probability of a detection whose posterior reaches T, given the bomb.
  double accepted_mass{0.0};
  double explosion_probability{0.0};
  /// explosion_probability / accepted_mass; infinite when nothing is accepted.
  double explosions_per_detection{0.0};
  ClassifierConfig config;
  BinWindow window;
  Warnings warnings;
};

/// Threshold efficiency: accepted detection mass relative to accepted mass
/// plus explosion probability. T may be any value in (0, 1] here.
inline EfficiencyResult eta_tilde(const LikelihoodTable &table, const ClassifierConfig &cfg) {
  if (!(cfg.threshold > 0.0 && cfg.threshold <= 1.0))
    throw std::domain_error("eta_tilde: threshold must lie in (0, 1]");
  if (!(cfg.prior_bomb >= 0.0 && cfg.prior_bomb <= 1.0))
    throw std::domain_error("eta_tilde: prior must lie in [0, 1]");
  EfficiencyResult r;
  r.config = cfg;
  r.window = table.window;
  r.warnings = table.warnings;
  double accepted = 0.0;
  for (std::size_t i = 0; i < table.bomb.size(); ++i) {
    if (table.bomb.densities[i] <= 0.0)
      continue;
    if (table.bin_posterior(i, cfg) >= cfg.threshold)
      accepted += table.bomb.densities[i];
  }
  r.accepted_mass = accepted * table.window.bin_width;
  r.explosion_probability = table.geometry.ratio();
  r.eta_tilde = r.accepted_mass / (r.accepted_mass + r.explosion_probability);
  r.explosions_per_detection = r.accepted_mass > 0.0
                                   ? r.explosion_probability / r.accepted_mass
                                   : std::numeric_limits<double>::infinity();
  return r;
}

inline EfficiencyResult eta_tilde(const ApparatusGeometry &g, const ClassifierConfig &cfg,
                                  const BinWindow &window, unsigned threads = 1) {
  return eta_tilde(build_likelihood_table(g, window, threads), cfg);
}

inline nlohmann::ordered_json to_json(const EfficiencyResult &r) {
  nlohmann::ordered_json j;
  j["eta_tilde"] = r.eta_tilde;
  if (std::isfinite(r.explosions_per_detection))
    j["explosions_per_detection"] = r.explosions_per_detection;
  else
    j["explosions_per_detection"] = nullptr;
  j["mode"] = to_string(r.config.mode);
  j["T"] = r.config.threshold;
  j["prior"] = r.config.prior_bomb;
  j["accepted_mass"] = r.accepted_mass;
  j["explosion_probability"] = r.explosion_probability;
  j["window"] = {r.window.lo, r.window.hi};
  j["bin_width"] = r.window.bin_width;
  j["warnings"] = r.warnings.messages();
  return j;
}

namespace detail {
inline void check_ratio(double r) {
  if (!(r > 0.0 && r < 1.0))
    throw std::domain_error("bomb-to-slit ratio must lie in (0, 1)");
}
} // namespace detail

/// Efficiency of the optimal {no-bomb, dark} measurement: (1 - r) / (2 - r).
inline double eta_optimal(double r) {
  detail::check_ratio(r);
  return (1.0 - r) / (2.0 - r);
}

struct OutcomeProbabilities {
  /// Unconditional over photons reaching the open slit; these sum to 1.
  double p_bright;
  double p_dark;
  double p_explosion;
  /// Conditional on no explosion.
  double conditional_bright;
  double conditional_dark;
};

inline OutcomeProbabilities optimal_outcome_probabilities(double r) {
  detail::check_ratio(r);
  return {(1.0 - r) * (1.0 - r), (1.0 - r) * r, r, 1.0 - r, r};
}

inline nlohmann::ordered_json optimal_json(double r) {
  const auto p = optimal_outcome_probabilities(r);
  nlohmann::ordered_json j;
  j["ratio"] = r;
  j["eta"] = eta_optimal(r);
  j["p_bright"] = p.p_bright;
  j["p_dark"] = p.p_dark;
  j["p_explosion"] = p.p_explosion;
  j["conditional_bright"] = p.conditional_bright;
  j["conditional_dark"] = p.conditional_dark;
  return j;
}

} // namespace ifm
