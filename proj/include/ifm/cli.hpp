#pragma once
/**
 * @file cli.hpp
 * @brief Command-line driver: each subcommand writes one figure or report.
 *
 * Exit status: 0 success, 2 usage or configuration error, 3 numerical warning
 * escalated by --strict, 1 unexpected failure.
 */

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ifm/inference.hpp"
#include "ifm/momentum.hpp"
#include "ifm/montecarlo.hpp"
#include "ifm/screen.hpp"
#include "ifm/zeno.hpp"

namespace ifm::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_config = 2;
inline constexpr int exit_strict = 3;

/// Raised for invalid configuration files or values.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Every tunable of every subcommand. Defaults reproduce the headline
/// single-slit/bomb figure settings.
struct RunConfig {
  ApparatusGeometry geometry{1000.0, 500.0, 6e6, k_wavenumber};
  // Sampling window for efficiency and classification.
  double window{1e6};
  double bin_width{10.0};
  // Window for figure curves; bins are centered on zero.
  double figure_window{5e4};
  double figure_bin_width{10.0};
  // Momentum figure, in units of k0.
  double momentum_window{0.01};
  double momentum_bin_width{1e-5};
  /// Kick threshold in units of k0; 0 selects one no-bomb fringe, lambda/w.
  double kick_threshold{0.0};
  ClassifierConfig classifier;
  std::uint64_t n_bomb{1197851};
  std::uint64_t n_empty{600439};
  std::uint64_t seed{42};
  double ratio{0.0}; // 0 selects b/w from the geometry
  // Zeno model.
  std::size_t zeno_grid_points{4096};
  double zeno_grid_span{256.0};
  double zeno_w{64.0};
  double zeno_b{8.0};
  double zeno_distance{32.0};
  std::vector<std::size_t> zeno_n_values{1, 2, 4, 8, 16, 32};
  double zeno_edge_ramp{desk_scale_edge_ramp};
  unsigned threads{0};
  // Outputs; "-" is standard output, empty selects the subcommand default.
  std::string out;
  std::string out_bomb;
  std::string trial_log;
  std::string survival_out;
  std::size_t survival_n{0};

  [[nodiscard]] ZenoConfig zeno_config() const {
    ZenoConfig z;
    z.grid = {-0.5 * zeno_grid_span, 0.5 * zeno_grid_span, zeno_grid_points};
    z.geometry = {zeno_w, zeno_b, zeno_distance, geometry.k0};
    z.total_distance = zeno_distance;
    return z;
  }

  void validate() const {
    geometry.validate();
    BinWindow::symmetric(window, bin_width).validate();
    BinWindow::centered(figure_window, figure_bin_width).validate();
    BinWindow::centered(momentum_window, momentum_bin_width).validate();
    if (kick_threshold < 0.0)
      throw std::domain_error("kick threshold must be non-negative");
    if (!(classifier.prior_bomb >= 0.0 && classifier.prior_bomb <= 1.0))
      throw std::domain_error("prior must lie in [0, 1]");
    if (!(classifier.threshold > 0.5 && classifier.threshold <= 1.0))
      throw std::domain_error("threshold must lie in (0.5, 1]");
    if (ratio != 0.0 && !(ratio > 0.0 && ratio < 1.0))
      throw std::domain_error("ratio must lie in (0, 1)");
    zeno_config().validate();
    if (zeno_n_values.empty())
      throw std::domain_error("zeno n_values must not be empty");
    if (zeno_edge_ramp < 0.0)
      throw std::domain_error("zeno edge_ramp must be non-negative");
  }
};

namespace detail {

using json = nlohmann::json;

inline void expect_object(const json &j, const std::string &where,
                          std::initializer_list<const char *> keys) {
  if (!j.is_object())
    throw ConfigError(where + ": expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto &item : j.items())
    if (!allowed.count(item.key()))
      throw ConfigError(where + ": unknown key '" + item.key() + "'");
}

template <class T>
void read_key(const json &j, const char *key, T &dst, const std::string &where) {
  if (!j.contains(key))
    return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception &e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

} // namespace detail

/// Applies a JSON configuration document on top of `cfg`. Unknown keys are
/// rejected at every level.
inline void apply_config_json(const nlohmann::json &j, RunConfig &cfg) {
  using detail::expect_object;
  using detail::read_key;
  expect_object(j, "config",
                {"geometry", "sampling", "figure", "momentum", "classifier", "experiment",
                 "optimal", "zeno", "threads", "output"});
  if (j.contains("geometry")) {
    const auto &g = j["geometry"];
    expect_object(g, "geometry", {"w", "b", "l2"});
    read_key(g, "w", cfg.geometry.w, "geometry");
    read_key(g, "b", cfg.geometry.b, "geometry");
    read_key(g, "l2", cfg.geometry.l2, "geometry");
  }
  if (j.contains("sampling")) {
    const auto &s = j["sampling"];
    expect_object(s, "sampling", {"window", "bin_width"});
    read_key(s, "window", cfg.window, "sampling");
    read_key(s, "bin_width", cfg.bin_width, "sampling");
  }
  if (j.contains("figure")) {
    const auto &s = j["figure"];
    expect_object(s, "figure", {"window", "bin_width"});
    read_key(s, "window", cfg.figure_window, "figure");
    read_key(s, "bin_width", cfg.figure_bin_width, "figure");
  }
  if (j.contains("momentum")) {
    const auto &s = j["momentum"];
    expect_object(s, "momentum", {"window", "bin_width", "kc"});
    read_key(s, "window", cfg.momentum_window, "momentum");
    read_key(s, "bin_width", cfg.momentum_bin_width, "momentum");
    read_key(s, "kc", cfg.kick_threshold, "momentum");
  }
  if (j.contains("classifier")) {
    const auto &c = j["classifier"];
    expect_object(c, "classifier", {"threshold", "prior", "mode"});
    read_key(c, "threshold", cfg.classifier.threshold, "classifier");
    read_key(c, "prior", cfg.classifier.prior_bomb, "classifier");
    if (c.contains("mode")) {
      std::string mode;
      read_key(c, "mode", mode, "classifier");
      try {
        cfg.classifier.mode = parse_likelihood_mode(mode);
      } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("classifier.mode: ") + e.what());
      }
    }
  }
  if (j.contains("experiment")) {
    const auto &e = j["experiment"];
    expect_object(e, "experiment", {"n_bomb", "n_empty", "seed"});
    read_key(e, "n_bomb", cfg.n_bomb, "experiment");
    read_key(e, "n_empty", cfg.n_empty, "experiment");
    read_key(e, "seed", cfg.seed, "experiment");
  }
  if (j.contains("optimal")) {
    const auto &o = j["optimal"];
    expect_object(o, "optimal", {"ratio"});
    read_key(o, "ratio", cfg.ratio, "optimal");
  }
  if (j.contains("zeno")) {
    const auto &z = j["zeno"];
    expect_object(z, "zeno",
                  {"grid_points", "grid_span", "w", "b", "distance", "n_values", "edge_ramp"});
    read_key(z, "grid_points", cfg.zeno_grid_points, "zeno");
    read_key(z, "grid_span", cfg.zeno_grid_span, "zeno");
    read_key(z, "w", cfg.zeno_w, "zeno");
    read_key(z, "b", cfg.zeno_b, "zeno");
    read_key(z, "distance", cfg.zeno_distance, "zeno");
    read_key(z, "n_values", cfg.zeno_n_values, "zeno");
    read_key(z, "edge_ramp", cfg.zeno_edge_ramp, "zeno");
  }
  detail::read_key(j, "threads", cfg.threads, "config");
  if (j.contains("output")) {
    const auto &o = j["output"];
    expect_object(o, "output", {"out", "out_bomb", "trial_log", "survival_out"});
    read_key(o, "out", cfg.out, "output");
    read_key(o, "out_bomb", cfg.out_bomb, "output");
    read_key(o, "trial_log", cfg.trial_log, "output");
    read_key(o, "survival_out", cfg.survival_out, "output");
  }
}

inline void load_config_file(const std::string &path, RunConfig &cfg) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  apply_config_json(j, cfg);
}

namespace detail {

/// Output sink: a file, or the caller's stream for "-".
class Sink {
public:
  Sink(const std::string &path, std::ostream &stdout_stream) {
    if (path == "-") {
      os_ = &stdout_stream;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_)
        throw std::runtime_error("cannot open output file '" + path + "'");
      os_ = file_.get();
    }
  }
  std::ostream &stream() { return *os_; }

private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream *os_{nullptr};
};

inline std::string bomb_path_for(const std::string &out) {
  if (out == "-")
    return "-";
  std::filesystem::path p(out);
  const auto stem = p.stem().string();
  const auto ext = p.extension().string();
  return (p.parent_path() / (stem + "_bomb" + (ext.empty() ? ".csv" : ext))).string();
}

inline void write_posterior_csv(std::ostream &os, const LikelihoodTable &t,
                                const ClassifierConfig &cfg) {
  os << "axis,bin_center,posterior\n";
  for (std::size_t i = 0; i < t.window.bins(); ++i) {
    os << "position," << format_double(t.window.center(i)) << ',';
    try {
      os << format_double(t.bin_posterior(i, cfg));
    } catch (const UndefinedPosterior &) {
      // Neither hypothesis reaches this bin.
    }
    os << '\n';
  }
}

} // namespace detail

/// Registered command-line flags for one invocation.
struct Flags {
  std::string config_path;
  bool strict{false};
};

/// Runs the CLI. `out` receives "-" outputs, `err` diagnostics.
inline int run(int argc, const char *const *argv, std::ostream &out = std::cout,
               std::ostream &err = std::cerr) {
  CLI::App app{"Diffraction-based interaction-free measurement simulator", "ifm"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags flags;
  RunConfig cli; // flag values; applied on top of the config file when given
  std::vector<std::function<void(RunConfig &)>> overrides;

  app.add_option("--config", flags.config_path, "JSON configuration file");
  app.add_flag("--strict", flags.strict, "Exit with status 3 if any numerical warning is raised");
  auto *threads_opt = app.add_option("--threads", cli.threads, "Worker threads (0 = hardware)");

  auto track = [&](CLI::Option *opt, auto setter) {
    overrides.push_back([opt, setter, &cli](RunConfig &c) {
      if (opt->count() > 0)
        setter(c, cli);
    });
  };
  track(threads_opt, [](RunConfig &c, const RunConfig &f) { c.threads = f.threads; });

  auto add_geometry = [&](CLI::App *sub) {
    track(sub->add_option("--w", cli.geometry.w, "Slit width (wavelengths)"),
          [](RunConfig &c, const RunConfig &f) { c.geometry.w = f.geometry.w; });
    track(sub->add_option("--b", cli.geometry.b, "Bomb length (wavelengths)"),
          [](RunConfig &c, const RunConfig &f) { c.geometry.b = f.geometry.b; });
    track(sub->add_option("--l2", cli.geometry.l2, "Slit-to-screen distance (wavelengths)"),
          [](RunConfig &c, const RunConfig &f) { c.geometry.l2 = f.geometry.l2; });
  };
  auto add_sampling = [&](CLI::App *sub) {
    track(sub->add_option("--window", cli.window, "Screen half-width (wavelengths)"),
          [](RunConfig &c, const RunConfig &f) { c.window = f.window; });
    track(sub->add_option("--bin-width", cli.bin_width, "Bin width (wavelengths)"),
          [](RunConfig &c, const RunConfig &f) { c.bin_width = f.bin_width; });
  };
  auto add_figure_window = [&](CLI::App *sub) {
    track(sub->add_option("--window", cli.figure_window, "Screen half-width (wavelengths)"),
          [](RunConfig &c, const RunConfig &f) { c.figure_window = f.figure_window; });
    track(sub->add_option("--bin-width", cli.figure_bin_width, "Bin width (wavelengths)"),
          [](RunConfig &c, const RunConfig &f) { c.figure_bin_width = f.figure_bin_width; });
  };
  auto add_classifier = [&](CLI::App *sub, bool with_threshold) {
    if (with_threshold)
      track(sub->add_option("-T,--threshold", cli.classifier.threshold, "Posterior threshold T"),
            [](RunConfig &c, const RunConfig &f) { c.classifier.threshold = f.classifier.threshold; });
    track(sub->add_option("--prior", cli.classifier.prior_bomb, "Prior P(Bomb)"),
          [](RunConfig &c, const RunConfig &f) { c.classifier.prior_bomb = f.classifier.prior_bomb; });
    static std::string mode_text;
    auto *mode = sub->add_option("--mode", mode_text, "Likelihood mode")
                     ->check(CLI::IsMember({"flux_aware", "unit_normalized"}));
    overrides.push_back([mode](RunConfig &c) {
      if (mode->count() > 0)
        c.classifier.mode = parse_likelihood_mode(mode->as<std::string>());
    });
  };
  auto add_out = [&](CLI::App *sub, const char *help) {
    track(sub->add_option("--out,-o", cli.out, help),
          [](RunConfig &c, const RunConfig &f) { c.out = f.out; });
  };

  auto *pattern_cmd = app.add_subcommand("pattern", "Screen intensities for both hypotheses");
  add_geometry(pattern_cmd);
  add_figure_window(pattern_cmd);
  add_out(pattern_cmd, "No-bomb CSV (default screen_pattern.csv)");
  track(pattern_cmd->add_option("--out-bomb", cli.out_bomb, "Bomb CSV (default <out>_bomb.csv)"),
        [](RunConfig &c, const RunConfig &f) { c.out_bomb = f.out_bomb; });

  auto *posterior_cmd = app.add_subcommand("posterior", "Posterior P(Bomb|x2) across the screen");
  add_geometry(posterior_cmd);
  add_figure_window(posterior_cmd);
  add_classifier(posterior_cmd, false);
  add_out(posterior_cmd, "CSV output (default posterior.csv)");

  auto *efficiency_cmd = app.add_subcommand("efficiency", "Threshold IFM efficiency as JSON");
  add_geometry(efficiency_cmd);
  add_sampling(efficiency_cmd);
  add_classifier(efficiency_cmd, true);
  add_out(efficiency_cmd, "JSON output (default stdout)");

  auto *optimal_cmd = app.add_subcommand("optimal", "Optimal-basis efficiency as JSON");
  track(optimal_cmd->add_option("--ratio", cli.ratio, "Bomb-to-slit ratio b/w"),
        [](RunConfig &c, const RunConfig &f) { c.ratio = f.ratio; });
  add_out(optimal_cmd, "JSON output (default stdout)");

  auto *momentum_cmd = app.add_subcommand("momentum", "Transverse momentum distributions");
  add_geometry(momentum_cmd);
  track(momentum_cmd->add_option("--window", cli.momentum_window, "Half-width in units of k0"),
        [](RunConfig &c, const RunConfig &f) { c.momentum_window = f.momentum_window; });
  track(momentum_cmd->add_option("--bin-width", cli.momentum_bin_width, "Bin width in units of k0"),
        [](RunConfig &c, const RunConfig &f) { c.momentum_bin_width = f.momentum_bin_width; });
  track(momentum_cmd->add_option("--kc", cli.kick_threshold, "Kick threshold in units of k0"),
        [](RunConfig &c, const RunConfig &f) { c.kick_threshold = f.kick_threshold; });
  add_out(momentum_cmd, "No-bomb CSV (default momentum_pattern.csv)");
  track(momentum_cmd->add_option("--out-bomb", cli.out_bomb, "Bomb CSV (default <out>_bomb.csv)"),
        [](RunConfig &c, const RunConfig &f) { c.out_bomb = f.out_bomb; });
  std::string stats_out;
  momentum_cmd->add_option("--stats-out", stats_out, "Kick statistics JSON");

  auto *classify_cmd = app.add_subcommand("classify", "Monte Carlo classification experiment");
  add_geometry(classify_cmd);
  add_sampling(classify_cmd);
  add_classifier(classify_cmd, true);
  track(classify_cmd->add_option("--n-bomb", cli.n_bomb, "Slits containing the bomb"),
        [](RunConfig &c, const RunConfig &f) { c.n_bomb = f.n_bomb; });
  track(classify_cmd->add_option("--n-empty", cli.n_empty, "Empty slits"),
        [](RunConfig &c, const RunConfig &f) { c.n_empty = f.n_empty; });
  track(classify_cmd->add_option("--seed", cli.seed, "Random seed"),
        [](RunConfig &c, const RunConfig &f) { c.seed = f.seed; });
  add_out(classify_cmd, "Report JSON (default stdout)");
  track(classify_cmd->add_option("--trial-log", cli.trial_log, "Per-trial CSV log"),
        [](RunConfig &c, const RunConfig &f) { c.trial_log = f.trial_log; });

  auto *zeno_cmd = app.add_subcommand("zeno", "Absorption versus measurement frequency");
  track(zeno_cmd->add_option("--grid-points", cli.zeno_grid_points, "Grid samples"),
        [](RunConfig &c, const RunConfig &f) { c.zeno_grid_points = f.zeno_grid_points; });
  track(zeno_cmd->add_option("--grid-span", cli.zeno_grid_span, "Grid span (wavelengths)"),
        [](RunConfig &c, const RunConfig &f) { c.zeno_grid_span = f.zeno_grid_span; });
  track(zeno_cmd->add_option("--w", cli.zeno_w, "Slit width (wavelengths)"),
        [](RunConfig &c, const RunConfig &f) { c.zeno_w = f.zeno_w; });
  track(zeno_cmd->add_option("--b", cli.zeno_b, "Bomb length (wavelengths)"),
        [](RunConfig &c, const RunConfig &f) { c.zeno_b = f.zeno_b; });
  track(zeno_cmd->add_option("--distance", cli.zeno_distance, "Total distance L (wavelengths)"),
        [](RunConfig &c, const RunConfig &f) { c.zeno_distance = f.zeno_distance; });
  track(zeno_cmd->add_option("--n-values", cli.zeno_n_values, "Measurement counts, ascending")
            ->delimiter(','),
        [](RunConfig &c, const RunConfig &f) { c.zeno_n_values = f.zeno_n_values; });
  track(zeno_cmd->add_option("--edge-ramp", cli.zeno_edge_ramp, "Edge rounding (wavelengths)"),
        [](RunConfig &c, const RunConfig &f) { c.zeno_edge_ramp = f.zeno_edge_ramp; });
  add_out(zeno_cmd, "Sweep CSV (default stdout)");
  track(zeno_cmd->add_option("--survival-out", cli.survival_out, "Survival curve CSV"),
        [](RunConfig &c, const RunConfig &f) { c.survival_out = f.survival_out; });
  track(zeno_cmd->add_option("--survival-n", cli.survival_n,
                             "Measurement count for the survival curve (default: largest)"),
        [](RunConfig &c, const RunConfig &f) { c.survival_n = f.survival_n; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n" << app.help();
    return exit_config;
  }

  RunConfig cfg;
  Warnings warnings;
  try {
    if (!flags.config_path.empty())
      load_config_file(flags.config_path, cfg);
    for (auto &apply : overrides)
      apply(cfg);
    cfg.validate();
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  }

  auto output_path = [&](const char *fallback) { return cfg.out.empty() ? std::string(fallback) : cfg.out; };

  try {
    const ApparatusGeometry &g = cfg.geometry;
    if (pattern_cmd->parsed()) {
      warnings.merge(g.diagnostics());
      const auto window = BinWindow::centered(cfg.figure_window, cfg.figure_bin_width);
      const auto pair = figure_patterns(g, window, cfg.threads);
      const std::string path = output_path("screen_pattern.csv");
      detail::Sink a(path, out);
      write_csv(a.stream(), pair.no_bomb);
      detail::Sink b(cfg.out_bomb.empty() ? detail::bomb_path_for(path) : cfg.out_bomb, out);
      write_csv(b.stream(), pair.bomb);
      warnings.merge(pair.no_bomb.warnings);
      warnings.merge(pair.bomb.warnings);
    } else if (posterior_cmd->parsed()) {
      warnings.merge(g.diagnostics());
      const auto window = BinWindow::centered(cfg.figure_window, cfg.figure_bin_width);
      const auto table = build_likelihood_table(g, window, cfg.threads);
      detail::Sink s(output_path("posterior.csv"), out);
      detail::write_posterior_csv(s.stream(), table, cfg.classifier);
      warnings.merge(table.warnings);
    } else if (efficiency_cmd->parsed()) {
      warnings.merge(g.diagnostics());
      const auto r =
          eta_tilde(g, cfg.classifier, BinWindow::symmetric(cfg.window, cfg.bin_width), cfg.threads);
      detail::Sink s(output_path("-"), out);
      s.stream() << to_json(r).dump(2) << '\n';
      warnings.merge(r.warnings);
    } else if (optimal_cmd->parsed()) {
      const double r = cfg.ratio != 0.0 ? cfg.ratio : g.ratio();
      detail::Sink s(output_path("-"), out);
      s.stream() << optimal_json(r).dump(2) << '\n';
    } else if (momentum_cmd->parsed()) {
      const auto window = BinWindow::centered(cfg.momentum_window, cfg.momentum_bin_width);
      const auto pair = figure_momentum_patterns(g, window, cfg.threads);
      const std::string path = output_path("momentum_pattern.csv");
      detail::Sink a(path, out);
      write_csv(a.stream(), pair.no_bomb);
      detail::Sink b(cfg.out_bomb.empty() ? detail::bomb_path_for(path) : cfg.out_bomb, out);
      write_csv(b.stream(), pair.bomb);
      warnings.merge(pair.no_bomb.warnings);
      warnings.merge(pair.bomb.warnings);
      if (!stats_out.empty()) {
        const double kc_units = cfg.kick_threshold > 0.0 ? cfg.kick_threshold : g.wavelength() / g.w;
        const auto k = kick_statistics(g, kc_units * g.k0);
        nlohmann::ordered_json j;
        j["kc"] = kc_units;
        j["tail_no_bomb"] = k.tail_no_bomb;
        j["tail_bomb"] = k.tail_bomb;
        j["mean_no_bomb"] = k.mean_no_bomb;
        j["mean_bomb"] = k.mean_bomb;
        detail::Sink s(stats_out, out);
        s.stream() << j.dump(2) << '\n';
      }
    } else if (classify_cmd->parsed()) {
      warnings.merge(g.diagnostics());
      ExperimentConfig ec;
      ec.n_bomb = cfg.n_bomb;
      ec.n_empty = cfg.n_empty;
      ec.seed = cfg.seed;
      ec.classifier = cfg.classifier;
      ec.window = BinWindow::symmetric(cfg.window, cfg.bin_width);
      std::vector<TrialRecord> log;
      const auto report =
          run_experiment(g, ec, cfg.threads, cfg.trial_log.empty() ? nullptr : &log);
      detail::Sink s(output_path("-"), out);
      s.stream() << to_json(report).dump(2) << '\n';
      if (!cfg.trial_log.empty()) {
        detail::Sink t(cfg.trial_log, out);
        write_trial_log(t.stream(), log);
      }
      warnings.merge(report.warnings);
    } else if (zeno_cmd->parsed()) {
      const ZenoConfig base = cfg.zeno_config();
      const auto psi0 = zeno_initial_state(base, cfg.zeno_edge_ramp);
      const auto sweep = zeno_sweep(psi0, base, cfg.zeno_n_values, cfg.threads);
      detail::Sink s(output_path("-"), out);
      write_sweep_csv(s.stream(), sweep);
      warnings.merge(sweep.warnings);
      if (!cfg.survival_out.empty()) {
        ZenoConfig one = base;
        one.n_measurements = cfg.survival_n != 0 ? cfg.survival_n : cfg.zeno_n_values.back();
        const auto run_result = zeno_run(psi0, one);
        detail::Sink t(cfg.survival_out, out);
        write_survival_csv(t.stream(), run_result);
      }
    }
  } catch (const std::domain_error &e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::invalid_argument &e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return exit_failure;
  }

  for (const auto &w : warnings.messages())
    err << "warning: " << w << '\n';
  if (flags.strict && !warnings.empty())
    return exit_strict;
  return exit_ok;
}

} // namespace ifm::cli
