#pragma once
/**
 * @file zeno.hpp
 * @brief The bomb as a periodic projective detector during propagation.
 *
 * Propagation distance stands in for time (l = c * dt). Over a total distance
 * L the bomb checks the region |x| < b/2 at n equally spaced points; a check
 * that does not fire zeroes the amplitude there without renormalizing, so the
 * squared norm of the running state is the joint probability of survival.
 */

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ifm/apertures.hpp"
#include "ifm/format.hpp"
#include "ifm/grid.hpp"
#include "ifm/parallel.hpp"
#include "ifm/status.hpp"

namespace ifm {

struct ZenoConfig {
  GridSpec grid{-128.0, 128.0, 4096};
  /// Only w and b (and k0) are used; the bomb occupies |x| < b/2.
  ApparatusGeometry geometry{64.0, 8.0, 32.0, k_wavenumber};
  double total_distance{32.0};
  std::size_t n_measurements{1};
  double guard_fraction{default_guard_fraction};
  double guard_tolerance{default_guard_tolerance};

  [[nodiscard]] double step_distance() const noexcept {
    return total_distance / static_cast<double>(n_measurements);
  }

  void validate() const {
    grid.validate();
    geometry.validate();
    if (!(total_distance > 0.0) || !std::isfinite(total_distance))
      throw std::domain_error("ZenoConfig: total distance must be positive");
    if (n_measurements < 1)
      throw std::domain_error("ZenoConfig: need at least one measurement");
    const double band = guard_fraction * grid.span();
    if (!(-0.5 * geometry.b > grid.x_min + band && 0.5 * geometry.b < grid.x_max - band))
      throw std::domain_error("ZenoConfig: bomb region overlaps the guard band");
  }
};

/// Desk-scale configuration: 4096 points over 256 wavelengths, a 64-wavelength
/// slit with an 8-wavelength bomb (128 samples), 32 wavelengths of flight.
inline ZenoConfig desk_scale_zeno_config(std::size_t n_measurements = 1) {
  ZenoConfig c;
  c.n_measurements = n_measurements;
  return c;
}

/// Default edge rounding for the desk-scale initial state, in wavelengths.
inline constexpr double desk_scale_edge_ramp = 2.0;

/// The bomb-hypothesis slit state on the configuration grid. Sharp edges have
/// unbounded transverse kinetic energy, for which frequent measurement does
/// not suppress absorption; a positive `edge_ramp` gives a finite-energy state.
inline GridWavefunction zeno_initial_state(const ZenoConfig &cfg,
                                           double edge_ramp = desk_scale_edge_ramp) {
  return sample_slit_state(SlitHypothesis::Bomb, cfg.geometry, cfg.grid, edge_ramp);
}

struct ZenoResult {
  /// Total probability absorbed by the bomb.
  double p_absorbed{0.0};
  /// Survival probability after each measurement (non-increasing).
  std::vector<double> survival_curve;
  /// Probability absorbed at each measurement.
  std::vector<double> absorbed_per_step;
  /// Squared norm of the final state, equal to the last survival value up to
  /// propagation round-off.
  double final_norm_squared{0.0};
  Warnings warnings;
};

inline ZenoResult zeno_run(const GridWavefunction &psi0, const ZenoConfig &cfg) {
  cfg.validate();
  if (psi0.grid.n != cfg.grid.n || psi0.grid.x_min != cfg.grid.x_min ||
      psi0.grid.x_max != cfg.grid.x_max)
    throw std::invalid_argument("zeno_run: initial state is not on the configured grid");
  const double norm0 = psi0.norm_squared();
  if (!(std::abs(norm0 - 1.0) < 1e-6))
    throw std::domain_error("zeno_run: initial state must be normalized");

  ZenoResult r;
  r.survival_curve.reserve(cfg.n_measurements);
  r.absorbed_per_step.reserve(cfg.n_measurements);

  GridWavefunction psi = psi0;
  SpectralPropagator step(cfg.grid, {cfg.geometry.k0, cfg.step_distance()});
  const double half_bomb = 0.5 * cfg.geometry.b;
  const double dx = cfg.grid.dx();
  double survival = norm0;
  double absorbed_total = 0.0;
  bool guard_warned = false;

  for (std::size_t k = 0; k < cfg.n_measurements; ++k) {
    step.apply(psi.amplitudes);
    if (!guard_warned) {
      const double gm = guard_band_mass(psi, cfg.guard_fraction);
      if (gm > cfg.guard_tolerance) {
        r.warnings.add("zeno_run: " + format_double(gm) +
                       " of the mass reached the guard band at step " + std::to_string(k + 1));
        guard_warned = true;
      }
    }
    double absorbed = 0.0;
    for (std::size_t i = 0; i < cfg.grid.n; ++i) {
      if (std::abs(cfg.grid.x(i)) < half_bomb) {
        absorbed += std::norm(psi.amplitudes[i]);
        psi.amplitudes[i] = 0.0;
      }
    }
    absorbed *= dx;
    absorbed_total += absorbed;
    survival = norm0 - absorbed_total;
    r.absorbed_per_step.push_back(absorbed);
    r.survival_curve.push_back(survival);
  }
  r.p_absorbed = absorbed_total;
  r.final_norm_squared = psi.norm_squared();
  return r;
}

struct ZenoRow {
  std::size_t n_measurements;
  double step_distance;
  double p_absorbed;
};

struct ZenoSweep {
  std::vector<ZenoRow> rows;
  Warnings warnings;
};

/// One zeno_run per entry of `n_values` (ascending), sharing psi0 and L.
inline ZenoSweep zeno_sweep(const GridWavefunction &psi0, const ZenoConfig &base,
                            const std::vector<std::size_t> &n_values, unsigned threads = 1) {
  if (n_values.empty())
    throw std::invalid_argument("zeno_sweep: no measurement counts given");
  for (std::size_t i = 1; i < n_values.size(); ++i)
    if (n_values[i] < n_values[i - 1])
      throw std::invalid_argument("zeno_sweep: measurement counts must be ascending");
  std::vector<ZenoResult> results(n_values.size());
  parallel_for(n_values.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      ZenoConfig cfg = base;
      cfg.n_measurements = n_values[i];
      results[i] = zeno_run(psi0, cfg);
    }
  });
  ZenoSweep out;
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    out.rows.push_back({n_values[i], base.total_distance / static_cast<double>(n_values[i]),
                        results[i].p_absorbed});
    out.warnings.merge(results[i].warnings);
  }
  return out;
}

inline void write_sweep_csv(std::ostream &os, const ZenoSweep &s) {
  os << "n_measurements,step_distance,p_absorbed\n";
  for (const auto &r : s.rows)
    os << r.n_measurements << ',' << format_double(r.step_distance) << ','
       << format_double(r.p_absorbed) << '\n';
}

inline void write_survival_csv(std::ostream &os, const ZenoResult &r) {
  os << "step,norm_squared\n";
  for (std::size_t k = 0; k < r.survival_curve.size(); ++k)
    os << (k + 1) << ',' << format_double(r.survival_curve[k]) << '\n';
}

} // namespace ifm
