#pragma once
/**
 * @file momentum.hpp
 * @brief Transverse-momentum wavefunctions of the slit states and the tail
 *        statistics of the bomb's momentum "kick".
 *
 * sinc(x) = sin(x)/x throughout, which makes the transforms unitary with the
 * 1/sqrt(2 pi) Fourier convention. Internally kx is in radians per wavelength;
 * pattern axes are reported in units of k0.
 */

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "ifm/apertures.hpp"
#include "ifm/parallel.hpp"
#include "ifm/pattern.hpp"
#include "ifm/screen.hpp"

namespace ifm {

inline double sinc(double x) noexcept { return x == 0.0 ? 1.0 : std::sin(x) / x; }

/// <kx|Psi> for hypothesis `h`.
inline double psi_k(SlitHypothesis h, double kx, const ApparatusGeometry &g) {
  g.validate();
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (h == SlitHypothesis::NoBomb)
    return std::sqrt(g.w / two_pi) * sinc(0.5 * kx * g.w);
  return std::sqrt(1.0 / (two_pi * (g.w - g.b))) *
         (g.w * sinc(0.5 * kx * g.w) - g.b * sinc(0.5 * kx * g.b));
}

/// <kx|Phi> for the dark state.
inline double dark_state_k(double kx, const ApparatusGeometry &g) {
  g.validate();
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double outer = std::sqrt(g.b / (g.w * (g.w - g.b)));
  const double inner = -std::sqrt((g.w - g.b) / (g.w * g.b));
  const double box_w = g.w * sinc(0.5 * kx * g.w);
  const double box_b = g.b * sinc(0.5 * kx * g.b);
  return (outer * (box_w - box_b) + inner * box_b) / std::sqrt(two_pi);
}

/// |psi_k|^2 per unit kx.
inline double momentum_density(SlitHypothesis h, double kx, const ApparatusGeometry &g) {
  const double v = psi_k(h, kx, g);
  return v * v;
}

/// Binned momentum density; `window` is in units of k0 and densities are per
/// unit of k0, so the mass is dimensionless.
inline SampledPattern momentum_pattern(SlitHypothesis h, const ApparatusGeometry &g,
                                       const BinWindow &window, Normalization norm,
                                       unsigned threads = 1, double shared_scale = 1.0) {
  g.validate();
  window.validate();
  auto sample = [&](const BinWindow &win) {
    std::vector<double> out(win.bins());
    parallel_for(out.size(), threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i)
        out[i] = g.k0 * momentum_density(h, g.k0 * win.center(i), g);
    });
    return out;
  };
  SampledPattern p;
  p.axis = Axis::Momentum;
  p.window = window;
  p.densities = sample(window);
  p.recompute_mass();
  const double raw_mass = p.mass;
  const BinWindow wide = window.tripled();
  double outer = 0.0;
  for (const auto &side : {BinWindow{wide.lo, window.lo, window.bin_width},
                           BinWindow{window.hi, wide.hi, window.bin_width}})
    for (double d : sample(side))
      outer += d * window.bin_width;
  if (raw_mass < 0.99 * (raw_mass + outer))
    p.warnings.add("momentum_pattern: window holds " +
                   std::to_string(raw_mass / (raw_mass + outer)) +
                   " of the mass of a 3x window; widen the window");
  normalize(p, norm, survival_probability(h, g), shared_scale);
  return p;
}

/// Figure layout: no-bomb peak at kx = 0 equals 1, bomb curve in the same units.
struct MomentumPatternPair {
  SampledPattern no_bomb;
  SampledPattern bomb;
};

inline MomentumPatternPair figure_momentum_patterns(const ApparatusGeometry &g,
                                                    const BinWindow &window,
                                                    unsigned threads = 1) {
  MomentumPatternPair out;
  out.no_bomb = momentum_pattern(SlitHypothesis::NoBomb, g, window, Normalization::PeakOne, threads);
  const double peak = g.k0 * momentum_density(SlitHypothesis::NoBomb, 0.0, g);
  // Shared scale maps the no-bomb density at kx = 0 to 1.
  out.bomb = momentum_pattern(SlitHypothesis::Bomb, g, window, Normalization::SharedPeak, threads,
                              1.0 / peak);
  return out;
}

namespace detail {

/// Two-sided mass of |psi_k|^2 beyond |kx| > K from the oscillation-averaged
/// 1/k^2 envelope.
inline double momentum_tail_beyond(SlitHypothesis h, double K, const ApparatusGeometry &g) {
  if (h == SlitHypothesis::NoBomb)
    return 2.0 / (std::numbers::pi * g.w * K);
  return 4.0 / (std::numbers::pi * (g.w - g.b) * K);
}

/// Moment integral int_a^b kx^power |psi_k|^2 dkx with Gauss-Legendre panels
/// one no-bomb fringe wide.
inline double momentum_moment(SlitHypothesis h, double a, double b, int power,
                              const ApparatusGeometry &g) {
  if (!(b > a))
    return 0.0;
  using Gauss = boost::math::quadrature::gauss<double, 20>;
  const double panel = 2.0 * std::numbers::pi / g.w;
  const auto panels = static_cast<std::size_t>(std::ceil((b - a) / panel));
  const double width = (b - a) / static_cast<double>(panels);
  double s = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    const double lo = a + static_cast<double>(i) * width;
    s += Gauss::integrate(
        [&](double k) { return std::pow(k, power) * momentum_density(h, k, g); }, lo, lo + width);
  }
  return s;
}

inline double default_cutoff(const ApparatusGeometry &g, double kc) {
  return std::max(kc, 0.0) + 400.0 * 2.0 * std::numbers::pi / g.b;
}

} // namespace detail

/// Total momentum-space probability: quadrature over |kx| <= K plus the
/// analytic tail beyond. Equals the slit-plane norm (1) by Parseval.
inline double momentum_mass(SlitHypothesis h, const ApparatusGeometry &g, double K = 0.0) {
  g.validate();
  if (K <= 0.0)
    K = detail::default_cutoff(g, 0.0);
  return 2.0 * detail::momentum_moment(h, 0.0, K, 0, g) + detail::momentum_tail_beyond(h, K, g);
}

struct KickStatistics {
  /// P(|kx| > kc) for each hypothesis (unit-mass distributions).
  double tail_no_bomb;
  double tail_bomb;
  /// Mean kx of each distribution.
  double mean_no_bomb;
  double mean_bomb;
};

/// Tail masses beyond +-kc. Second moments diverge for hard-edged apertures,
/// so the size of the kick is characterized by tail mass instead.
inline KickStatistics kick_statistics(const ApparatusGeometry &g, double kc) {
  g.validate();
  if (!(kc > 0.0) || !std::isfinite(kc))
    throw std::domain_error("kick_statistics: kc must be positive");
  const double K = detail::default_cutoff(g, kc);
  auto tail = [&](SlitHypothesis h) {
    return 2.0 * detail::momentum_moment(h, kc, K, 0, g) + detail::momentum_tail_beyond(h, K, g);
  };
  auto mean = [&](SlitHypothesis h) {
    // Odd integrand over a symmetric range; the 1/k^2 tails cancel.
    return detail::momentum_moment(h, 0.0, K, 1, g) + detail::momentum_moment(h, -K, 0.0, 1, g);
  };
  return {tail(SlitHypothesis::NoBomb), tail(SlitHypothesis::Bomb), mean(SlitHypothesis::NoBomb),
          mean(SlitHypothesis::Bomb)};
}

} // namespace ifm
