#pragma once
/**
 * @file screen.hpp
 * @brief Plane-wave screen amplitudes, binned screen patterns, and the dark
 *        points of the no-bomb pattern.
 *
 * Every screen density is conditioned on the photon reaching the open part
 * of the slit. With the unit amplitude convention of segment_amplitude, the
 * raw intensity |A|^2 integrates over the whole screen to twice the open
 * aperture length, so the no-bomb and bomb raw intensities are already in
 * the ratio of their survival probabilities.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "ifm/apertures.hpp"
#include "ifm/fresnel.hpp"
#include "ifm/parallel.hpp"
#include "ifm/pattern.hpp"

namespace ifm {

/// Screen amplitude for hypothesis `h`; the bomb case removes the histories
/// through [-b/2, b/2] from the full-slit amplitude.
inline std::complex<double> amplitude_at_screen(SlitHypothesis h, double x2,
                                                const ApparatusGeometry &g) {
  g.validate();
  const PropagationParams p = g.to_screen();
  const auto full = segment_amplitude(x2, -0.5 * g.w, 0.5 * g.w, p);
  if (h == SlitHypothesis::NoBomb)
    return full;
  return full - segment_amplitude(x2, -0.5 * g.b, 0.5 * g.b, p);
}

/// |A(x2)|^2 under the unit amplitude convention.
inline double screen_intensity(SlitHypothesis h, double x2, const ApparatusGeometry &g) {
  return std::norm(amplitude_at_screen(h, x2, g));
}

/// Integral of screen_intensity over the whole screen (exact, by unitarity).
inline double screen_intensity_total(SlitHypothesis h, const ApparatusGeometry &g) {
  g.validate();
  return 2.0 * (h == SlitHypothesis::NoBomb ? g.w : g.w - g.b);
}

/// Probability the photon is not absorbed, given it reached the open slit.
inline double survival_probability(SlitHypothesis h, const ApparatusGeometry &g) {
  g.validate();
  return h == SlitHypothesis::NoBomb ? 1.0 : (g.w - g.b) / g.w;
}

/// Raw intensities at the bin centers of `window`.
inline std::vector<double> sample_screen_intensity(SlitHypothesis h, const ApparatusGeometry &g,
                                                   const BinWindow &window, unsigned threads = 1) {
  g.validate();
  const std::size_t n = window.bins();
  std::vector<double> out(n);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      out[i] = screen_intensity(h, window.center(i), g);
  });
  return out;
}

namespace detail {

inline double plain_sum(const std::vector<double> &v, std::size_t begin, std::size_t end) {
  double s = 0.0;
  for (std::size_t i = begin; i < end; ++i)
    s += v[i];
  return s;
}

/// Adds a warning when the window holds less than 99% of the mass found in a
/// window three times as wide.
template <class Sampler>
void check_window_mass(SampledPattern &p, double raw_window_mass, Sampler &&sample_outer) {
  const BinWindow wide = p.window.tripled();
  const double outer = sample_outer(wide);
  const double wide_mass = raw_window_mass + outer;
  if (wide_mass > 0.0 && raw_window_mass < 0.99 * wide_mass)
    p.warnings.add("pattern: window holds " + std::to_string(raw_window_mass / wide_mass) +
                   " of the mass of a 3x window; widen the window");
}

} // namespace detail

/// Binned screen density for hypothesis `h`.
///
/// `shared_scale` is only used with Normalization::SharedPeak.
inline SampledPattern pattern(SlitHypothesis h, const ApparatusGeometry &g, const BinWindow &window,
                              Normalization norm, unsigned threads = 1,
                              double shared_scale = 1.0) {
  g.validate();
  window.validate();
  SampledPattern p;
  p.axis = Axis::Position;
  p.window = window;
  p.densities = sample_screen_intensity(h, g, window, threads);
  const double raw_mass = detail::plain_sum(p.densities, 0, p.size()) * window.bin_width;

  detail::check_window_mass(p, raw_mass, [&](const BinWindow &wide) {
    // Only the two outer thirds need evaluating.
    const BinWindow left{wide.lo, window.lo, window.bin_width};
    const BinWindow right{window.hi, wide.hi, window.bin_width};
    const auto l = sample_screen_intensity(h, g, left, threads);
    const auto r = sample_screen_intensity(h, g, right, threads);
    return (detail::plain_sum(l, 0, l.size()) + detail::plain_sum(r, 0, r.size())) *
           window.bin_width;
  });

  normalize(p, norm, survival_probability(h, g), shared_scale);
  return p;
}

/// The two figure curves: no-bomb peak-normalized, bomb in the same units.
struct PatternPair {
  SampledPattern no_bomb;
  SampledPattern bomb;
};

inline PatternPair figure_patterns(const ApparatusGeometry &g, const BinWindow &window,
                                   unsigned threads = 1) {
  PatternPair out;
  auto raw = pattern(SlitHypothesis::NoBomb, g, window, Normalization::SharedPeak, threads, 1.0);
  const double peak = raw.max_density();
  if (!(peak > 0.0))
    throw std::domain_error("figure_patterns: no-bomb pattern vanishes in the window");
  out.no_bomb = std::move(raw);
  normalize(out.no_bomb, Normalization::PeakOne);
  out.bomb = pattern(SlitHypothesis::Bomb, g, window, Normalization::SharedPeak, threads, 1.0 / peak);
  return out;
}

/// d|A|^2/dx2 for the no-bomb amplitude, from F'(u) = exp(i pi u^2 / 2).
inline double no_bomb_intensity_slope(double x2, const ApparatusGeometry &g) {
  const double scale = std::sqrt(g.k0 / (std::numbers::pi * g.l2));
  const auto a = amplitude_at_screen(SlitHypothesis::NoBomb, x2, g);
  const double u_hi = scale * (0.5 * g.w - x2);
  const double u_lo = scale * (-0.5 * g.w - x2);
  const auto da = -scale * (std::polar(1.0, detail::half_pi_x_squared_mod_2pi(u_hi)) -
                            std::polar(1.0, detail::half_pi_x_squared_mod_2pi(u_lo)));
  return 2.0 * (std::conj(a) * da).real();
}

/// Local minima of the no-bomb density inside (lo, hi) whose density is below
/// `rel_threshold` times the density at x2 = 0, sorted ascending.
///
/// Candidates come from a uniform scan; each is refined by bracketing the
/// zero of the analytic slope. `scan_step <= 0` selects a step resolving both
/// the far-field fringe spacing and the Fresnel-zone scale.
inline std::vector<double> dark_points(const ApparatusGeometry &g, double lo, double hi,
                                       double rel_threshold, double scan_step = 0.0) {
  g.validate();
  if (!(rel_threshold > 0.0 && rel_threshold <= 1.0))
    throw std::domain_error("dark_points: rel_threshold must lie in (0, 1]");
  if (!(hi > lo))
    throw std::domain_error("dark_points: empty window");
  if (scan_step <= 0.0) {
    const double lambda = g.wavelength();
    scan_step = std::min(lambda * g.l2 / g.w, std::sqrt(lambda * g.l2)) / 32.0;
  }
  const double center = screen_intensity(SlitHypothesis::NoBomb, 0.0, g);
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / scan_step)) + 1;
  std::vector<double> xs(count), ys(count);
  for (std::size_t i = 0; i < count; ++i) {
    xs[i] = lo + static_cast<double>(i) * scan_step;
    ys[i] = screen_intensity(SlitHypothesis::NoBomb, xs[i], g);
  }

  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < count; ++i) {
    if (!(ys[i] <= ys[i - 1] && ys[i] < ys[i + 1]))
      continue;
    double a = xs[i - 1];
    double b = xs[i + 1];
    auto slope = [&](double x) { return no_bomb_intensity_slope(x, g); };
    double fa = slope(a);
    double fb = slope(b);
    double x_min = xs[i];
    if (fa < 0.0 && fb > 0.0) {
      std::uintmax_t iters = 200;
      auto tol = boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 2);
      const auto r = boost::math::tools::toms748_solve(slope, a, b, fa, fb, tol, iters);
      x_min = 0.5 * (r.first + r.second);
    }
    if (screen_intensity(SlitHypothesis::NoBomb, x_min, g) < rel_threshold * center)
      out.push_back(x_min);
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace ifm
