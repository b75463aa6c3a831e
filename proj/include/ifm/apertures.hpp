#pragma once
/**
 * @file apertures.hpp
 * @brief Slit-plane states for the two hypotheses, the dark state, and their
 *        overlaps.
 *
 * The slit occupies |x| <= w/2. When present, the bomb occupies |x| < b/2 and
 * the transmitted state vanishes there. States are normalized conditional on
 * the photon passing the open part of the slit.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ifm/fresnel.hpp"
#include "ifm/grid.hpp"
#include "ifm/status.hpp"

namespace ifm {

/// Slit width, bomb length, slit-to-screen distance and wavenumber (wavelength units).
struct ApparatusGeometry {
  double w{1000.0};
  double b{500.0};
  double l2{6e6};
  double k0{k_wavenumber};

  void validate() const {
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::domain_error("ApparatusGeometry: slit width must be positive");
    if (!(b > 0.0) || !(b < w))
      throw std::domain_error("ApparatusGeometry: bomb length must satisfy 0 < b < w");
    if (!(l2 > 0.0) || !std::isfinite(l2))
      throw std::domain_error("ApparatusGeometry: screen distance must be positive");
    if (!(k0 > 0.0) || !std::isfinite(k0))
      throw std::domain_error("ApparatusGeometry: wavenumber must be positive");
  }

  /// Bomb-to-slit ratio b/w.
  [[nodiscard]] double ratio() const noexcept { return b / w; }
  [[nodiscard]] double wavelength() const noexcept { return 2.0 * std::numbers::pi / k0; }
  /// w^2 / (lambda * l2).
  [[nodiscard]] double fresnel_number() const noexcept { return w * w / (wavelength() * l2); }
  [[nodiscard]] PropagationParams to_screen() const { return {k0, l2}; }

  /// Paraxial sanity diagnostic; never fatal.
  [[nodiscard]] Warnings diagnostics() const {
    Warnings out;
    if (fresnel_number() > 1.0)
      out.add("geometry: Fresnel number w^2/(lambda l2) = " + std::to_string(fresnel_number()) +
              " exceeds 1; the screen is in the near field");
    return out;
  }
};

enum class SlitHypothesis { NoBomb, Bomb };

inline const char *to_string(SlitHypothesis h) noexcept {
  return h == SlitHypothesis::Bomb ? "bomb" : "no_bomb";
}

/// Normalized slit-plane wavefunction for hypothesis `h`.
inline double slit_wavefunction(SlitHypothesis h, double x1, const ApparatusGeometry &g) {
  g.validate();
  const double ax = std::abs(x1);
  if (ax > 0.5 * g.w)
    return 0.0;
  if (h == SlitHypothesis::NoBomb)
    return std::sqrt(1.0 / g.w);
  return ax < 0.5 * g.b ? 0.0 : std::sqrt(1.0 / (g.w - g.b));
}

/// The state orthogonal to the no-bomb state inside the span of both hypotheses.
inline double dark_state(double x1, const ApparatusGeometry &g) {
  g.validate();
  const double ax = std::abs(x1);
  if (ax > 0.5 * g.w)
    return 0.0;
  if (ax < 0.5 * g.b)
    return -std::sqrt((g.w - g.b) / (g.w * g.b));
  return std::sqrt(g.b / (g.w * (g.w - g.b)));
}

/// A real, compactly supported, piecewise-constant function of x1.
class PiecewiseState {
public:
  struct Piece {
    double lo;
    double hi;
    double value;
  };

  PiecewiseState() = default;
  explicit PiecewiseState(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
    std::sort(pieces_.begin(), pieces_.end(),
              [](const Piece &a, const Piece &b) { return a.lo < b.lo; });
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const auto &p = pieces_[i];
      if (!std::isfinite(p.lo) || !std::isfinite(p.hi) || !std::isfinite(p.value))
        throw std::domain_error("PiecewiseState: pieces must be finite (non-normalizable state)");
      if (!(p.lo < p.hi))
        throw std::domain_error("PiecewiseState: empty or reversed piece");
      if (i > 0 && p.lo < pieces_[i - 1].hi)
        throw std::domain_error("PiecewiseState: overlapping pieces");
    }
  }

  [[nodiscard]] const std::vector<Piece> &pieces() const noexcept { return pieces_; }

  /// Value at x using half-open pieces [lo, hi); boundary points are measure zero.
  [[nodiscard]] double operator()(double x) const noexcept {
    for (const auto &p : pieces_)
      if (x >= p.lo && x < p.hi)
        return p.value;
    return 0.0;
  }

  [[nodiscard]] double norm_squared() const noexcept {
    double s = 0.0;
    for (const auto &p : pieces_)
      s += p.value * p.value * (p.hi - p.lo);
    return s;
  }

  /// Linear combination a*this + b*other, exact on the merged breakpoints.
  [[nodiscard]] PiecewiseState combine(double a, const PiecewiseState &other, double b) const {
    std::vector<double> cuts;
    for (const auto *s : {this, &other})
      for (const auto &p : s->pieces_) {
        cuts.push_back(p.lo);
        cuts.push_back(p.hi);
      }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<Piece> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
      const double v = a * (*this)(mid) + b * other(mid);
      if (v != 0.0)
        out.push_back({cuts[i], cuts[i + 1], v});
    }
    return PiecewiseState(std::move(out));
  }

private:
  std::vector<Piece> pieces_;
};

/// Piecewise representation of the hypothesis states.
inline PiecewiseState slit_state(SlitHypothesis h, const ApparatusGeometry &g) {
  g.validate();
  const double hw = 0.5 * g.w;
  const double hb = 0.5 * g.b;
  if (h == SlitHypothesis::NoBomb)
    return PiecewiseState({{-hw, hw, std::sqrt(1.0 / g.w)}});
  const double v = std::sqrt(1.0 / (g.w - g.b));
  return PiecewiseState({{-hw, -hb, v}, {hb, hw, v}});
}

inline PiecewiseState dark_piecewise_state(const ApparatusGeometry &g) {
  g.validate();
  const double hw = 0.5 * g.w;
  const double hb = 0.5 * g.b;
  const double outer = std::sqrt(g.b / (g.w * (g.w - g.b)));
  return PiecewiseState({{-hw, -hb, outer},
                         {-hb, hb, -std::sqrt((g.w - g.b) / (g.w * g.b))},
                         {hb, hw, outer}});
}

/// Closed-form <f|g> for piecewise-constant states.
inline double overlap(const PiecewiseState &f, const PiecewiseState &g) {
  double s = 0.0;
  for (const auto &a : f.pieces())
    for (const auto &b : g.pieces()) {
      const double lo = std::max(a.lo, b.lo);
      const double hi = std::min(a.hi, b.hi);
      if (hi > lo)
        s += a.value * b.value * (hi - lo);
    }
  return s;
}

using SlitFunction = std::function<std::complex<double>(double)>;

/// <f|g> = int conj(f) g dx over [lo, hi] by adaptive Gauss-Kronrod quadrature,
/// for states that are not piecewise constant. Both must vanish outside [lo, hi].
inline std::complex<double> overlap(const SlitFunction &f, const SlitFunction &g, double lo,
                                    double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw std::domain_error("overlap: support must be a finite interval (non-normalizable state)");
  using boost::math::quadrature::gauss_kronrod;
  auto re = [&](double x) { return (std::conj(f(x)) * g(x)).real(); };
  auto im = [&](double x) { return (std::conj(f(x)) * g(x)).imag(); };
  auto nf = [&](double x) { return std::norm(f(x)); };
  auto ng = [&](double x) { return std::norm(g(x)); };
  const double nrm_f = gauss_kronrod<double, 31>::integrate(nf, lo, hi, 15, 1e-12);
  const double nrm_g = gauss_kronrod<double, 31>::integrate(ng, lo, hi, 15, 1e-12);
  if (!std::isfinite(nrm_f) || !std::isfinite(nrm_g))
    throw std::domain_error("overlap: state is not square integrable");
  return {gauss_kronrod<double, 31>::integrate(re, lo, hi, 15, 1e-12),
          gauss_kronrod<double, 31>::integrate(im, lo, hi, 15, 1e-12)};
}

/// Coefficients of the bomb state in the {no-bomb, dark} basis.
struct Decomposition {
  double bright;
  double dark;
};

inline Decomposition decomposition_coefficients(const ApparatusGeometry &g) {
  g.validate();
  return {std::sqrt((g.w - g.b) / g.w), std::sqrt(g.b / g.w)};
}

/// Samples a hypothesis state on a grid.
///
/// With `edge_ramp == 0` the sharp state is sampled with half weight at grid
/// points that land exactly on an aperture edge. A positive `edge_ramp` rounds
/// every edge of the open region with a raised-cosine ramp of that width,
/// placed inside the open region. The result is normalized on the grid.
inline GridWavefunction sample_slit_state(SlitHypothesis h, const ApparatusGeometry &g,
                                          const GridSpec &grid, double edge_ramp = 0.0) {
  g.validate();
  grid.validate();
  if (edge_ramp < 0.0 || !std::isfinite(edge_ramp))
    throw std::domain_error("sample_slit_state: edge ramp must be non-negative");
  const double hw = 0.5 * g.w;
  const double hb = h == SlitHypothesis::Bomb ? 0.5 * g.b : 0.0;
  const bool has_inner_edge = h == SlitHypothesis::Bomb;
  std::vector<cplx> amp(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double ax = std::abs(grid.x(i));
    double v = 0.0;
    if (edge_ramp == 0.0) {
      const double tol = 1e-9 * grid.dx();
      auto edge_weight = [&](double edge) { return std::abs(ax - edge) <= tol; };
      if (edge_weight(hw) || (has_inner_edge && edge_weight(hb)))
        v = 0.5;
      else if (ax < hw && ax > hb)
        v = 1.0;
      else if (!has_inner_edge && ax < hw)
        v = 1.0;
    } else if (ax < hw && (ax > hb || !has_inner_edge)) {
      double d = hw - ax;
      if (has_inner_edge)
        d = std::min(d, ax - hb);
      v = d >= edge_ramp ? 1.0 : 0.5 - 0.5 * std::cos(std::numbers::pi * d / edge_ramp);
    }
    amp[i] = v;
  }
  GridWavefunction psi(grid, std::move(amp));
  const double n2 = psi.norm_squared();
  if (!(n2 > 0.0))
    throw std::domain_error("sample_slit_state: aperture not resolved by the grid");
  const double scale = 1.0 / std::sqrt(n2);
  for (auto &a : psi.amplitudes)
    a *= scale;
  return psi;
}

} // namespace ifm
