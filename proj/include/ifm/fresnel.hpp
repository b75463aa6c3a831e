#pragma once
/**
 * @file fresnel.hpp
 * @brief Fresnel integrals and plane-wave segment amplitudes for paraxial
 *        propagation from a slit plane to a screen.
 *
 * All lengths are measured in wavelengths, so the longitudinal wavenumber
 * is k0 = 2*pi.
 */

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace ifm {

/// Longitudinal wavenumber in wavelength units.
inline constexpr double k_wavenumber = 2.0 * std::numbers::pi;

/// Free-space paraxial propagation over a distance `distance` (wavelengths).
struct PropagationParams {
  double k0{k_wavenumber};
  double distance{1.0};

  void validate() const {
    if (!(k0 > 0.0) || !std::isfinite(k0))
      throw std::domain_error("PropagationParams: k0 must be positive and finite");
    if (!(distance > 0.0) || !std::isfinite(distance))
      throw std::domain_error("PropagationParams: distance must be positive and finite");
  }
};

/// C(x) and S(x).
struct FresnelPair {
  double c{0.0};
  double s{0.0};
};

namespace detail {

/// Returns (pi/2) * x^2 reduced modulo 2*pi without losing the low bits of x^2.
inline double half_pi_x_squared_mod_2pi(double x) {
  const double hi = x * x;
  const double lo = std::fma(x, x, -hi);
  // x^2 = hi + lo exactly; the phase only depends on x^2 modulo 4.
  const double reduced = std::fmod(hi, 4.0) + lo;
  return 0.5 * std::numbers::pi * reduced;
}

// Power series, used for |x| <= 1.5 where it converges without cancellation.
inline FresnelPair fresnel_series(double ax) {
  const double fact = 0.5 * std::numbers::pi * ax * ax;
  double term = ax;
  double sum_c = ax;
  double sum_s = 0.0;
  double sign_c = 1.0;
  double sign_s = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= fact / k;
    const double contribution = term / (2 * k + 1);
    if (k % 2 == 1) {
      sum_s += sign_s * contribution;
      sign_s = -sign_s;
    } else {
      sign_c = -sign_c;
      sum_c += sign_c * contribution;
    }
    if (contribution < 1e-17 * std::abs(k % 2 == 1 ? sum_s : sum_c))
      break;
  }
  return {sum_c, sum_s};
}

// Continued fraction for the complementary error function of a complex
// argument (modified Lentz), valid for |x| > 1.5.
inline FresnelPair fresnel_continued_fraction(double ax) {
  using cplx = std::complex<double>;
  constexpr double tiny = 1e-300;
  const double pix2 = std::numbers::pi * ax * ax;
  cplx b{1.0, -pix2};
  cplx cc{1.0 / tiny, 0.0};
  cplx d = 1.0 / b;
  cplx h = d;
  int n = -1;
  for (int k = 2; k < 1000; ++k) {
    n += 2;
    const double a = -static_cast<double>(n) * (n + 1);
    b += 4.0;
    d = 1.0 / (a * d + b);
    cc = b + a / cc;
    const cplx del = cc * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 1e-16)
      break;
  }
  h *= cplx{ax, -ax};
  const double phase = half_pi_x_squared_mod_2pi(ax);
  const cplx cs = cplx{0.5, 0.5} * (1.0 - std::polar(1.0, phase) * h);
  return {cs.real(), cs.imag()};
}

} // namespace detail

/// Fresnel integrals C(x) = int_0^x cos(pi t^2/2) dt, S(x) = int_0^x sin(pi t^2/2) dt.
/// Throws std::domain_error for non-finite x.
inline FresnelPair fresnel_cs(double x) {
  if (!std::isfinite(x))
    throw std::domain_error("fresnel_cs: argument must be finite");
  const double ax = std::abs(x);
  FresnelPair r;
  if (ax < 1e-150)
    r = {ax, 0.0};
  else if (ax <= 1.5)
    r = detail::fresnel_series(ax);
  else
    r = detail::fresnel_continued_fraction(ax);
  if (x < 0.0) {
    r.c = -r.c;
    r.s = -r.s;
  }
  return r;
}

/// Screen amplitude at `x2` contributed by an open segment [x_lo, x_hi] of the
/// slit plane under plane-wave illumination. The overall constant is 1; only
/// relative amplitudes are meaningful.
inline std::complex<double> segment_amplitude(double x2, double x_lo, double x_hi,
                                              const PropagationParams &params) {
  if (!(x_lo < x_hi))
    throw std::domain_error("segment_amplitude: requires x_lo < x_hi");
  params.validate();
  const double scale = std::sqrt(params.k0 / (std::numbers::pi * params.distance));
  const FresnelPair hi = fresnel_cs(scale * (x_hi - x2));
  const FresnelPair lo = fresnel_cs(scale * (x_lo - x2));
  return {hi.c - lo.c, hi.s - lo.s};
}

} // namespace ifm
