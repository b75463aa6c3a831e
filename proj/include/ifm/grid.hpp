#pragma once
/**
 * @file grid.hpp
 * @brief Uniformly sampled transverse wavefunctions and the periodic spectral
 *        propagator exp(-i kx^2 l / 2 k0).
 */

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ifm/fresnel.hpp"
#include "ifm/status.hpp"

namespace ifm {

using cplx = std::complex<double>;

/// Sample layout of a periodic 1-D grid: x_i = x_min + i*dx, dx = (x_max - x_min)/n.
struct GridSpec {
  double x_min{-128.0};
  double x_max{128.0};
  std::size_t n{4096};

  [[nodiscard]] double dx() const noexcept { return (x_max - x_min) / static_cast<double>(n); }
  [[nodiscard]] double x(std::size_t i) const noexcept {
    return x_min + static_cast<double>(i) * dx();
  }
  [[nodiscard]] double span() const noexcept { return x_max - x_min; }

  void validate() const {
    if (n < 2)
      throw std::domain_error("GridSpec: need at least two samples");
    if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max))
      throw std::domain_error("GridSpec: require finite x_max > x_min");
  }
};

/// Complex amplitudes on a GridSpec.
struct GridWavefunction {
  GridSpec grid;
  std::vector<cplx> amplitudes;

  GridWavefunction() = default;
  GridWavefunction(GridSpec g, std::vector<cplx> a) : grid(g), amplitudes(std::move(a)) {
    grid.validate();
    if (amplitudes.size() != grid.n)
      throw std::invalid_argument("GridWavefunction: amplitude count does not match grid");
  }

  /// Squared norm by the trapezoid rule on the periodic grid.
  [[nodiscard]] double norm_squared() const noexcept {
    double s = 0.0;
    for (const auto &a : amplitudes)
      s += std::norm(a);
    return s * grid.dx();
  }

  /// Squared norm restricted to |x| < half_width (open interval).
  [[nodiscard]] double mass_inside(double half_width) const noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i)
      if (std::abs(grid.x(i)) < half_width)
        s += std::norm(amplitudes[i]);
    return s * grid.dx();
  }

  /// Inner product <this|other> on the same grid.
  [[nodiscard]] cplx inner(const GridWavefunction &other) const {
    if (other.amplitudes.size() != amplitudes.size())
      throw std::invalid_argument("GridWavefunction::inner: grid mismatch");
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < amplitudes.size(); ++i)
      s += std::conj(amplitudes[i]) * other.amplitudes[i];
    return s * grid.dx();
  }
};

namespace detail {

// The FFTW planner is not re-entrant; execution on distinct plans is.
inline std::mutex &fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex *p) const noexcept { fftw_free(p); }
};

} // namespace detail

/// Reusable spectral propagator for a fixed grid and step distance.
///
/// Holds FFTW plans and the transfer function; apply() advances a wavefunction
/// in place. Instances are not shared between threads.
class SpectralPropagator {
public:
  SpectralPropagator(const GridSpec &grid, const PropagationParams &params)
      : grid_(grid), n_(grid.n) {
    grid.validate();
    params.validate();
    buffer_.reset(fftw_alloc_complex(n_));
    if (!buffer_)
      throw std::bad_alloc();
    {
      std::lock_guard lock(detail::fftw_planner_mutex());
      auto *buf = buffer_.get();
      forward_ = fftw_plan_dft_1d(static_cast<int>(n_), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
      backward_ = fftw_plan_dft_1d(static_cast<int>(n_), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    if (!forward_ || !backward_)
      throw std::runtime_error("SpectralPropagator: FFTW planning failed");

    transfer_.resize(n_);
    const double dk = 2.0 * std::numbers::pi / grid.span();
    const double inv_n = 1.0 / static_cast<double>(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      const auto signed_j = static_cast<double>(j < (n_ + 1) / 2 ? static_cast<long long>(j)
                                                                 : static_cast<long long>(j) -
                                                                       static_cast<long long>(n_));
      const double kx = signed_j * dk;
      const double phase = -kx * kx * params.distance / (2.0 * params.k0);
      transfer_[j] = std::polar(inv_n, phase);
    }
  }

  SpectralPropagator(const SpectralPropagator &) = delete;
  SpectralPropagator &operator=(const SpectralPropagator &) = delete;

  ~SpectralPropagator() {
    std::lock_guard lock(detail::fftw_planner_mutex());
    if (forward_)
      fftw_destroy_plan(forward_);
    if (backward_)
      fftw_destroy_plan(backward_);
  }

  void apply(std::span<cplx> amplitudes) {
    if (amplitudes.size() != n_)
      throw std::invalid_argument("SpectralPropagator::apply: size mismatch");
    auto *buf = reinterpret_cast<cplx *>(buffer_.get());
    std::copy(amplitudes.begin(), amplitudes.end(), buf);
    fftw_execute(forward_);
    for (std::size_t j = 0; j < n_; ++j)
      buf[j] *= transfer_[j];
    fftw_execute(backward_);
    std::copy(buf, buf + n_, amplitudes.begin());
  }

  [[nodiscard]] const GridSpec &grid() const noexcept { return grid_; }

private:
  GridSpec grid_;
  std::size_t n_;
  std::unique_ptr<fftw_complex, detail::FftwFree> buffer_;
  fftw_plan forward_{nullptr};
  fftw_plan backward_{nullptr};
  std::vector<cplx> transfer_;
};

/// Fraction of each domain edge treated as the aliasing guard band.
inline constexpr double default_guard_fraction = 1.0 / 16.0;
/// Maximum tolerated relative mass inside the guard band.
inline constexpr double default_guard_tolerance = 1e-6;

/// Relative squared-norm found within `fraction * span` of either domain edge.
inline double guard_band_mass(const GridWavefunction &psi,
                              double fraction = default_guard_fraction) {
  const double total = psi.norm_squared();
  if (total <= 0.0)
    return 0.0;
  const double band = fraction * psi.grid.span();
  double s = 0.0;
  for (std::size_t i = 0; i < psi.grid.n; ++i) {
    const double x = psi.grid.x(i);
    if (x - psi.grid.x_min < band || psi.grid.x_max - x <= band)
      s += std::norm(psi.amplitudes[i]);
  }
  return s * psi.grid.dx() / total;
}

struct PropagationResult {
  GridWavefunction psi;
  double guard_mass{0.0};
  Warnings warnings;
};

/// Applies exp(-i kx^2 l / 2 k0) spectrally. The domain is periodic; if the
/// propagated state places more than `guard_tolerance` of its mass in the
/// guard band the result carries an aliasing warning.
inline PropagationResult propagate_grid(const GridWavefunction &psi,
                                        const PropagationParams &params,
                                        double guard_fraction = default_guard_fraction,
                                        double guard_tolerance = default_guard_tolerance) {
  const double n0 = psi.norm_squared();
  if (!std::isfinite(n0))
    throw std::domain_error("propagate_grid: input norm is not finite");
  PropagationResult out{psi, 0.0, {}};
  SpectralPropagator prop(psi.grid, params);
  prop.apply(out.psi.amplitudes);
  out.guard_mass = guard_band_mass(out.psi, guard_fraction);
  if (out.guard_mass > guard_tolerance)
    out.warnings.add("propagate_grid: " + std::to_string(out.guard_mass) +
                     " of the mass lies in the guard band; periodic wrap-around likely");
  return out;
}

} // namespace ifm
