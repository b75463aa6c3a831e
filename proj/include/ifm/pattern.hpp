#pragma once
/**
 * @file pattern.hpp
 * @brief Binned probability densities over screen position or transverse
 *        momentum, their normalization conventions, and CSV serialization.
 */

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ifm/format.hpp"
#include "ifm/status.hpp"

namespace ifm {

enum class Axis { Position, Momentum };

inline const char *to_string(Axis a) noexcept {
  return a == Axis::Momentum ? "momentum" : "position";
}

/// How a pattern's densities are scaled.
enum class Normalization {
  /// Maximum density equals 1.
  PeakOne,
  /// Window mass equals 1.
  UnitMass,
  /// Window mass equals the survival probability of the hypothesis.
  FluxMass,
  /// Scaled by a factor shared with a reference pattern (figure layout:
  /// the no-bomb peak is 1 and the bomb curve uses the same units).
  SharedPeak,
};

inline const char *to_string(Normalization n) noexcept {
  switch (n) {
  case Normalization::PeakOne:
    return "peak_one";
  case Normalization::UnitMass:
    return "unit_mass";
  case Normalization::FluxMass:
    return "flux_mass";
  case Normalization::SharedPeak:
    return "shared_peak";
  }
  return "unknown";
}

/// Uniform bins of equal width spanning [lo, hi].
struct BinWindow {
  double lo{-1e6};
  double hi{1e6};
  double bin_width{10.0};

  [[nodiscard]] std::size_t bins() const {
    validate();
    return static_cast<std::size_t>(std::llround((hi - lo) / bin_width));
  }
  [[nodiscard]] double center(std::size_t i) const noexcept {
    return lo + (static_cast<double>(i) + 0.5) * bin_width;
  }

  void validate() const {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
      throw std::domain_error("BinWindow: require finite hi > lo");
    if (!(bin_width > 0.0) || !std::isfinite(bin_width))
      throw std::domain_error("BinWindow: bin width must be positive");
    const double count = (hi - lo) / bin_width;
    if (std::abs(count - std::round(count)) > 1e-6 * std::max(1.0, count) || count < 0.5)
      throw std::domain_error("BinWindow: window span must be a whole number of bins");
  }

  /// Window [-half_width, half_width].
  static BinWindow symmetric(double half_width, double bin_width) {
    return {-half_width, half_width, bin_width};
  }
  /// Window whose central bin is centered on zero, covering at least
  /// [-half_width, half_width].
  static BinWindow centered(double half_width, double bin_width) {
    const double k = std::ceil(half_width / bin_width);
    return {-(k + 0.5) * bin_width, (k + 0.5) * bin_width, bin_width};
  }
  /// Same bin width and center, three times the span.
  [[nodiscard]] BinWindow tripled() const noexcept {
    const double span = hi - lo;
    return {lo - span, hi + span, bin_width};
  }
};

struct SampledPattern {
  Axis axis{Axis::Position};
  BinWindow window;
  std::vector<double> densities;
  double mass{0.0};
  Normalization normalization{Normalization::UnitMass};
  Warnings warnings;

  [[nodiscard]] std::size_t size() const noexcept { return densities.size(); }
  [[nodiscard]] double bin_center(std::size_t i) const noexcept { return window.center(i); }
  [[nodiscard]] double bin_width() const noexcept { return window.bin_width; }

  void recompute_mass() {
    double s = 0.0;
    for (double d : densities)
      s += d;
    mass = s * window.bin_width;
  }

  [[nodiscard]] double max_density() const noexcept {
    return densities.empty() ? 0.0 : *std::max_element(densities.begin(), densities.end());
  }

  /// Index of the bin containing `x`, clamped to the window.
  [[nodiscard]] std::size_t bin_index(double x) const noexcept {
    const double t = std::floor((x - window.lo) / window.bin_width);
    if (t <= 0.0)
      return 0;
    return std::min(static_cast<std::size_t>(t), densities.size() - 1);
  }
};

/// Rescales raw non-negative densities to the requested convention in place.
/// `target_mass` applies to FluxMass; `shared_scale` applies to SharedPeak.
inline void normalize(SampledPattern &p, Normalization norm, double target_mass = 1.0,
                      double shared_scale = 1.0) {
  for (double d : p.densities)
    if (!(d >= 0.0) || !std::isfinite(d))
      throw std::domain_error("normalize: densities must be finite and non-negative");
  p.recompute_mass();
  double scale = 1.0;
  switch (norm) {
  case Normalization::PeakOne: {
    const double peak = p.max_density();
    if (!(peak > 0.0))
      throw std::domain_error("normalize: zero pattern cannot be peak-normalized");
    scale = 1.0 / peak;
    break;
  }
  case Normalization::UnitMass:
  case Normalization::FluxMass:
    if (!(p.mass > 0.0))
      throw std::domain_error("normalize: zero-mass pattern");
    scale = (norm == Normalization::UnitMass ? 1.0 : target_mass) / p.mass;
    break;
  case Normalization::SharedPeak:
    scale = shared_scale;
    break;
  }
  for (double &d : p.densities)
    d *= scale;
  p.normalization = norm;
  p.recompute_mass();
  if (norm == Normalization::PeakOne) {
    // Pin the peak bin to exactly one.
    auto it = std::max_element(p.densities.begin(), p.densities.end());
    *it = 1.0;
    p.recompute_mass();
  }
}

/// Writes `axis,bin_center,density`, one row per bin.
inline void write_csv(std::ostream &os, const SampledPattern &p) {
  os << "axis,bin_center,density\n";
  const char *axis = to_string(p.axis);
  for (std::size_t i = 0; i < p.size(); ++i)
    os << axis << ',' << format_double(p.bin_center(i)) << ',' << format_double(p.densities[i])
       << '\n';
}

struct CsvPattern {
  Axis axis{Axis::Position};
  std::vector<double> bin_centers;
  std::vector<double> densities;
};

/// Reads a file produced by write_csv.
inline CsvPattern read_csv(std::istream &is) {
  std::string line;
  if (!std::getline(is, line) || line != "axis,bin_center,density")
    throw std::runtime_error("read_csv: missing header 'axis,bin_center,density'");
  CsvPattern out;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty())
      continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw std::runtime_error("read_csv: malformed row: " + line);
    const std::string axis = line.substr(0, c1);
    Axis a;
    if (axis == "position")
      a = Axis::Position;
    else if (axis == "momentum")
      a = Axis::Momentum;
    else
      throw std::runtime_error("read_csv: unknown axis '" + axis + "'");
    if (first)
      out.axis = a;
    else if (a != out.axis)
      throw std::runtime_error("read_csv: mixed axes");
    first = false;
    out.bin_centers.push_back(parse_double(std::string_view(line).substr(c1 + 1, c2 - c1 - 1)));
    out.densities.push_back(parse_double(std::string_view(line).substr(c2 + 1)));
  }
  return out;
}

/// Rebuilds a SampledPattern from CSV rows given the bin width it was written with.
inline SampledPattern to_pattern(const CsvPattern &csv, double bin_width) {
  if (csv.bin_centers.empty())
    throw std::runtime_error("to_pattern: empty CSV");
  SampledPattern p;
  p.axis = csv.axis;
  p.window = {csv.bin_centers.front() - 0.5 * bin_width,
              csv.bin_centers.back() + 0.5 * bin_width, bin_width};
  p.densities = csv.densities;
  p.recompute_mass();
  return p;
}

} // namespace ifm
