#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "generators.hpp"
#include "ifm/fresnel.hpp"

namespace {

using ifm::fresnel_cs;
using ifm::segment_amplitude;

// Independent oracle: adaptive Gauss-Kronrod on panels between the points
// where the phase pi t^2 / 2 advances by pi.
ifm::FresnelPair quadrature_oracle(double x) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double ax = std::abs(x);
  double c = 0.0, s = 0.0;
  double lo = 0.0;
  for (int k = 1; lo < ax; ++k) {
    const double hi = std::min(ax, std::sqrt(2.0 * k));
    c += GK::integrate([](double t) { return std::cos(0.5 * std::numbers::pi * t * t); }, lo, hi,
                       5, 1e-14);
    s += GK::integrate([](double t) { return std::sin(0.5 * std::numbers::pi * t * t); }, lo, hi,
                       5, 1e-14);
    lo = hi;
  }
  return x < 0 ? ifm::FresnelPair{-c, -s} : ifm::FresnelPair{c, s};
}

TEST(Fresnel, MatchesQuadratureOracleOnDenseGrid) {
  for (int i = 0; i < 400; ++i) {
    const double x = -20.0 + 40.0 * (i + 0.5) / 400.0;
    const auto got = fresnel_cs(x);
    const auto ref = quadrature_oracle(x);
    EXPECT_NEAR(got.c, ref.c, 1e-10) << "x = " << x;
    EXPECT_NEAR(got.s, ref.s, 1e-10) << "x = " << x;
  }
}

TEST(Fresnel, ContinuedFractionAndSeriesAgreeAtSwitchover) {
  for (double x : {1.4, 1.5, 1.6, 2.0}) {
    const auto a = ifm::detail::fresnel_series(x);
    const auto b = ifm::detail::fresnel_continued_fraction(x);
    EXPECT_NEAR(a.c, b.c, 1e-13) << x;
    EXPECT_NEAR(a.s, b.s, 1e-13) << x;
  }
}

TEST(Fresnel, KnownValuesAtOne) {
  const auto v = fresnel_cs(1.0);
  EXPECT_NEAR(v.c, 0.7798934003768228, 1e-15);
  EXPECT_NEAR(v.s, 0.4382591473903548, 1e-15);
}

TEST(Fresnel, ZeroAndOddSymmetry) {
  const auto z = fresnel_cs(0.0);
  EXPECT_EQ(z.c, 0.0);
  EXPECT_EQ(z.s, 0.0);
  ifm::testing::Gen gen(11);
  for (int i = 0; i < ifm::testing::property_cases; ++i) {
    const double x = gen.uniform(-50.0, 50.0);
    const auto p = fresnel_cs(x), m = fresnel_cs(-x);
    EXPECT_EQ(p.c, -m.c) << x;
    EXPECT_EQ(p.s, -m.s) << x;
  }
}

TEST(Fresnel, ApproachesOneHalfWithinEnvelope) {
  for (double x : {5.0, 10.0, 100.0, 1e3, 1e4, 1e6}) {
    const auto v = fresnel_cs(x);
    EXPECT_LE(std::abs(v.c - 0.5), 1.0 / (std::numbers::pi * x) + 1e-15) << x;
    EXPECT_LE(std::abs(v.s - 0.5), 1.0 / (std::numbers::pi * x) + 1e-15) << x;
  }
}

TEST(Fresnel, RejectsNonFinite) {
  EXPECT_THROW(fresnel_cs(std::nan("")), std::domain_error);
  EXPECT_THROW(fresnel_cs(INFINITY), std::domain_error);
}

TEST(SegmentAmplitude, AdditiveOverAdjacentSegments) {
  ifm::testing::Gen gen(12);
  for (int i = 0; i < ifm::testing::property_cases; ++i) {
    const double a = gen.uniform(-1000.0, 0.0);
    const double c = gen.uniform(1.0, 1000.0);
    const double b = gen.uniform(a + 1e-3, c - 1e-3);
    const double x2 = gen.uniform(-3e4, 3e4);
    const ifm::PropagationParams p{ifm::k_wavenumber, gen.log_uniform(1e3, 1e7)};
    const auto whole = segment_amplitude(x2, a, c, p);
    const auto parts = segment_amplitude(x2, a, b, p) + segment_amplitude(x2, b, c, p);
    EXPECT_NEAR(std::abs(whole - parts), 0.0, 1e-12) << "case " << i;
  }
}

TEST(SegmentAmplitude, MirrorSymmetry) {
  ifm::testing::Gen gen(13);
  for (int i = 0; i < ifm::testing::property_cases; ++i) {
    const double lo = gen.uniform(-500.0, 400.0);
    const double hi = lo + gen.uniform(1.0, 500.0);
    const double x2 = gen.uniform(-2e4, 2e4);
    const ifm::PropagationParams p{ifm::k_wavenumber, gen.log_uniform(1e3, 1e7)};
    const auto a = segment_amplitude(x2, lo, hi, p);
    const auto b = segment_amplitude(-x2, -hi, -lo, p);
    EXPECT_NEAR(std::abs(a - b), 0.0, 1e-13) << "case " << i;
  }
}

TEST(SegmentAmplitude, WideApertureApproachesUnitTransmission) {
  // An aperture much wider than the Fresnel zone transmits the unobstructed
  // amplitude C(inf) - C(-inf) + i(S(inf) - S(-inf)) = 1 + i.
  const ifm::PropagationParams p{ifm::k_wavenumber, 1e4};
  const auto a = segment_amplitude(0.0, -1e6, 1e6, p);
  EXPECT_NEAR(a.real(), 1.0, 1e-3);
  EXPECT_NEAR(a.imag(), 1.0, 1e-3);
}

TEST(SegmentAmplitude, RejectsEmptySegmentAndBadDistance) {
  const ifm::PropagationParams p{ifm::k_wavenumber, 1e4};
  EXPECT_THROW(segment_amplitude(0.0, 1.0, 1.0, p), std::domain_error);
  EXPECT_THROW(segment_amplitude(0.0, 2.0, 1.0, p), std::domain_error);
  EXPECT_THROW(segment_amplitude(0.0, -1.0, 1.0, {ifm::k_wavenumber, 0.0}), std::domain_error);
}

} // namespace
