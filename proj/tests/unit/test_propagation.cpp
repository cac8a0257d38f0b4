#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "helpers.hpp"
#include "qit/errors.hpp"
#include "qit/paraxial.hpp"
#include "qit/profile.hpp"
#include "qit/propagation.hpp"

using namespace qit;
using qit::testing::relative_rms;

namespace {

const WaveContext kPump = WaveContext::from_wavelength(425e-9);

double phase_of(Complex v) { return std::arg(v); }

}  // namespace

TEST(Propagate, ZeroDistanceIsIdentity) {
  const auto f = apply_mask(gaussian_beam(0.5e-3, 256, 20e-6), wire_mask(0.2e-3, 256, 20e-6));
  EXPECT_EQ(propagate(f, kPump, 0.0), f);
}

TEST(Propagate, NegativeDistanceRejected) {
  EXPECT_THROW(propagate(gaussian_beam(1e-3, 512, 20e-6), kPump, -0.1), ValidationError);
}

TEST(Propagate, GaussianRadiusAtRayleighRangeIsRootTwoWaist) {
  const double w0 = 0.5e-3;
  const double z_r = std::numbers::pi * w0 * w0 / 425e-9;
  const auto out = propagate(gaussian_beam(w0, 512, 20e-6), kPump, z_r);
  EXPECT_NEAR(qit::testing::second_moment_radius(out) / (std::sqrt(2.0) * w0), 1.0, 5e-3);
}

TEST(Propagate, PowerConservedOverOneMetre) {
  const auto f = gaussian_beam(1e-3, 512, 20e-6);
  EXPECT_NEAR(power(propagate(f, kPump, 1.0)) / power(f), 1.0, 1e-9);
}

TEST(Propagate, PowerNeverIncreases) {
  // Wire edges carry content beyond the band limit at 3 m; it may only be removed.
  const auto f = apply_mask(gaussian_beam(1e-3, 512, 20e-6), wire_mask(0.1e-3, 512, 20e-6));
  EXPECT_LE(power(propagate(f, kPump, 3.0)), power(f) * (1.0 + 1e-12));
}

TEST(Propagate, Semigroup) {
  // Band-limited input: a sharp mask would be clipped differently at each distance.
  const auto f = gaussian_beam(0.4e-3, 256, 20e-6);
  const double a = 0.37, b = 0.81;
  const auto two_step = propagate(propagate(f, kPump, a), kPump, b);
  EXPECT_LT(relative_rms(two_step, propagate(f, kPump, a + b)), 1e-10);
}

TEST(Propagate, BeyondBandLimitedRangeReportsMaxSafeDistance) {
  const auto f = gaussian_beam(1e-3, 512, 20e-6);
  const double z_max = max_safe_distance(512, 20e-6, 425e-9);
  EXPECT_GT(z_max, 3.0);
  try {
    propagate(f, kPump, 10.0);
    FAIL() << "expected AliasingError";
  } catch (const AliasingError& e) {
    EXPECT_DOUBLE_EQ(e.max_safe_distance(), z_max);
  }
}

TEST(ThinLens, UnboundedFocalIsIdentity) {
  const auto f = gaussian_beam(0.2e-3, 64, 20e-6);
  EXPECT_EQ(apply_thin_lens(f, kPump, std::numeric_limits<double>::infinity()), f);
}

TEST(ThinLens, OppositeFocalLengthsCancel) {
  const auto f = apply_mask(gaussian_beam(0.3e-3, 128, 20e-6), wire_mask(0.1e-3, 128, 20e-6));
  const auto g = apply_thin_lens(apply_thin_lens(f, kPump, 0.25), kPump, -0.25);
  EXPECT_LT(relative_rms(g, f), 1e-14);
  EXPECT_NEAR(power(apply_thin_lens(f, kPump, 0.25)), power(f), 1e-15 * power(f));
}

TEST(ThinLens, ZeroFocalRejected) { EXPECT_THROW(apply_thin_lens(ScalarField(16, 1e-5), kPump, 0.0), ValidationError); }

namespace {

double worst_central_phase(const ScalarField& out) {
  const std::size_t n = out.size();
  const Complex centre = out.at(n / 2, n / 2);
  double worst = 0.0;
  for (std::size_t j = n / 4; j < 3 * n / 4; ++j) {
    for (std::size_t i = n / 4; i < 3 * n / 4; ++i) {
      worst = std::max(worst, std::abs(phase_of(out.at(i, j) / centre)));
    }
  }
  return worst;
}

}  // namespace

// A 25 um waist has a Rayleigh range of 4.6 mm, so at f = 0.25 m its wavefront
// radius differs from f by only (z_R/f)^2 ~ 3e-4. The direct sum avoids the
// periodic wrap a diverging source suffers on an FFT grid.
TEST(ThinLens, PointSourceCollimationViaDirectOracle) {
  const double p = 10e-6, f = 0.25;
  const auto source = gaussian_beam(2.5 * p, 128, p);
  EXPECT_LT(worst_central_phase(apply_thin_lens(oracle_fresnel_direct(source, kPump, f), kPump, f)), 0.05);
}

TEST(ThinLens, PlaneWaveFocusesOnAxis) {
  const std::size_t n = 128;
  const double p = 20e-6, f = 0.25;
  const auto out = propagate(apply_thin_lens(uniform_field(n, p), kPump, f), kPump, f);
  const auto I = qit::testing::intensity(out);
  const auto peak = std::max_element(I.begin(), I.end());
  const double mean = std::accumulate(I.begin(), I.end(), 0.0) / static_cast<double>(I.size());
  EXPECT_EQ(static_cast<std::size_t>(peak - I.begin()), (n / 2) * n + n / 2);
  EXPECT_GE(*peak, 100.0 * mean);
}

TEST(Train, EmptyTrainIsIdentity) {
  const auto f = gaussian_beam(0.2e-3, 64, 20e-6);
  EXPECT_EQ(propagate_train(f, kPump, OpticalTrain{}), f);
}

TEST(Train, ConsecutiveFreeSpacesAdd) {
  const auto f = gaussian_beam(0.4e-3, 256, 20e-6);
  OpticalTrain t;
  t.free(0.4).free(0.9);
  EXPECT_LT(relative_rms(propagate_train(f, kPump, t), propagate(f, kPump, 1.3)), 1e-10);
}

TEST(Train, EqualsManualComposition) {
  const auto f = gaussian_beam(0.3e-3, 128, 20e-6);
  const auto m = wire_mask(0.1e-3, 128, 20e-6);
  OpticalTrain t;
  t.free(0.1).lens(0.3).mask(m).free(0.2);
  const auto manual = propagate(apply_mask(apply_thin_lens(propagate(f, kPump, 0.1), kPump, 0.3), m), kPump, 0.2);
  EXPECT_EQ(propagate_train(f, kPump, t), manual);
}

TEST(Train, FourFRelayImagesInvertedAndScaled) {
  const std::size_t n = 512;
  const double p = 20e-6, f1 = 0.3, f2 = 0.6;
  const auto object = apply_mask(gaussian_beam(1e-3, n, p), wire_mask(0.2e-3, n, p));
  OpticalTrain t;
  t.free(f1).lens(f1).free(f1 + f2).lens(f2).free(f2);
  const auto m = ray_matrix(t);
  ASSERT_TRUE(check_imaging(m).is_image);
  const double mag = check_imaging(m).magnification;
  EXPECT_NEAR(mag, -f2 / f1, 1e-12);

  const auto image = propagate_train(object, kPump, t);
  std::vector<double> wave, predicted;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 r{image.coordinate(i), image.coordinate(j)};
      wave.push_back(std::norm(image.at(i, j)));
      predicted.push_back(std::norm(object.interpolate((1.0 / mag) * r)) / (mag * mag));
    }
  }
  EXPECT_GE(normalized_cross_correlation(wave, predicted), 0.99);
}

TEST(Train, ErrorsNameTheElement) {
  OpticalTrain t;
  t.free(0.1).lens(0.2).free(50.0);
  try {
    propagate_train(gaussian_beam(1e-3, 512, 20e-6), kPump, t);
    FAIL() << "expected AliasingError";
  } catch (const AliasingError& e) {
    EXPECT_NE(std::string(e.what()).find("element 2"), std::string::npos) << e.what();
  }
}

TEST(Train, BoundedLensClipsToAperture) {
  const auto f = uniform_field(64, 20e-6);
  OpticalTrain t;
  t.elements.push_back(ThinLens{0.5, 0.2e-3});
  const auto out = propagate_train(f, kPump, t);
  EXPECT_EQ(out.at(0, 0), Complex(0.0, 0.0));
  EXPECT_NEAR(std::abs(out.at(32, 32)), 1.0, 1e-15);
}

TEST(Oracle, MatchesAngularSpectrumOnSmallGrid) {
  const auto f = gaussian_beam(250e-6, 64, 50e-6);
  const auto fast = propagate(f, kPump, 0.45);
  const auto slow = oracle_fresnel_direct(f, kPump, 0.45);
  EXPECT_LT(relative_rms(fast, slow), 1e-6);
}

TEST(Oracle, UniformDiscOnAxisMatchesFresnelZones) {
  const std::size_t n = 128;
  const double p = 10e-6;
  const auto disc = apply_mask(uniform_field(n, p), circular_aperture(50 * p, n, p));
  // Area-equivalent radius of the sampled disc, one Fresnel zone on axis.
  const double area = power(disc);
  const double a2 = area / std::numbers::pi;
  const double z = a2 / kPump.wavelength();
  const auto out = oracle_fresnel_direct(disc, kPump, z);
  const Complex expected = 1.0 - std::polar(1.0, kPump.k() * a2 / (2.0 * z));
  EXPECT_NEAR(std::abs(out.at(n / 2, n / 2) - expected) / std::abs(expected), 0.0, 0.01);
}

TEST(Oracle, Preconditions) {
  EXPECT_THROW(oracle_fresnel_direct(gaussian_beam(0.5e-3, 256, 20e-6), kPump, 0.5), CostError);
  EXPECT_THROW(oracle_fresnel_direct(gaussian_beam(250e-6, 64, 50e-6), kPump, 0.0), ValidationError);
}
