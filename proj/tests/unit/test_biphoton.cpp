#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qit/errors.hpp"
#include "qit/profile.hpp"
#include "qit/simulation.hpp"
#include "scenario_builder.hpp"

using namespace qit;
using qit::testing::make_scenario;

namespace {

BiphotonSetup gaussian_setup(double z_ad) {
  const auto ctx = WaveContext::from_wavelength(425e-9);
  return BiphotonSetup{gaussian_beam(1e-3, 512, 20e-6), ctx.k(), 0.0, 0.0, z_ad, 0.0, z_ad, 0.0, 1.0};
}

const DetectorSpec kSignal{DetectorRole::Signal, {}, 0.0};
const DetectorSpec kIdler{DetectorRole::Idler, {}, 0.0};

}  // namespace

TEST(CoincidenceFree, GaussianScanCentredOnMinusIdler) {
  const auto law = free_rate_law(gaussian_setup(1.0), true);
  const Vec2 idler{0.4e-3, 0.0};
  auto fixed = kIdler;
  fixed.position = idler;
  const auto profile = scan_detector(law, ScanSpec{Axis::X, -2e-3, 2e-3, 20e-6}, kSignal, fixed);
  const auto peak = std::max_element(profile.rates.begin(), profile.rates.end()) - profile.rates.begin();
  EXPECT_NEAR(profile.coordinates[static_cast<std::size_t>(peak)], -0.4e-3, 1e-9);
  // Gaussian shape about the centre: symmetric within interpolation.
  for (std::size_t k = 1; k < 40; ++k)
    EXPECT_NEAR(profile.rates[static_cast<std::size_t>(peak) + k], profile.rates[static_cast<std::size_t>(peak) - k],
                1e-12 * profile.rates[static_cast<std::size_t>(peak)]);
}

TEST(CoincidenceFree, DoublingDistanceQuartersRateForFixedW) {
  const auto ctx = WaveContext::from_wavelength(425e-9);
  const auto w = gaussian_beam(1e-3, 512, 20e-6);
  const Vec2 rs{0.1e-3, 0.05e-3}, ri{-0.02e-3, 0.0};
  const double r1 = free_rate_law(w, ctx.k(), 0.7, true)(rs, ri);
  const double r2 = free_rate_law(w, ctx.k(), 1.4, true)(rs, ri);
  EXPECT_NEAR(r1 / r2, 4.0, 1e-12);
  EXPECT_NEAR(free_rate_law(w, ctx.k(), 1.4, false)(rs, ri), std::norm(w.interpolate(rs + ri)), 1e-15);
}

TEST(CoincidenceFree, DependsOnlyOnSumCoordinate) {
  const auto law = free_rate_law(gaussian_setup(0.8), true);
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-1.5e-3, 1.5e-3);
  for (int k = 0; k < 50; ++k) {
    const Vec2 rs{u(gen), u(gen)}, ri{u(gen), u(gen)}, d{u(gen), u(gen)};
    const double a = law(rs, ri);
    EXPECT_NEAR(law(rs + d, ri - d), a, 1e-6 * a);
  }
}

TEST(CoincidenceFree, OffWindowIsAnError) {
  const auto law = free_rate_law(gaussian_setup(0.5), false);
  EXPECT_THROW(law(Vec2{4e-3, 0.0}, Vec2{2e-3, 0.0}), OutOfWindowError);
  EXPECT_THROW(coincidence_free(gaussian_setup(0.5), Vec2{6e-3, 0}, Vec2{}, false), OutOfWindowError);
}

TEST(CoincidenceImaged, UnitMagnificationIsMaskIntensity) {
  const auto setup = gaussian_setup(1.0);
  const auto w = apply_mask(gaussian_beam(1e-3, 512, 20e-6), wire_mask(0.2e-3, 512, 20e-6));
  const Vec2 rs{0.33e-3, -0.1e-3}, ri{0.05e-3, 0.02e-3};
  EXPECT_DOUBLE_EQ(coincidence_imaged(setup, w, 0.5, 0.5, rs, ri), std::norm(w.interpolate(rs + ri)));
}

TEST(CoincidenceImaged, HalfSizeImageWhenOIsTwiceI) {
  const auto setup = gaussian_setup(1.0);
  const auto w = apply_mask(gaussian_beam(1e-3, 512, 20e-6), wire_mask(0.2e-3, 512, 20e-6));
  const Vec2 u{0.6e-3, 0.2e-3};
  EXPECT_DOUBLE_EQ(coincidence_imaged(setup, w, 1.0, 0.5, 0.5 * u, Vec2{}), std::norm(w.interpolate(u)));
  EXPECT_DOUBLE_EQ(coincidence_imaged(setup, w, 1.0, 0.5, -0.5 * u, Vec2{}, ImageOrientation::Inverted),
                   std::norm(w.interpolate(u)));
  EXPECT_THROW(coincidence_imaged(setup, w, 0.0, 0.5, u, Vec2{}), ValidationError);
}

TEST(UnfoldedTrain, NoTwinElementsLeavesPumpPath) {
  auto s = make_scenario(256, 20e-6, 0.3, {});
  const auto path = unfolded_pump_train(s);
  EXPECT_EQ(path.train.elements.size(), path.pump_elements);
  EXPECT_EQ(path.train.elements.size(), 2u);  // wire + free space
}

TEST(UnfoldedTrain, FreeTwinSideReducesToEquationOneRate) {
  const auto s = make_scenario(512, 20e-6, 0.3, {FreeSpace{0.6}});
  const auto law = scenario_rate_law(s, 1.0);
  const auto setup = biphoton_setup(s);
  EXPECT_DOUBLE_EQ(setup.z_ad, 0.6);
  const auto reference = free_rate_law(setup, true);
  for (double x : {-0.3e-3, 0.0, 0.05e-3, 0.21e-3}) {
    const Vec2 rs{x, 0.0}, ri{0.01e-3, 0.0};
    EXPECT_NEAR(law(rs, ri), reference(rs, ri), 1e-12 * reference(rs, ri));
  }
}

TEST(UnfoldedTrain, LensEquationImagingOnEquivalentMatrix) {
  const double z_m1 = 0.2, z_l = 0.3, f = 0.25;
  const double z_d = 1.0 / (1.0 / f - 1.0 / (z_m1 + z_l));
  const auto s = make_scenario(256, 20e-6, z_m1, {FreeSpace{z_l}, ThinLens{f, {}}, FreeSpace{z_d}});
  const auto path = unfolded_pump_train(s);
  const auto img = check_imaging(path.full_matrix);
  EXPECT_TRUE(img.is_image);
  EXPECT_NEAR(img.magnification, -z_d / (z_m1 + z_l), 1e-12);
}

TEST(UnfoldedTrain, PumpLensLayoutImagesAtSeventyCentimetres) {
  auto s = preset("fig4a");
  const auto path = unfolded_pump_train(s);
  for (std::size_t k = path.pump_elements; k < path.train.elements.size(); ++k)
    EXPECT_FALSE(std::holds_alternative<ThinLens>(path.train.elements[k]));
  EXPECT_TRUE(check_imaging(path.full_matrix).is_image);
  EXPECT_DOUBLE_EQ(biphoton_setup(s).z_ad, 0.7);

  // Coincidence image equals the pump intensity at the detector plane.
  const auto law = scenario_rate_law(s, 1.0);
  const auto ctx = WaveContext::from_wavelength(s.pump.wavelength);
  const auto pump_at_detector = propagate_train(pump_source(s), ctx, path.train);
  std::vector<double> coincidence, pump;
  for (double x = -1e-3; x <= 1e-3; x += 10e-6) {
    coincidence.push_back(law(Vec2{x, 0.0}, Vec2{}));
    pump.push_back(std::norm(pump_at_detector.interpolate({x, 0.0})));
  }
  EXPECT_GE(normalized_cross_correlation(coincidence, pump), 0.99);
}

TEST(UnfoldedTrain, AsymmetricArmsRejected) {
  auto s = make_scenario(256, 20e-6, 0.3, {FreeSpace{0.5}});
  s.twin_idler = {FreeSpace{0.6}};
  EXPECT_THROW(unfolded_pump_train(s), AsymmetryError);
}

TEST(UnfoldedTrain, CollimatorSetsDivergenceLength) {
  const auto s = make_scenario(256, 20e-6, 0.1, {FreeSpace{0.25}, ThinLens{0.25, {}}, FreeSpace{2.0}});
  EXPECT_NEAR(unfolded_pump_train(s).divergence_length, 0.25, 1e-15);
  const auto free = make_scenario(256, 20e-6, 0.1, {FreeSpace{1.3}});
  EXPECT_NEAR(unfolded_pump_train(free).divergence_length, 1.3, 1e-15);
}

TEST(UnfoldedTrain, ImagingWithoutCollimationIsSingular) {
  const auto s = make_scenario(256, 20e-6, 0.0, {FreeSpace{0.5}, ThinLens{0.25, {}}, FreeSpace{0.5}});
  EXPECT_THROW(scenario_rate_law(s, 1.0), PhysicsError);
}

TEST(UnfoldedTrain, ExactModeRescalesTwinSide) {
  auto s = make_scenario(256, 20e-6, 0.1, {FreeSpace{0.5}});
  s.twins.mode = WavenumberMode::Exact;
  const auto path = unfolded_pump_train(s);
  const double k_p = 1.0 / 425e-9, k_pair = 1.0 / 890e-9 + 1.0 / 800e-9;
  EXPECT_NEAR(path.twin_scale, k_p / k_pair, 1e-12);
  EXPECT_NEAR(std::get<FreeSpace>(path.train.elements.back()).distance, 0.5 * k_p / k_pair, 1e-12);
}

TEST(ImagedLaw, WireDipWidthMatchesWaveSimulationAtUnitMagnification) {
  const std::size_t n = 2048;
  const double p = 10e-6, wire = 0.2e-3;
  const double z_m1 = 0.2, z_l = 0.3, f = 0.25, z_d = 0.5;
  const auto s = make_scenario(n, p, z_m1, {FreeSpace{z_l}, ThinLens{f, {}}, FreeSpace{z_d}}, wire);
  const auto closed = imaged_rate_law(pump_at_mask(s), z_m1 + z_l, z_d, 1.0, ImageOrientation::Inverted);
  const auto wave = scenario_rate_law(s, 1.0);
  const ScanSpec spec{Axis::X, -0.6e-3, 0.6e-3, p / 4};
  const auto a = scan_detector(closed, spec, kSignal, kIdler);
  const auto b = scan_detector(wave, spec, kSignal, kIdler);
  EXPECT_NEAR(dominant_feature(a).width, wire, p);
  EXPECT_NEAR(dominant_feature(b).width, wire, p);
}

TEST(ScanDetector, PointDetectorsSampleTheLaw) {
  const auto law = free_rate_law(gaussian_setup(0.5), true);
  const auto profile = scan_detector(law, ScanSpec{Axis::Y, -1e-3, 1e-3, 0.1e-3}, kSignal, kIdler);
  ASSERT_EQ(profile.coordinates.size(), 21u);
  for (std::size_t k = 0; k < profile.coordinates.size(); ++k)
    EXPECT_EQ(profile.rates[k], law(Vec2{0.0, profile.coordinates[k]}, Vec2{}));
}

TEST(ScanDetector, SwappingRolesGivesTheSameProfile) {
  const auto s = make_scenario(512, 20e-6, 0.25, {FreeSpace{0.25}, ThinLens{0.25, {}}, FreeSpace{0.5}});
  const auto law = scenario_rate_law(s, 1.0);
  DetectorSpec sig{DetectorRole::Signal, {0.1e-3, 0.0}, 0.1e-3};
  DetectorSpec idl{DetectorRole::Idler, {0.1e-3, 0.0}, 0.1e-3};
  const ScanSpec spec{Axis::X, -0.8e-3, 0.8e-3, 20e-6};
  const auto a = scan_detector(law, spec, sig, idl);
  const auto b = scan_detector(law, spec, idl, sig);
  for (std::size_t k = 0; k < a.rates.size(); ++k) EXPECT_NEAR(a.rates[k], b.rates[k], 1e-12 * a.rates[k]);
}

TEST(ScanDetector, LargerAperturesWashOutTheDip) {
  const auto s = make_scenario(512, 20e-6, 0.25, {FreeSpace{0.25}, ThinLens{0.25, {}}, FreeSpace{0.5}});
  const auto law = scenario_rate_law(s, 1.0);
  double previous = 2.0;
  for (double r : {0.05e-3, 0.1e-3, 0.2e-3}) {
    const auto profile = scan_detector(law, ScanSpec{Axis::X, -1e-3, 1e-3, 20e-6},
                                       DetectorSpec{DetectorRole::Signal, {}, r}, DetectorSpec{DetectorRole::Idler, {}, r});
    const double c = contrast(profile);
    EXPECT_LT(c, previous) << r;
    previous = c;
  }
}

TEST(ScanDetector, UnderResolvedApertureRejected) {
  const auto law = free_rate_law(gaussian_setup(0.5), true);
  EXPECT_THROW(scan_detector(law, ScanSpec{Axis::X, -1e-3, 1e-3, 20e-6}, DetectorSpec{DetectorRole::Signal, {}, 30e-6},
                             kIdler),
               ResolutionError);
}

TEST(ScanDetector, ThreadCountDoesNotChangeOutput) {
  const auto law = free_rate_law(gaussian_setup(0.5), true);
  const ScanSpec spec{Axis::X, -1e-3, 1e-3, 10e-6};
  const DetectorSpec sig{DetectorRole::Signal, {}, 0.1e-3};
  const auto one = scan_detector(law, spec, sig, kIdler, 1);
  const auto four = scan_detector(law, spec, sig, kIdler, 4);
  EXPECT_EQ(one.rates, four.rates);
}

TEST(ScanDetector, SameRoleTwiceRejected) {
  const auto law = free_rate_law(gaussian_setup(0.5), true);
  EXPECT_THROW(scan_detector(law, ScanSpec{Axis::X, 0, 1e-3, 1e-4}, kSignal, kSignal), ValidationError);
}
