#pragma once

#include <span>
#include <string>
#include <vector>

#include "qit/field.hpp"

namespace qit {

enum class DetectorRole { Signal, Idler };
enum class Axis { X, Y };

struct DetectorSpec {
  DetectorRole role = DetectorRole::Signal;
  Vec2 position;
  double aperture_radius = 0.0;  // 0 is a point detector
  bool operator==(const DetectorSpec&) const = default;
};

struct BiphotonSetup {
  ScalarField pump_at_crystal;
  double k_p = 0.0;
  double k_s = 0.0;
  double k_i = 0.0;
  double z_ad = 0.0;  // crystal to detectors
  double z_m1 = 0.0;  // mask to crystal, pump side
  double z_l = 0.0;   // crystal to twin-side lens
  double z_d = 0.0;   // lens to detectors
  double kappa = 1.0;
};

// Which way the closed-form imaged law maps the mask onto the detector plane.
// Upright is the formula as printed; Inverted is the real image of a positive lens.
enum class ImageOrientation { Upright, Inverted };

// rate = kappa * prefactor * |F(scale * (rho_s + rho_i))|^2
// Every coincidence law in the engine has this shape; only F, scale and the
// prefactor differ.
class RateLaw {
 public:
  RateLaw(ScalarField field, double scale, double prefactor, double kappa = 1.0);

  double operator()(Vec2 rho_s, Vec2 rho_i) const { return at_sum(rho_s + rho_i); }
  double at_sum(Vec2 sum) const;

  const ScalarField& field() const { return field_; }
  double scale() const { return scale_; }
  double prefactor() const { return prefactor_; }
  double kappa() const { return kappa_; }
  RateLaw with_kappa(double kappa) const;
  // Field pitch mapped back to detector coordinates.
  double detector_pitch() const;

 private:
  ScalarField field_;
  double scale_;
  double prefactor_;
  double kappa_;
};

double divergence_prefactor(double k_p, double length);

// Free propagation: W is the pump propagated over Z_AD with k_p.
RateLaw free_rate_law(const BiphotonSetup& setup, bool include_divergence_prefactor);
// Same law with W at the detector plane supplied directly.
RateLaw free_rate_law(const ScalarField& w_at_detector, double k_p, double z_ad,
                      bool include_divergence_prefactor, double kappa = 1.0);
double coincidence_free(const BiphotonSetup& setup, Vec2 rho_s, Vec2 rho_i,
                        bool include_divergence_prefactor);

RateLaw imaged_rate_law(const ScalarField& w_at_mask, double o, double i, double kappa = 1.0,
                        ImageOrientation orientation = ImageOrientation::Upright);
double coincidence_imaged(const BiphotonSetup& setup, const ScalarField& w_at_mask, double o,
                          double i, Vec2 rho_s, Vec2 rho_i,
                          ImageOrientation orientation = ImageOrientation::Upright);

struct CoincidenceProfile {
  std::vector<double> coordinates;
  std::vector<double> rates;
  Vec2 fixed_position;
  std::string scenario_id;
};

struct ScanSpec {
  Axis axis = Axis::X;
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;
};

std::vector<double> scan_coordinates(const ScanSpec& spec);

// Detector-pair rate integrated over both aperture disks (midpoint rule on the
// law's detector lattice). Points are evaluated in parallel; output does not
// depend on the thread count.
double aperture_rate(const RateLaw& law, const DetectorSpec& a, const DetectorSpec& b);
CoincidenceProfile scan_detector(const RateLaw& law, const ScanSpec& spec,
                                 const DetectorSpec& moving, const DetectorSpec& fixed_other,
                                 unsigned threads = 0);

// Rate map over a square of detector positions for the moving detector.
std::vector<double> coincidence_map(const RateLaw& law, std::span<const double> xs,
                                    std::span<const double> ys, const DetectorSpec& moving,
                                    const DetectorSpec& fixed_other, unsigned threads = 0);

}  // namespace qit
