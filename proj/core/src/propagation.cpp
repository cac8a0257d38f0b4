#include "qit/propagation.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "qit/errors.hpp"

namespace qit {

namespace {

// FFTW's planner is not re-entrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Fft2d {
 public:
  Fft2d(std::size_t n, Complex* data, int sign) {
    std::lock_guard lock(planner_mutex());
    auto* p = reinterpret_cast<fftw_complex*>(data);
    plan_ = fftw_plan_dft_2d(static_cast<int>(n), static_cast<int>(n), p, p, sign, FFTW_ESTIMATE);
    if (plan_ == nullptr) throw PhysicsError("FFTW could not create a plan");
  }
  ~Fft2d() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;
  void run() { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

double frequency(std::size_t index, std::size_t n, double pitch) {
  const auto i = static_cast<long long>(index);
  const auto nn = static_cast<long long>(n);
  const long long m = index < (n + 1) / 2 ? i : i - nn;
  return static_cast<double>(m) / (static_cast<double>(n) * pitch);
}

void require_distance(double distance) {
  if (!std::isfinite(distance) || distance < 0.0)
    throw ValidationError("propagation distance must be finite and >= 0");
}

}  // namespace

OpticalTrain& OpticalTrain::free(double distance) {
  elements.emplace_back(FreeSpace{distance});
  return *this;
}

OpticalTrain& OpticalTrain::lens(double focal) {
  elements.emplace_back(ThinLens{focal, std::nullopt});
  return *this;
}

OpticalTrain& OpticalTrain::mask(TransmissionMask m) {
  elements.emplace_back(Mask{std::move(m)});
  return *this;
}

double OpticalTrain::length() const {
  double total = 0.0;
  for (const auto& e : elements) {
    if (const auto* f = std::get_if<FreeSpace>(&e)) total += f->distance;
  }
  return total;
}

std::string describe(const OpticalElement& element) {
  std::ostringstream out;
  if (const auto* f = std::get_if<FreeSpace>(&element)) {
    out << "free space " << f->distance << " m";
  } else if (const auto* l = std::get_if<ThinLens>(&element)) {
    out << "thin lens f=" << l->focal << " m";
  } else {
    out << "mask";
  }
  return out.str();
}

double band_limit_frequency(double distance, double window, double wavelength) {
  const double r = 2.0 * distance / window;
  return 1.0 / (wavelength * std::sqrt(r * r + 1.0));
}

double max_safe_distance(std::size_t n, double pitch, double wavelength) {
  const double ratio = 16.0 * pitch / wavelength;
  if (ratio <= 1.0) return 0.0;
  return 0.5 * static_cast<double>(n) * pitch * std::sqrt(ratio * ratio - 1.0);
}

ScalarField propagate(const ScalarField& field, const WaveContext& ctx, double distance) {
  require_distance(distance);
  if (distance == 0.0) return field;
  const std::size_t n = field.size();
  const double pitch = field.pitch();
  const double lambda = ctx.wavelength();
  const double z_max = max_safe_distance(n, pitch, lambda);
  if (distance > z_max) {
    std::ostringstream msg;
    msg << "distance " << distance << " m exceeds the band-limited range of a " << n << " x "
        << pitch << " m grid";
    throw AliasingError(msg.str(), z_max);
  }

  ComplexBuffer buf(field.samples().begin(), field.samples().end());
  Fft2d forward(n, buf.data(), FFTW_FORWARD);
  Fft2d backward(n, buf.data(), FFTW_BACKWARD);
  forward.run();

  const double u_lim = band_limit_frequency(distance, field.window(), lambda);
  const double inv_lambda = 1.0 / lambda;
  const double inv_lambda2 = inv_lambda * inv_lambda;
  const double norm = 1.0 / static_cast<double>(n * n);
  const double two_pi_z = 2.0 * std::numbers::pi * distance;
  for (std::size_t j = 0; j < n; ++j) {
    const double fy = frequency(j, n, pitch);
    const bool y_ok = std::abs(fy) <= u_lim;
    for (std::size_t i = 0; i < n; ++i) {
      Complex& s = buf[j * n + i];
      const double fx = frequency(i, n, pitch);
      const double f2 = fx * fx + fy * fy;
      const double arg = inv_lambda2 - f2;
      if (!y_ok || std::abs(fx) > u_lim || arg <= 0.0) {
        s = 0.0;
        continue;
      }
      // kz - z*sqrt(k^2 - kx^2 - ky^2) written without cancellation.
      const double phase = -two_pi_z * f2 / (inv_lambda + std::sqrt(arg));
      s *= std::polar(norm, phase);
    }
  }
  backward.run();
  return {n, pitch, std::move(buf)};
}

ScalarField apply_thin_lens(const ScalarField& field, const WaveContext& ctx, double focal) {
  if (focal == 0.0 || std::isnan(focal)) throw ValidationError("lens focal length must be non-zero");
  if (std::isinf(focal)) return field;
  ScalarField out = field;
  const std::size_t n = field.size();
  const double c = -ctx.k() / (2.0 * focal);
  for (std::size_t j = 0; j < n; ++j) {
    const double y = field.coordinate(j);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = field.coordinate(i);
      out.at(i, j) *= std::polar(1.0, c * (x * x + y * y));
    }
  }
  return out;
}

ScalarField propagate_train(const ScalarField& field, const WaveContext& ctx,
                            const OpticalTrain& train) {
  ScalarField current = field;
  for (std::size_t idx = 0; idx < train.elements.size(); ++idx) {
    const auto& element = train.elements[idx];
    try {
      if (const auto* f = std::get_if<FreeSpace>(&element)) {
        current = propagate(current, ctx, f->distance);
      } else if (const auto* l = std::get_if<ThinLens>(&element)) {
        if (l->aperture_radius) {
          current = apply_mask(current,
                               circular_aperture(*l->aperture_radius, current.size(), current.pitch()));
        }
        current = apply_thin_lens(current, ctx, l->focal);
      } else {
        current = apply_mask(current, std::get<Mask>(element).mask);
      }
    } catch (Error& e) {
      e.prepend("element " + std::to_string(idx) + " (" + describe(element) + ")");
      throw;
    }
  }
  return current;
}

ScalarField oracle_fresnel_direct(const ScalarField& field, const WaveContext& ctx, double distance) {
  const std::size_t n = field.size();
  if (n > 128) throw CostError("direct Fresnel sum is limited to N <= 128 (O(N^4) cost)");
  if (!(distance > 10.0 * ctx.wavelength()))
    throw ValidationError("direct Fresnel sum needs distance > 10 wavelengths");

  // Separable chirp indexed by sample offset d = i - i' in [-(n-1), n-1].
  const double pitch = field.pitch();
  const double c = ctx.k() / (2.0 * distance);
  std::vector<Complex> chirp(2 * n - 1);
  for (std::size_t m = 0; m < chirp.size(); ++m) {
    const double d = (static_cast<double>(m) - static_cast<double>(n - 1)) * pitch;
    chirp[m] = std::polar(1.0, c * d * d);
  }
  const Complex prefactor = pitch * pitch / (Complex(0.0, 1.0) * ctx.wavelength() * distance);

  ScalarField out(n, pitch);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      Complex sum = 0.0;
      for (std::size_t jj = 0; jj < n; ++jj) {
        const Complex ky = chirp[j + n - 1 - jj];
        for (std::size_t ii = 0; ii < n; ++ii) {
          sum += field.at(ii, jj) * chirp[i + n - 1 - ii] * ky;
        }
      }
      out.at(i, j) = prefactor * sum;
    }
  }
  return out;
}

}  // namespace qit
