#include "qit/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qit/errors.hpp"

namespace qit {

namespace detail {

void* aligned_alloc_bytes(std::size_t bytes) {
  void* p = fftw_malloc(bytes == 0 ? 1 : bytes);
  if (p == nullptr) throw std::bad_alloc();
  return p;
}

void aligned_free(void* p) noexcept { fftw_free(p); }

}  // namespace detail

namespace {

void check_grid(std::size_t n, double pitch) {
  if (n < 16) throw ValidationError("grid size must be at least 16, got " + std::to_string(n));
  if (!(pitch > 0.0) || !std::isfinite(pitch)) throw ValidationError("grid pitch must be positive");
}

}  // namespace

ScalarField::ScalarField(std::size_t n, double pitch) : n_(n), pitch_(pitch) {
  check_grid(n, pitch);
  data_.assign(n * n, Complex{});
}

ScalarField::ScalarField(std::size_t n, double pitch, ComplexBuffer samples)
    : n_(n), pitch_(pitch), data_(std::move(samples)) {
  check_grid(n, pitch);
  if (data_.size() != n * n) throw ValidationError("sample count does not match N*N");
  for (const auto& s : data_) {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
      throw ValidationError("field samples must be finite");
  }
}

Complex ScalarField::interpolate(Vec2 r) const {
  const double half = static_cast<double>(n_ / 2);
  const double fx = r.x / pitch_ + half;
  const double fy = r.y / pitch_ + half;
  const double last = static_cast<double>(n_ - 1);
  if (!(fx >= 0.0 && fx <= last && fy >= 0.0 && fy <= last)) {
    throw OutOfWindowError("point (" + std::to_string(r.x) + ", " + std::to_string(r.y) +
                           ") m lies outside the sampled window");
  }
  auto i0 = std::min(static_cast<std::size_t>(fx), n_ - 2);
  auto j0 = std::min(static_cast<std::size_t>(fy), n_ - 2);
  const double tx = fx - static_cast<double>(i0);
  const double ty = fy - static_cast<double>(j0);
  const Complex a = at(i0, j0) * (1.0 - tx) + at(i0 + 1, j0) * tx;
  const Complex b = at(i0, j0 + 1) * (1.0 - tx) + at(i0 + 1, j0 + 1) * tx;
  return a * (1.0 - ty) + b * ty;
}

bool ScalarField::operator==(const ScalarField& other) const {
  return n_ == other.n_ && pitch_ == other.pitch_ &&
         std::equal(data_.begin(), data_.end(), other.data_.begin(), other.data_.end());
}

WaveContext WaveContext::from_wavelength(double wavelength) {
  if (!(wavelength > 0.0) || !std::isfinite(wavelength))
    throw ValidationError("wavelength must be positive");
  return {2.0 * std::numbers::pi / wavelength, wavelength};
}

WaveContext WaveContext::from_wavenumber(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("wavenumber must be positive");
  return {k, 2.0 * std::numbers::pi / k};
}

TransmissionMask::TransmissionMask(std::size_t n, double pitch, std::vector<double> values)
    : n_(n), pitch_(pitch), values_(std::move(values)) {
  check_grid(n, pitch);
  if (values_.size() != n * n) throw ValidationError("mask sample count does not match N*N");
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("mask transmission must lie in [0, 1]");
  }
}

ScalarField gaussian_beam(double waist, std::size_t n, double pitch) {
  check_grid(n, pitch);
  if (!(waist > 2.0 * pitch)) {
    throw ResolutionError("waist " + std::to_string(waist) + " m is not above two pitches");
  }
  if (!(static_cast<double>(n) * pitch > 6.0 * waist)) {
    auto required = static_cast<std::size_t>(std::floor(6.0 * waist / pitch)) + 1;
    throw SamplingError("window too small for a " + std::to_string(waist) + " m waist", required);
  }
  ScalarField field(n, pitch);
  const double inv_w2 = 1.0 / (waist * waist);
  for (std::size_t j = 0; j < n; ++j) {
    const double y = field.coordinate(j);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = field.coordinate(i);
      field.at(i, j) = std::exp(-(x * x + y * y) * inv_w2);
    }
  }
  return field;
}

ScalarField uniform_field(std::size_t n, double pitch, Complex value) {
  ScalarField field(n, pitch);
  std::fill(field.samples().begin(), field.samples().end(), value);
  return field;
}

TransmissionMask wire_mask(double width, std::size_t n, double pitch) {
  check_grid(n, pitch);
  const double eps = 1e-9 * pitch;
  if (width < 2.0 * pitch - eps) {
    throw ResolutionError("wire width " + std::to_string(width) + " m is below two pitches");
  }
  std::vector<double> values(n * n, 1.0);
  const double half = 0.5 * width;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (static_cast<double>(i) - static_cast<double>(n / 2)) * pitch;
    if (x >= -half - eps && x < half - eps) {
      for (std::size_t j = 0; j < n; ++j) values[j * n + i] = 0.0;
    }
  }
  return {n, pitch, std::move(values)};
}

TransmissionMask circular_aperture(double radius, std::size_t n, double pitch) {
  check_grid(n, pitch);
  if (!(radius > 0.0)) throw ValidationError("aperture radius must be positive");
  std::vector<double> values(n * n, 0.0);
  const double r2 = radius * radius;
  for (std::size_t j = 0; j < n; ++j) {
    const double y = (static_cast<double>(j) - static_cast<double>(n / 2)) * pitch;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = (static_cast<double>(i) - static_cast<double>(n / 2)) * pitch;
      if (x * x + y * y <= r2) values[j * n + i] = 1.0;
    }
  }
  return {n, pitch, std::move(values)};
}

ScalarField apply_mask(const ScalarField& field, const TransmissionMask& mask) {
  if (field.size() != mask.size() || field.pitch() != mask.pitch())
    throw ValidationError("mask grid does not match field grid");
  ScalarField out = field;
  auto s = out.samples();
  auto m = mask.values();
  for (std::size_t k = 0; k < s.size(); ++k) s[k] *= m[k];
  return out;
}

double power(const ScalarField& field) {
  double sum = 0.0;
  for (const auto& s : field.samples()) sum += std::norm(s);
  return sum * field.pitch() * field.pitch();
}

std::vector<Complex> row_slice(const ScalarField& field, std::size_t j) {
  if (j >= field.size()) throw ValidationError("row index out of range");
  std::vector<Complex> out(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) out[i] = field.at(i, j);
  return out;
}

std::vector<Complex> column_slice(const ScalarField& field, std::size_t i) {
  if (i >= field.size()) throw ValidationError("column index out of range");
  std::vector<Complex> out(field.size());
  for (std::size_t j = 0; j < field.size(); ++j) out[j] = field.at(i, j);
  return out;
}

}  // namespace qit
