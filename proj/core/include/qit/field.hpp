#pragma once

#include <complex>
#include <cstddef>
#include <new>
#include <span>
#include <vector>

namespace qit {

using Complex = std::complex<double>;

namespace detail {
void* aligned_alloc_bytes(std::size_t bytes);
void aligned_free(void* p) noexcept;
}  // namespace detail

// SIMD-aligned storage so FFTW picks the same codelets for every field.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  AlignedAllocator() = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}
  T* allocate(std::size_t n) { return static_cast<T*>(detail::aligned_alloc_bytes(n * sizeof(T))); }
  void deallocate(T* p, std::size_t) noexcept { detail::aligned_free(p); }
  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

using ComplexBuffer = std::vector<Complex, AlignedAllocator<Complex>>;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Vec2&) const = default;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }

// Sample (i, j) sits at ((i - N/2) * pitch, (j - N/2) * pitch); i runs along x.
// Storage is row-major in y: samples[j * N + i].
class ScalarField {
 public:
  ScalarField(std::size_t n, double pitch);
  ScalarField(std::size_t n, double pitch, ComplexBuffer samples);

  std::size_t size() const { return n_; }
  double pitch() const { return pitch_; }
  double window() const { return static_cast<double>(n_) * pitch_; }
  double coordinate(std::size_t i) const {
    return (static_cast<double>(i) - static_cast<double>(n_ / 2)) * pitch_;
  }

  Complex& at(std::size_t i, std::size_t j) { return data_[j * n_ + i]; }
  const Complex& at(std::size_t i, std::size_t j) const { return data_[j * n_ + i]; }

  std::span<Complex> samples() { return data_; }
  std::span<const Complex> samples() const { return data_; }

  // Bilinear interpolation of the complex amplitude at a transverse point.
  // Throws OutOfWindowError outside the sampled square.
  Complex interpolate(Vec2 r) const;

  bool operator==(const ScalarField& other) const;

 private:
  std::size_t n_;
  double pitch_;
  ComplexBuffer data_;
};

class WaveContext {
 public:
  static WaveContext from_wavelength(double wavelength);
  static WaveContext from_wavenumber(double k);

  double k() const { return k_; }
  double wavelength() const { return wavelength_; }

 private:
  WaveContext(double k, double wavelength) : k_(k), wavelength_(wavelength) {}
  double k_;
  double wavelength_;
};

class TransmissionMask {
 public:
  TransmissionMask(std::size_t n, double pitch, std::vector<double> values);

  std::size_t size() const { return n_; }
  double pitch() const { return pitch_; }
  double at(std::size_t i, std::size_t j) const { return values_[j * n_ + i]; }
  std::span<const double> values() const { return values_; }

  bool operator==(const TransmissionMask&) const = default;

 private:
  std::size_t n_;
  double pitch_;
  std::vector<double> values_;
};

ScalarField gaussian_beam(double waist, std::size_t n, double pitch);
ScalarField uniform_field(std::size_t n, double pitch, Complex value = 1.0);

// Opaque vertical band -w/2 <= x < w/2 (half-open, so the band holds
// exactly round(w / pitch) columns).
TransmissionMask wire_mask(double width, std::size_t n, double pitch);
// Clear disk rho <= radius.
TransmissionMask circular_aperture(double radius, std::size_t n, double pitch);

ScalarField apply_mask(const ScalarField& field, const TransmissionMask& mask);

double power(const ScalarField& field);

// Cuts through the grid centre.
std::vector<Complex> row_slice(const ScalarField& field, std::size_t j);
std::vector<Complex> column_slice(const ScalarField& field, std::size_t i);

}  // namespace qit
