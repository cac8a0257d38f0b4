#include "qit/field_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qit/errors.hpp"

namespace qit {

void write_pgm(std::ostream& out, std::span<const double> values, std::size_t width,
               std::size_t height) {
  if (values.size() != width * height) throw ValidationError("map size does not match dimensions");
  double peak = 0.0;
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) throw ValidationError("map values must be finite and >= 0");
    peak = std::max(peak, v);
  }
  out << "P5\n" << width << ' ' << height << "\n65535\n";
  std::vector<char> bytes(values.size() * 2);
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double scaled = peak > 0.0 ? values[k] / peak * 65535.0 : 0.0;
    const auto level = static_cast<unsigned>(std::lround(scaled));
    bytes[2 * k] = static_cast<char>((level >> 8) & 0xFF);
    bytes[2 * k + 1] = static_cast<char>(level & 0xFF);
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void write_pgm(std::ostream& out, const ScalarField& field) {
  std::vector<double> intensity;
  intensity.reserve(field.samples().size());
  for (const auto& s : field.samples()) intensity.push_back(std::norm(s));
  write_pgm(out, intensity, field.size(), field.size());
}

void write_field_csv(std::ostream& out, const ScalarField& field) {
  out << "x_m,y_m,re,im\n";
  char line[128];
  for (std::size_t j = 0; j < field.size(); ++j) {
    for (std::size_t i = 0; i < field.size(); ++i) {
      const auto& s = field.at(i, j);
      std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", field.coordinate(i),
                    field.coordinate(j), s.real(), s.imag());
      out << line;
    }
  }
}

ScalarField read_field_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("x_m,y_m,re,im", 0) != 0)
    throw ValidationError("field CSV must start with header x_m,y_m,re,im");
  std::vector<double> xs;
  ComplexBuffer samples;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++row;
    double v[4];
    std::istringstream fields(line);
    std::string cell;
    for (double& value : v) {
      if (!std::getline(fields, cell, ','))
        throw ValidationError("field CSV row " + std::to_string(row) + " has fewer than 4 columns");
      try {
        value = std::stod(cell);
      } catch (const std::exception&) {
        throw ValidationError("field CSV row " + std::to_string(row) + ": bad number '" + cell + "'");
      }
    }
    xs.push_back(v[0]);
    samples.emplace_back(v[2], v[3]);
  }
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(samples.size()))));
  if (n * n != samples.size() || n < 2) throw ValidationError("field CSV is not a square grid");
  // Centre convention: index n/2 sits at 0, so the pitch is x[n/2+1] - x[n/2].
  const double pitch = xs[n / 2 + 1] - xs[n / 2];
  return {n, pitch, std::move(samples)};
}

}  // namespace qit
