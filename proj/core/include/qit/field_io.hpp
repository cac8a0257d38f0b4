#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>

#include "qit/field.hpp"

namespace qit {

// Binary PGM (P5), 16-bit big-endian, |a|^2 normalised to the maximum.
// Image row r holds grid row j = r.
void write_pgm(std::ostream& out, const ScalarField& field);
// Same format for an arbitrary non-negative map stored row-major.
void write_pgm(std::ostream& out, std::span<const double> values, std::size_t width,
               std::size_t height);

// CSV with header x_m,y_m,re,im; numbers at 17 significant digits so
// read_field_csv reproduces the field bit for bit.
void write_field_csv(std::ostream& out, const ScalarField& field);
ScalarField read_field_csv(std::istream& in);

}  // namespace qit
