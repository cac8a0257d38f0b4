#include <gtest/gtest.h>

#include <sstream>

#include "qit/errors.hpp"
#include "qit/field_io.hpp"

using namespace qit;

TEST(FieldCsv, RoundTripIsBitExact) {
  auto f = gaussian_beam(0.08e-3, 32, 17e-6);
  for (std::size_t k = 0; k < f.samples().size(); ++k) f.samples()[k] *= std::polar(1.0, 0.1 * k);
  std::stringstream s;
  write_field_csv(s, f);
  const auto g = read_field_csv(s);
  EXPECT_EQ(g, f);
}

TEST(FieldCsv, HeaderAndRowCount) {
  std::stringstream s;
  write_field_csv(s, ScalarField(16, 1e-5));
  std::string line;
  std::getline(s, line);
  EXPECT_EQ(line, "x_m,y_m,re,im");
  int rows = 0;
  while (std::getline(s, line)) ++rows;
  EXPECT_EQ(rows, 256);
}

TEST(FieldCsv, MalformedInputRejected) {
  std::stringstream bad("a,b\n1,2\n");
  EXPECT_THROW(read_field_csv(bad), ValidationError);
}

TEST(Pgm, SixteenBitNormalisedToMaximum) {
  ScalarField f(16, 1e-5);
  f.at(3, 2) = Complex(0.0, 2.0);
  f.at(4, 2) = 1.0;
  std::stringstream s;
  write_pgm(s, f);
  const std::string data = s.str();
  const std::string header = "P5\n16 16\n65535\n";
  ASSERT_EQ(data.substr(0, header.size()), header);
  ASSERT_EQ(data.size(), header.size() + 16 * 16 * 2);
  auto level = [&](std::size_t i, std::size_t j) {
    const std::size_t off = header.size() + 2 * (j * 16 + i);
    return (static_cast<unsigned char>(data[off]) << 8) | static_cast<unsigned char>(data[off + 1]);
  };
  EXPECT_EQ(level(3, 2), 65535);
  EXPECT_EQ(level(4, 2), 16384);  // |1|^2 / |2i|^2 = 1/4
  EXPECT_EQ(level(0, 0), 0);
}
