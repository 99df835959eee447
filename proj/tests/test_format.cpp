#include "folkseg/format.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <random>

#include "folkseg/errors.hpp"

namespace folkseg {
namespace {

TEST(FormatTest, NumbersUseShortestRoundTrip) {
  EXPECT_EQ(format_number(3.0), "3");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.3333333333333333");
}

TEST(FormatTest, SecondsKeepThreeDecimals) {
  EXPECT_EQ(format_seconds(10.0), "10.000");
  EXPECT_EQ(format_seconds(20.5), "20.500");
  EXPECT_EQ(format_seconds(0.1234567), "0.1234567");
  EXPECT_EQ(format_seconds(1e-5), "0.00001");
}

TEST(FormatTest, SecondsRoundTripRandomValues) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> dist(0.0, 5000.0);
  for (int i = 0; i < 2000; ++i) {
    const double v = dist(gen);
    EXPECT_EQ(parse_number(format_seconds(v)), v);
  }
}

TEST(FormatTest, CsvQuotesOnlyWhenNeeded) {
  EXPECT_EQ(csv_join({"a", "b,c", "d\"e"}), "a,\"b,c\",\"d\"\"e\"");
  const auto fields = csv_split("a,\"b,c\",\"d\"\"e\",");
  ASSERT_EQ(fields.size(), 4u);
  EXPECT_EQ(fields[1], "b,c");
  EXPECT_EQ(fields[2], "d\"e");
  EXPECT_EQ(fields[3], "");
  EXPECT_THROW(csv_split("\"open"), ParseError);
}

TEST(FormatTest, ParseNumberRejectsJunk) {
  EXPECT_DOUBLE_EQ(parse_number("2.5"), 2.5);
  EXPECT_THROW(parse_number("2.5x"), ParseError);
  EXPECT_THROW(parse_number(""), ParseError);
}

}  // namespace
}  // namespace folkseg
