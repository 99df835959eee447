#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace folkseg {

/// Shortest decimal text that parses back to exactly `value`.
/// Integral values print without a fraction ("3"); non-finite values print
/// as "nan", "inf", "-inf".
std::string format_number(double value);

/// Fixed-point text with at least three fractional digits that parses back
/// to exactly `value` ("10.000", "20.5" -> "20.500", "0.1234567").
std::string format_seconds(double value);

/// Joins fields into one CSV record (no line terminator). Fields containing
/// a comma, quote or newline are quoted.
std::string csv_join(const std::vector<std::string>& fields);

/// Splits one CSV record. Handles quoted fields; throws ParseError on an
/// unterminated quote.
std::vector<std::string> csv_split(std::string_view line);

/// Strict double parse of a full field; throws ParseError on trailing junk.
double parse_number(std::string_view text);

}  // namespace folkseg
