#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dlm {

// Words are treated as sequences of Unicode scalar values; Polish diacritics
// count as single symbols. Invalid byte sequences raise Err::NonFiniteValue
// at parse time, so these helpers assume well-formed input.

std::vector<char32_t> utf8_decode(const std::string& text);
std::string utf8_encode(const std::vector<char32_t>& points);
std::string utf8_encode(char32_t point);

/// Number of Unicode scalar values in the string.
std::size_t utf8_length(const std::string& text);

} // namespace dlm
