#pragma once

#include <string>
#include <string_view>

namespace entqp {

// Formats x with 17 significant digits, enough to reproduce any double
// bitwise on re-parse. Locale independent. Throws InternalError on
// non-finite input; file formats carry finite decimals only.
std::string format_real(double x);

void append_real(std::string& out, double x);

// Parses a decimal produced by format_real (or any strtod-style decimal).
// The whole of `text` must be consumed. Returns false on failure.
bool parse_real(std::string_view text, double& out);

} // namespace entqp
