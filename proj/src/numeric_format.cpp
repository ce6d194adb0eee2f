#include "entqp/numeric_format.hpp"

#include "entqp/errors.hpp"

#include <charconv>
#include <cmath>

namespace entqp {

std::string format_real(double x) {
    std::string out;
    append_real(out, x);
    return out;
}

void append_real(std::string& out, double x) {
    if (!std::isfinite(x))
        throw InternalError("non-finite value reached numeric output");
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    out.append(buf, res.ptr);
}

bool parse_real(std::string_view text, double& out) {
    // Tolerate surrounding blanks so CSV fields may be padded.
    size_t b = text.find_first_not_of(" \t");
    if (b == std::string_view::npos)
        return false;
    size_t e = text.find_last_not_of(" \t");
    const char* first = text.data() + b;
    const char* last = text.data() + e + 1;
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

} // namespace entqp
