#include "fcrystal/rational.hpp"

#include "fcrystal/errors.hpp"

#include <charconv>

namespace fcrystal {

namespace {

std::int64_t parse_int(std::string_view s, const std::string& full) {
    std::int64_t v = 0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc() || ptr != end) throw ParseError("not a rational number: '" + full + "'");
    return v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(parse_int(text, text));
    const std::int64_t num = parse_int(std::string_view(text).substr(0, slash), text);
    const std::int64_t den = parse_int(std::string_view(text).substr(slash + 1), text);
    if (den == 0) throw ParseError("zero denominator in '" + text + "'");
    return Rational(num, den);
}

}  // namespace fcrystal
