#include "sna/rational.hpp"

#include <cctype>

namespace sna {

std::string to_string(const Rational& r)
{
    std::string num = numerator(r).str();
    if (denominator(r) == 1) return num;
    return num + "/" + denominator(r).str();
}

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text)
{
    if (text.empty()) return std::nullopt;
    bool negative = false;
    if (text.front() == '+' || text.front() == '-') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    if (text.empty()) return std::nullopt;

    Rational value;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto num = text.substr(0, slash);
        auto den = text.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) return std::nullopt;
        BigInt d{std::string(den)};
        if (d == 0) return std::nullopt;
        value = Rational(BigInt{std::string(num)}, d);
    } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
        auto intpart = text.substr(0, dot);
        auto fracpart = text.substr(dot + 1);
        if (!all_digits(intpart) || !all_digits(fracpart)) return std::nullopt;
        BigInt scale = 1;
        for (size_t i = 0; i < fracpart.size(); ++i) scale *= 10;
        BigInt combined = BigInt{std::string(intpart)} * scale + BigInt{std::string(fracpart)};
        value = Rational(combined, scale);
    } else {
        if (!all_digits(text)) return std::nullopt;
        value = Rational(BigInt{std::string(text)});
    }
    return negative ? Rational(-value) : value;
}

}  // namespace sna
