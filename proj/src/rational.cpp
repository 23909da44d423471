#include "dendrodyn/rational.hpp"

#include "dendrodyn/errors.hpp"

#include <cctype>
#include <string>

namespace dendro {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

Rational parse_decimal(std::string_view text) {
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    long exponent = 0;
    if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_text = body.substr(e + 1);
        bool exp_negative = false;
        if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
            exp_negative = exp_text.front() == '-';
            exp_text.remove_prefix(1);
        }
        if (!all_digits(exp_text) || exp_text.size() > 6)
            throw ParseError("malformed exponent in '" + std::string(text) + "'");
        exponent = std::stol(std::string(exp_text));
        if (exp_negative) exponent = -exponent;
        body = body.substr(0, e);
    }
    std::string digits;
    if (auto dot = body.find('.'); dot != std::string_view::npos) {
        std::string_view whole = body.substr(0, dot);
        std::string_view frac = body.substr(dot + 1);
        if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
            (whole.empty() && frac.empty()))
            throw ParseError("malformed number '" + std::string(text) + "'");
        digits = std::string(whole) + std::string(frac);
        exponent -= static_cast<long>(frac.size());
    } else {
        if (!all_digits(body)) throw ParseError("malformed number '" + std::string(text) + "'");
        digits = std::string(body);
    }
    mpz_class numerator(digits.empty() ? "0" : digits, 10);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    Rational result = exponent < 0 ? Rational(numerator, scale) : Rational(numerator * scale, 1);
    result.canonicalize();
    return negative ? Rational(-result) : result;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw ParseError("empty rational");
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        std::string_view num = text.substr(0, slash);
        std::string_view den = text.substr(slash + 1);
        std::string_view num_digits = num;
        if (!num_digits.empty() && (num_digits.front() == '-' || num_digits.front() == '+'))
            num_digits.remove_prefix(1);
        if (!all_digits(num_digits) || !all_digits(den))
            throw ParseError("malformed rational '" + std::string(text) + "'");
        mpz_class n(std::string(num_digits), 10);
        mpz_class d(std::string(den), 10);
        if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
        if (num.front() == '-') n = -n;
        Rational r(n, d);
        r.canonicalize();
        return r;
    }
    return parse_decimal(text);
}

std::string format_rational(const Rational& value) {
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Rational pow10_inverse(unsigned exponent) {
    mpz_class d;
    mpz_ui_pow_ui(d.get_mpz_t(), 10, exponent);
    return Rational(mpz_class(1), d);
}

Rational pow2_inverse(unsigned exponent) {
    mpz_class d;
    mpz_ui_pow_ui(d.get_mpz_t(), 2, exponent);
    return Rational(mpz_class(1), d);
}

Rational power(const Rational& base, unsigned long exponent) {
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
    mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
    return out;
}

}  // namespace dendro
