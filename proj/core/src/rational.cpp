#include "robustiso/rational.hpp"

#include "robustiso/errors.hpp"

#include <cctype>
#include <cmath>

namespace robustiso {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    Rational result;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto num = body.substr(0, slash);
        auto den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) throw ParseError(0, "malformed rational '" + std::string(text) + "'");
        mpz_class d(std::string(den), 10);
        if (d == 0) throw ParseError(0, "zero denominator in '" + std::string(text) + "'");
        result = Rational(mpz_class(std::string(num), 10), d);
        result.canonicalize();
    } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
        auto whole = body.substr(0, dot);
        auto frac = body.substr(dot + 1);
        if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)))
            throw ParseError(0, "malformed decimal '" + std::string(text) + "'");
        std::string digits = std::string(whole) + std::string(frac);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
        result = Rational(mpz_class(digits.empty() ? "0" : digits, 10), den);
        result.canonicalize();
    } else {
        if (!all_digits(body)) throw ParseError(0, "malformed number '" + std::string(text) + "'");
        result = Rational(mpz_class(std::string(body), 10));
    }
    return negative ? Rational(-result) : result;
}

std::string to_string(const Rational& value) { return value.get_str(); }

mpz_class floor(const Rational& value) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
    return q;
}

mpz_class ceil(const Rational& value) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
    return q;
}

double to_double(const Rational& value) { return value.get_d(); }

Rational from_double(double value) {
    if (!std::isfinite(value)) throw InvalidArgument("cannot convert non-finite double to rational");
    Rational r;
    mpq_set_d(r.get_mpq_t(), value);
    return r;
}

}  // namespace robustiso
