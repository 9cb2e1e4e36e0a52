#include "starfield/scalar.hpp"

#include <cctype>

#include "starfield/errors.hpp"

namespace starfield {

ParseError::ParseError(const std::string& message, int line, int column, std::string token)
    : Error(message + " at " + std::to_string(line) + ":" + std::to_string(column)
            + (token.empty() ? std::string() : " near '" + token + "'")),
      line_(line), column_(column), token_(std::move(token)) {}

std::string to_string(const Scalar& value) { return value.get_str(); }

Scalar parse_scalar(std::string_view text) {
    std::string s(text);
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    bool seen_slash = false;
    bool digit_before = false;
    bool digit_after = false;
    for (std::size_t i = start; i < s.size(); ++i) {
        if (s[i] == '/' && !seen_slash) {
            seen_slash = true;
        } else if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            (seen_slash ? digit_after : digit_before) = true;
        } else {
            throw ParseError("malformed rational", 1, static_cast<int>(i) + 1, s);
        }
    }
    if (!digit_before || (seen_slash && !digit_after)) {
        throw ParseError("malformed rational", 1, 1, s);
    }
    if (s[0] == '+') {
        s.erase(0, 1);
    }
    Scalar q;
    if (q.set_str(s, 10) != 0) {
        throw ParseError("malformed rational", 1, 1, s);
    }
    if (q.get_den() == 0) {
        throw ParseError("zero denominator", 1, 1, s);
    }
    q.canonicalize();
    return q;
}

Scalar factorial(int n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return Scalar(r);
}

Scalar binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0;
    }
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Scalar(r);
}

} // namespace starfield
