#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "rectify/errors.hpp"

namespace rectify {

// GMP keeps mpq_class canonical (positive denominator, reduced, zero is 0/1)
// across arithmetic. Construction from strings or from a (num, den) pair
// does not reduce, so those paths canonicalize explicitly.
using Rational = mpq_class;
using Integer = mpz_class;

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Parses "p" or "p/q" with optional leading '-'. q must be positive.
inline Rational rational_from_string(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw ParseError("empty rational", 0);
    std::size_t i = (s[0] == '-') ? 1 : 0;
    std::size_t slash = s.find('/');
    auto all_digits = [&](std::size_t from, std::size_t to) {
        if (from >= to) return false;
        for (std::size_t k = from; k < to; ++k)
            if (s[k] < '0' || s[k] > '9') return false;
        return true;
    };
    if (slash == std::string::npos) {
        if (!all_digits(i, s.size())) throw ParseError("malformed rational '" + s + "'", 0);
        return Rational(Integer(s));
    }
    if (!all_digits(i, slash) || !all_digits(slash + 1, s.size()))
        throw ParseError("malformed rational '" + s + "'", 0);
    Integer num(s.substr(0, slash));
    Integer den(s.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + s + "'", slash + 1);
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// q^e for any integer e; q must be nonzero when e < 0.
inline Rational pow(const Rational& q, std::int64_t e) {
    if (e < 0) {
        if (q == 0) throw Error(ErrorKind::NegativePower, "zero raised to a negative power");
        Rational inv = 1 / q;
        return pow(inv, -e);
    }
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(e));
    return Rational(num, den);
}

inline Integer binomial(unsigned long n, unsigned long k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

}  // namespace rectify
