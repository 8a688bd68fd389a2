#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "rectify/errors.hpp"
#include "rectify/poly.hpp"

namespace rectify {

/// Canonical text: terms in lexicographically descending (ex, ey, ez, et)
/// order, e.g. "x*z + 3/2 - 1/2*x^-2*z^3". Negative exponents are written
/// inline ("t^-4"), which the parser accepts for x and t.
inline std::string format(const LaurentPoly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        bool negative = c < 0;
        Rational mag = negative ? Rational(-c) : c;
        if (first) {
            if (negative) out += '-';
        } else {
            out += negative ? " - " : " + ";
        }
        first = false;

        std::string vars;
        for (Var v : kAllVars) {
            std::int64_t e = m[v];
            if (e == 0) continue;
            if (!vars.empty()) vars += '*';
            vars += var_name(v);
            if (e != 1) vars += '^' + std::to_string(e);
        }
        if (vars.empty()) {
            out += to_string(mag);
        } else {
            if (mag != 1) out += to_string(mag) + '*';
            out += vars;
        }
    }
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const LaurentPoly& p) { return os << format(p); }

namespace detail {

// Recursive-descent parser for
//   expr     := ['-'] term { ('+'|'-') term }
//   term     := factor { ['*'] factor } { '/' monom }
//   factor   := rational | var ['^' integer] | '(' expr ')'
//   monom    := var ['^' positive-integer]
//   rational := integer ['/' positive-integer]
class PolyParser {
public:
    explicit PolyParser(std::string_view text) : s_(text) {}

    LaurentPoly parse_all() {
        LaurentPoly p = expr();
        skip_ws();
        if (pos_ != s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    std::optional<char> peek() {
        skip_ws();
        if (pos_ >= s_.size()) return std::nullopt;
        return s_[pos_];
    }

    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static bool is_var(char c) { return c == 'x' || c == 'y' || c == 'z' || c == 't'; }
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }

    static Var to_var(char c) {
        switch (c) {
            case 'x': return Var::x;
            case 'y': return Var::y;
            case 'z': return Var::z;
            default: return Var::t;
        }
    }

    std::string digits() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
        if (start == pos_) fail("expected integer");
        return std::string(s_.substr(start, pos_ - start));
    }

    std::int64_t small_integer(bool allow_sign) {
        bool neg = allow_sign && accept('-');
        std::size_t at = pos_;
        std::string d = digits();
        Integer v(d);
        if (neg) v = -v;
        if (!v.fits_slong_p()) throw ParseError("exponent out of range", at);
        return v.get_si();
    }

    LaurentPoly expr() {
        bool negate = accept('-');
        LaurentPoly acc = term();
        if (negate) acc = -acc;
        while (true) {
            if (accept('+')) {
                acc += term();
            } else if (accept('-')) {
                acc -= term();
            } else {
                break;
            }
        }
        return acc;
    }

    bool starts_factor() {
        auto c = peek();
        return c && (is_digit(*c) || is_var(*c) || *c == '(');
    }

    LaurentPoly term() {
        LaurentPoly acc = factor();
        while (true) {
            if (accept('*')) {
                acc *= factor();
            } else if (starts_factor()) {
                acc *= factor();
            } else {
                break;
            }
        }
        while (accept('/')) {
            auto c = peek();
            if (!c || !is_var(*c)) fail("division is only allowed by a monomial in x or t");
            Var v = to_var(*c);
            if (!is_laurent(v)) fail(std::string("division by non-Laurent variable '") + *c + "'");
            ++pos_;
            std::int64_t e = 1;
            if (accept('^')) {
                e = small_integer(false);
                if (e <= 0) fail("divisor exponent must be positive");
            }
            acc = acc.shifted(Monomial::of(v, -e));
        }
        return acc;
    }

    LaurentPoly factor() {
        auto c = peek();
        if (!c) fail("unexpected end of input");
        if (*c == '(') {
            ++pos_;
            LaurentPoly inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (is_var(*c)) {
            Var v = to_var(*c);
            ++pos_;
            std::int64_t e = 1;
            if (accept('^')) {
                std::size_t at = pos_;
                e = small_integer(true);
                if (e < 0 && !is_laurent(v))
                    throw ParseError(std::string("negative exponent on non-Laurent variable '") + *c + "'", at);
            }
            return LaurentPoly::var(v, e);
        }
        if (is_digit(*c)) {
            Integer num(digits());
            // A '/' followed by digits belongs to the rational; followed by a
            // variable it is a monomial division handled by term().
            std::size_t save = pos_;
            if (accept('/')) {
                auto d = peek();
                if (d && is_digit(*d)) {
                    std::size_t at = pos_;
                    Integer den(digits());
                    if (den == 0) throw ParseError("zero denominator", at);
                    Rational q(num, den);
                    q.canonicalize();
                    return LaurentPoly(q);
                }
                pos_ = save;
            }
            return LaurentPoly(Rational(num));
        }
        fail(std::string("unexpected '") + *c + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline LaurentPoly parse(std::string_view text) { return detail::PolyParser(text).parse_all(); }

}  // namespace rectify
