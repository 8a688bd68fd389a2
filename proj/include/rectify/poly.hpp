#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rectify/errors.hpp"
#include "rectify/rational.hpp"

namespace rectify {

/// Fixed alphabet. x and t are Laurent variables, y and z are not.
enum class Var : std::uint8_t { x = 0, y = 1, z = 2, t = 3 };

inline constexpr std::array<Var, 4> kAllVars{Var::x, Var::y, Var::z, Var::t};

constexpr std::size_t index(Var v) noexcept { return static_cast<std::size_t>(v); }
constexpr bool is_laurent(Var v) noexcept { return v == Var::x || v == Var::t; }
constexpr char var_name(Var v) noexcept { return "xyzt"[index(v)]; }

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorKind::ExponentOverflow, "exponent sum overflows");
    return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorKind::ExponentOverflow, "exponent product overflows");
    return r;
}

}  // namespace detail

/// Exponent vector (ex, ey, ez, et). ey and ez are never negative.
class Monomial {
public:
    constexpr Monomial() = default;

    Monomial(std::int64_t ex, std::int64_t ey, std::int64_t ez, std::int64_t et) : e_{ex, ey, ez, et} {
        check();
    }

    static Monomial of(Var v, std::int64_t power) {
        Monomial m;
        m.e_[index(v)] = power;
        m.check();
        return m;
    }

    std::int64_t operator[](Var v) const noexcept { return e_[index(v)]; }
    const std::array<std::int64_t, 4>& exponents() const noexcept { return e_; }

    bool is_one() const noexcept { return e_ == std::array<std::int64_t, 4>{}; }

    Monomial operator*(const Monomial& o) const {
        Monomial r;
        for (std::size_t i = 0; i < 4; ++i) r.e_[i] = detail::checked_add(e_[i], o.e_[i]);
        return r;
    }

    Monomial pow(std::int64_t k) const {
        Monomial r;
        for (std::size_t i = 0; i < 4; ++i) r.e_[i] = detail::checked_mul(e_[i], k);
        r.check();
        return r;
    }

    /// Replaces the exponent of v with zero.
    Monomial without(Var v) const noexcept {
        Monomial r = *this;
        r.e_[index(v)] = 0;
        return r;
    }

    friend auto operator<=>(const Monomial&, const Monomial&) = default;

private:
    void check() const {
        if (e_[index(Var::y)] < 0 || e_[index(Var::z)] < 0)
            throw Error(ErrorKind::NegativePower, "y and z may not carry negative exponents");
    }

    std::array<std::int64_t, 4> e_{};
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        for (std::int64_t e : m.exponents()) h = (h ^ static_cast<std::uint64_t>(e)) * 1099511628211ull;
        return static_cast<std::size_t>(h);
    }
};

/// Sparse polynomial over Q in x, y, z, t, Laurent in x and t.
///
/// Terms are kept in canonical order (lexicographically descending on
/// (ex, ey, ez, et)) and zero coefficients are never stored, so two equal
/// polynomials always have identical term maps.
class LaurentPoly {
    // GMP arithmetic assumes canonical operands, but mpq_class(num, den)
    // does not reduce. Coefficients from callers pass through here.
    static Rational canonical(const Rational& c) {
        Rational q = c;
        if (q.get_den() != 1) q.canonicalize();
        return q;
    }

public:
    using Terms = std::map<Monomial, Rational, std::greater<>>;

    LaurentPoly() = default;
    LaurentPoly(long c) : LaurentPoly(Rational(c)) {}
    LaurentPoly(const Rational& c) {
        if (c != 0) terms_.emplace(Monomial{}, canonical(c));
    }
    LaurentPoly(const Rational& c, const Monomial& m) {
        if (c != 0) terms_.emplace(m, canonical(c));
    }

    static LaurentPoly var(Var v, std::int64_t power = 1) { return {Rational(1), Monomial::of(v, power)}; }

    const Terms& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_monomial() const noexcept { return terms_.size() == 1; }

    bool is_constant() const noexcept {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
    }

    /// Constant term coefficient.
    Rational constant() const {
        auto it = terms_.find(Monomial{});
        return it == terms_.end() ? Rational(0) : it->second;
    }

    /// Coefficient of an exact monomial, zero if absent.
    Rational coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    bool involves(Var v) const noexcept {
        return std::any_of(terms_.begin(), terms_.end(), [v](const auto& kv) { return kv.first[v] != 0; });
    }

    bool involves_only(std::initializer_list<Var> allowed) const noexcept {
        for (Var v : kAllVars) {
            if (std::find(allowed.begin(), allowed.end(), v) != allowed.end()) continue;
            if (involves(v)) return false;
        }
        return true;
    }

    std::optional<std::int64_t> min_exponent(Var v) const noexcept {
        std::optional<std::int64_t> r;
        for (const auto& [m, c] : terms_)
            if (!r || m[v] < *r) r = m[v];
        return r;
    }

    std::optional<std::int64_t> max_exponent(Var v) const noexcept {
        std::optional<std::int64_t> r;
        for (const auto& [m, c] : terms_)
            if (!r || m[v] > *r) r = m[v];
        return r;
    }

    void add_term(const Monomial& m, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(m, canonical(c));
        if (!inserted) {
            it->second += canonical(c);
            if (it->second == 0) terms_.erase(it);
        }
    }

    LaurentPoly operator-() const {
        LaurentPoly r = *this;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    LaurentPoly& operator+=(const LaurentPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }

    LaurentPoly& operator-=(const LaurentPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }

    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }

    // Integer numerators over a common denominator, accumulated by hash: one
    // canonicalization per output term instead of a gcd per product.
    static LaurentPoly detail_multiply(const LaurentPoly& a, const LaurentPoly& b) {
        auto numerators = [](const LaurentPoly& p, Integer& den) {
            den = 1;
            for (const auto& [m, c] : p.terms_) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
            std::vector<std::pair<Monomial, Integer>> out;
            out.reserve(p.size());
            for (const auto& [m, c] : p.terms_) out.emplace_back(m, c.get_num() * (den / c.get_den()));
            return out;
        };
        Integer da, db;
        auto na = numerators(a, da);
        auto nb = numerators(b, db);
        std::unordered_map<Monomial, Integer, MonomialHash> acc;
        acc.reserve(na.size() * nb.size());
        for (const auto& [am, ac] : na)
            for (const auto& [bm, bc] : nb) {
                Integer& slot = acc[am * bm];
                mpz_addmul(slot.get_mpz_t(), ac.get_mpz_t(), bc.get_mpz_t());
            }
        std::vector<std::pair<Monomial, Integer>> sorted;
        sorted.reserve(acc.size());
        for (auto& [m, c] : acc)
            if (c != 0) sorted.emplace_back(m, std::move(c));
        std::sort(sorted.begin(), sorted.end(), [](const auto& l, const auto& r) { return l.first > r.first; });
        const Integer den = da * db;
        LaurentPoly r;
        for (auto& [m, c] : sorted) {
            Rational q(c, den);
            q.canonicalize();
            r.terms_.emplace_hint(r.terms_.end(), m, std::move(q));
        }
        return r;
    }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        if (a.size() > b.size()) return b * a;
        LaurentPoly r;
        if (a.is_zero() || b.is_zero()) return r;
        if (a.is_monomial()) {
            const auto& [am, ac] = *a.terms_.begin();
            for (const auto& [bm, bc] : b.terms_) r.terms_.emplace_hint(r.terms_.end(), am * bm, ac * bc);
            return r;
        }
        return detail_multiply(a, b);
    }

    /// Scalar multiple.
    LaurentPoly scaled(const Rational& s) const {
        if (s == 0) return {};
        const Rational k = canonical(s);
        LaurentPoly r = *this;
        for (auto& [m, c] : r.terms_) c *= k;
        return r;
    }

    /// Multiplies by a single monomial (a shift of every exponent vector).
    LaurentPoly shifted(const Monomial& m) const {
        LaurentPoly r;
        for (const auto& [tm, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), tm * m, c);
        return r;
    }

    /// Integer power. Negative exponents are allowed only for monomials whose
    /// variables are all Laurent.
    LaurentPoly pow(std::int64_t k) const {
        if (k < 0) {
            if (!is_monomial())
                throw Error(ErrorKind::NegativePower, "negative power of a non-monomial");
            const auto& [m, c] = *terms_.begin();
            return {rectify::pow(c, k), m.pow(k)};
        }
        if (is_monomial()) {
            const auto& [m, c] = *terms_.begin();
            return {rectify::pow(c, k), m.pow(k)};
        }
        LaurentPoly result(1);
        LaurentPoly base = *this;
        while (k > 0) {
            if (k & 1) result *= base;
            k >>= 1;
            if (k > 0) base *= base;
        }
        return result;
    }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }

private:
    Terms terms_;
};

inline LaurentPoly operator+(const LaurentPoly& a, long b) { return a + LaurentPoly(b); }
inline LaurentPoly operator-(const LaurentPoly& a, long b) { return a - LaurentPoly(b); }
inline LaurentPoly operator*(long a, const LaurentPoly& b) { return b.scaled(Rational(a)); }
inline LaurentPoly operator*(const Rational& a, const LaurentPoly& b) { return b.scaled(a); }

/// Shorthand constructors used throughout the recipes.
inline LaurentPoly X(std::int64_t p = 1) { return LaurentPoly::var(Var::x, p); }
inline LaurentPoly Y(std::int64_t p = 1) { return LaurentPoly::var(Var::y, p); }
inline LaurentPoly Z(std::int64_t p = 1) { return LaurentPoly::var(Var::z, p); }
inline LaurentPoly T(std::int64_t p = 1) { return LaurentPoly::var(Var::t, p); }

/// Images for a ring homomorphism; variables left empty map to themselves.
class Substitution {
public:
    Substitution() = default;
    Substitution(std::initializer_list<std::pair<Var, LaurentPoly>> images) {
        for (const auto& [v, p] : images) set(v, p);
    }

    Substitution& set(Var v, LaurentPoly image) {
        images_[index(v)] = std::move(image);
        return *this;
    }

    const std::optional<LaurentPoly>& operator[](Var v) const noexcept { return images_[index(v)]; }

private:
    std::array<std::optional<LaurentPoly>, 4> images_;
};

namespace detail {

// Power table of a single image polynomial, grown on demand.
class PowerCache {
public:
    explicit PowerCache(const LaurentPoly& base) : powers_{LaurentPoly(1), base} {}

    const LaurentPoly& get(std::int64_t k) {
        while (static_cast<std::int64_t>(powers_.size()) <= k) powers_.push_back(powers_.back() * powers_[1]);
        return powers_[static_cast<std::size_t>(k)];
    }

private:
    std::vector<LaurentPoly> powers_;
};

}  // namespace detail

/// Image of p under the homomorphism sending each variable to its image.
///
/// Negative powers of v are sent to the formal inverse of v's image, so an
/// image must be a single term in Laurent variables wherever p carries a
/// negative exponent of v.
inline LaurentPoly substitute(const LaurentPoly& p, const Substitution& sub) {
    struct MonoImage {
        Rational coeff;
        Monomial mono;
    };
    std::array<std::optional<MonoImage>, 4> mono;  // set for single-term images
    std::array<const LaurentPoly*, 4> general{};   // set for multi-term images
    LaurentPoly zero;
    for (Var v : kAllVars) {
        const auto& img = sub[v];
        if (!img) {
            mono[index(v)] = MonoImage{Rational(1), Monomial::of(v, 1)};
        } else if (img->is_monomial()) {
            const auto& [m, c] = *img->terms().begin();
            mono[index(v)] = MonoImage{c, m};
        } else {
            general[index(v)] = img->is_zero() ? &zero : &*img;
        }
    }

    for (Var v : kAllVars) {
        auto lo = p.min_exponent(v);
        if (!lo || *lo >= 0) continue;
        const auto& mi = mono[index(v)];
        if (!mi || mi->mono[Var::y] != 0 || mi->mono[Var::z] != 0)
            throw Error(ErrorKind::NonMonomialSubstitution,
                        std::string("negative power of ") + var_name(v) + " needs an invertible monomial image");
    }

    // Group terms by the exponents of variables with multi-term images; the
    // remaining variables only shift exponent vectors.
    std::map<std::array<std::int64_t, 4>, LaurentPoly> groups;
    for (const auto& [m, c] : p.terms()) {
        std::array<std::int64_t, 4> key{};
        Rational coeff = c;
        Monomial shifted;
        for (Var v : kAllVars) {
            std::int64_t e = m[v];
            if (e == 0) continue;
            if (general[index(v)]) {
                key[index(v)] = e;
            } else {
                const auto& mi = *mono[index(v)];
                coeff *= rectify::pow(mi.coeff, e);
                shifted = shifted * mi.mono.pow(e);
            }
        }
        groups[key].add_term(shifted, coeff);
    }

    std::array<std::optional<detail::PowerCache>, 4> caches;
    for (Var v : kAllVars)
        if (general[index(v)]) caches[index(v)].emplace(*general[index(v)]);

    LaurentPoly result;
    for (auto& [key, part] : groups) {
        LaurentPoly term = std::move(part);
        for (Var v : kAllVars)
            if (key[index(v)] != 0) term = term * caches[index(v)]->get(key[index(v)]);
        result += term;
    }
    return result;
}

/// Splits p into the terms with negative x-exponent and the rest.
inline std::pair<LaurentPoly, LaurentPoly> split_by_x_sign(const LaurentPoly& p) {
    LaurentPoly neg, nonneg;
    for (const auto& [m, c] : p.terms()) (m[Var::x] < 0 ? neg : nonneg).add_term(m, c);
    return {neg, nonneg};
}

/// Minimum x-exponent; std::nullopt stands for +infinity (the zero polynomial).
inline std::optional<std::int64_t> x_valuation(const LaurentPoly& p) { return p.min_exponent(Var::x); }

/// True when no term has a negative exponent of v.
inline bool is_polynomial_in(const LaurentPoly& p, Var v) {
    auto lo = p.min_exponent(v);
    return !lo || *lo >= 0;
}

}  // namespace rectify
