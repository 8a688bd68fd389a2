#pragma once

#include <array>
#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rectify/errors.hpp"
#include "rectify/format.hpp"
#include "rectify/poly.hpp"

namespace rectify {

enum class FactorKind { Elem, Scale, Permute };

using Triple = std::array<LaurentPoly, 3>;

class FactoredAuto;
FactoredAuto certify_polynomial(const FactoredAuto& a);
FactoredAuto invert(const FactoredAuto& a);

/// Ordered permutation word: the map whose pullback sends x -> word[0],
/// y -> word[1], z -> word[2].
using PermWord = std::array<Var, 3>;

inline std::string to_string(const PermWord& w) { return {var_name(w[0]), var_name(w[1]), var_name(w[2])}; }

/// One invertible generator of an automorphism of affine 3-space.
///
///   Elem(v, a)    v -> v + a, a free of v
///   Scale(v, u)   v -> u*v, u a nonzero rational
///   Permute(w)    x -> w[0], y -> w[1], z -> w[2]
class Factor {
public:
    static Factor elem(Var target, LaurentPoly add) {
        require_space_var(target);
        if (add.involves(target))
            throw Error(ErrorKind::InvalidFactor,
                        std::string("elementary payload involves its target ") + var_name(target) + ": " + format(add));
        if (add.involves(Var::t)) throw Error(ErrorKind::InvalidFactor, "elementary payload involves t");
        Factor f(FactorKind::Elem);
        f.target_ = target;
        f.add_ = std::move(add);
        return f;
    }

    static Factor scale(Var target, Rational unit) {
        require_space_var(target);
        if (unit == 0) throw Error(ErrorKind::InvalidFactor, "scale factor must be nonzero");
        Factor f(FactorKind::Scale);
        f.target_ = target;
        f.unit_ = std::move(unit);
        f.unit_.canonicalize();
        return f;
    }

    static Factor permute(PermWord word) {
        std::array<bool, 3> seen{};
        for (Var v : word) {
            require_space_var(v);
            if (seen[index(v)]) throw Error(ErrorKind::InvalidFactor, "permutation word repeats a variable");
            seen[index(v)] = true;
        }
        Factor f(FactorKind::Permute);
        f.word_ = word;
        return f;
    }

    FactorKind kind() const noexcept { return kind_; }
    Var target() const noexcept { return target_; }
    const LaurentPoly& add() const noexcept { return add_; }
    const Rational& unit() const noexcept { return unit_; }
    const PermWord& word() const noexcept { return word_; }

    /// Pullback of the variable v under this factor.
    LaurentPoly image(Var v) const {
        switch (kind_) {
            case FactorKind::Elem:
                return v == target_ ? LaurentPoly::var(v) + add_ : LaurentPoly::var(v);
            case FactorKind::Scale:
                return v == target_ ? LaurentPoly(unit_, Monomial::of(v, 1)) : LaurentPoly::var(v);
            case FactorKind::Permute:
                return v == Var::t ? LaurentPoly::var(v) : LaurentPoly::var(word_[index(v)]);
        }
        return LaurentPoly::var(v);
    }

    Substitution substitution() const {
        Substitution s;
        switch (kind_) {
            case FactorKind::Elem:
            case FactorKind::Scale:
                s.set(target_, image(target_));
                break;
            case FactorKind::Permute:
                for (Var v : {Var::x, Var::y, Var::z}) s.set(v, image(v));
                break;
        }
        return s;
    }

    Factor inverse() const {
        switch (kind_) {
            case FactorKind::Elem: return elem(target_, -add_);
            case FactorKind::Scale: return scale(target_, 1 / unit_);
            case FactorKind::Permute: {
                PermWord inv{};
                for (Var v : {Var::x, Var::y, Var::z}) inv[index(word_[index(v)])] = v;
                return permute(inv);
            }
        }
        return *this;
    }

    bool has_negative_x() const { return kind_ == FactorKind::Elem && !is_polynomial_in(add_, Var::x); }

    friend bool operator==(const Factor& a, const Factor& b) {
        if (a.kind_ != b.kind_) return false;
        switch (a.kind_) {
            case FactorKind::Elem: return a.target_ == b.target_ && a.add_ == b.add_;
            case FactorKind::Scale: return a.target_ == b.target_ && a.unit_ == b.unit_;
            case FactorKind::Permute: return a.word_ == b.word_;
        }
        return false;
    }

private:
    explicit Factor(FactorKind k) : kind_(k) {}

    static void require_space_var(Var v) {
        if (v == Var::t) throw Error(ErrorKind::InvalidFactor, "factors act on x, y, z only");
    }

    FactorKind kind_;
    Var target_ = Var::x;
    LaurentPoly add_;
    Rational unit_{1};
    PermWord word_{Var::x, Var::y, Var::z};
};

/// Automorphism kept as a list of factors in application order: the first
/// factor acts first on a point of affine 3-space, so [a, b] is the map b∘a
/// and its pullback is a*∘b*.
///
/// `laurent()` is true while some factor has a negative x-power and the
/// composite has not been certified polynomial (see certify_polynomial).
class FactoredAuto {
public:
    FactoredAuto() = default;
    FactoredAuto(std::initializer_list<Factor> factors) : factors_(factors) { recompute_flag(); }
    explicit FactoredAuto(std::vector<Factor> factors) : factors_(std::move(factors)) { recompute_flag(); }

    const std::vector<Factor>& factors() const noexcept { return factors_; }
    bool laurent() const noexcept { return laurent_; }
    bool empty() const noexcept { return factors_.empty(); }
    std::size_t size() const noexcept { return factors_.size(); }

    /// This map followed by `next`.
    FactoredAuto then(const FactoredAuto& next) const {
        FactoredAuto r = *this;
        r.factors_.insert(r.factors_.end(), next.factors_.begin(), next.factors_.end());
        r.laurent_ = laurent_ || next.laurent_;
        return r;
    }

    FactoredAuto then(const Factor& next) const {
        FactoredAuto r = *this;
        r.factors_.push_back(next);
        r.laurent_ = laurent_ || next.has_negative_x();
        return r;
    }

    FactoredAuto prefix(std::size_t n) const {
        return FactoredAuto(std::vector<Factor>(factors_.begin(), factors_.begin() + static_cast<std::ptrdiff_t>(n)));
    }

    friend bool operator==(const FactoredAuto& a, const FactoredAuto& b) { return a.factors_ == b.factors_; }

private:
    friend FactoredAuto certify_polynomial(const FactoredAuto& a);
    friend FactoredAuto invert(const FactoredAuto& a);

    void recompute_flag() {
        laurent_ = false;
        for (const auto& f : factors_) laurent_ = laurent_ || f.has_negative_x();
    }

    std::vector<Factor> factors_;
    bool laurent_ = false;
};

/// (f_k ∘ … ∘ f_1)*(p) = f_1*(… f_k*(p) …).
inline LaurentPoly pullback(const FactoredAuto& a, const LaurentPoly& p) {
    LaurentPoly q = p;
    const auto& fs = a.factors();
    for (auto it = fs.rbegin(); it != fs.rend(); ++it) q = substitute(q, it->substitution());
    return q;
}

inline Triple identity_triple() { return {X(), Y(), Z()}; }

namespace detail {

inline Substitution triple_substitution(const Triple& tr) {
    Substitution s;
    s.set(Var::x, tr[0]).set(Var::y, tr[1]).set(Var::z, tr[2]);
    return s;
}

// Triple of (prefix followed by f) from the triple of the prefix. Only the
// target of an Elem or Scale factor changes.
inline void advance(Triple& cur, const Factor& f) {
    switch (f.kind()) {
        case FactorKind::Elem:
            cur[index(f.target())] += substitute(f.add(), triple_substitution(cur));
            break;
        case FactorKind::Scale:
            cur[index(f.target())] *= LaurentPoly(f.unit());
            break;
        case FactorKind::Permute: {
            Triple next;
            for (Var v : {Var::x, Var::y, Var::z}) next[index(v)] = cur[index(f.word()[index(v)])];
            cur = std::move(next);
            break;
        }
    }
}

// Consecutive Elem factors on one target compose by adding payloads; merging
// them lets one substitution share its power cache.
template <class It>
Triple composite(It first, It last) {
    Triple cur = identity_triple();
    while (first != last) {
        if (first->kind() != FactorKind::Elem) {
            advance(cur, *first++);
            continue;
        }
        const Var target = first->target();
        LaurentPoly add;
        for (; first != last && first->kind() == FactorKind::Elem && first->target() == target; ++first)
            add += first->add();
        if (!add.is_zero()) advance(cur, Factor::elem(target, std::move(add)));
    }
    return cur;
}

// [first, last) of the shortest run holding every factor with a negative
// x-power; first == last when there is none.
inline std::pair<std::size_t, std::size_t> laurent_window(const std::vector<Factor>& fs) {
    std::size_t first = fs.size(), last = 0;
    for (std::size_t i = 0; i < fs.size(); ++i)
        if (fs[i].has_negative_x()) {
            first = std::min(first, i);
            last = i + 1;
        }
    if (first >= last) return {0, 0};
    return {first, last};
}

}  // namespace detail

/// The three coordinate functions of the composite.
inline Triple to_triple(const FactoredAuto& a) { return detail::composite(a.factors().begin(), a.factors().end()); }

/// Reversed list of inverted factors.
inline FactoredAuto invert(const FactoredAuto& a) {
    std::vector<Factor> inv;
    inv.reserve(a.size());
    for (auto it = a.factors().rbegin(); it != a.factors().rend(); ++it) inv.push_back(it->inverse());
    FactoredAuto r(std::move(inv));
    // Certification checked both directions, so the flag carries over.
    r.laurent_ = a.laurent_;
    return r;
}

inline bool is_polynomial_triple(const Triple& tr) {
    for (const auto& c : tr)
        if (!is_polynomial_in(c, Var::x) || c.involves(Var::t)) return false;
    return true;
}

namespace detail {

// A Laurent polynomial in x known exactly below x^prec: every term of the true
// value with x-exponent < prec is in p, and p has no others.
struct Adic {
    LaurentPoly p;
    std::int64_t prec = std::numeric_limits<std::int64_t>::max();
};

constexpr std::int64_t kExact = std::numeric_limits<std::int64_t>::max();

inline std::int64_t sat_add(std::int64_t a, std::int64_t b) { return a == kExact || b == kExact ? kExact : a + b; }

inline Adic adic_truncate(LaurentPoly p, std::int64_t prec, std::int64_t cap) {
    prec = std::min(prec, cap);
    if (prec == kExact) return {std::move(p), prec};
    Adic out{{}, prec};
    for (const auto& [m, c] : p.terms())
        if (m[Var::x] < prec) out.p.add_term(m, c);
    return out;
}

// Lower bound on the x-valuation of the true value.
inline std::int64_t adic_val(const Adic& a) { return a.p.is_zero() ? a.prec : *x_valuation(a.p); }

inline Adic adic_mul(const Adic& a, const Adic& b, std::int64_t cap) {
    std::int64_t prec = std::min(sat_add(adic_val(a), b.prec), sat_add(a.prec, adic_val(b)));
    return adic_truncate(a.p * b.p, prec, cap);
}

// Components of the composite of Elem/Scale factors fixing x, each truncated
// at x^cap with its precision tracked.
template <class It>
std::array<Adic, 3> adic_composite(It first, It last, std::int64_t cap) {
    std::array<Adic, 3> cur{Adic{X()}, Adic{Y()}, Adic{Z()}};
    for (; first != last; ++first) {
        const Factor& f = *first;
        Adic& slot = cur[index(f.target())];
        if (f.kind() == FactorKind::Scale) {
            slot.p *= LaurentPoly(f.unit());
            continue;
        }
        // f is Elem: slot += add(x, cur_y, cur_z), grouping by (ey, ez).
        std::map<std::pair<std::int64_t, std::int64_t>, LaurentPoly> groups;
        for (const auto& [m, c] : f.add().terms())
            groups[{m[Var::y], m[Var::z]}].add_term(m.without(Var::y).without(Var::z), c);
        std::array<std::vector<Adic>, 2> powers{std::vector<Adic>{Adic{LaurentPoly(1)}, cur[1]},
                                                std::vector<Adic>{Adic{LaurentPoly(1)}, cur[2]}};
        auto power = [&](int which, std::int64_t k) -> const Adic& {
            auto& ps = powers[static_cast<std::size_t>(which)];
            while (static_cast<std::int64_t>(ps.size()) <= k) ps.push_back(adic_mul(ps.back(), ps[1], cap));
            return ps[static_cast<std::size_t>(k)];
        };
        Adic sum{{}, kExact};
        for (const auto& [key, part] : groups) {
            Adic term = adic_mul(Adic{part}, adic_mul(power(0, key.first), power(1, key.second), cap), cap);
            sum = adic_truncate(sum.p + term.p, std::min(sum.prec, term.prec), cap);
        }
        slot = adic_truncate(slot.p + sum.p, std::min(slot.prec, sum.prec), cap);
    }
    return cur;
}

}  // namespace detail

/// Whether the composite has coefficients in k[x]. Factors outside the
/// Laurent window are polynomial with polynomial inverses, so only the
/// window's composite matters, and of it only the part below x^0. That part
/// is computed in truncated arithmetic, raising the truncation point until
/// every component is exact below x^0.
inline bool is_polynomial_over_kx(const FactoredAuto& a) {
    auto [i, j] = detail::laurent_window(a.factors());
    if (i == j) return true;
    const auto first = a.factors().begin() + static_cast<std::ptrdiff_t>(i);
    const auto last = a.factors().begin() + static_cast<std::ptrdiff_t>(j);
    bool permutes = std::any_of(first, last, [](const Factor& f) { return f.kind() == FactorKind::Permute; });
    if (!permutes) {
        for (std::int64_t cap = 1; cap <= (std::int64_t{1} << 16); cap *= 2) {
            auto comps = detail::adic_composite(first, last, cap);
            bool exact = std::all_of(comps.begin(), comps.end(), [](const detail::Adic& c) { return c.prec >= 0; });
            if (!exact) continue;
            return std::all_of(comps.begin(), comps.end(),
                               [](const detail::Adic& c) { return is_polynomial_in(c.p, Var::x); });
        }
    }
    return is_polynomial_triple(detail::composite(first, last));
}

/// Clears the laurent flag after checking that both the composite and its
/// inverse have coefficients in k[x]; together they witness an automorphism
/// of k[x,y,z]. Throws ResultNotPolynomial otherwise.
inline FactoredAuto certify_polynomial(const FactoredAuto& a) {
    FactoredAuto r = a;
    if (!a.laurent_) return r;
    if (!is_polynomial_over_kx(a)) throw Error(ErrorKind::ResultNotPolynomial, "composite has negative x-powers");
    std::vector<Factor> inv;
    for (auto it = a.factors().rbegin(); it != a.factors().rend(); ++it) inv.push_back(it->inverse());
    if (!is_polynomial_over_kx(FactoredAuto(std::move(inv))))
        throw Error(ErrorKind::ResultNotPolynomial, "inverse composite has negative x-powers");
    r.laurent_ = false;
    return r;
}

/// Index j such that p is a component of the composite of the first j
/// factors, found by pulling p back through the inverted factors until it
/// becomes a bare variable.
inline std::optional<std::size_t> coordinate_prefix(const FactoredAuto& a, const LaurentPoly& p) {
    auto is_space_var = [](const LaurentPoly& q) {
        return q == X() || q == Y() || q == Z();
    };
    LaurentPoly g = p;
    if (is_space_var(g)) return std::size_t{0};
    std::size_t j = 0;
    for (const auto& f : a.factors()) {
        g = substitute(g, f.inverse().substitution());
        ++j;
        if (is_space_var(g)) return j;
    }
    return std::nullopt;
}

/// Composite triple of every prefix, computed forward: prefix j is f_j's
/// images with x, y, z replaced by prefix j-1.
template <class Visitor>
void for_each_prefix_triple(const FactoredAuto& a, Visitor&& visit) {
    Triple cur = identity_triple();
    visit(std::size_t{0}, static_cast<const Triple&>(cur));
    std::size_t j = 0;
    for (const auto& f : a.factors()) {
        detail::advance(cur, f);
        visit(++j, static_cast<const Triple&>(cur));
    }
}

inline std::string format(const Triple& tr) { return "(" + format(tr[0]) + ", " + format(tr[1]) + ", " + format(tr[2]) + ")"; }

}  // namespace rectify
