#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rectify/automorphism.hpp"
#include "rectify/embedding.hpp"
#include "rectify/errors.hpp"
#include "rectify/format.hpp"
#include "rectify/poly.hpp"
#include "rectify/residual.hpp"

namespace rectify {

// ---------------------------------------------------------------------------
// Combinatorial coefficients
// ---------------------------------------------------------------------------

/// Coefficients with  sum_i alphas[i] s^i (1+s)^(m-2i) = 1 + beta*[m even]*s^(m/2) + s^m.
/// `beta` is zero for odd m.
struct CombCoeffs {
    int m = 0;
    std::vector<Rational> alphas;
    Rational beta;
};

/// Left side minus right side of the CombCoeffs identity, as a polynomial in t
/// standing for s. Zero exactly when the identity holds.
inline LaurentPoly comb_identity_defect(const CombCoeffs& cc) {
    const LaurentPoly s = T();
    const LaurentPoly one_plus_s = s + 1;
    LaurentPoly lhs;
    for (std::size_t i = 0; i < cc.alphas.size(); ++i)
        lhs += cc.alphas[i] * (s.pow(static_cast<std::int64_t>(i)) * one_plus_s.pow(cc.m - 2 * static_cast<int>(i)));
    LaurentPoly rhs = LaurentPoly(1) + s.pow(cc.m);
    if (cc.m % 2 == 0) rhs += cc.beta * s.pow(cc.m / 2);
    return lhs - rhs;
}

/// Builds the coefficients for every m' <= m by the double recursion on
/// parity: expand (1+s)^m, pair the symmetric binomial terms
/// C(m,j) s^j (1 + s^(m-2j)), and rewrite each 1 + s^(m-2j) with the
/// coefficients already found for m-2j. For even m the middle binomial and
/// the inner middle terms collect into beta.
inline CombCoeffs combinatorial_coeffs(int m) {
    if (m < 1) throw Error(ErrorKind::PreconditionViolated, "combinatorial_coeffs needs m >= 1");
    std::vector<CombCoeffs> table(static_cast<std::size_t>(m) + 1);
    for (int mm = 1; mm <= m; ++mm) {
        CombCoeffs& cur = table[static_cast<std::size_t>(mm)];
        cur.m = mm;
        const int k = mm / 2;
        cur.alphas.assign(static_cast<std::size_t>(k) + 1, Rational(0));
        cur.alphas[0] = 1;
        for (int r = 1; r <= k; ++r) {
            Rational acc = 0;
            for (int j = 1; j <= r && mm - 2 * j >= 1; ++j)
                acc += Rational(binomial(mm, j)) * table[static_cast<std::size_t>(mm - 2 * j)].alphas[r - j];
            cur.alphas[r] = -acc;
        }
        if (mm % 2 == 0) {
            Rational beta = Rational(binomial(mm, k));
            // The inner identity for m-2j carries +beta' s^(k-j) on the right,
            // so 1 + s^(m-2j) contributes -beta' s^(k-j) after expansion.
            for (int j = 1; j <= k - 1; ++j)
                beta -= Rational(binomial(mm, j)) * table[static_cast<std::size_t>(mm - 2 * j)].beta;
            cur.beta = beta;
        }
    }
    CombCoeffs out = table[static_cast<std::size_t>(m)];
    if (!comb_identity_defect(out).is_zero())
        throw Error(ErrorKind::VerificationFailed, "combinatorial identity fails for m = " + std::to_string(m));
    return out;
}

// ---------------------------------------------------------------------------
// Polynomials in x, z hitting t^r + t^((bn-1)r)
// ---------------------------------------------------------------------------

/// p in k[x, z] with p(t^n, t + t^(bn-1)) = t^r + t^((bn-1)r).
///
/// p = sum_i alpha_i x^(bi) z^(r-2i) - beta*[r even]*x^(br/2), with alpha, beta
/// from combinatorial_coeffs(r) and s = t^(bn-2). Requires bn >= 2.
inline LaurentPoly lemma_cd_poly(std::int64_t n, std::int64_t b, std::int64_t r) {
    if (n < 1 || b < 1 || r < 1) throw Error(ErrorKind::PreconditionViolated, "lemma_cd_poly needs n, b, r >= 1");
    if (b * n < 2) throw Error(ErrorKind::PreconditionViolated, "lemma_cd_poly needs bn >= 2");
    CombCoeffs cc = combinatorial_coeffs(static_cast<int>(r));
    LaurentPoly p;
    for (std::size_t i = 0; i < cc.alphas.size(); ++i) {
        auto ii = static_cast<std::int64_t>(i);
        p += cc.alphas[i] * (X(b * ii) * Z(r - 2 * ii));
    }
    if (r % 2 == 0) p -= cc.beta * X(b * r / 2);

    LaurentPoly image = substitute(p, Substitution{{Var::x, T(n)}, {Var::z, T() + T(b * n - 1)}});
    if (image != T(r) + T((b * n - 1) * r))
        throw Error(ErrorKind::VerificationFailed, "lemma_cd_poly image is " + format(image));
    return p;
}

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

/// Certificate for `original` obtained from a certificate for reduction∘original.
inline RectificationCertificate prepend_reduction(const Embedding& original, const FactoredAuto& reduction,
                                                  RectificationCertificate reduced, Transcript head = {}) {
    RectificationCertificate out{original, pullback(reduction, reduced.coordinate), reduction.then(reduced.theta),
                                 std::move(head)};
    out.transcript.insert(out.transcript.end(), reduced.transcript.begin(), reduced.transcript.end());
    return out;
}

inline TranscriptEntry reduction_entry(const std::string& label, const Embedding& from, const Embedding& to) {
    return {label, format(from), format(to)};
}

/// Checks phi*(p) == expected and records it; a mismatch is a transcription bug.
inline void expect_identity(Transcript& tr, const std::string& label, const Embedding& e, const LaurentPoly& p,
                            const LaurentPoly& expected) {
    LaurentPoly got = pullback_embed(e, p);
    if (got != expected)
        throw Error(ErrorKind::VerificationFailed,
                    label + ": phi*(" + format(p) + ") = " + format(got) + ", expected " + format(expected));
    tr.push_back(identity_entry(label, p, got));
}

inline Embedding expect_embedding(const FactoredAuto& step, const Embedding& e, const Embedding& expected,
                                  const std::string& label) {
    Embedding got = apply_auto(step, e);
    if (!(got == expected))
        throw Error(ErrorKind::VerificationFailed,
                    label + ": reduction gave " + format(got) + ", expected " + format(expected));
    return got;
}

// ---------------------------------------------------------------------------
// Craighero, n = 3 and n = 4
// ---------------------------------------------------------------------------

inline RectificationCertificate craighero(int which) {
    const Rational half(1, 2), quarter(1, 4), three_halves(3, 2);
    Transcript tr;
    if (which == 3) {
        Embedding e = Embedding::family(3, 4, 5);
        LaurentPoly alpha_y = -(Z(2) * X(-2)) + 2;
        expect_identity(tr, "Y - Z^2/X^2 + 2", e, Y() + alpha_y, -T(-4));
        FactoredAuto pre{Factor::elem(Var::y, alpha_y), Factor::elem(Var::z, X(3) * Y())};
        return verified(criterion_rectify(e, pre, Var::z, Var::y, std::move(tr)));
    }
    if (which == 4) {
        Embedding e = Embedding::family(4, 5, 6);
        expect_identity(tr, "Z^2 - X^3", e, Z(2) - X(3), 2 * T(7) + T(2));
        LaurentPoly partial = -half * (Z(3) * X(-2)) + half * (X() * Z()) + LaurentPoly(three_halves);
        expect_identity(tr, "Y - 1/2 Z^3/X^2 + 1/2 XZ + 3/2", e, Y() + partial, -half * T(-5));
        LaurentPoly alpha_y = partial + quarter * ((Z(2) - X(3)) * X(-3));
        expect_identity(tr, "alpha*(y)", e, Y() + alpha_y, quarter * T(-10));
        FactoredAuto pre{Factor::elem(Var::y, alpha_y), Factor::elem(Var::z, -4 * (X(4) * Y()))};
        return verified(criterion_rectify(e, pre, Var::z, Var::y, std::move(tr)));
    }
    throw Error(ErrorKind::PreconditionViolated, "craighero recipe exists for n = 3 and n = 4 only");
}

// ---------------------------------------------------------------------------
// (t^n, t^m, t + t^(bn-1)) with b > min(mu1, mu2)
// ---------------------------------------------------------------------------

struct BRParams {
    std::int64_t n = 0, m = 0, b = 0;
    std::int64_t a = 0, c = 0, d = 0;
    std::int64_t lambda1 = 0, mu1 = 0, lambda2 = 0, mu2 = 0;
};

namespace detail {

// Minimal mu >= 1 with lambda*r = mu*n - 1 for a positive integer lambda.
inline std::pair<std::int64_t, std::int64_t> minimal_mu(std::int64_t r, std::int64_t n) {
    for (std::int64_t mu = 1; mu <= r + n; ++mu) {
        std::int64_t v = mu * n - 1;
        if (v >= r && v % r == 0) return {v / r, mu};
    }
    throw Error(ErrorKind::PreconditionViolated, "no solution of lambda*r = mu*n - 1");
}

}  // namespace detail

inline BRParams br_params(std::int64_t n, std::int64_t m, std::int64_t b) {
    if (n < 2 || m < 1 || b < 1) throw Error(ErrorKind::PreconditionViolated, "need n >= 2, m >= 1, b >= 1");
    if (std::gcd(n, m) != 1) throw Error(ErrorKind::PreconditionViolated, "n and m must be coprime");
    BRParams p;
    p.n = n;
    p.m = m;
    p.b = b;
    p.a = m / n;
    p.c = m % n;
    p.d = n - p.c;
    std::tie(p.lambda1, p.mu1) = detail::minimal_mu(p.c, n);
    std::tie(p.lambda2, p.mu2) = detail::minimal_mu(p.d, n);
    return p;
}

inline RectificationCertificate br_general(std::int64_t n, std::int64_t m, std::int64_t b) {
    BRParams p0 = br_params(n, m, b);
    if (b < 2) throw Error(ErrorKind::PreconditionViolated, "need b >= 2");
    if (b <= std::min(p0.mu1, p0.mu2))
        throw Error(ErrorKind::PreconditionViolated,
                    "need b > min(mu1, mu2) = " + std::to_string(std::min(p0.mu1, p0.mu2)));

    const std::int64_t L = b * n - 1;
    const Embedding original = Embedding::family(n, m, L);
    Transcript head;
    FactoredAuto reduction;
    Embedding cur = original;
    BRParams p = p0;

    // Lower the y-exponent until a < bd - 1; c and d trade places each pass.
    while (p.a >= b * p.d - 1) {
        std::int64_t h = p.a + 1 - b * p.d;
        LaurentPoly pd = lemma_cd_poly(n, b, p.d);
        FactoredAuto step{Factor::scale(Var::y, -1), Factor::elem(Var::y, X(h) * pd)};
        std::int64_t next_m = h * n + p.d;
        if (next_m >= p.m) throw Error(ErrorKind::VerificationFailed, "reduction did not lower the y-exponent");
        Embedding next = expect_embedding(step, cur, Embedding::family(n, next_m, L), "reduction");
        head.push_back(reduction_entry("reduction (x, -y + x^" + std::to_string(h) + "*p, z)", cur, next));
        reduction = reduction.then(step);
        cur = next;
        p = br_params(n, next_m, b);
    }

    FactoredAuto pre;
    Transcript tr;
    const std::int64_t e1 = b * p.d - p.a - 1;
    LaurentPoly pd = lemma_cd_poly(n, b, p.d);
    tr.push_back(identity_entry("p (d = " + std::to_string(p.d) + ")", pd, pullback_embed(cur, pd)));
    if (b > p.mu2) {
        LaurentPoly alpha_y = -(pd * X(-e1));
        // (X^e1 Y - p)(phi) = -t^d, so the sign makes the lambda2-th power cancel t^(bn-1).
        Rational sign = (p.lambda2 % 2 == 1) ? Rational(1) : Rational(-1);
        LaurentPoly beta_z = sign * (X(b - p.mu2) * (X(e1) * Y()).pow(p.lambda2));
        expect_identity(tr, "X^e Y - p", cur, X(e1) * Y() - pd, -T(p.d));
        pre = FactoredAuto{Factor::elem(Var::y, alpha_y), Factor::elem(Var::z, beta_z)};
        tr.push_back({"case", "b > mu2", "mu2 = " + std::to_string(p.mu2) + ", lambda2 = " + std::to_string(p.lambda2)});
    } else if (b > p.mu1) {
        const std::int64_t e2 = b * p.c + b * p.d - p.a - 2;
        LaurentPoly qc = lemma_cd_poly(n, b, p.c);
        tr.push_back(identity_entry("q (c = " + std::to_string(p.c) + ")", qc, pullback_embed(cur, qc)));
        LaurentPoly alpha_y = -(pd * X(-e1)) + qc * X(-e2);
        LaurentPoly beta_z = -(X(b - p.mu1) * (X(e2) * Y()).pow(p.lambda1));
        expect_identity(tr, "X^e Y - X^(bc-1) p + q", cur, X(e2) * Y() - X(b * p.c - 1) * pd + qc, T(p.c));
        pre = FactoredAuto{Factor::elem(Var::y, alpha_y), Factor::elem(Var::z, beta_z)};
        tr.push_back({"case", "b > mu1", "mu1 = " + std::to_string(p.mu1) + ", lambda1 = " + std::to_string(p.lambda1)});
    } else {
        throw Error(ErrorKind::RecipeInapplicable, "neither b > mu1 nor b > mu2 after reduction");
    }

    RectificationCertificate reduced = criterion_rectify(cur, pre, Var::z, Var::y, std::move(tr));
    return verified(prepend_reduction(original, reduction, std::move(reduced), std::move(head)));
}

// ---------------------------------------------------------------------------
// (t^4, t^(4a+1), t^m + t)
// ---------------------------------------------------------------------------

namespace detail {

inline bool is_recipe_gap(ErrorKind k) {
    switch (k) {
        case ErrorKind::NonClearable:
        case ErrorKind::Stalled:
        case ErrorKind::MaxIters:
        case ErrorKind::PullbackNotT:
        case ErrorKind::CoordinatePullbackNotT:
        case ErrorKind::ResultNotPolynomial:
        case ErrorKind::PreconditionViolated:
            return true;
        default:
            return false;
    }
}

// y-payload shared by the m = 4k+2 branches:
//   -1/2 z^3/x^(2k+1-a) + 1/2 x^a z + 3/2 x^(a-k) + 1/4 (z^2 - x^(2k+1))/x^(3k-a+1)
inline LaurentPoly n4_case2_alpha(std::int64_t a, std::int64_t k) {
    const Rational half(1, 2), quarter(1, 4), three_halves(3, 2);
    return -half * (Z(3) * X(a - 2 * k - 1)) + half * (X(a) * Z()) + three_halves * X(a - k) +
           quarter * ((Z(2) - X(2 * k + 1)) * X(a - 3 * k - 1));
}

}  // namespace detail

inline RectificationCertificate br_n4(std::int64_t a, std::int64_t m) {
    if (a < 1 || m < 2) throw Error(ErrorKind::PreconditionViolated, "br_n4 needs a >= 1 and m >= 2");
    const Embedding original = Embedding::family(4, 4 * a + 1, m);
    Transcript head;
    FactoredAuto reduction;
    Embedding cur = original;
    std::int64_t ca = a;

    auto finish = [&](RectificationCertificate reduced) {
        return verified(prepend_reduction(original, reduction, std::move(reduced), std::move(head)));
    };
    auto guarded = [&](auto&& build) -> RectificationCertificate {
        try {
            return build();
        } catch (const Error& err) {
            if (!detail::is_recipe_gap(err.kind())) throw;
            throw Error(ErrorKind::RecipeInapplicable,
                        "(a, m) = (" + std::to_string(a) + ", " + std::to_string(m) + "): " + err.what(),
                        {err.what()});
        }
    };

    switch (m % 4) {
        case 0: {
            const std::int64_t k = m / 4;
            Transcript tr;
            expect_identity(tr, "Z - X^k", cur, Z() - X(k), T());
            return finish(rectify_from_coordinate(cur, FactoredAuto{Factor::elem(Var::z, -X(k))}, Var::z, std::move(tr)));
        }
        case 1: {
            const std::int64_t k = (m - 1) / 4;
            while (ca >= k) {
                FactoredAuto step{Factor::scale(Var::y, -1), Factor::elem(Var::y, X(ca - k) * Z())};
                Embedding next = expect_embedding(step, cur, Embedding::family(4, 4 * (ca - k) + 1, m), "reduction");
                head.push_back(reduction_entry("reduction (x, -y + x^" + std::to_string(ca - k) + "*z, z)", cur, next));
                reduction = reduction.then(step);
                cur = next;
                ca -= k;
            }
            Transcript tr;
            LaurentPoly f = Z() - X(k - ca) * Y();
            expect_identity(tr, "Z - X^(k-a) Y", cur, f, T());
            return finish(rectify_from_coordinate(cur, FactoredAuto{Factor::elem(Var::z, -(X(k - ca) * Y()))}, Var::z,
                                                  std::move(tr)));
        }
        case 2: {
            const std::int64_t k = (m - 2) / 4;
            return guarded([&] {
                Transcript tr;
                expect_identity(tr, "Z^2 - X^(2k+1)", cur, Z(2) - X(2 * k + 1), 2 * T(4 * k + 3) + T(2));
                while (ca > 3 * k + 1) {
                    FactoredAuto alpha{Factor::elem(Var::y, detail::n4_case2_alpha(ca, k))};
                    Embedding mid = expect_embedding(
                        alpha, cur, Embedding(T(4), Rational(1, 4) * T(4 * ca - 12 * k - 2), T(m) + T()), "alpha");
                    head.push_back(reduction_entry("alpha (polynomial, a > 3k+1)", cur, mid));
                    if (k >= ca - 3 * k - 1) {
                        FactoredAuto prefix = alpha.then(Factor::elem(Var::z, -4 * (X(4 * k - ca + 1) * Y())));
                        return finish(rectify_from_coordinate(cur, prefix, Var::z, std::move(tr)));
                    }
                    FactoredAuto step =
                        alpha.then(Factor::scale(Var::y, -4)).then(Factor::elem(Var::y, X(ca - 4 * k - 1) * Z()));
                    Embedding next =
                        expect_embedding(step, cur, Embedding::family(4, 4 * (ca - 4 * k - 1) + 1, m), "reduction");
                    head.push_back(reduction_entry("reduction (x, -4y + x^" + std::to_string(ca - 4 * k - 1) + "*z, z)",
                                                   mid, next));
                    reduction = reduction.then(step);
                    cur = next;
                    ca -= 4 * k + 1;
                }
                LaurentPoly alpha_y = detail::n4_case2_alpha(ca, k);
                expect_identity(tr, "alpha*(y)", cur, Y() + alpha_y, Rational(1, 4) * T(4 * ca - 12 * k - 2));
                FactoredAuto pre{Factor::elem(Var::y, alpha_y), Factor::elem(Var::z, -4 * (X(4 * k - ca + 1) * Y()))};
                return finish(criterion_rectify(cur, pre, Var::z, Var::y, std::move(tr)));
            });
        }
        default: {
            const std::int64_t k = (m - 3) / 4;
            if (a > 3 * k + 2) {
                FactoredAuto step{Factor::scale(Var::y, -1),
                                  Factor::elem(Var::y, X(a - 2 - 3 * k) * Z(3) - 3 * (X(a - 2 * k - 1) * Z()))};
                Embedding next = expect_embedding(step, cur, Embedding(T(4), T(4 * a - 12 * k - 5), T(m) + T()),
                                                  "reduction");
                throw Error(ErrorKind::RecipeInapplicable,
                            "(a, m) = (" + std::to_string(a) + ", " + std::to_string(m) +
                                "): reduction for a > 3k+2 gives " + format(next) +
                                ", whose y-exponent is 3 mod 4 and leaves the (t^4, t^(4a+1), t^m + t) family",
                            {reduction_entry("reduction", cur, next).rhs});
            }
            return guarded([&] {
                Transcript tr;
                const std::int64_t e = 3 * k + 2 - a;
                expect_identity(tr, "Z^3 - X^(3k+2-a) Y - 3 X^(k+1) Z", cur, Z(3) - X(e) * Y() - 3 * (X(k + 1) * Z()),
                                T(3));
                expect_identity(tr, "X^k (Z^3 - X^(3k+2-a) Y - 3 X^(k+1) Z)", cur,
                                X(k) * (Z(3) - X(e) * Y() - 3 * (X(k + 1) * Z())), T(4 * k + 3));
                LaurentPoly alpha_y = -(Z(3) * X(-e)) + 3 * (X(a - 2 * k - 1) * Z());
                FactoredAuto pre{Factor::elem(Var::y, alpha_y), Factor::elem(Var::z, X(4 * k + 2 - a) * Y())};
                return finish(criterion_rectify(cur, pre, Var::z, Var::y, std::move(tr)));
            });
        }
    }
}

// ---------------------------------------------------------------------------
// (t^n, t^(an+c), t + t^((an+c)s - ln)) with cl < a
// ---------------------------------------------------------------------------

struct KurodaParams {
    std::int64_t n = 1, a = 1, c = 1, l = 1, s = 1;

    std::int64_t y_exponent() const { return a * n + c; }
    std::int64_t z_exponent() const { return y_exponent() * s - l * n; }
};

inline RectificationCertificate kuroda_general(const KurodaParams& p) {
    if (p.n < 1 || p.a < 1 || p.c < 1 || p.l < 1 || p.s < 1)
        throw Error(ErrorKind::PreconditionViolated, "kuroda parameters must be positive");
    if (p.c * p.l >= p.a) throw Error(ErrorKind::PreconditionViolated, "need c*l < a");
    if (p.z_exponent() < 1) throw Error(ErrorKind::PreconditionViolated, "z-exponent (an+c)s - ln must be positive");

    Embedding e(T(p.n), T(p.y_exponent()), T() + T(p.z_exponent()));
    FactoredAuto pre{Factor::elem(Var::z, -(Y(p.s) * X(-p.l))), Factor::elem(Var::y, -(X(p.a) * Z(p.c)))};
    Transcript tr;
    expect_identity(tr, "phi* alpha* beta*(y)", e, pullback(pre, Y()), LaurentPoly{});
    // The correction lies in (y^s) and phi*alpha*beta*(y) = 0, so clearing z keeps phi*(f) = t.
    return verified(criterion_rectify(e, pre, Var::z, Var::z, std::move(tr)));
}

// ---------------------------------------------------------------------------
// Elementary shortcuts and dispatch
// ---------------------------------------------------------------------------

/// v - c*u^i*w^j = t for a component v and monomial components u, w.
inline std::optional<RectificationCertificate> trivial_rectify(const Embedding& e) {
    const LaurentPoly t = T();
    for (Var v : {Var::z, Var::y, Var::x}) {
        LaurentPoly rest = e.components()[index(v)] - t;
        std::vector<Var> others;
        for (Var u : {Var::x, Var::y, Var::z})
            if (u != v) others.push_back(u);
        std::optional<LaurentPoly> payload;
        if (rest.is_zero()) {
            payload = LaurentPoly{};
        } else if (rest.is_monomial()) {
            const auto& [rm, rc] = *rest.terms().begin();
            const std::int64_t target = rm[Var::t];
            const LaurentPoly& U = e.components()[index(others[0])];
            const LaurentPoly& W = e.components()[index(others[1])];
            if (target == 0) {
                payload = LaurentPoly(-rc);
            } else if (U.is_monomial() && W.is_monomial()) {
                const auto& [um, uc] = *U.terms().begin();
                const auto& [wm, wc] = *W.terms().begin();
                const std::int64_t du = um[Var::t], dw = wm[Var::t];
                for (std::int64_t j = 0; !payload && dw > 0 && j * dw <= target; ++j) {
                    std::int64_t left = target - j * dw;
                    if (left == 0 || (du > 0 && left % du == 0)) {
                        std::int64_t i = left == 0 ? 0 : left / du;
                        Rational coeff = -rc / (pow(uc, i) * pow(wc, j));
                        payload = coeff * (LaurentPoly::var(others[0], i) * LaurentPoly::var(others[1], j));
                    }
                }
                for (std::int64_t i = 1; !payload && dw == 0 && du > 0 && i * du <= target; ++i)
                    if (i * du == target) payload = (-rc / pow(uc, i)) * LaurentPoly::var(others[0], i);
            }
        }
        if (!payload) continue;
        FactoredAuto prefix;
        if (!payload->is_zero()) prefix = FactoredAuto{Factor::elem(v, *payload)};
        Transcript tr;
        LaurentPoly f = LaurentPoly::var(v) + *payload;
        tr.push_back(identity_entry("elementary coordinate", f, pullback_embed(e, f)));
        return verified(rectify_from_coordinate(e, prefix, v, std::move(tr)));
    }
    return std::nullopt;
}

/// Exponents (n, m, l) when the embedding is exactly (t^n, t^m, t^l + t), l >= 2.
struct FamilyShape {
    std::int64_t n = 0, m = 0, l = 0;
};

inline std::optional<FamilyShape> family_shape(const Embedding& e) {
    auto pure_power = [](const LaurentPoly& p) -> std::optional<std::int64_t> {
        if (!p.is_monomial() || p.terms().begin()->second != 1) return std::nullopt;
        return p.terms().begin()->first[Var::t];
    };
    auto n = pure_power(e.x());
    auto m = pure_power(e.y());
    if (!n || !m || *m < 1) return std::nullopt;
    auto rest = pure_power(e.z() - T());
    if (!rest || *rest < 2) return std::nullopt;
    return FamilyShape{*n, *m, *rest};
}

struct DispatchOptions {
    std::int64_t max_l = 8;
    std::int64_t max_s = 8;
};

struct DispatchResult {
    RectificationCertificate certificate;
    std::string recipe;
    std::vector<std::string> attempts;
};

/// Kuroda parameters fitting (t^n, t^m, t^L + t), searched in ascending
/// (c, l, s) order within the option bounds.
inline std::optional<KurodaParams> find_kuroda_params(const FamilyShape& f, const DispatchOptions& opt = {}) {
    for (std::int64_t c = 1; c < f.m; ++c) {
        if ((f.m - c) % f.n != 0) continue;
        std::int64_t a = (f.m - c) / f.n;
        if (a < 1) continue;
        for (std::int64_t l = 1; l <= opt.max_l; ++l)
            for (std::int64_t s = 1; s <= opt.max_s; ++s)
                if (f.m * s - l * f.n == f.l && c * l < a) return KurodaParams{f.n, a, c, l, s};
    }
    return std::nullopt;
}

/// Tries the recipes in a fixed order and returns the first verified
/// certificate. NoRecipeApplies is not a claim of non-rectifiability.
inline DispatchResult dispatch(const Embedding& e, const DispatchOptions& opt = {}) {
    std::vector<std::string> attempts;
    bool saw_bug = false;
    auto attempt = [&](const std::string& name, auto&& run) -> std::optional<DispatchResult> {
        try {
            std::optional<RectificationCertificate> c = run();
            if (!c) {
                attempts.push_back(name + ": not applicable");
                return std::nullopt;
            }
            attempts.push_back(name + ": ok");
            return DispatchResult{std::move(*c), name, attempts};
        } catch (const Error& err) {
            if (err.kind() == ErrorKind::VerificationFailed) saw_bug = true;
            attempts.push_back(name + ": " + err.what());
            return std::nullopt;
        }
    };
    using Opt = std::optional<RectificationCertificate>;

    if (auto r = attempt("trivial", [&]() -> Opt { return trivial_rectify(e); })) return std::move(*r);

    auto shape = family_shape(e);
    if (!shape) {
        attempts.push_back("family: embedding is not of the form (t^n, t^m, t^l + t)");
    } else {
        const FamilyShape f = *shape;
        if (auto r = attempt("craighero3", [&]() -> Opt {
                if (f.n == 3 && f.m == 4 && f.l == 5) return craighero(3);
                return std::nullopt;
            }))
            return std::move(*r);
        if (auto r = attempt("craighero4", [&]() -> Opt {
                if (f.n == 4 && f.m == 5 && f.l == 6) return craighero(4);
                return std::nullopt;
            }))
            return std::move(*r);
        if (auto r = attempt("kuroda", [&]() -> Opt {
                auto kp = find_kuroda_params(f, opt);
                if (!kp) return std::nullopt;
                return kuroda_general(*kp);
            }))
            return std::move(*r);
        if (auto r = attempt("br-general", [&]() -> Opt {
                if (f.n < 2 || (f.l + 1) % f.n != 0) return std::nullopt;
                std::int64_t b = (f.l + 1) / f.n;
                if (b < 2 || std::gcd(f.n, f.m) != 1) return std::nullopt;
                BRParams p = br_params(f.n, f.m, b);
                if (b <= std::min(p.mu1, p.mu2)) return std::nullopt;
                return br_general(f.n, f.m, b);
            }))
            return std::move(*r);
        if (auto r = attempt("br-n4", [&]() -> Opt {
                if (f.n != 4 || f.m % 4 != 1 || f.m < 5) return std::nullopt;
                return br_n4((f.m - 1) / 4, f.l);
            }))
            return std::move(*r);
    }
    if (saw_bug) throw Error(ErrorKind::VerificationFailed, "a recipe produced an unverifiable result", attempts);
    throw Error(ErrorKind::NoRecipeApplies, "no recipe rectifies " + format(e), attempts);
}

}  // namespace rectify
