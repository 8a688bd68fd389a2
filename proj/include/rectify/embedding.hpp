#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rectify/automorphism.hpp"
#include "rectify/errors.hpp"
#include "rectify/format.hpp"
#include "rectify/poly.hpp"

namespace rectify {

/// A map from the affine line into affine 3-space, t -> (X(t), Y(t), Z(t)).
///
/// X is always a single term c*t^n with n >= 1, so negative powers of x
/// pull back to Laurent polynomials in t. Coefficients need not be 1: the
/// reduction steps of some recipes pass through embeddings like
/// (t^4, 1/4*t^6, t^6 + t).
class Embedding {
public:
    Embedding(LaurentPoly x, LaurentPoly y, LaurentPoly z) : c_{std::move(x), std::move(y), std::move(z)} {
        for (const auto& c : c_) {
            if (!c.involves_only({Var::t}))
                throw Error(ErrorKind::InvalidEmbedding, "embedding components must be polynomials in t: " + format(c));
            if (!is_polynomial_in(c, Var::t))
                throw Error(ErrorKind::ResultNotPolynomial, "embedding component has negative t-powers: " + format(c));
        }
        if (!c_[0].is_monomial() || c_[0].terms().begin()->first[Var::t] < 1)
            throw Error(ErrorKind::XNotMonomial, "first component must be c*t^n with n >= 1, got " + format(c_[0]));
    }

    /// The embedding t -> (t^n, t^m, t^l + t).
    static Embedding family(std::int64_t n, std::int64_t m, std::int64_t l) { return {T(n), T(m), T(l) + T()}; }

    const LaurentPoly& x() const noexcept { return c_[0]; }
    const LaurentPoly& y() const noexcept { return c_[1]; }
    const LaurentPoly& z() const noexcept { return c_[2]; }
    const Triple& components() const noexcept { return c_; }

    Substitution substitution() const {
        return Substitution{{Var::x, c_[0]}, {Var::y, c_[1]}, {Var::z, c_[2]}};
    }

    friend bool operator==(const Embedding& a, const Embedding& b) { return a.c_ == b.c_; }

private:
    Triple c_;
};

inline std::string format(const Embedding& e) { return format(e.components()); }

inline std::ostream& operator<<(std::ostream& os, const Embedding& e) { return os << format(e); }

/// Parses "X, Y, Z" (three comma-separated polynomials in t).
inline Embedding parse_embedding(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t depth = 0, start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '(') ++depth;
        if (c == ')' && depth > 0) --depth;
        if (c == ',' && depth == 0) {
            parts.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    parts.push_back(text.substr(start));
    if (parts.size() != 3)
        throw ParseError("embedding needs exactly three comma-separated components", 0);
    std::array<LaurentPoly, 3> c;
    std::size_t offset = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        try {
            c[i] = parse(parts[i]);
        } catch (const ParseError& e) {
            throw ParseError(std::string("component ") + std::to_string(i + 1) + ": " + e.what(), offset + e.position());
        }
        offset += parts[i].size() + 1;
    }
    return {c[0], c[1], c[2]};
}

/// phi*(p): substitutes x -> X, y -> Y, z -> Z.
inline LaurentPoly pullback_embed(const Embedding& e, const LaurentPoly& p) { return substitute(p, e.substitution()); }

/// The composite a∘e, computed factor by factor along the embedding.
///
/// A Laurent automorphism is accepted when every negative t-power cancels in
/// the result; otherwise ResultNotPolynomial.
inline Embedding apply_auto(const FactoredAuto& a, const Embedding& e) {
    Triple cur = e.components();
    for (const auto& f : a.factors()) {
        Substitution s;
        s.set(Var::x, cur[0]).set(Var::y, cur[1]).set(Var::z, cur[2]);
        Triple next;
        for (Var v : {Var::x, Var::y, Var::z}) next[index(v)] = substitute(f.image(v), s);
        cur = std::move(next);
    }
    for (const auto& c : cur)
        if (!is_polynomial_in(c, Var::t))
            throw Error(ErrorKind::ResultNotPolynomial, "negative t-powers survive: " + format(c));
    return {cur[0], cur[1], cur[2]};
}

struct TranscriptEntry {
    std::string label;
    std::string lhs;
    std::string rhs;

    friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

using Transcript = std::vector<TranscriptEntry>;

/// Records "label: lhs = rhs" with both sides in canonical text.
inline TranscriptEntry identity_entry(std::string label, const LaurentPoly& lhs, const LaurentPoly& rhs) {
    return {std::move(label), format(lhs), format(rhs)};
}

/// Coordinate f with phi*(f) = t, plus an automorphism theta over k[x] with
/// theta∘phi = (t, 0, 0). The transcript is informative only.
struct RectificationCertificate {
    Embedding embedding;
    LaurentPoly coordinate;
    FactoredAuto theta;
    Transcript transcript;
};

struct VerificationReport {
    bool ok = true;
    std::vector<std::string> reasons;

    explicit operator bool() const noexcept { return ok; }

    void fail(std::string reason) {
        ok = false;
        reasons.push_back(std::move(reason));
    }
};

/// Re-derives every certificate invariant from the embedding, coordinate and
/// factor list. Never reads the transcript.
inline VerificationReport verify_certificate(const RectificationCertificate& c) {
    VerificationReport report;
    const LaurentPoly t = T();

    try {
        if (!c.coordinate.involves_only({Var::x, Var::y, Var::z}) || !is_polynomial_in(c.coordinate, Var::x)) {
            report.fail("coordinate " + format(c.coordinate) + " is not a polynomial in x, y, z");
        } else {
            LaurentPoly image = pullback_embed(c.embedding, c.coordinate);
            if (image != t) report.fail("coordinate pullback is " + format(image) + ", expected t");
        }
    } catch (const Error& e) {
        report.fail(std::string("coordinate pullback failed: ") + e.what());
    }

    try {
        if (!is_polynomial_over_kx(c.theta)) {
            report.fail("theta has negative x-powers in its composite");
        } else if (!is_polynomial_over_kx(invert(c.theta))) {
            report.fail("inverse of theta has negative x-powers in its composite");
        }
    } catch (const Error& e) {
        report.fail(std::string("theta composite failed: ") + e.what());
    }

    try {
        Embedding image = apply_auto(c.theta, c.embedding);
        if (image.x() != t || !image.y().is_zero() || !image.z().is_zero())
            report.fail("theta maps the embedding to " + format(image) + ", expected (t, 0, 0)");
    } catch (const Error& e) {
        report.fail(std::string("applying theta failed: ") + e.what());
    }

    try {
        bool found = coordinate_prefix(c.theta, c.coordinate).has_value();
        if (!found) report.fail("coordinate is not a component of any prefix of theta");
    } catch (const Error& e) {
        report.fail(std::string("prefix composition failed: ") + e.what());
    }
    return report;
}

/// Completes a coordinate to a certificate: given a polynomial prefix whose
/// `component` pulls back to t, permute that component to the front and
/// subtract g2(x), g3(x) from the other two.
inline RectificationCertificate rectify_from_coordinate(const Embedding& e, const FactoredAuto& theta_prefix,
                                                        Var component, Transcript transcript = {}) {
    if (component == Var::t) throw Error(ErrorKind::PreconditionViolated, "component must be x, y or z");
    if (theta_prefix.laurent())
        throw Error(ErrorKind::PreconditionViolated, "theta prefix is not certified polynomial over k[x]");
    LaurentPoly f = pullback(theta_prefix, LaurentPoly::var(component));
    LaurentPoly image = pullback_embed(e, f);
    if (image != T())
        throw Error(ErrorKind::CoordinatePullbackNotT,
                    "phi*(" + format(f) + ") = " + format(image) + ", expected t");
    transcript.push_back(identity_entry("coordinate pullback", f, image));

    FactoredAuto theta = theta_prefix;
    if (component != Var::x) {
        PermWord w = component == Var::y ? PermWord{Var::y, Var::x, Var::z} : PermWord{Var::z, Var::x, Var::y};
        theta = theta.then(Factor::permute(w));
    }
    Embedding partial = apply_auto(theta, e);
    for (Var v : {Var::y, Var::z}) {
        const LaurentPoly& g = partial.components()[index(v)];
        if (!is_polynomial_in(g, Var::t))
            throw Error(ErrorKind::GNotPolynomial, "g has negative t-powers: " + format(g));
        LaurentPoly gx = substitute(g, Substitution{{Var::t, X()}});
        std::string slot = v == Var::y ? "2" : "3";
        transcript.push_back({"g" + slot, "component " + slot + " of theta(phi)", format(g)});
        if (!gx.is_zero()) theta = theta.then(Factor::elem(v, -gx));
    }

    RectificationCertificate cert{e, f, theta, std::move(transcript)};
    Embedding final_image = apply_auto(cert.theta, e);
    cert.transcript.push_back({"theta(phi)", format(e), format(final_image)});
    return cert;
}

/// Throws VerificationFailed unless the certificate verifies.
inline RectificationCertificate verified(RectificationCertificate cert) {
    auto report = verify_certificate(cert);
    if (!report) throw Error(ErrorKind::VerificationFailed, "certificate does not verify", report.reasons);
    return cert;
}

}  // namespace rectify
