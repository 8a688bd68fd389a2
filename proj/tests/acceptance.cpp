// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.

#include <algorithm>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rectify/rectify.hpp"

using namespace rectify;

namespace {

struct Check {
    bool ok = true;
    std::vector<std::string> notes;
    std::string summary;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (notes.size() < 5) notes.push_back(what);
        }
    }
};

bool certificate_ok(const RectificationCertificate& c) {
    if (!verify_certificate(c).ok) return false;
    CertificateDocument doc{std::string(kCertificateVersion), c, true};
    CertificateDocument back = parse_document(serialize(doc));
    return verify_certificate(back.certificate).ok && back.certificate.theta == c.theta;
}

bool has_rhs(const RectificationCertificate& c, const std::string& lhs, const std::string& rhs) {
    return std::any_of(c.transcript.begin(), c.transcript.end(), [&](const TranscriptEntry& e) {
        return e.rhs == rhs && (lhs.empty() || e.lhs == lhs);
    });
}

Check nagata() {
    Check c;
    ClearingResult r = clear_denominators(
        FactoredAuto{Factor::elem(Var::z, -(Y(2) * X(-1))), Factor::elem(Var::y, X(2) * Z())}, Var::z);
    LaurentPoly w = X() * Z() - Y(2);
    Triple want{X(), Y() + X() * w, Z() + 2 * (Y() * w) + X() * w.pow(2)};
    Triple got{pullback(r.cleared, X()), pullback(r.cleared, Y()), pullback(r.cleared, Z())};
    c.require(got == want, "composite " + format(got));
    return c;
}

Check conjugated() {
    Check c;
    Factor alpha0 = Factor::elem(Var::z, -(Y(2) * X(-2)));
    Factor beta0 = Factor::elem(Var::y, X(3) * Z());
    ClearingResult r = clear_denominators(FactoredAuto{alpha0, beta0, alpha0.inverse()}, Var::z);
    c.require(r.correction == 2 * (Y(3) * X(-1)), "correction " + format(r.correction));
    Triple got{pullback(r.cleared, X()), pullback(r.cleared, Y()), pullback(r.cleared, Z())};
    c.require(is_polynomial_triple(got), "composite not polynomial");
    return c;
}

Check elementary() {
    Check c;
    DispatchResult r = dispatch(Embedding::family(2, 3, 4));
    c.require(r.certificate.coordinate == Z() - X(2), "coordinate " + format(r.certificate.coordinate));
    c.require(certificate_ok(r.certificate), "certificate does not verify");
    return c;
}

Check craighero_pair() {
    Check c;
    RectificationCertificate c3 = craighero(3);
    RectificationCertificate c4 = craighero(4);
    c.require(certificate_ok(c3), "craighero(3) does not verify");
    c.require(certificate_ok(c4), "craighero(4) does not verify");
    c.require(has_rhs(c3, "", "-t^-4"), "missing -t^-4");
    c.require(has_rhs(c4, "-x^3 + z^2", "2*t^7 + t^2"), "missing Z^2 - X^3 = 2t^7 + t^2");
    c.require(has_rhs(c4, "", "1/4*t^-10"), "missing 1/4 t^-10");
    return c;
}

Check comb_identity() {
    Check c;
    for (int m = 1; m <= 40; ++m) c.require(comb_identity_defect(combinatorial_coeffs(m)).is_zero(), "m = " + std::to_string(m));
    return c;
}

Check cd_images() {
    Check c;
    int count = 0;
    for (std::int64_t n = 1; n <= 6; ++n)
        for (std::int64_t b = 1; b * n <= 12; ++b) {
            if (b * n < 2) continue;
            for (std::int64_t r = 1; r <= 8; ++r) {
                LaurentPoly p = lemma_cd_poly(n, b, r);
                LaurentPoly image = substitute(p, Substitution{{Var::x, T(n)}, {Var::z, T() + T(b * n - 1)}});
                c.require(image == T(r) + T((b * n - 1) * r), "n, b, r = " + std::to_string(n) + ", " +
                                                                  std::to_string(b) + ", " + std::to_string(r));
                ++count;
            }
        }
    c.require(count > 0, "empty sweep");
    return c;
}

Check br_general_family() {
    Check c;
    std::vector<std::array<std::int64_t, 3>> cases{{5, 7, 2}};
    for (std::int64_t n : {3, 5, 7, 9})
        for (std::int64_t b : {2, 3}) cases.push_back({n, n + 2, b});
    for (auto [n, m, b] : cases) {
        std::string tag = "(" + std::to_string(n) + ", " + std::to_string(m) + ", " + std::to_string(b) + ")";
        try {
            RectificationCertificate cert = br_general(n, m, b);
            c.require(cert.embedding == Embedding::family(n, m, b * n - 1) && certificate_ok(cert), tag);
        } catch (const Error& e) {
            c.require(false, tag + ": " + e.what());
        }
    }
    return c;
}

Check br_n4_family() {
    Check c;
    int ok = 0, gaps = 0;
    for (std::int64_t a = 1; a <= 6; ++a)
        for (std::int64_t m = 2; m <= 30; ++m) {
            std::string tag = "(a, m) = (" + std::to_string(a) + ", " + std::to_string(m) + ")";
            bool must = m % 4 == 0 || m % 4 == 1 || (a == 1 && m == 6) || (a == 2 && m == 7);
            try {
                RectificationCertificate cert = br_n4(a, m);
                c.require(certificate_ok(cert), tag + " emitted an unverifiable certificate");
                ++ok;
            } catch (const Error& e) {
                c.require(!must && e.kind() == ErrorKind::RecipeInapplicable, tag + ": " + e.what());
                ++gaps;
            }
        }
    c.summary = std::to_string(ok) + " verified, " + std::to_string(gaps) + " inapplicable";
    return c;
}

Check kuroda_family() {
    Check c;
    for (std::int64_t n = 1; n <= 8; ++n) {
        RectificationCertificate cert = kuroda_general({n, 3, 1, 2, 2});
        c.require(cert.embedding == Embedding::family(n, 3 * n + 1, 4 * n + 2) && certificate_ok(cert),
                  "(t^n, t^(3n+1), t^(4n+2) + t), n = " + std::to_string(n));
    }
    for (std::int64_t n = 1; n <= 5; ++n) {
        RectificationCertificate cert = kuroda_general({n, 5, 2, 2, 2});
        c.require(cert.embedding == Embedding::family(n, 5 * n + 2, 8 * n + 4) && certificate_ok(cert),
                  "(t^n, t^(5n+2), t^(8n+4) + t), n = " + std::to_string(n));
    }
    return c;
}

Check negative_control() {
    Check c;
    try {
        dispatch(Embedding::family(5, 6, 7));
        c.require(false, "dispatch returned a certificate");
    } catch (const Error& e) {
        c.require(e.kind() == ErrorKind::NoRecipeApplies, std::string("wrong error: ") + e.what());
    }
    std::ostringstream out, err;
    c.require(run_cli({"embed", "t^5,t^6,t^7+t"}, out, err) == 2, "cli exit code is not 2");
    // Every certificate the dispatcher emits on a small grid replays from JSON.
    for (std::int64_t n = 2; n <= 5; ++n)
        for (std::int64_t m = n + 1; m <= n + 5; ++m)
            for (std::int64_t l = m + 1; l <= m + 5; ++l) {
                try {
                    DispatchResult r = dispatch(Embedding::family(n, m, l));
                    c.require(certificate_ok(r.certificate), "replay failed for " + format(r.certificate.embedding));
                } catch (const Error& e) {
                    c.require(e.kind() != ErrorKind::VerificationFailed, e.what());
                }
            }
    return c;
}

Check properties() {
    Check c;
    std::mt19937 rng(2024);
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto coeff = [&] {
        int v = 0;
        while (v == 0) v = uni(-4, 4);
        return Rational(v, uni(1, 3));
    };
    auto poly = [&](bool negative_x) {
        LaurentPoly p;
        for (int i = uni(0, 3); i > 0; --i)
            p.add_term(Monomial(uni(negative_x ? -2 : 0, 2), uni(0, 2), uni(0, 2), 0), coeff());
        return p;
    };
    auto automorphism = [&](bool laurent) {
        std::vector<Factor> fs;
        for (int i = uni(1, 3); i > 0; --i) {
            Var v = uni(0, 1) ? Var::y : Var::z;
            switch (uni(0, 3)) {
                case 0: fs.push_back(Factor::scale(v, coeff())); break;
                case 1: fs.push_back(Factor::permute({Var::x, Var::z, Var::y})); break;
                default: {
                    LaurentPoly p = poly(laurent);
                    LaurentPoly q;
                    for (const auto& [mono, k] : p.terms())
                        if (mono[v] == 0) q.add_term(mono, k);
                    fs.push_back(Factor::elem(v, q));
                }
            }
        }
        return FactoredAuto(std::move(fs));
    };

    constexpr int kCases = 1000;
    for (int i = 0; i < kCases && c.ok; ++i) {
        LaurentPoly a = poly(true), b = poly(true), d = poly(true);
        c.require(a * (b + d) == a * b + a * d && (a * b) * d == a * (b * d) && a + b == b + a, "ring law");
        Substitution s{{Var::x, coeff() * X(uni(-1, 2))}, {Var::y, poly(false)}, {Var::z, poly(false)}};
        c.require(substitute(a * b, s) == substitute(a, s) * substitute(b, s), "substitution homomorphism");

        FactoredAuto f = automorphism(i % 2 == 0);
        c.require(to_triple(f.then(invert(f))) == identity_triple(), "inverse composition");

        FactoredAuto g = automorphism(false);
        Embedding e(T(uni(1, 4)), T(uni(1, 5)) + coeff(), coeff() * T(uni(0, 3)));
        LaurentPoly p = poly(false);
        c.require(pullback_embed(apply_auto(g, e), p) == pullback_embed(e, pullback(g, p)), "contravariance");
    }
    return c;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Check()> run;
    };
    const std::vector<Criterion> criteria{
        {"nagata fixture composite", nagata},
        {"conjugated fixture correction 2y^3/x", conjugated},
        {"elementary example coordinate z - x^2", elementary},
        {"craighero certificates and transcripts", craighero_pair},
        {"combinatorial identity for m <= 40", comb_identity},
        {"x,z polynomial images t^r + t^((bn-1)r)", cd_images},
        {"br_general family", br_general_family},
        {"br_n4 family", br_n4_family},
        {"kuroda families", kuroda_family},
        {"negative control (t^5, t^6, t^7 + t)", negative_control},
        {"property suites", properties},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        try {
            c = criteria[i].run();
        } catch (const std::exception& e) {
            c.ok = false;
            c.notes.push_back(std::string("exception: ") + e.what());
        }
        std::cout << (c.ok ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].name << "\n";
        if (!c.summary.empty()) std::cout << "     " << c.summary << "\n";
        for (const auto& n : c.notes) std::cout << "     " << n << "\n";
        failures += !c.ok;
    }
    return failures == 0 ? 0 : 1;
}
