#include <gtest/gtest.h>

#include "rectify/automorphism.hpp"

using namespace rectify;

namespace {

// The two factors whose clearing gives the Nagata automorphism, in
// application order.
FactoredAuto nagata_input() {
    return {Factor::elem(Var::z, -(Y(2) * X(-1))), Factor::elem(Var::y, X(2) * Z())};
}

}  // namespace

TEST(Factor, ElemRejectsItsTarget) {
    EXPECT_THROW(Factor::elem(Var::z, Z() + X()), Error);
    EXPECT_THROW(Factor::elem(Var::y, T()), Error);
    EXPECT_THROW(Factor::elem(Var::t, X()), Error);
    EXPECT_NO_THROW(Factor::elem(Var::z, Y(2) * X(-1)));
}

TEST(Factor, ScaleAndPermuteValidation) {
    EXPECT_THROW(Factor::scale(Var::y, 0), Error);
    EXPECT_THROW(Factor::permute({Var::x, Var::x, Var::z}), Error);
    EXPECT_THROW(Factor::permute({Var::x, Var::t, Var::z}), Error);
}

TEST(Factor, PermutationInverse) {
    Factor p = Factor::permute({Var::z, Var::x, Var::y});
    FactoredAuto round{p, p.inverse()};
    EXPECT_EQ(to_triple(round), identity_triple());
    EXPECT_EQ(to_string(p.inverse().word()), "yzx");
}

TEST(Pullback, ApplicationOrderOnNagataFactors) {
    // (f2 ∘ f1)* = f1* ∘ f2*: y -> y + x^2 z first, then z -> z - y^2/x.
    FactoredAuto a = nagata_input();
    EXPECT_EQ(pullback(a, Y()), Y() + X(2) * Z() - X() * Y(2));
    EXPECT_EQ(pullback(a, Z()), Z() - Y(2) * X(-1));
    EXPECT_EQ(pullback(a, X()), X());
}

TEST(Pullback, ContravariantInListOrder) {
    Factor f = Factor::elem(Var::y, X() * Z(2));
    Factor g = Factor::scale(Var::z, Rational(-3, 2));
    Factor h = Factor::permute({Var::y, Var::z, Var::x});
    LaurentPoly p = Y() * Z() + X(2) - Z(3);
    FactoredAuto fgh{f, g, h};
    EXPECT_EQ(pullback(fgh, p), substitute(substitute(substitute(p, h.substitution()), g.substitution()),
                                           f.substitution()));
}

TEST(Compose, ThenAndPrefix) {
    FactoredAuto a = nagata_input();
    FactoredAuto b = FactoredAuto{a.factors()[0]}.then(a.factors()[1]);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.prefix(1).size(), 1u);
    EXPECT_TRUE(a.laurent());
    EXPECT_FALSE(a.prefix(0).laurent());
}

TEST(Invert, InverseCompositionIsIdentity) {
    FactoredAuto a{Factor::elem(Var::z, -(Y(2) * X(-2))), Factor::scale(Var::y, 5),
                   Factor::permute({Var::x, Var::z, Var::y}), Factor::elem(Var::y, X(3) * Z())};
    EXPECT_EQ(to_triple(a.then(invert(a))), identity_triple());
    EXPECT_EQ(to_triple(invert(a).then(a)), identity_triple());
}

TEST(CertifyPolynomial, RejectsLaurentComposite) {
    FactoredAuto a{Factor::elem(Var::z, -(Y(2) * X(-1)))};
    EXPECT_FALSE(is_polynomial_over_kx(a));
    try {
        certify_polynomial(a);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ResultNotPolynomial);
    }
}

TEST(CertifyPolynomial, ConjugateByLaurentMap) {
    // With x^3 the conjugate keeps -2y^3/x; with x^4 every denominator cancels.
    FactoredAuto low{Factor::elem(Var::z, -(Y(2) * X(-2))), Factor::elem(Var::y, X(3) * Z()),
                     Factor::elem(Var::z, Y(2) * X(-2))};
    EXPECT_FALSE(is_polynomial_over_kx(low));

    FactoredAuto a{Factor::elem(Var::z, -(Y(2) * X(-2))), Factor::elem(Var::y, X(4) * Z()),
                   Factor::elem(Var::z, Y(2) * X(-2))};
    // Expanded by hand.
    Triple expected{X(), Y() + X(4) * Z() - X(2) * Y(2),
                    Z() + X(6) * Z(2) + X(2) * Y(4) + 2 * (X(2) * Y() * Z()) - 2 * Y(3) - 2 * (X(4) * Y(2) * Z())};
    EXPECT_EQ(to_triple(a), expected);
    EXPECT_TRUE(is_polynomial_over_kx(a));
    FactoredAuto c = certify_polynomial(a);
    EXPECT_FALSE(c.laurent());
    EXPECT_FALSE(invert(c).laurent());
}

TEST(CertifyPolynomial, ChecksTheInverseToo) {
    // The truncated check must agree with full expansion in both directions.
    FactoredAuto a{Factor::elem(Var::y, Z() * X(-1)), Factor::elem(Var::z, -(X() * Y())),
                   Factor::elem(Var::y, -(Z() * X(-1)))};
    Triple fwd = to_triple(a);
    Triple back = to_triple(invert(a));
    EXPECT_EQ(is_polynomial_over_kx(a), is_polynomial_triple(fwd));
    EXPECT_EQ(is_polynomial_over_kx(invert(a)), is_polynomial_triple(back));
}

TEST(CoordinatePrefix, FindsComponentOfPrefix) {
    FactoredAuto a{Factor::elem(Var::z, -X(2)), Factor::permute({Var::z, Var::x, Var::y}),
                   Factor::elem(Var::y, -X(3))};
    EXPECT_EQ(coordinate_prefix(a, Z() - X(2)), std::optional<std::size_t>(1));
    EXPECT_EQ(coordinate_prefix(a, Y()), std::optional<std::size_t>(0));
    EXPECT_FALSE(coordinate_prefix(a, Z() - X(3)).has_value());
}

TEST(PrefixTriples, ForwardMatchesPullback) {
    FactoredAuto a{Factor::elem(Var::y, X(2) * Z()), Factor::permute({Var::y, Var::z, Var::x}),
                   Factor::scale(Var::z, 2), Factor::elem(Var::x, Y() * Z())};
    std::size_t calls = 0;
    for_each_prefix_triple(a, [&](std::size_t j, const Triple& tr) {
        FactoredAuto pre = a.prefix(j);
        EXPECT_EQ(tr, (Triple{pullback(pre, X()), pullback(pre, Y()), pullback(pre, Z())}));
        ++calls;
    });
    EXPECT_EQ(calls, a.size() + 1);
}
