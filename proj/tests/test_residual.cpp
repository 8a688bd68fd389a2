#include <gtest/gtest.h>

#include "rectify/residual.hpp"

using namespace rectify;

namespace {

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no exception";
    return ErrorKind::VerificationFailed;
}

// The composite of `a` expanded by repeated substitution, independent of
// the forward evaluation used by the library.
Triple expand(const FactoredAuto& a) { return {pullback(a, X()), pullback(a, Y()), pullback(a, Z())}; }

}  // namespace

TEST(ClearDenominators, NagataFixture) {
    FactoredAuto in{Factor::elem(Var::z, -(Y(2) * X(-1))), Factor::elem(Var::y, X(2) * Z())};
    ClearingResult r = clear_denominators(in, Var::z);
    LaurentPoly w = X() * Z() - Y(2);
    Triple nagata{X(), Y() + X() * w, Z() + 2 * (Y() * w) + X() * w.pow(2)};
    EXPECT_EQ(expand(r.cleared), nagata);
    EXPECT_EQ(r.correction, Y(2) * X(-1));
    EXPECT_EQ(r.iterations, 1);
    EXPECT_FALSE(r.cleared.laurent());
}

TEST(ClearDenominators, ConjugatedFixture) {
    Factor alpha0 = Factor::elem(Var::z, -(Y(2) * X(-2)));
    Factor beta0 = Factor::elem(Var::y, X(3) * Z());
    ClearingResult r = clear_denominators(FactoredAuto{alpha0, beta0, alpha0.inverse()}, Var::z);
    EXPECT_EQ(r.correction, 2 * (Y(3) * X(-1)));
    EXPECT_TRUE(is_polynomial_triple(expand(r.cleared)));
}

TEST(ClearDenominators, AlreadyPolynomialIsUntouched) {
    FactoredAuto in{Factor::elem(Var::y, X() * Z())};
    ClearingResult r = clear_denominators(in, Var::y);
    EXPECT_EQ(r.iterations, 0);
    EXPECT_TRUE(r.correction.is_zero());
    EXPECT_EQ(r.cleared, in);
}

TEST(ClearDenominators, MultiplePasses) {
    // z + (y + x)^3/x^3: each pass pulls the residue back through y + x,
    // which reintroduces lower-order denominators.
    FactoredAuto in{Factor::elem(Var::y, X()), Factor::elem(Var::z, Y(3) * X(-3))};
    ClearingResult r = clear_denominators(in, Var::z);
    EXPECT_EQ(r.iterations, 3);
    EXPECT_EQ(r.payloads[0], -(Y(3) * X(-3) + 3 * (Y(2) * X(-2)) + 3 * (Y() * X(-1))));
    EXPECT_TRUE(is_polynomial_triple(expand(r.cleared)));
    EXPECT_TRUE(is_polynomial_triple(expand(invert(r.cleared))));
    LaurentPoly sum;
    for (const auto& p : r.payloads) sum += p;
    EXPECT_EQ(sum, r.correction);
}

TEST(ClearDenominators, Preconditions) {
    FactoredAuto moves_x{Factor::permute({Var::y, Var::x, Var::z})};
    EXPECT_EQ(kind_of([&] { clear_denominators(moves_x, Var::z); }), ErrorKind::PreconditionViolated);
    // y component y + z/x is Laurent while clearing z.
    FactoredAuto other_laurent{Factor::elem(Var::y, Z() * X(-1))};
    EXPECT_EQ(kind_of([&] { clear_denominators(other_laurent, Var::z); }), ErrorKind::PreconditionViolated);
    EXPECT_EQ(kind_of([&] { clear_denominators(FactoredAuto{}, Var::x); }), ErrorKind::PreconditionViolated);
    EXPECT_EQ(kind_of([&] { clear_denominators(FactoredAuto{}, Var::y, 0); }), ErrorKind::PreconditionViolated);
}

TEST(ClearDenominators, NegativePartInvolvingTarget) {
    // z component z + (y + z)/x.
    FactoredAuto in{Factor::elem(Var::y, Z()), Factor::elem(Var::z, Y() * X(-1))};
    EXPECT_EQ(kind_of([&] { clear_denominators(in, Var::z); }), ErrorKind::NonClearable);
}

TEST(ClearDenominators, Stalled) {
    // z component z + 2y/x over y component 2y: the residue only changes sign.
    FactoredAuto in{Factor::scale(Var::y, 2), Factor::elem(Var::z, Y() * X(-1))};
    EXPECT_EQ(kind_of([&] { clear_denominators(in, Var::z); }), ErrorKind::Stalled);
}

TEST(ClearDenominators, IterationCap) {
    FactoredAuto in{Factor::elem(Var::y, X()), Factor::elem(Var::z, Y(3) * X(-3))};
    EXPECT_EQ(kind_of([&] { clear_denominators(in, Var::z, 1); }), ErrorKind::MaxIters);
}

TEST(CriterionRectify, PullbackMustBeT) {
    Embedding e = Embedding::family(3, 4, 5);
    FactoredAuto wrong{Factor::elem(Var::y, -(Z(2) * X(-2)))};
    EXPECT_EQ(kind_of([&] { criterion_rectify(e, wrong, Var::z, Var::y); }), ErrorKind::PullbackNotT);
}

TEST(CriterionRectify, CraigheroThreeByHand) {
    Embedding e = Embedding::family(3, 4, 5);
    FactoredAuto pre{Factor::elem(Var::y, -(Z(2) * X(-2)) + 2), Factor::elem(Var::z, X(3) * Y())};
    RectificationCertificate c = criterion_rectify(e, pre, Var::z, Var::y);
    EXPECT_TRUE(verify_certificate(c).ok);
    EXPECT_EQ(pullback_embed(e, c.coordinate), T());
}
