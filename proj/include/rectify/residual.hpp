#pragma once

#include <cstdint>
#include <cstdlib>
#include <map>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rectify/automorphism.hpp"
#include "rectify/embedding.hpp"
#include "rectify/errors.hpp"
#include "rectify/format.hpp"
#include "rectify/poly.hpp"

namespace rectify {

struct ClearingResult {
    FactoredAuto cleared;    // input followed by the appended Elem(target, .) factors
    LaurentPoly correction;  // sum of appended payloads
    int iterations = 0;
    std::vector<LaurentPoly> payloads;
};

/// Post-composes a composite over k[x, 1/x] with elementary maps on `target`
/// until the target component has no negative x-powers.
///
/// Each pass reads the negative part N of the target component and appends
/// Elem(target, -N). N must be free of the target, and the x-valuation of the
/// next negative part must strictly exceed that of N; this is the termination
/// argument and it is checked on every pass.
inline ClearingResult clear_denominators(const FactoredAuto& input, Var target, std::optional<int> max_iters = {}) {
    if (target != Var::y && target != Var::z)
        throw Error(ErrorKind::PreconditionViolated, "clearing target must be y or z");
    Triple tr = to_triple(input);
    if (tr[0] != X()) throw Error(ErrorKind::PreconditionViolated, "composite does not fix x");
    for (Var v : {Var::y, Var::z}) {
        if (v == target) continue;
        if (!is_polynomial_in(tr[index(v)], Var::x))
            throw Error(ErrorKind::PreconditionViolated,
                        std::string("non-target component ") + var_name(v) + " has negative x-powers");
    }

    // Only the negative part of the target component is ever read. Each pass
    // subtracts the pullback of a part free of the target, i.e. a Laurent
    // polynomial in x and the fixed non-target component G. G lies in k[x][y,z]
    // and x-valuations only rise, so powers of G are needed modulo x^bound.
    const Var other = target == Var::y ? Var::z : Var::y;
    LaurentPoly neg = split_by_x_sign(tr[index(target)]).first;
    const std::int64_t bound = neg.is_zero() ? 0 : -*x_valuation(neg);
    auto truncate = [bound](const LaurentPoly& p) {
        LaurentPoly out;
        for (const auto& [m, c] : p.terms())
            if (m[Var::x] < bound) out.add_term(m, c);
        return out;
    };
    const LaurentPoly g = truncate(tr[index(other)]);
    std::vector<LaurentPoly> powers{LaurentPoly(1)};
    auto power = [&](std::int64_t k) -> const LaurentPoly& {
        while (static_cast<std::int64_t>(powers.size()) <= k) powers.push_back(truncate(powers.back() * g));
        return powers[static_cast<std::size_t>(k)];
    };
    auto negative_pullback = [&](const LaurentPoly& p) {
        std::map<std::int64_t, LaurentPoly> by_power;
        for (const auto& [m, c] : p.terms()) by_power[m[other]].add_term(m.without(other), c);
        LaurentPoly out;
        for (const auto& [k, part] : by_power) out += split_by_x_sign(part * power(k)).first;
        return out;
    };

    int cap = max_iters.value_or(neg.is_zero() ? 2 : static_cast<int>(bound) + 2);
    if (cap <= 0) throw Error(ErrorKind::PreconditionViolated, "max_iters must be positive");

    ClearingResult result{input, LaurentPoly{}, 0, {}};
    while (!neg.is_zero()) {
        if (result.iterations >= cap)
            throw Error(ErrorKind::MaxIters, "iteration cap " + std::to_string(cap) + " reached; residue " + format(neg));
        if (neg.involves(target))
            throw Error(ErrorKind::NonClearable, "negative part involves the target: " + format(neg));
        std::int64_t before = *x_valuation(neg);

        // Appending Elem(target, -N) changes the target component by -pullback(current map, N).
        LaurentPoly next = neg - negative_pullback(neg);
        result.cleared = result.cleared.then(Factor::elem(target, -neg));
        result.correction -= neg;
        result.payloads.push_back(-neg);
        ++result.iterations;

        neg = std::move(next);
        if (!neg.is_zero() && *x_valuation(neg) <= before)
            throw Error(ErrorKind::Stalled, "x-valuation did not increase past " + std::to_string(before) +
                                                "; residue " + format(neg));
    }
    result.cleared = certify_polynomial(result.cleared);
    return result;
}

/// Rectification from a Laurent composite whose `coordinate` component pulls
/// back to t: clear denominators on `clear_target`, then complete the
/// polynomial coordinate to (t, 0, 0).
///
/// When clear_target differs from the coordinate the appended factors fix the
/// coordinate component outright. When they coincide the appended payloads
/// must vanish along the embedding; rectify_from_coordinate re-checks this.
inline RectificationCertificate criterion_rectify(const Embedding& e, const FactoredAuto& pre_factors,
                                                  Var coordinate_component, Var clear_target,
                                                  Transcript transcript = {}) {
    if (coordinate_component == Var::t) throw Error(ErrorKind::PreconditionViolated, "coordinate must be x, y or z");
    LaurentPoly f0 = pullback(pre_factors, LaurentPoly::var(coordinate_component));
    LaurentPoly image = pullback_embed(e, f0);
    if (image != T())
        throw Error(ErrorKind::PullbackNotT, "phi*(" + format(f0) + ") = " + format(image) + ", expected t");
    transcript.push_back(identity_entry(std::string("phi* pre*(") + var_name(coordinate_component) + ")", f0, image));

    if (coordinate_component == Var::x) return rectify_from_coordinate(e, certify_polynomial(pre_factors), Var::x,
                                                                       std::move(transcript));

    ClearingResult cr = clear_denominators(pre_factors, clear_target);
    transcript.push_back({"clearing correction (" + std::to_string(cr.iterations) + " passes)",
                          std::string(1, var_name(clear_target)), format(cr.correction)});
    return rectify_from_coordinate(e, cr.cleared, coordinate_component, std::move(transcript));
}

}  // namespace rectify
