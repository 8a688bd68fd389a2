#pragma once

#include <algorithm>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rectify/automorphism.hpp"
#include "rectify/certificate_json.hpp"
#include "rectify/embedding.hpp"
#include "rectify/errors.hpp"
#include "rectify/format.hpp"
#include "rectify/recipes.hpp"
#include "rectify/residual.hpp"

namespace rectify {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;
inline constexpr int no_recipe = 2;
inline constexpr int internal = 3;
}  // namespace exit_code

namespace detail {

inline int exit_code_for(ErrorKind k) {
    switch (k) {
        case ErrorKind::NoRecipeApplies:
        case ErrorKind::RecipeInapplicable:
        case ErrorKind::PreconditionViolated:
            return exit_code::no_recipe;
        default:
            return exit_code::internal;
    }
}

inline std::vector<std::int64_t> split_ints(const std::string& text) {
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoll(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ParseError("bad integer '" + item + "' in recipe parameters", 0);
        }
    }
    return out;
}

inline FamilyShape require_family(const Embedding& e, const std::string& recipe) {
    auto f = family_shape(e);
    if (!f) throw Error(ErrorKind::PreconditionViolated, recipe + " needs an embedding (t^n, t^m, t^l + t)");
    return *f;
}

inline void require_same(const Embedding& given, const RectificationCertificate& c, const std::string& recipe) {
    if (!(given == c.embedding))
        throw Error(ErrorKind::PreconditionViolated,
                    recipe + " rectifies " + format(c.embedding) + ", not " + format(given));
}

// Recipe names are checked before any algebra runs, so a bad name is a usage error.
inline void check_recipe_name(const std::string& recipe) {
    const std::string base = recipe.substr(0, recipe.find(':'));
    static const std::vector<std::string> names{"auto",      "trivial",    "craighero3", "craighero4",
                                                "br-general", "br-n4",      "kuroda"};
    if (std::find(names.begin(), names.end(), base) == names.end())
        throw ParseError("unknown recipe '" + recipe + "'", 0);
    bool takes_args = base == "br-general" || base == "kuroda";
    if (recipe.find(':') != std::string::npos && !takes_args)
        throw ParseError("recipe '" + base + "' takes no parameters", 0);
}

inline DispatchResult run_recipe(const Embedding& e, const std::string& recipe) {
    const std::string base = recipe.substr(0, recipe.find(':'));
    const bool has_args = recipe.find(':') != std::string::npos;
    const std::string args = has_args ? recipe.substr(recipe.find(':') + 1) : "";

    if (base == "auto") return dispatch(e);
    if (base == "trivial") {
        auto c = trivial_rectify(e);
        if (!c) throw Error(ErrorKind::NoRecipeApplies, "no elementary coordinate for " + format(e));
        return {std::move(*c), base, {"trivial: ok"}};
    }
    if (base == "craighero3" || base == "craighero4") {
        RectificationCertificate c = craighero(base == "craighero3" ? 3 : 4);
        require_same(e, c, base);
        return {std::move(c), base, {base + ": ok"}};
    }
    if (base == "br-general") {
        FamilyShape f = require_family(e, base);
        std::int64_t b = (f.l + 1) / std::max<std::int64_t>(f.n, 1);
        if (has_args) {
            auto v = split_ints(args);
            if (v.size() != 1) throw ParseError("br-general takes one parameter b", 0);
            b = v[0];
        }
        RectificationCertificate c = br_general(f.n, f.m, b);
        require_same(e, c, base);
        return {std::move(c), base, {base + ": ok"}};
    }
    if (base == "br-n4") {
        FamilyShape f = require_family(e, base);
        if (f.n != 4 || f.m % 4 != 1)
            throw Error(ErrorKind::PreconditionViolated, "br-n4 needs an embedding (t^4, t^(4a+1), t^m + t)");
        RectificationCertificate c = br_n4((f.m - 1) / 4, f.l);
        require_same(e, c, base);
        return {std::move(c), base, {base + ": ok"}};
    }
    // kuroda
    FamilyShape f = require_family(e, base);
    KurodaParams kp;
    if (has_args) {
        auto v = split_ints(args);
        if (v.size() != 4) throw ParseError("kuroda takes parameters a,c,l,s", 0);
        kp = KurodaParams{f.n, v[0], v[1], v[2], v[3]};
    } else {
        auto found = find_kuroda_params(f);
        if (!found) throw Error(ErrorKind::RecipeInapplicable, "no kuroda parameters fit " + format(e));
        kp = *found;
    }
    RectificationCertificate c = kuroda_general(kp);
    require_same(e, c, base);
    return {std::move(c), base, {base + ": ok"}};
}

inline std::string describe_factor(const Factor& f) {
    switch (f.kind()) {
        case FactorKind::Elem: return std::string("elem ") + var_name(f.target()) + " += " + format(f.add());
        case FactorKind::Scale: return std::string("scale ") + var_name(f.target()) + " *= " + to_string(f.unit());
        case FactorKind::Permute: return "permute " + to_string(f.word());
    }
    return "";
}

inline void print_certificate(std::ostream& out, const std::string& recipe, const RectificationCertificate& c) {
    out << "recipe: " << recipe << "\n";
    out << "embedding: " << format(c.embedding) << "\n";
    out << "coordinate: " << format(c.coordinate) << "\n";
    out << "factors (application order):\n";
    std::size_t i = 0;
    for (const auto& f : c.theta.factors()) out << "  " << ++i << ". " << describe_factor(f) << "\n";
    out << "transcript:\n";
    for (const auto& e : c.transcript) out << "  " << e.label << ": " << e.lhs << " = " << e.rhs << "\n";
    out << "verified: yes\n";
}

inline void print_clearing(std::ostream& out, const FactoredAuto& input, Var target) {
    ClearingResult r = clear_denominators(input, target);
    out << "  input factors:\n";
    for (const auto& f : input.factors()) out << "    " << format(to_triple(FactoredAuto{f})) << "\n";
    out << "  passes: " << r.iterations << "\n";
    out << "  correction on " << var_name(target) << ": " << format(r.correction) << "\n";
    out << "  composite: " << format(to_triple(r.cleared)) << "\n";
}

inline int cmd_embed(const std::string& text, const std::string& recipe, bool json, const std::string& out_path,
                     std::ostream& out, std::ostream& err) {
    std::optional<Embedding> e;
    try {
        check_recipe_name(recipe);
        e = parse_embedding(text);
    } catch (const Error& ex) {
        err << "error: " << ex.what() << "\n";
        return exit_code::usage;
    }

    std::optional<DispatchResult> result;
    try {
        result = run_recipe(*e, recipe);
    } catch (const ParseError& ex) {
        err << "error: " << ex.what() << "\n";
        return exit_code::usage;
    } catch (const Error& ex) {
        err << "error: " << ex.what() << "\n";
        for (const auto& d : ex.details()) err << "  " << d << "\n";
        return exit_code_for(ex.kind());
    }

    // Every emitted certificate is re-read from its serialization and re-verified.
    CertificateDocument doc{std::string(kCertificateVersion), result->certificate, true};
    const std::string text_doc = serialize(doc);
    VerificationReport report = verify_certificate(parse_document(text_doc).certificate);
    if (!report) {
        err << "error: serialized certificate does not verify\n";
        for (const auto& r : report.reasons) err << "  " << r << "\n";
        return exit_code::internal;
    }

    if (!out_path.empty()) {
        std::ofstream f(out_path, std::ios::binary);
        if (!f || !(f << text_doc)) {
            err << "error: cannot write " << out_path << "\n";
            return exit_code::usage;
        }
    }
    if (json) {
        out << text_doc;
    } else {
        print_certificate(out, result->recipe, result->certificate);
    }
    return exit_code::ok;
}

inline int cmd_verify(const std::string& path, std::ostream& out, std::ostream& err) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        err << "error: cannot read " << path << "\n";
        return exit_code::usage;
    }
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    std::optional<CertificateDocument> doc;
    try {
        doc = parse_document(text);
    } catch (const Error& ex) {
        err << "error: " << ex.what() << "\n";
        return exit_code::usage;
    }
    VerificationReport report = verify_certificate(doc->certificate);
    if (!report) {
        err << "certificate does not verify:\n";
        for (const auto& r : report.reasons) err << "  " << r << "\n";
        return exit_code::internal;
    }
    out << "ok: " << format(doc->certificate.coordinate) << " is a coordinate with pullback t; theta maps "
        << format(doc->certificate.embedding) << " to (t, 0, 0)\n";
    return exit_code::ok;
}

inline int cmd_coeffs(int m, std::ostream& out, std::ostream& err) {
    CombCoeffs cc;
    try {
        cc = combinatorial_coeffs(m);
    } catch (const Error& ex) {
        err << "error: " << ex.what() << "\n";
        return ex.kind() == ErrorKind::PreconditionViolated ? exit_code::usage : exit_code::internal;
    }
    out << "alpha = [";
    for (std::size_t i = 0; i < cc.alphas.size(); ++i) out << (i ? ", " : "") << to_string(cc.alphas[i]);
    out << "]\n";
    if (m % 2 == 0) out << "beta = " << to_string(cc.beta) << "\n";
    return exit_code::ok;
}

inline int cmd_demo(const std::string& name, std::ostream& out, std::ostream& err) {
    if (name != "nagata") {
        err << "error: unknown demo '" << name << "' (available: nagata)\n";
        return exit_code::usage;
    }
    out << "Nagata: (x, y, z - y^2/x) then (x, y + x^2*z, z), cleared on z\n";
    print_clearing(out,
                   FactoredAuto{Factor::elem(Var::z, -(Y(2) * X(-1))), Factor::elem(Var::y, X(2) * Z())}, Var::z);

    Factor alpha0 = Factor::elem(Var::z, -(Y(2) * X(-2)));
    Factor beta0 = Factor::elem(Var::y, X(3) * Z());
    out << "\nConjugate: alpha0 = (x, y, z - y^2/x^2), beta0 = (x, y + x^3*z, z); alpha0, beta0, alpha0^-1 "
           "cleared on z\n";
    FactoredAuto conj{alpha0, beta0, alpha0.inverse()};
    ClearingResult r = clear_denominators(conj, Var::z);
    print_clearing(out, conj, Var::z);
    out << "  gamma = " << format(to_triple(FactoredAuto{Factor::elem(Var::z, r.correction)})) << "\n";
    return exit_code::ok;
}

}  // namespace detail

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics to `err`. Exit codes: 0 success, 1 usage or parse error,
/// 2 no applicable recipe, 3 verification failure.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rectify embeddings of the affine line in affine 3-space with verified certificates", "rectify"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kCertificateVersion));

    std::string embed_text, recipe = "auto", out_path;
    bool json = false;
    auto* embed = app.add_subcommand("embed", "Rectify t -> (X, Y, Z) and print a certificate");
    embed->add_option("embedding", embed_text, "Three polynomials in t, e.g. \"t^3,t^4,t^5+t\"")->required();
    embed->add_option("--recipe", recipe,
                      "auto, trivial, craighero3, craighero4, br-general[:b], br-n4, kuroda[:a,c,l,s]");
    embed->add_flag("--json", json, "Print the JSON certificate document");
    embed->add_option("--out", out_path, "Also write the JSON certificate document to this file");

    std::string verify_path;
    auto* verify = app.add_subcommand("verify", "Re-verify a JSON certificate document from scratch");
    verify->add_option("path", verify_path, "Certificate file")->required();

    int m = 0;
    auto* coeffs = app.add_subcommand("coeffs", "Print the combinatorial coefficients for m");
    coeffs->add_option("m", m, "Positive integer")->required()->check(CLI::PositiveNumber);

    std::string demo_name;
    auto* demo = app.add_subcommand("demo", "Run a fixture (nagata)");
    demo->add_option("name", demo_name, "Fixture name")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? exit_code::ok : exit_code::usage;
    }

    try {
        if (*embed) return detail::cmd_embed(embed_text, recipe, json, out_path, out, err);
        if (*verify) return detail::cmd_verify(verify_path, out, err);
        if (*coeffs) return detail::cmd_coeffs(m, out, err);
        return detail::cmd_demo(demo_name, out, err);
    } catch (const Error& ex) {
        err << "error: " << ex.what() << "\n";
        for (const auto& d : ex.details()) err << "  " << d << "\n";
        return detail::exit_code_for(ex.kind());
    }
}

}  // namespace rectify
