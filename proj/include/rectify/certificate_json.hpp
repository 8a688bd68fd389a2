#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "rectify/automorphism.hpp"
#include "rectify/embedding.hpp"
#include "rectify/errors.hpp"
#include "rectify/format.hpp"
#include "rectify/rational.hpp"

namespace rectify {

inline constexpr std::string_view kCertificateVersion = "rectify-certificate/1";

/// On-disk form of a certificate. Field order in the JSON object is fixed:
///
///   version, embedding[3], coordinate,
///   factors[{kind, target, payload}], transcript[{label, lhs, rhs}], verified
///
/// kind is "elem", "scale" or "permute". target is a variable name, or for
/// permute the word "zxy" meaning x -> z, y -> x, z -> y. payload is a
/// polynomial for elem, a rational for scale and "" for permute.
struct CertificateDocument {
    std::string version{kCertificateVersion};
    RectificationCertificate certificate;
    bool verified = false;
};

using Json = nlohmann::ordered_json;

inline Json factor_to_json(const Factor& f) {
    Json j;
    switch (f.kind()) {
        case FactorKind::Elem:
            j["kind"] = "elem";
            j["target"] = std::string(1, var_name(f.target()));
            j["payload"] = format(f.add());
            break;
        case FactorKind::Scale:
            j["kind"] = "scale";
            j["target"] = std::string(1, var_name(f.target()));
            j["payload"] = to_string(f.unit());
            break;
        case FactorKind::Permute:
            j["kind"] = "permute";
            j["target"] = to_string(f.word());
            j["payload"] = "";
            break;
    }
    return j;
}

inline Json to_json(const CertificateDocument& doc) {
    const auto& c = doc.certificate;
    Json j;
    j["version"] = doc.version;
    j["embedding"] = Json::array({format(c.embedding.x()), format(c.embedding.y()), format(c.embedding.z())});
    j["coordinate"] = format(c.coordinate);
    j["factors"] = Json::array();
    for (const auto& f : c.theta.factors()) j["factors"].push_back(factor_to_json(f));
    j["transcript"] = Json::array();
    for (const auto& e : c.transcript) {
        Json entry;
        entry["label"] = e.label;
        entry["lhs"] = e.lhs;
        entry["rhs"] = e.rhs;
        j["transcript"].push_back(std::move(entry));
    }
    j["verified"] = doc.verified;
    return j;
}

inline std::string serialize(const CertificateDocument& doc) { return to_json(doc).dump(2) + "\n"; }

namespace detail {

inline const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'", 0);
    return j.at(key);
}

inline std::string string_field(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_string()) throw ParseError(std::string("field '") + key + "' must be a string", 0);
    return v.get<std::string>();
}

inline Var parse_var_name(const std::string& s) {
    if (s == "x") return Var::x;
    if (s == "y") return Var::y;
    if (s == "z") return Var::z;
    throw ParseError("unknown variable '" + s + "'", 0);
}

inline Factor factor_from_json(const Json& j) {
    std::string kind = string_field(j, "kind");
    std::string target = string_field(j, "target");
    std::string payload = string_field(j, "payload");
    if (kind == "elem") return Factor::elem(parse_var_name(target), parse(payload));
    if (kind == "scale") return Factor::scale(parse_var_name(target), rational_from_string(payload));
    if (kind == "permute") {
        if (target.size() != 3) throw ParseError("permutation word must have three letters", 0);
        PermWord w{};
        for (std::size_t i = 0; i < 3; ++i) w[i] = parse_var_name(std::string(1, target[i]));
        return Factor::permute(w);
    }
    throw ParseError("unknown factor kind '" + kind + "'", 0);
}

}  // namespace detail

/// Reads a document. Structural problems raise ParseError; invalid factors
/// raise InvalidFactor. Nothing is verified here.
inline CertificateDocument parse_document(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
    }
    const Json& emb = detail::field(j, "embedding");
    if (!emb.is_array() || emb.size() != 3) throw ParseError("embedding must be an array of three strings", 0);
    std::vector<LaurentPoly> comps;
    for (const auto& c : emb) {
        if (!c.is_string()) throw ParseError("embedding components must be strings", 0);
        comps.push_back(parse(c.get<std::string>()));
    }
    const Json& fs = detail::field(j, "factors");
    if (!fs.is_array()) throw ParseError("factors must be an array", 0);
    std::vector<Factor> factors;
    for (const auto& f : fs) factors.push_back(detail::factor_from_json(f));

    Transcript transcript;
    if (j.contains("transcript")) {
        const Json& tr = j.at("transcript");
        if (!tr.is_array()) throw ParseError("transcript must be an array", 0);
        for (const auto& e : tr)
            transcript.push_back(
                {detail::string_field(e, "label"), detail::string_field(e, "lhs"), detail::string_field(e, "rhs")});
    }

    const Json& verified = detail::field(j, "verified");
    if (!verified.is_boolean()) throw ParseError("verified must be a boolean", 0);

    return CertificateDocument{
        detail::string_field(j, "version"),
        RectificationCertificate{Embedding(comps[0], comps[1], comps[2]), parse(detail::string_field(j, "coordinate")),
                                 FactoredAuto(std::move(factors)), std::move(transcript)},
        verified.get<bool>()};
}

}  // namespace rectify
