#include "ssm/family_json.hpp"

#include "json.hpp"

namespace ssm {

namespace {

double need_number(const nlohmann::json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_number())
        throw ConfigError("missing or non-numeric value", field);
    return j[field].get<double>();
}

double opt_number(const nlohmann::json& j, const char* field, double dflt) {
    if (!j.contains(field)) return dflt;
    if (!j[field].is_number()) throw ConfigError("non-numeric value", field);
    return j[field].get<double>();
}

}  // namespace

CharacteristicExponent family_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const std::exception& ex) {
        throw ConfigError(std::string("invalid JSON: ") + ex.what(), "family");
    }
    if (!j.contains("family") || !j["family"].is_string())
        throw ConfigError("missing family name", "family");
    std::string fam = j["family"].get<std::string>();
    double shift = opt_number(j, "esscher_shift", 0.0);

    CharacteristicExponent e = [&]() {
        if (fam == "brownian_drift" || fam == "brownian")
            return CharacteristicExponent::brownian_drift(need_number(j, "gamma"));
        if (fam == "stable")
            return CharacteristicExponent::stable(need_number(j, "c"), need_number(j, "rho"));
        if (fam == "pochhammer")
            return CharacteristicExponent::pochhammer(need_number(j, "rho"), opt_number(j, "beta", 1.0),
                                                      need_number(j, "gamma"));
        if (fam == "custom") {
            LevyTriplet t;
            t.b = need_number(j, "b");
            t.sigma = opt_number(j, "sigma", 0.0);
            if (t.sigma < 0.0) throw ConfigError("sigma must be >= 0", "sigma");
            if (j.contains("nu")) {
                if (!j["nu"].is_array()) throw ConfigError("nu must be an array of pieces", "nu");
                for (const auto& p : j["nu"]) {
                    NuPiece piece;
                    std::string kind = p.value("kind", "");
                    if (kind == "exponential") piece.kind = NuPiece::Kind::exponential;
                    else if (kind == "power_law") piece.kind = NuPiece::Kind::power_law;
                    else if (kind == "polynomial") piece.kind = NuPiece::Kind::polynomial;
                    else throw ConfigError("unknown nu piece kind '" + kind + "'", "nu.kind");
                    piece.coef = need_number(p, "coef");
                    piece.param = opt_number(p, "param", 1.0);
                    piece.lo = opt_number(p, "lo", 0.0);
                    piece.hi = opt_number(p, "hi", -1.0);
                    if (p.contains("poly")) piece.poly = p["poly"].get<std::vector<double>>();
                    if (piece.kind == NuPiece::Kind::polynomial && piece.hi < 0.0)
                        throw ConfigError("polynomial pieces need compact support", "nu.hi");
                    t.pieces.push_back(std::move(piece));
                }
            }
            return CharacteristicExponent::custom(std::move(t));
        }
        throw ConfigError("unknown family '" + fam + "'", "family");
    }();
    if (shift < 0.0) throw ConfigError("esscher_shift must be >= 0", "esscher_shift");
    return shift > 0.0 ? e.esscher(shift) : e;
}

std::string family_to_json(const CharacteristicExponent& e) {
    nlohmann::json j;
    j["describe"] = e.describe();
    j["mean"] = e.mean();
    auto th = e.cramer_root();
    if (th) j["theta"] = *th;
    RegularVariation rv = e.regular_variation();
    j["regular_variation"] = {{"beta", rv.beta}, {"l", rv.l}, {"estimated", rv.estimated}};
    j["gamma_shift"] = e.gamma_shift();
    return j.dump(2);
}

}  // namespace ssm
