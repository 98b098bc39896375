#ifndef SSM_FAMILY_JSON_HPP
#define SSM_FAMILY_JSON_HPP

#include <string>

#include "ssm/levy_exponent.hpp"

namespace ssm {

// Thrown on malformed family documents; carries the offending field name.
struct ConfigError : std::runtime_error {
    std::string field;
    ConfigError(const std::string& what, std::string field_)
        : std::runtime_error(what + " (field: " + field_ + ")"), field(std::move(field_)) {}
};

// Parses {"family":"brownian_drift","gamma":...},
//        {"family":"stable","rho":...,"c":...},
//        {"family":"pochhammer","rho":...,"beta":...,"gamma":...},
//        {"family":"custom","b":...,"sigma":...,"nu":[{"kind":...,...}, ...]}
CharacteristicExponent family_from_json(const std::string& json_text);

std::string family_to_json(const CharacteristicExponent& e);

}  // namespace ssm

#endif
