#pragma once

#include <json.hpp>

#include "hmf/qexp.hpp"

namespace hmf {

// Context / form / eigen-spec (de)serialization.  Field elements appear as
// [a, b] integer pairs in the integral basis (1, omega); coefficient-field
// elements as their integer codes.
QexpContextPtr context_from_json(const nlohmann::json& j);
QExpansion form_from_json(QexpContextPtr ctx, const nlohmann::json& j);
nlohmann::json form_to_json(const QExpansion& f);
EigenSpec eigenspec_from_json(const QexpContext& ctx, const nlohmann::json& j);

// Minimal single-component context inferred from a form file, for operators
// that need no component motions.
QexpContextPtr context_from_form_json(const nlohmann::json& j);

}  // namespace hmf
