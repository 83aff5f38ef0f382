#pragma once

#include <json.hpp>

#include "matprop/certify.hpp"
#include "matprop/decide.hpp"
#include "matprop/partial_algebra.hpp"

namespace matprop {

/// {verdict, mode, degenerate, columns: [{entries, provenance}], used_matrices}
nlohmann::json report_to_json(const DecisionReport& report);
DecisionReport report_from_json(const nlohmann::json& j);

/// {status, row, reason, path}, plus subterm / got / expected / degenerate when relevant.
nlohmann::json outcome_to_json(const CheckOutcome& outcome);
CheckOutcome outcome_from_json(const nlohmann::json& j);

/// Entry text "*" or "x<i>"; throws ParseError on anything else.
Entry entry_from_string(const std::string& s);

nlohmann::json algebra_to_json(const FinitePartialAlgebra& a);

}  // namespace matprop
