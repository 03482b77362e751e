#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "ldform/divform.hpp"
#include "ldform/normalform.hpp"
#include "ldform/rewrite.hpp"

namespace ldform {

nlohmann::json step_json(const RewriteStep& s);
nlohmann::json trace_json(const std::vector<RewriteStep>& steps);
nlohmann::json df_json(Term p, DfId d);
nlohmann::json nf_json(Term p, NfId n);

}  // namespace ldform
