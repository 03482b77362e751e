#include "ldform/serialize.hpp"

namespace ldform {

using nlohmann::json;

json step_json(const RewriteStep& s) {
  return json{{"position", s.pos},
              {"rule", rule_name(s.rule)},
              {"term", print(s.after)}};
}

json trace_json(const std::vector<RewriteStep>& steps) {
  json arr = json::array();
  for (const auto& s : steps) arr.push_back(step_json(s));
  return arr;
}

json df_json(Term p, DfId d) {
  DfCtx& ctx = DfCtx::for_p(p);
  if (df_is_leaf(d)) return json{{"leaf", print(ctx.to_term(d))}};
  json comps = json::array();
  for (DfId c : df_components(d)) comps.push_back(df_json(p, c));
  return json{{"p", print(p)},
              {"components", comps},
              {"star", df_star(d) == Star::App ? "app" : "comp"}};
}

json nf_json(Term p, NfId n) {
  NfCtx& ctx = NfCtx::for_p(p);
  if (nf_is_leaf(n)) return json{{"leaf", print(ctx.to_term(n))}};
  json comps = json::array();
  for (NfId c : nf_components(n)) comps.push_back(nf_json(p, c));
  return json{{"p", print(p)},
              {"power", nf_power(n)},
              {"components", comps},
              {"star", nf_star(n) == Star::App ? "app" : "comp"}};
}

}  // namespace ldform
