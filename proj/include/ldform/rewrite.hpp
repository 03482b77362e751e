#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ldform/term.hpp"

// One-step rewriting: the expansion relation -> given by a(bc) ~> (ab)(ac),
// and the full set of directed laws for composition terms, applied at any
// position.

namespace ldform {

enum class Rule : uint8_t {
  LdExpand,    // a(bc) -> (ab)(ac)
  LdContract,  // (ab)(ac) -> a(bc)
  AssocLR,     // a o (b o c) -> (a o b) o c
  AssocRL,     // (a o b) o c -> a o (b o c)
  CompAppLR,   // (a o b) c -> a (b c)
  CompAppRL,   // a (b c) -> (a o b) c
  DistLR,      // a (b o c) -> ab o ac
  DistRL,      // ab o ac -> a (b o c)
  AbsorbLR,    // a o b -> ab o a
  AbsorbRL,    // ab o a -> a o b
};

const char* rule_name(Rule r);
std::optional<Rule> rule_from_name(std::string_view name);
Rule inverse(Rule r);

struct RewriteStep {
  std::string pos;  // path from the root, over {'L','R'}
  Rule rule;
  Term before;  // full term before the step
  Term after;   // full term after the step
};

// Applies `r` to the subterm of `t` at `pos`; empty when the pattern does
// not match there.
std::optional<Term> apply_rule_at(Term t, std::string_view pos, Rule r);

// All single -> steps from t (LdExpand at every matching position).
std::vector<RewriteStep> ld_successors(Term t);

// All single applications of any directed law at any position.
std::vector<RewriteStep> sigma_neighbors(Term t);

struct CommonReductResult {
  std::optional<Term> meet;
  uint64_t cost = 0;  // expanded nodes
  bool budget_exhausted = false;
  // Step lists from u and from v to the meet (when found).
  std::vector<RewriteStep> path_u, path_v;
};

// Breadth-first closure of each side under ->, expanded in lockstep layers
// with deduplication; returns a term reachable from both. Absence after
// budget exhaustion proves nothing.
CommonReductResult common_reduct(Term u, Term v, uint64_t budget);

}  // namespace ldform
