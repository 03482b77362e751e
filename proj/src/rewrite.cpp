#include "ldform/rewrite.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace ldform {

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::LdExpand: return "ld_expand";
    case Rule::LdContract: return "ld_contract";
    case Rule::AssocLR: return "assoc_lr";
    case Rule::AssocRL: return "assoc_rl";
    case Rule::CompAppLR: return "comp_app_lr";
    case Rule::CompAppRL: return "comp_app_rl";
    case Rule::DistLR: return "dist_lr";
    case Rule::DistRL: return "dist_rl";
    case Rule::AbsorbLR: return "absorb_lr";
    case Rule::AbsorbRL: return "absorb_rl";
  }
  return "?";
}

std::optional<Rule> rule_from_name(std::string_view name) {
  for (int i = 0; i <= int(Rule::AbsorbRL); ++i)
    if (name == rule_name(Rule(i))) return Rule(i);
  return std::nullopt;
}

Rule inverse(Rule r) {
  switch (r) {
    case Rule::LdExpand: return Rule::LdContract;
    case Rule::LdContract: return Rule::LdExpand;
    case Rule::AssocLR: return Rule::AssocRL;
    case Rule::AssocRL: return Rule::AssocLR;
    case Rule::CompAppLR: return Rule::CompAppRL;
    case Rule::CompAppRL: return Rule::CompAppLR;
    case Rule::DistLR: return Rule::DistRL;
    case Rule::DistRL: return Rule::DistLR;
    case Rule::AbsorbLR: return Rule::AbsorbRL;
    case Rule::AbsorbRL: return Rule::AbsorbLR;
  }
  return r;
}

namespace {

std::optional<Term> apply_here(Term t, Rule r) {
  switch (r) {
    case Rule::LdExpand:
      if (t.is_app() && t.right().is_app()) {
        Term a = t.left(), b = t.right().left(), c = t.right().right();
        return app(app(a, b), app(a, c));
      }
      break;
    case Rule::LdContract:
      if (t.is_app() && t.left().is_app() && t.right().is_app() &&
          t.left().left() == t.right().left()) {
        Term a = t.left().left(), b = t.left().right(), c = t.right().right();
        return app(a, app(b, c));
      }
      break;
    case Rule::AssocLR:
      if (t.is_comp() && t.right().is_comp()) {
        Term a = t.left(), b = t.right().left(), c = t.right().right();
        return comp(comp(a, b), c);
      }
      break;
    case Rule::AssocRL:
      if (t.is_comp() && t.left().is_comp()) {
        Term a = t.left().left(), b = t.left().right(), c = t.right();
        return comp(a, comp(b, c));
      }
      break;
    case Rule::CompAppLR:
      if (t.is_app() && t.left().is_comp()) {
        Term a = t.left().left(), b = t.left().right(), c = t.right();
        return app(a, app(b, c));
      }
      break;
    case Rule::CompAppRL:
      if (t.is_app() && t.right().is_app()) {
        Term a = t.left(), b = t.right().left(), c = t.right().right();
        return app(comp(a, b), c);
      }
      break;
    case Rule::DistLR:
      if (t.is_app() && t.right().is_comp()) {
        Term a = t.left(), b = t.right().left(), c = t.right().right();
        return comp(app(a, b), app(a, c));
      }
      break;
    case Rule::DistRL:
      if (t.is_comp() && t.left().is_app() && t.right().is_app() &&
          t.left().left() == t.right().left()) {
        Term a = t.left().left(), b = t.left().right(), c = t.right().right();
        return app(a, comp(b, c));
      }
      break;
    case Rule::AbsorbLR:
      if (t.is_comp()) {
        Term a = t.left(), b = t.right();
        return comp(app(a, b), a);
      }
      break;
    case Rule::AbsorbRL:
      if (t.is_comp() && t.left().is_app() && t.left().left() == t.right()) {
        Term a = t.right(), b = t.left().right();
        return comp(a, b);
      }
      break;
  }
  return std::nullopt;
}

constexpr Rule kSigmaRules[] = {
    Rule::LdExpand, Rule::LdContract, Rule::AssocLR,  Rule::AssocRL,
    Rule::CompAppLR, Rule::CompAppRL, Rule::DistLR,   Rule::DistRL,
    Rule::AbsorbLR, Rule::AbsorbRL,
};

template <typename RuleSpan>
std::vector<RewriteStep> steps_of(Term t, const RuleSpan& rules) {
  std::vector<RewriteStep> out;
  for (const auto& [pos, sub] : subterms(t)) {
    for (Rule r : rules) {
      if (auto repl = apply_here(sub, r)) {
        out.push_back({pos, r, t, replace_at(t, pos, *repl)});
      }
    }
  }
  return out;
}

}  // namespace

std::optional<Term> apply_rule_at(Term t, std::string_view pos, Rule r) {
  Term sub = subterm_at(t, pos);
  auto repl = apply_here(sub, r);
  if (!repl) return std::nullopt;
  return replace_at(t, pos, *repl);
}

std::vector<RewriteStep> ld_successors(Term t) {
  const Rule only[] = {Rule::LdExpand};
  return steps_of(t, only);
}

std::vector<RewriteStep> sigma_neighbors(Term t) {
  return steps_of(t, kSigmaRules);
}

CommonReductResult common_reduct(Term u, Term v, uint64_t budget) {
  CommonReductResult res;

  struct Side {
    std::unordered_map<TermId, std::pair<TermId, RewriteStep>> parent;
    std::unordered_set<TermId> seen;
    std::deque<Term> frontier;
  };
  Side su, sv;
  su.seen.insert(u.id());
  su.frontier.push_back(u);
  sv.seen.insert(v.id());
  sv.frontier.push_back(v);

  auto meet_check = [&](Term candidate) -> bool {
    return su.seen.count(candidate.id()) && sv.seen.count(candidate.id());
  };
  auto trace = [&](Side& s, Term from, Term to) {
    std::vector<RewriteStep> path;
    TermId cur = to.id();
    while (cur != from.id()) {
      auto it = s.parent.find(cur);
      path.push_back(it->second.second);
      cur = it->second.first;
    }
    std::reverse(path.begin(), path.end());
    return path;
  };
  auto finish = [&](Term meet) {
    res.meet = meet;
    res.path_u = trace(su, u, meet);
    res.path_v = trace(sv, v, meet);
  };

  if (meet_check(u)) {
    finish(u);
    return res;
  }

  bool turn_u = true;
  while (!su.frontier.empty() || !sv.frontier.empty()) {
    Side& side = turn_u ? su : sv;
    Side& other = turn_u ? sv : su;
    turn_u = !turn_u;
    if (side.frontier.empty()) continue;

    size_t layer = side.frontier.size();
    for (size_t k = 0; k < layer; ++k) {
      Term t = side.frontier.front();
      side.frontier.pop_front();
      if (res.cost >= budget) {
        res.budget_exhausted = true;
        return res;
      }
      ++res.cost;
      for (const RewriteStep& st : ld_successors(t)) {
        if (!side.seen.insert(st.after.id()).second) continue;
        side.parent.emplace(st.after.id(), std::make_pair(t.id(), st));
        side.frontier.push_back(st.after);
        if (other.seen.count(st.after.id())) {
          finish(st.after);
          return res;
        }
      }
    }
  }
  return res;  // both closures exhausted without meeting: provably distinct
               // is still not claimed; caller treats as not found
}

}  // namespace ldform
