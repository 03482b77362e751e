#include "ldform/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace ldform {

const char* overdict_name(OVerdict v) {
  switch (v) {
    case OVerdict::Less: return "Less";
    case OVerdict::Equal: return "Equal";
    case OVerdict::Greater: return "Greater";
    case OVerdict::Unknown: return "Unknown";
  }
  return "?";
}

// A Ball is the growing equivalence neighborhood of one term: all terms
// reached by the symmetric step relation (both directions of every law),
// kept below a leaf-count cap. `spines` holds every proper iterated left
// subterm of every member; u occurs on the left of v's class iff
// spines(v) meets members(u).
struct Oracle::Ball {
  Term origin;
  bool sigma;  // full law set; otherwise expand/contract only (A-terms)
  int cap = 0;
  std::unordered_set<TermId> members;
  std::unordered_set<TermId> spines;
  // host for each spine element, for certificates
  std::unordered_map<TermId, TermId> spine_host;
  std::vector<Term> frontier;

  explicit Ball(Term t, bool sig) : origin(t), sigma(sig) {
    members.insert(t.id());
    frontier.push_back(t);
    add_spines(t);
  }

  void add_spines(Term t) {
    Term s = t;
    while (!s.is_gen()) {
      s = s.left();
      if (spines.insert(s.id()).second) spine_host.emplace(s.id(), t.id());
    }
  }

  // Expands until the node budget is consumed or the frontier empties.
  // Returns the number of expansions performed.
  uint64_t grow(int new_cap, uint64_t node_budget) {
    cap = std::max(cap, new_cap);
    uint64_t used = 0;
    std::vector<Term> next;
    while (!frontier.empty() && used < node_budget) {
      Term t = frontier.back();
      frontier.pop_back();
      ++used;
      auto steps = sigma ? sigma_neighbors(t) : ld_ball_steps(t);
      for (const RewriteStep& st : steps) {
        Term a = st.after;
        if (a.leaves() > cap) continue;
        if (!members.insert(a.id()).second) continue;
        frontier.push_back(a);
        add_spines(a);
      }
    }
    return used;
  }

  static std::vector<RewriteStep> ld_ball_steps(Term t) {
    std::vector<RewriteStep> out;
    for (const auto& [pos, sub] : subterms(t)) {
      for (Rule r : {Rule::LdExpand, Rule::LdContract}) {
        // local re-application; keep in sync with rewrite.cpp
        if (auto u = apply_rule_at(t, pos, r)) {
          out.push_back({pos, r, t, *u});
        }
      }
    }
    return out;
  }
};

Oracle::Oracle(OracleBudget budget) : budget_(budget) {}
Oracle::~Oracle() = default;

Oracle::Ball& Oracle::ball(Term t, bool sigma) {
  uint64_t key = (uint64_t(t.id()) << 1) | uint64_t(sigma);
  auto it = balls_.find(key);
  if (it == balls_.end())
    it = balls_.emplace(key, std::make_unique<Ball>(t, sigma)).first;
  return *it->second;
}

OracleResult Oracle::run(Term u, Term v, bool want_order) {
  uint64_t vkey = (uint64_t(u.id()) << 32) | uint64_t(v.id());
  if (auto it = verdicts_.find(vkey); it != verdicts_.end()) {
    if (it->second.verdict != OVerdict::Unknown || !want_order)
      return it->second;
  }

  bool sigma = !(u.is_A() && v.is_A());
  Ball& bu = ball(u, sigma);
  Ball& bv = ball(v, sigma);

  OracleResult res;
  int maxl = std::max(u.leaves(), v.leaves());
  int base_cap = budget_.size_cap ? budget_.size_cap : 3 * std::max(4, maxl);

  auto check = [&]() -> bool {
    int hits = 0;
    // Equal: member intersection.
    const auto& small_m =
        bu.members.size() <= bv.members.size() ? bu.members : bv.members;
    const auto& big_m =
        bu.members.size() <= bv.members.size() ? bv.members : bu.members;
    for (TermId id : small_m)
      if (big_m.count(id)) {
        res.verdict = OVerdict::Equal;
        res.meet = Term(id);
        ++hits;
        break;
      }
    if (want_order) {
      for (TermId id : bv.spines)
        if (bu.members.count(id)) {
          if (res.verdict == OVerdict::Equal)
            throw std::runtime_error("oracle: Equal and Less both witnessed");
          res.verdict = OVerdict::Less;
          res.occurrence = {Term(bv.spine_host.at(id)), Term(id)};
          ++hits;
          break;
        }
      for (TermId id : bu.spines)
        if (bv.members.count(id)) {
          if (res.verdict != OVerdict::Unknown)
            throw std::runtime_error("oracle: conflicting witnesses");
          res.verdict = OVerdict::Greater;
          res.occurrence = {Term(bu.spine_host.at(id)), Term(id)};
          ++hits;
          break;
        }
    }
    return hits > 0;
  };

  // Round 0 may hit immediately (e.g. identical terms).
  if (!check()) {
    uint64_t per_round = std::max<uint64_t>(budget_.nodes / std::max(1, budget_.rounds), 64);
    for (int round = 0; round < budget_.rounds; ++round) {
      int cap = base_cap + round * std::max(2, maxl / 2);
      uint64_t slice = per_round / 2 + 1;
      res.cost += bu.grow(cap, slice);
      res.cost += bv.grow(cap, slice);
      if (check()) break;
      if (bu.frontier.empty() && bv.frontier.empty()) break;
    }
  }

  total_cost_ += res.cost;
  if (res.verdict != OVerdict::Unknown) {
    verdicts_[vkey] = res;
    // record the mirror verdict for consistency
    OracleResult mirror = res;
    if (res.verdict == OVerdict::Less)
      mirror.verdict = OVerdict::Greater;
    else if (res.verdict == OVerdict::Greater)
      mirror.verdict = OVerdict::Less;
    verdicts_[(uint64_t(v.id()) << 32) | uint64_t(u.id())] = mirror;
  }
  return res;
}

OracleResult Oracle::equal(Term u, Term v) {
  OracleResult r = run(u, v, false);
  if (r.verdict != OVerdict::Equal) r.verdict = OVerdict::Unknown;
  return r;
}

OracleResult Oracle::compare(Term u, Term v) { return run(u, v, true); }

OracleResult oracle_equal(Term u, Term v, OracleBudget budget) {
  Oracle o(budget);
  return o.equal(u, v);
}

OracleResult oracle_compare(Term u, Term v, OracleBudget budget) {
  Oracle o(budget);
  return o.compare(u, v);
}

}  // namespace ldform
