#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ldform/rewrite.hpp"
#include "ldform/term.hpp"

// Independent bounded brute-force decision of equality and of the left
// division order, by searching rewrite neighborhoods. Sound but incomplete:
// Unknown is an honest outcome on budget exhaustion. This module never calls
// into the division-form machinery.

namespace ldform {

enum class OVerdict : uint8_t { Less, Equal, Greater, Unknown };

const char* overdict_name(OVerdict v);

struct OracleBudget {
  uint64_t nodes = 200000;  // neighborhood expansions across the whole query
  int size_cap = 0;         // max leaves kept; 0 = 3 * max(4, input leaves)
  int rounds = 3;           // escalation rounds (cap grows each round)
};

struct OracleResult {
  OVerdict verdict = OVerdict::Unknown;
  uint64_t cost = 0;
  // Equal: a term in both neighborhoods.
  std::optional<Term> meet;
  // Less/Greater: (host, prefix) with host equivalent to the larger side and
  // prefix an iterated left subterm of host equivalent to the smaller side.
  std::optional<std::pair<Term, Term>> occurrence;
};

// Caches equivalence neighborhoods per term so that repeated queries over an
// enumeration share work.
class Oracle {
public:
  explicit Oracle(OracleBudget budget = {});
  ~Oracle();
  Oracle(const Oracle&) = delete;
  Oracle& operator=(const Oracle&) = delete;

  // Equal or Unknown.
  OracleResult equal(Term u, Term v);
  // Less / Equal / Greater / Unknown.
  OracleResult compare(Term u, Term v);

  uint64_t total_cost() const { return total_cost_; }

private:
  struct Ball;
  Ball& ball(Term t, bool sigma);
  OracleResult run(Term u, Term v, bool want_order);

  OracleBudget budget_;
  uint64_t total_cost_ = 0;
  std::unordered_map<uint64_t, std::unique_ptr<Ball>> balls_;
  std::unordered_map<uint64_t, OracleResult> verdicts_;
};

OracleResult oracle_equal(Term u, Term v, OracleBudget budget = {});
OracleResult oracle_compare(Term u, Term v, OracleBudget budget = {});

}  // namespace ldform
