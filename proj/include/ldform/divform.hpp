#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ldform/oracle.hpp"
#include "ldform/term.hpp"

// Division forms: the canonical representation of elements over a head p,
// with prenormal component chains and leaves denoting elements <= p, plus
// the lexicographic order on them. This is the production comparator for
// the word problem and the left-division order.
//
// A form is either the generator leaf, a leaf holding the x-form of an
// element below p, or a node with components a_0 ... a_n and a final star:
//   app:  p a_0 ... a_n
//   comp: p a_0 ... a_{n-1} o a_n
// Prenormality: a_i <= p a_0 ... a_{i-2} for 1 <= i <= n (the product of p
// and all components up to two before), strictly at i = n for comp nodes.
// The strict clause is what makes representations unique: it rules out the
// reducible shapes (u v) o u of u o v.

namespace ldform {

using DfId = uint32_t;
inline constexpr DfId kGenDf = 0;
inline constexpr DfId kNoDf = 0xffffffffu;

enum class Verdict : uint8_t { Less, Equal, Greater };
const char* verdict_name(Verdict v);

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct WatchdogError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool df_is_leaf(DfId d);
// x-form of a non-generator leaf's value; kNoDf for the generator leaf.
DfId df_leaf_value(DfId d);
Star df_star(DfId d);
const std::vector<DfId>& df_components(DfId d);

struct TierStats {
  uint64_t tier1 = 0;  // append / direct product-calculus paths
  uint64_t tier2 = 0;  // law-driven decomposition without a dominance guard
  uint64_t tier3 = 0;  // search-backed greedy division fallback
  uint64_t proof_path = 0;  // head-shape recursion of the division theorem
};

// Witness that u dominates v (the inductive relation under which the
// product calculus computes |uv| and |u o v| directly). `clause` is the
// defining case that fired, 1-5.
struct SharpWitness {
  int clause = 0;
  std::shared_ptr<SharpWitness> sub;
};

class DfCtx {
public:
  static DfCtx& for_p(Term p);
  static DfCtx& x();  // head = generator

  Term p() const { return p_; }
  DfId p_xdf() const { return p_xdf_; }
  DfId p_leaf() const { return p_leaf_; }
  bool is_x() const { return is_x_; }

  // Total order on forms over this head; Equal iff identical.
  Verdict lex(DfId a, DfId b);

  // Canonical form of the product / composition of two forms.
  DfId mul(DfId a, DfId b);
  DfId comp(DfId a, DfId b);

  // Canonical form of a raw term: structural fold with mul/comp.
  DfId of_term(Term t);

  std::optional<SharpWitness> sharp(DfId u, DfId v);

  bool is_prenormal(const std::vector<DfId>& comps, Star star);

  Term to_term(DfId d);
  // x-form of the element a form denotes (identity for the x context).
  DfId xdf_of(DfId d);

  DfId make_leaf(DfId xval);   // collapses value == head to the head leaf
  DfId make_node(const std::vector<DfId>& comps, Star star);
  // builds the node only when the chain is prenormal
  std::optional<DfId> try_node(const std::vector<DfId>& comps, Star star);

  TierStats stats;

  // configuration
  int lex_bound = 64;
  int max_depth = 20000;
  int tier3_max_depth = 8;
  OracleBudget tier3_budget{400000, 0, 4};

private:
  explicit DfCtx(Term p);

  DfId mul_rec(DfId a, DfId b);
  DfId comp_rec(DfId a, DfId b);
  DfId prefix_node(DfId node) const;  // all components but the last, as a form
  DfId full_node(DfId node) const;    // all components, app star
  DfId tier3_product(DfId a, DfId b, Star star);
  DfId tier3_term(Term w);
  DfId entry_of(DfId node, size_t i, std::vector<DfId>& iters);

  Term p_;
  bool is_x_;
  DfId p_xdf_;
  DfId p_leaf_;
  DfCtx* xctx_;

  int depth_ = 0;
  int tier3_depth_ = 0;
  std::unordered_map<uint64_t, Verdict> lex_memo_;
  std::unordered_map<uint64_t, DfId> mul_memo_;
  std::unordered_map<uint64_t, DfId> comp_memo_;
  std::unordered_map<TermId, DfId> term_memo_;
  std::unordered_map<DfId, Term> to_term_memo_;
  std::unordered_map<DfId, DfId> xdf_memo_;
  std::unique_ptr<Oracle> tier3_oracle_;

  friend struct DepthGuard;
};

// |t|^x, the canonical x-form.
DfId df_of_term(Term t);
// Production comparator: Less / Equal / Greater on elements.
Verdict compare_terms(Term s, Term t);

// |w|^p. Recurses on the head the way the division theorem does: generator
// heads fold directly; composite heads go through the mixed-head form of
// |w|^{p'} when its shape admits the direct assembly, and otherwise fall
// back to the structural fold over the p context.
DfId divide(Term p, Term w);

// Mixed-head form of a p-form: the first component of every node is
// replaced by its q-form, recursively.
struct Hybrid {
  bool is_leaf = false;
  DfId leaf_val = kNoDf;  // x-form when is_leaf
  DfId head_qdf = kNoDf;  // q-form of a_0
  DfId orig_head = kNoDf; // p-form of a_0
  std::vector<Hybrid> tail;  // mixed forms of a_1 ... a_n
  std::vector<DfId> orig_tail;
  Star star = Star::App;
};
Hybrid hybrid_df(Term p, Term q, DfId u_over_p);

// Least n >= 1 with p^(n) greater than q.
int find_power(Term p, Term q);

// Exposed prenormality check over head p.
bool is_prenormal(Term p, const std::vector<DfId>& comps, Star star);

std::string df_sexpr(Term p, DfId d);

}  // namespace ldform
