#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "ldform/divform.hpp"
#include "ldform/term.hpp"

// p-normal forms: representation over the alphabet of elements below p
// together with the application powers p^(i). A form is a leaf (element
// strictly below p), or a node p^(i) a_0 ... a_{n-1} * a_n with each a_k a
// form, the chain prenormal over the head power, and a_0 strictly below
// p^(i). Bare powers (empty component list) are complete forms; they are
// forced by elements like p p = p^(1).

namespace ldform {

using NfId = uint32_t;
inline constexpr NfId kNoNf = 0xffffffffu;

bool nf_is_leaf(NfId n);
DfId nf_leaf_value(NfId n);  // x-form of a leaf's element
int nf_power(NfId n);
Star nf_star(NfId n);
const std::vector<NfId>& nf_components(NfId n);

class NfCtx {
public:
  static NfCtx& for_p(Term p);

  Term p() const { return p_; }

  // |w|_p
  NfId of_term(Term w);
  NfId from_df(DfId d);
  Term to_term(NfId n);
  // x-form of the element a form denotes
  DfId elem_xdf(NfId n);

  // structural checks used by tests and the acceptance suite
  bool valid(NfId n);

private:
  explicit NfCtx(Term p);
  NfId make_leaf(DfId xval);
  NfId make_node(int power, const std::vector<NfId>& comps, Star star);
  DfId head_xdf(int power);

  Term p_;
  DfCtx* xctx_;
  std::unordered_map<DfId, NfId> from_df_memo_;
  std::unordered_map<NfId, Term> to_term_memo_;
  std::unordered_map<NfId, DfId> elem_memo_;
  std::vector<DfId> head_memo_;
  int absorb_depth_ = 0;
};

NfId nf_of(Term p, Term w);
Term to_term_nf(Term p, NfId n);
std::string nf_sexpr(Term p, NfId n);

}  // namespace ldform
