#include "ldform/normalform.hpp"

#include <cassert>
#include <memory>

namespace ldform {

namespace {

struct NfRec {
  bool leaf;
  DfId lv;
  int power;
  Star star;
  std::vector<NfId> comps;
};

struct NfKey {
  bool leaf;
  DfId lv;
  int power;
  uint8_t star;
  std::vector<NfId> comps;
  bool operator==(const NfKey& o) const {
    return leaf == o.leaf && lv == o.lv && power == o.power &&
           star == o.star && comps == o.comps;
  }
};
struct NfKeyHash {
  size_t operator()(const NfKey& k) const {
    uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&](uint64_t v) {
      h ^= v;
      h *= 0x100000001b3ull;
    };
    mix(k.leaf);
    mix(k.lv);
    mix(uint64_t(k.power));
    mix(k.star);
    for (NfId c : k.comps) mix(c);
    return size_t(h);
  }
};

struct NfStore {
  std::vector<NfRec> recs;
  std::unordered_map<NfKey, NfId, NfKeyHash> intern;

  NfId make(NfRec r) {
    NfKey k{r.leaf, r.lv, r.power, uint8_t(r.star), r.comps};
    auto it = intern.find(k);
    if (it != intern.end()) return it->second;
    NfId id = NfId(recs.size());
    recs.push_back(std::move(r));
    intern.emplace(std::move(k), id);
    return id;
  }

  static NfStore& inst() {
    static NfStore s;
    return s;
  }
};

const NfRec& rec(NfId n) { return NfStore::inst().recs[n]; }

}  // namespace

bool nf_is_leaf(NfId n) { return rec(n).leaf; }
DfId nf_leaf_value(NfId n) { return rec(n).lv; }
int nf_power(NfId n) { return rec(n).power; }
Star nf_star(NfId n) { return rec(n).star; }
const std::vector<NfId>& nf_components(NfId n) { return rec(n).comps; }

NfCtx& NfCtx::for_p(Term p) {
  static std::unordered_map<TermId, std::unique_ptr<NfCtx>> reg;
  auto it = reg.find(p.id());
  if (it == reg.end())
    it = reg.emplace(p.id(), std::unique_ptr<NfCtx>(new NfCtx(p))).first;
  return *it->second;
}

NfCtx::NfCtx(Term p) : p_(p), xctx_(&DfCtx::x()) {}

NfId NfCtx::make_leaf(DfId xval) {
  return NfStore::inst().make({true, xval, 0, Star::App, {}});
}

NfId NfCtx::make_node(int power, const std::vector<NfId>& comps, Star star) {
  return NfStore::inst().make({false, kNoDf, power, star, comps});
}

DfId NfCtx::head_xdf(int power) {
  while (int(head_memo_.size()) <= power)
    head_memo_.push_back(
        xctx_->of_term(power_app(p_, int(head_memo_.size()))));
  return head_memo_[power];
}

DfId NfCtx::elem_xdf(NfId n) {
  if (auto it = elem_memo_.find(n); it != elem_memo_.end()) return it->second;
  DfId r;
  if (rec(n).leaf) {
    r = rec(n).lv;
  } else {
    r = head_xdf(rec(n).power);
    const auto& cs = rec(n).comps;
    for (size_t i = 0; i < cs.size(); ++i) {
      DfId c = elem_xdf(cs[i]);
      bool last = i + 1 == cs.size();
      r = (last && rec(n).star == Star::Comp) ? xctx_->comp(r, c)
                                              : xctx_->mul(r, c);
    }
  }
  elem_memo_.emplace(n, r);
  return r;
}

Term NfCtx::to_term(NfId n) {
  if (auto it = to_term_memo_.find(n); it != to_term_memo_.end())
    return it->second;
  Term r;
  if (rec(n).leaf) {
    r = xctx_->to_term(rec(n).lv);
  } else {
    r = power_app(p_, rec(n).power);
    const auto& cs = rec(n).comps;
    for (size_t i = 0; i < cs.size(); ++i) {
      Term c = to_term(cs[i]);
      bool last = i + 1 == cs.size();
      r = (last && rec(n).star == Star::Comp) ? comp(r, c) : app(r, c);
    }
  }
  to_term_memo_.emplace(n, r);
  return r;
}

bool NfCtx::valid(NfId n) {
  if (rec(n).leaf)
    return xctx_->lex(rec(n).lv, DfCtx::for_p(p_).p_xdf()) == Verdict::Less;
  const auto& cs = rec(n).comps;
  DfId head = head_xdf(rec(n).power);
  if (!cs.empty()) {
    // first component strictly below the head power
    if (xctx_->lex(elem_xdf(cs[0]), head) != Verdict::Less) return false;
    // prenormality of head a_0 ... * a_n over the element order
    DfId prod = head;  // product of head and components up to two back
    for (size_t i = 1; i < cs.size(); ++i) {
      Verdict v = xctx_->lex(elem_xdf(cs[i]), prod);
      bool strict = rec(n).star == Star::Comp && i + 1 == cs.size();
      if (v == Verdict::Greater || (strict && v == Verdict::Equal))
        return false;
      prod = xctx_->mul(prod, elem_xdf(cs[i - 1]));
    }
  }
  for (NfId c : cs)
    if (!valid(c)) return false;
  return true;
}

NfId NfCtx::from_df(DfId d) {
  if (auto it = from_df_memo_.find(d); it != from_df_memo_.end())
    return it->second;
  if (absorb_depth_ > 256)
    throw WatchdogError("normal form: power absorption depth");
  ++absorb_depth_;
  struct Dec {
    int* d;
    ~Dec() { --(*d); }
  } dec{&absorb_depth_};

  DfCtx& pc = DfCtx::for_p(p_);
  NfId res = kNoNf;

  if (df_is_leaf(d)) {
    DfId v = pc.xdf_of(d);
    Verdict c = xctx_->lex(v, pc.p_xdf());
    if (c == Verdict::Less) {
      res = make_leaf(v);
    } else if (c == Verdict::Equal) {
      res = make_node(0, {}, Star::App);  // w = p, the bare zeroth power
    } else {
      throw InvariantError("normal form: leaf above the head");
    }
  } else {
    const auto& cs = df_components(d);
    Star star = df_star(d);
    DfId a0 = cs[0];
    Verdict c0 = xctx_->lex(pc.xdf_of(a0), pc.p_xdf());

    if (star == Star::Comp && cs.size() == 1 && c0 != Verdict::Less) {
      // p o a with a >= p: rewrite as (p a) o p and absorb the head there
      NfId h = from_df(pc.make_node({a0}, Star::App));
      NfId bare0 = make_node(0, {}, Star::App);
      if (nf_components(h).empty() || nf_star(h) == Star::App) {
        std::vector<NfId> comps = nf_components(h);
        comps.push_back(bare0);
        res = make_node(nf_power(h), comps, Star::Comp);
      } else {
        // (Z ... o g_k) o p = Z ... o (g_k o p)
        DfId delta =
            xctx_->comp(elem_xdf(nf_components(h).back()), pc.p_xdf());
        NfId dn = from_df(divide(p_, xctx_->to_term(delta)));
        std::vector<NfId> comps = nf_components(h);
        comps.back() = dn;
        res = make_node(nf_power(h), comps, Star::Comp);
      }
    } else if (c0 == Verdict::Less) {
      std::vector<NfId> comps;
      for (DfId c : cs) comps.push_back(from_df(c));
      res = make_node(0, comps, star);
    } else if (c0 == Verdict::Equal) {
      std::vector<NfId> comps;
      for (size_t i = 1; i < cs.size(); ++i) comps.push_back(from_df(cs[i]));
      res = make_node(1, comps, cs.size() == 1 ? Star::App : star);
    } else {
      // a_0 above the head: absorb its own head power
      NfId h = from_df(a0);
      if (nf_is_leaf(h))
        throw InvariantError("normal form: head component not power-headed");
      int m = nf_power(h);
      const auto& hb = nf_components(h);
      if (hb.empty()) {
        // p a_0 = p^(m+1)
        std::vector<NfId> comps;
        for (size_t i = 1; i < cs.size(); ++i) comps.push_back(from_df(cs[i]));
        res = make_node(m + 1, comps, cs.size() == 1 ? Star::App : star);
      } else {
        // p (p^(m) b_0 ... *' b_k) = p^(m+1) (p b_0) ... *' (p b_k)
        std::vector<NfId> gam;
        for (NfId b : hb) {
          Term bt = xctx_->to_term(elem_xdf(b));
          gam.push_back(from_df(pc.make_node({divide(p_, bt)}, Star::App)));
        }
        if (nf_star(h) == Star::App) {
          std::vector<NfId> comps = gam;
          for (size_t i = 1; i < cs.size(); ++i)
            comps.push_back(from_df(cs[i]));
          res = make_node(m + 1, comps, cs.size() == 1 ? Star::App : star);
        } else if (cs.size() == 1) {
          res = make_node(m + 1, gam, Star::Comp);
        } else {
          // trailing composition head meets the next component:
          // (Z ... o g_k) a_1 = Z ... (g_k a_1), and with a final o when
          // a_1 is itself the composed argument
          bool last_comp = star == Star::Comp && cs.size() == 2;
          Term bt = xctx_->to_term(elem_xdf(hb.back()));
          DfId bk_df = pc.make_node({divide(p_, bt)}, Star::App);
          DfId delta =
              last_comp ? pc.comp(bk_df, cs[1]) : pc.mul(bk_df, cs[1]);
          std::vector<NfId> comps(gam.begin(), gam.end() - 1);
          comps.push_back(from_df(delta));
          for (size_t i = 2; i < cs.size(); ++i)
            comps.push_back(from_df(cs[i]));
          Star out = cs.size() == 2 ? (last_comp ? Star::Comp : Star::App)
                                    : star;
          res = make_node(m + 1, comps, out);
        }
      }
    }
  }

  if (!valid(res)) throw InvariantError("normal form: constraint violation");
  from_df_memo_.emplace(d, res);
  return res;
}

NfId NfCtx::of_term(Term w) { return from_df(divide(p_, w)); }

NfId nf_of(Term p, Term w) { return NfCtx::for_p(p).of_term(w); }

Term to_term_nf(Term p, NfId n) { return NfCtx::for_p(p).to_term(n); }

std::string nf_sexpr(Term p, NfId n) {
  NfCtx& ctx = NfCtx::for_p(p);
  if (nf_is_leaf(n)) return compact(ctx.to_term(n));
  const auto& cs = nf_components(n);
  if (cs.empty() && nf_power(n) == 0)
    return p.is_gen() ? "x" : compact(p);
  std::string head =
      (p.is_gen() ? std::string("x") : "(" + compact(p) + ")") + "^(" +
      std::to_string(nf_power(n)) + ")";
  if (cs.empty()) return head;
  std::string s = "(nf " + head + " [";
  for (size_t i = 0; i < cs.size(); ++i) {
    if (i) s += ' ';
    s += nf_sexpr(p, cs[i]);
  }
  s += "] ";
  s += nf_star(n) == Star::App ? "app" : "comp";
  s += ")";
  return s;
}

}  // namespace ldform
