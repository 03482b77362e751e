#include "ldform/divform.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_set>

namespace ldform {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Less: return "Less";
    case Verdict::Equal: return "Equal";
    case Verdict::Greater: return "Greater";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Interned storage shared by every head context. A form's structure does not
// depend on the head; its meaning does, so all memo tables live in DfCtx.

namespace {

struct DfRec {
  bool leaf;
  DfId lv;  // x-form of the leaf value; kNoDf for the generator leaf
  Star star;
  std::vector<DfId> comps;
};

struct NodeKey {
  uint8_t star;
  std::vector<DfId> comps;
  bool operator==(const NodeKey& o) const {
    return star == o.star && comps == o.comps;
  }
};
struct NodeKeyHash {
  size_t operator()(const NodeKey& k) const {
    uint64_t h = 1469598103934665603ull ^ k.star;
    for (DfId c : k.comps) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return size_t(h);
  }
};

struct DfStore {
  std::vector<DfRec> recs;
  std::unordered_map<NodeKey, DfId, NodeKeyHash> node_intern;
  std::unordered_map<DfId, DfId> leaf_intern;

  DfStore() { recs.push_back({true, kNoDf, Star::App, {}}); }

  DfId leaf(DfId xval) {
    if (xval == kGenDf) return kGenDf;
    auto it = leaf_intern.find(xval);
    if (it != leaf_intern.end()) return it->second;
    DfId id = DfId(recs.size());
    recs.push_back({true, xval, Star::App, {}});
    leaf_intern.emplace(xval, id);
    return id;
  }

  DfId node(const std::vector<DfId>& comps, Star star) {
    assert(!comps.empty());
    NodeKey k{uint8_t(star), comps};
    auto it = node_intern.find(k);
    if (it != node_intern.end()) return it->second;
    DfId id = DfId(recs.size());
    recs.push_back({false, kNoDf, star, comps});
    node_intern.emplace(std::move(k), id);
    return id;
  }

  static DfStore& inst() {
    static DfStore s;
    return s;
  }
};

const DfRec& rec(DfId d) { return DfStore::inst().recs[d]; }

DfId leaf_xval(DfId d) { return d == kGenDf ? kGenDf : rec(d).lv; }

// Tier-3 runs with a fresh recursion budget; the separate tier3 depth
// counter bounds re-entry.
struct DepthReset {
  int* slot;
  int saved;
  explicit DepthReset(int* s) : slot(s), saved(*s) { *slot = 0; }
  ~DepthReset() { *slot = saved; }
};

// Bounded equivalence neighborhood used only by the tier-3 fallback.
struct ClassBall {
  std::unordered_set<TermId> members;
  std::vector<Term> order;
  std::vector<Term> frontier;
  int cap = 0;

  explicit ClassBall(Term t) {
    members.insert(t.id());
    order.push_back(t);
    frontier.push_back(t);
  }

  uint64_t grow(int new_cap, uint64_t node_budget) {
    cap = std::max(cap, new_cap);
    uint64_t used = 0;
    while (!frontier.empty() && used < node_budget) {
      Term t = frontier.back();
      frontier.pop_back();
      ++used;
      for (const RewriteStep& st : sigma_neighbors(t)) {
        if (st.after.leaves() > cap) continue;
        if (!members.insert(st.after.id()).second) continue;
        order.push_back(st.after);
        frontier.push_back(st.after);
      }
    }
    return used;
  }
};

ClassBall& head_ball(Term p, const OracleBudget& budget) {
  static std::unordered_map<TermId, std::unique_ptr<ClassBall>> cache;
  auto it = cache.find(p.id());
  if (it == cache.end()) {
    it = cache.emplace(p.id(), std::make_unique<ClassBall>(p)).first;
    int cap = budget.size_cap ? budget.size_cap : 3 * std::max(4, p.leaves());
    it->second->grow(cap, budget.nodes / 8 + 64);
  }
  return *it->second;
}

std::vector<DfId> slice(const std::vector<DfId>& v, size_t from, size_t count) {
  return std::vector<DfId>(v.begin() + from, v.begin() + from + count);
}

}  // namespace

bool df_is_leaf(DfId d) { return rec(d).leaf; }
DfId df_leaf_value(DfId d) { return rec(d).lv; }
Star df_star(DfId d) { return rec(d).star; }
const std::vector<DfId>& df_components(DfId d) { return rec(d).comps; }

struct DepthGuard {
  DfCtx* c;
  explicit DepthGuard(DfCtx* ctx) : c(ctx) {
    if (++c->depth_ > c->max_depth) {
      --c->depth_;
      throw WatchdogError("product recursion depth exceeded");
    }
  }
  ~DepthGuard() { --c->depth_; }
};

// ---------------------------------------------------------------------------
// Context

DfCtx& DfCtx::for_p(Term p) {
  static std::unordered_map<TermId, std::unique_ptr<DfCtx>> reg;
  auto it = reg.find(p.id());
  if (it == reg.end()) {
    auto ctx = std::unique_ptr<DfCtx>(new DfCtx(p));
    it = reg.emplace(p.id(), std::move(ctx)).first;
  }
  return *it->second;
}

DfCtx& DfCtx::x() { return for_p(gen()); }

DfCtx::DfCtx(Term p) : p_(p), is_x_(p.is_gen()) {
  xctx_ = is_x_ ? this : &DfCtx::x();
  p_xdf_ = is_x_ ? kGenDf : xctx_->of_term(p);
  p_leaf_ = make_leaf(p_xdf_);
}

DfId DfCtx::make_leaf(DfId xval) { return DfStore::inst().leaf(xval); }

DfId DfCtx::make_node(const std::vector<DfId>& comps, Star star) {
  return DfStore::inst().node(comps, star);
}

DfId DfCtx::prefix_node(DfId node) const {
  const auto& cs = rec(node).comps;
  if (cs.size() == 1) return p_leaf_;
  return DfStore::inst().node(slice(cs, 0, cs.size() - 1), Star::App);
}

DfId DfCtx::full_node(DfId node) const {
  const auto& cs = rec(node).comps;
  return DfStore::inst().node(cs, Star::App);
}

// ---------------------------------------------------------------------------
// Lexicographic comparison via associated sequences.
//
// The sequence of a leaf is just the leaf; of an app node the component list;
// of a comp node the component list followed by the iterates
// I_1 = p a_0 ... a_{n-1}, I_2 = I_1 a_n, I_{k+2} = I_{k+1} I_k, all of which
// are app forms built from existing components. The head entry p, shared by
// all nodes, is skipped. First strict difference or exhausted side decides.

DfId DfCtx::entry_of(DfId node, size_t i, std::vector<DfId>& iters) {
  const auto& cs = rec(node).comps;
  if (i < cs.size()) return cs[i];
  if (rec(node).star == Star::App) return kNoDf;
  size_t k = i - cs.size();  // 0-based iterate index
  while (iters.size() <= k) {
    if (iters.empty()) {
      iters.push_back(prefix_node(node));
    } else if (iters.size() == 1) {
      iters.push_back(full_node(node));
    } else {
      std::vector<DfId> cs2 = rec(iters[iters.size() - 1]).comps;
      cs2.push_back(iters[iters.size() - 2]);
      iters.push_back(DfStore::inst().node(cs2, Star::App));
    }
  }
  return iters[k];
}

Verdict DfCtx::lex(DfId a, DfId b) {
  if (a == b) return Verdict::Equal;
  if (a == kGenDf) return Verdict::Less;
  if (b == kGenDf) return Verdict::Greater;
  bool la = rec(a).leaf, lb = rec(b).leaf;
  if (la && lb) return xctx_->lex(leaf_xval(a), leaf_xval(b));
  if (la) return Verdict::Less;   // leaf <= p < any node
  if (lb) return Verdict::Greater;

  uint64_t key = (uint64_t(a) << 32) | b;
  if (auto it = lex_memo_.find(key); it != lex_memo_.end()) return it->second;

  Verdict out = Verdict::Equal;
  std::vector<DfId> ia, ib;
  for (int i = 0;; ++i) {
    if (i >= lex_bound)
      throw WatchdogError("lex: associated-sequence index bound hit");
    DfId ea = entry_of(a, size_t(i), ia);
    DfId eb = entry_of(b, size_t(i), ib);
    if (ea == kNoDf && eb == kNoDf)
      throw InvariantError("lex: distinct forms with identical sequences");
    if (ea == kNoDf) {
      out = Verdict::Less;  // proper initial segment
      break;
    }
    if (eb == kNoDf) {
      out = Verdict::Greater;
      break;
    }
    if (ea == eb) continue;
    Verdict r = lex(ea, eb);
    if (r != Verdict::Equal) {
      out = r;
      break;
    }
  }
  lex_memo_.emplace(key, out);
  lex_memo_.emplace((uint64_t(b) << 32) | a,
                    out == Verdict::Less ? Verdict::Greater : Verdict::Less);
  return out;
}

bool DfCtx::is_prenormal(const std::vector<DfId>& comps, Star star) {
  for (size_t i = 1; i < comps.size(); ++i) {
    DfId bound = (i == 1)
                     ? p_leaf_
                     : DfStore::inst().node(slice(comps, 0, i - 1), Star::App);
    Verdict v = lex(comps[i], bound);
    bool strict = star == Star::Comp && i + 1 == comps.size();
    if (v == Verdict::Greater || (strict && v == Verdict::Equal)) return false;
  }
  return true;
}

std::optional<DfId> DfCtx::try_node(const std::vector<DfId>& comps,
                                    Star star) {
  if (comps.empty()) return std::nullopt;
  try {
    if (!is_prenormal(comps, star)) return std::nullopt;
  } catch (const WatchdogError&) {
    return std::nullopt;
  }
  return make_node(comps, star);
}

// ---------------------------------------------------------------------------
// Products. Every branch either appends under a verified prenormality bound,
// applies one of the direct product-calculus formulas (validated before
// acceptance), or decomposes by a single law and recurses. The outermost
// call catches the recursion watchdog and falls back to search-backed
// division.

DfId DfCtx::mul(DfId a, DfId b) {
  if (depth_ != 0) return mul_rec(a, b);
  try {
    return mul_rec(a, b);
  } catch (const WatchdogError&) {
    return tier3_product(a, b, Star::App);
  }
}

DfId DfCtx::comp(DfId a, DfId b) {
  if (depth_ != 0) return comp_rec(a, b);
  try {
    return comp_rec(a, b);
  } catch (const WatchdogError&) {
    return tier3_product(a, b, Star::Comp);
  }
}

DfId DfCtx::mul_rec(DfId a, DfId b) {
  uint64_t key = (uint64_t(a) << 32) | b;
  if (auto it = mul_memo_.find(key); it != mul_memo_.end()) return it->second;
  DepthGuard guard(this);
  DfId res = kNoDf;

  if (rec(a).leaf) {
    if (a == p_leaf_) {
      // |p v| = p v
      stats.tier1++;
      res = make_node({b}, Star::App);
    } else if (rec(b).leaf) {
      // both below the head: multiply at the x level
      DfId w = xctx_->mul(leaf_xval(a), leaf_xval(b));
      if (xctx_->lex(w, p_xdf_) != Verdict::Greater) {
        stats.tier1++;
        res = make_leaf(w);
      } else {
        res = tier3_product(a, b, Star::App);
      }
    } else {
      // a < p applied to a chain: distribute
      stats.tier2++;
      if (rec(b).star == Star::Comp) {
        res = comp_rec(mul_rec(a, prefix_node(b)),
                       mul_rec(a, rec(b).comps.back()));
      } else {
        DfId x1 = mul_rec(a, prefix_node(b));
        DfId y1 = mul_rec(a, rec(b).comps.back());
        res = mul_rec(x1, y1);
      }
    }
  } else if (rec(a).star == Star::Comp) {
    // (P o t) V = P (t V)
    stats.tier1++;
    DfId z = mul_rec(rec(a).comps.back(), b);
    res = mul_rec(prefix_node(a), z);
  } else {
    const std::vector<DfId>& ua = rec(a).comps;
    DfId ppu = prefix_node(a);
    Verdict cv = lex(b, ppu);
    if (cv != Verdict::Greater) {
      // new last component bounded by the product of all before its
      // predecessor: plain append
      stats.tier1++;
      std::vector<DfId> cs = ua;
      cs.push_back(b);
      res = make_node(cs, Star::App);
    } else {
      if (rec(b).leaf) throw InvariantError("mul: leaf above a prefix product");
      const std::vector<DfId>& vb = rec(b).comps;
      size_t k = ua.size() - 1;  // aligned index of a's last component
      bool shares = vb.size() >= ua.size() &&
                    std::equal(ua.begin(), ua.end() - 1, vb.begin());
      if (shares) {
        DfId A = ua.back();
        std::vector<DfId> W = slice(ua, 0, k);
        if (vb.size() == ua.size()) {
          if (rec(b).star == Star::App) {
            // (BA)(B b) = B (A b)
            DfId c = mul_rec(A, vb[k]);
            std::vector<DfId> cs = W;
            cs.push_back(c);
            if (auto n = try_node(cs, Star::App)) {
              stats.tier1++;
              res = *n;
            }
          } else {
            // (BA)(B o b) = B(A o b) B o B(A b)
            DfId c1 = comp_rec(A, vb[k]);
            DfId c2 = mul_rec(A, vb[k]);
            std::vector<DfId> inner = W;
            inner.push_back(c2);
            std::vector<DfId> cs = W;
            cs.push_back(c1);
            cs.push_back(ppu);
            cs.push_back(make_node(inner, Star::App));
            if (auto n = try_node(cs, Star::Comp)) {
              stats.tier1++;
              res = *n;
            }
          }
        } else {
          // shared prefix with a longer chain on the right
          DfId c0 = comp_rec(A, vb[k]);
          std::vector<DfId> cs = W;
          cs.push_back(c0);
          cs.push_back(vb[k + 1]);
          bool ok = true;
          if (vb.size() == ua.size() + 1 && rec(b).star == Star::Comp) {
            // (BA)(B b0 o b1) = B(A o b0) b1 o B(A b0)
            std::vector<DfId> inner = W;
            inner.push_back(mul_rec(A, vb[k]));
            cs.push_back(make_node(inner, Star::App));
          } else {
            for (size_t j = k + 2; j < vb.size() && ok; ++j)
              cs.push_back(mul_rec(a, vb[j]));
          }
          if (ok) {
            if (auto n = try_node(cs, rec(b).star)) {
              stats.tier1++;
              res = *n;
            }
          }
        }
      }
      if (res == kNoDf) {
        // generic decomposition by one law
        stats.tier2++;
        if (rec(b).star == Star::Comp) {
          res = comp_rec(mul_rec(a, prefix_node(b)),
                         mul_rec(a, vb.back()));
        } else {
          DfId x1 = mul_rec(a, prefix_node(b));
          DfId y1 = mul_rec(a, vb.back());
          res = mul_rec(x1, y1);
        }
      }
    }
  }

  mul_memo_.emplace(key, res);
  return res;
}

DfId DfCtx::comp_rec(DfId a, DfId b) {
  uint64_t key = (uint64_t(a) << 32) | b;
  if (auto it = comp_memo_.find(key); it != comp_memo_.end())
    return it->second;
  DepthGuard guard(this);
  DfId res = kNoDf;

  if (rec(a).leaf) {
    if (a == p_leaf_) {
      // |p o v| = p o v
      stats.tier1++;
      res = make_node({b}, Star::Comp);
    } else if (rec(b).leaf) {
      DfId w = xctx_->comp(leaf_xval(a), leaf_xval(b));
      if (xctx_->lex(w, p_xdf_) != Verdict::Greater) {
        stats.tier1++;
        res = make_leaf(w);
      } else {
        // a o b = (a b) o a
        stats.tier2++;
        res = comp_rec(mul_rec(a, b), a);
      }
    } else {
      stats.tier2++;
      res = comp_rec(mul_rec(a, b), a);
    }
  } else if (rec(a).star == Star::Comp) {
    // (P o t) o V = P o (t o V)
    stats.tier1++;
    DfId z = comp_rec(rec(a).comps.back(), b);
    res = comp_rec(prefix_node(a), z);
  } else {
    const std::vector<DfId>& ua = rec(a).comps;
    DfId ppu = prefix_node(a);
    Verdict cv = lex(b, ppu);
    if (cv == Verdict::Less) {
      stats.tier1++;
      std::vector<DfId> cs = ua;
      cs.push_back(b);
      res = make_node(cs, Star::Comp);
    } else if (cv == Verdict::Equal) {
      // (P a_n) o P = P o a_n: unwind one iterate
      stats.tier1++;
      res = comp_rec(ppu, ua.back());
    } else {
      if (rec(b).leaf)
        throw InvariantError("comp: leaf above a prefix product");
      const std::vector<DfId>& vb = rec(b).comps;
      size_t k = ua.size() - 1;
      bool shares = vb.size() >= ua.size() &&
                    std::equal(ua.begin(), ua.end() - 1, vb.begin());
      if (shares && vb.size() == ua.size()) {
        DfId A = ua.back();
        if (rec(b).star == Star::App) {
          // (BA) o (B b) = B (A o b)
          DfId c = comp_rec(A, vb[k]);
          std::vector<DfId> cs = slice(ua, 0, k);
          cs.push_back(c);
          if (auto n = try_node(cs, Star::App)) {
            stats.tier1++;
            res = *n;
          }
        } else {
          // (BA) o (B o b) = B o (A o b)
          stats.tier1++;
          res = comp_rec(ppu, comp_rec(A, vb[k]));
        }
      }
      if (res == kNoDf) {
        if (rec(b).star == Star::Comp) {
          // U o (V' o c) = (U o V') o c
          stats.tier1++;
          res = comp_rec(comp_rec(a, prefix_node(b)), vb.back());
        } else {
          // U o V = (U V) o U
          stats.tier1++;
          res = comp_rec(mul_rec(a, b), a);
        }
      }
    }
  }

  comp_memo_.emplace(key, res);
  return res;
}

// ---------------------------------------------------------------------------
// Fallback: greedy division by searching the equivalence neighborhood of the
// flattened product for a decomposition head-equivalent to p whose remaining
// arguments divide into a prenormal chain. Uniqueness makes any prenormal
// hit the canonical answer.

DfId DfCtx::tier3_product(DfId a, DfId b, Star star) {
  Term w = star == Star::App ? app(to_term(a), to_term(b))
                             : ldform::comp(to_term(a), to_term(b));
  return tier3_term(w);
}

DfId DfCtx::tier3_term(Term w) {
  stats.tier3++;
  if (tier3_depth_ >= tier3_max_depth)
    throw BudgetError("division fallback recursion limit");
  ++tier3_depth_;
  struct Dec {
    int* d;
    ~Dec() { --(*d); }
  } dec{&tier3_depth_};
  DepthReset reset(&depth_);

  if (!is_x_) {
    DfId wx = xctx_->of_term(w);
    if (xctx_->lex(wx, p_xdf_) != Verdict::Greater) return make_leaf(wx);
  }

  ClassBall& pball = head_ball(p_, tier3_budget);
  ClassBall ball(w);
  int base_cap = tier3_budget.size_cap ? tier3_budget.size_cap
                                       : 3 * std::max(4, w.leaves());
  uint64_t per_round =
      std::max<uint64_t>(tier3_budget.nodes / std::max(1, tier3_budget.rounds), 64);
  size_t scanned = 0;
  for (int round = 0; round < tier3_budget.rounds; ++round) {
    ball.grow(base_cap + 2 * round, per_round);
    for (; scanned < ball.order.size(); ++scanned) {
      Term t = ball.order[scanned];
      Spine sp = spine(t);
      if (sp.args.empty()) continue;
      Term chunk = sp.head;
      for (size_t j = 0; j < sp.args.size(); ++j) {
        if (pball.members.count(chunk.id())) {
          std::vector<DfId> comps;
          bool ok = true;
          for (size_t i = j; i < sp.args.size() && ok; ++i) {
            try {
              comps.push_back(of_term(sp.args[i]));
            } catch (const WatchdogError&) {
              ok = false;
            } catch (const BudgetError&) {
              ok = false;
            }
          }
          if (ok) {
            if (auto n = try_node(comps, sp.star)) return *n;
          }
        }
        chunk = app(chunk, sp.args[j]);
      }
    }
    if (ball.frontier.empty()) break;
  }
  throw BudgetError("division fallback exhausted its search budget");
}

// ---------------------------------------------------------------------------

DfId DfCtx::of_term(Term t) {
  if (auto it = term_memo_.find(t.id()); it != term_memo_.end())
    return it->second;
  DfId res;
  switch (t.op()) {
    case Op::Gen:
      res = kGenDf;
      break;
    case Op::App:
      res = mul(of_term(t.left()), of_term(t.right()));
      break;
    case Op::Comp:
      res = comp(of_term(t.left()), of_term(t.right()));
      break;
  }
  term_memo_.emplace(t.id(), res);
  return res;
}

Term DfCtx::to_term(DfId d) {
  if (d == kGenDf) return gen();
  if (auto it = to_term_memo_.find(d); it != to_term_memo_.end())
    return it->second;
  Term r;
  if (rec(d).leaf) {
    r = xctx_->to_term(rec(d).lv);
  } else {
    const auto& cs = rec(d).comps;
    Term t = p_;
    for (size_t i = 0; i + 1 < cs.size(); ++i) t = app(t, to_term(cs[i]));
    r = rec(d).star == Star::App ? app(t, to_term(cs.back()))
                                 : ldform::comp(t, to_term(cs.back()));
  }
  to_term_memo_.emplace(d, r);
  return r;
}

DfId DfCtx::xdf_of(DfId d) {
  if (is_x_) return d;
  if (d == kGenDf) return kGenDf;
  if (rec(d).leaf) return rec(d).lv;
  if (auto it = xdf_memo_.find(d); it != xdf_memo_.end()) return it->second;
  DfId r = xctx_->of_term(to_term(d));
  xdf_memo_.emplace(d, r);
  return r;
}

// ---------------------------------------------------------------------------
// Dominance

std::optional<SharpWitness> DfCtx::sharp(DfId u, DfId v) {
  try {
    if (rec(u).leaf) {
      if (u == p_leaf_) return SharpWitness{2, nullptr};
      if (!rec(v).leaf) return std::nullopt;
      if (lex(v, u) != Verdict::Less) return std::nullopt;
      DfId w = xctx_->comp(leaf_xval(u), leaf_xval(v));
      if (xctx_->lex(w, p_xdf_) == Verdict::Greater) return std::nullopt;
      return SharpWitness{1, nullptr};
    }
    const auto& cs = rec(u).comps;
    if (cs.size() == 1) {
      if (rec(u).star == Star::Comp) return SharpWitness{3, nullptr};
      if (rec(v).leaf) return SharpWitness{3, nullptr};
      auto sub = sharp(cs[0], rec(v).comps[0]);
      if (!sub) return std::nullopt;
      return SharpWitness{3, std::make_shared<SharpWitness>(std::move(*sub))};
    }
    size_t n = cs.size() - 1;
    DfId pp2 = cs.size() == 2
                   ? p_leaf_
                   : DfStore::inst().node(slice(cs, 0, cs.size() - 2),
                                          Star::App);
    if (rec(u).star == Star::App) {
      if (lex(v, prefix_node(u)) != Verdict::Greater)
        return SharpWitness{4, nullptr};
      if (rec(v).leaf) return std::nullopt;
      const auto& vs = rec(v).comps;
      if (vs.size() < cs.size()) return std::nullopt;
      if (!std::equal(cs.begin(), cs.end() - 1, vs.begin()))
        return std::nullopt;
      auto sub = sharp(cs[n], vs[n]);
      if (!sub) return std::nullopt;
      DfId c = comp(cs[n], vs[n]);
      if (lex(c, pp2) == Verdict::Greater) return std::nullopt;
      return SharpWitness{4, std::make_shared<SharpWitness>(std::move(*sub))};
    }
    auto sub = sharp(cs[n], v);
    if (!sub) return std::nullopt;
    DfId c = comp(cs[n], v);
    if (lex(c, pp2) == Verdict::Greater) return std::nullopt;
    return SharpWitness{5, std::make_shared<SharpWitness>(std::move(*sub))};
  } catch (const WatchdogError&) {
    return std::nullopt;
  } catch (const BudgetError&) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Free functions

DfId df_of_term(Term t) { return DfCtx::x().of_term(t); }

Verdict compare_terms(Term s, Term t) {
  DfCtx& xc = DfCtx::x();
  return xc.lex(xc.of_term(s), xc.of_term(t));
}

namespace {

// Assembly of |w|^p from the mixed-head form of |w|^{p'}, following the
// closure cases of the division theorem. Returns nothing when the shape is
// outside the generic case; the caller then uses the structural fold.
std::optional<DfId> assemble_hybrid(DfCtx& ctx, Term p, const Hybrid& h) {
  if (h.is_leaf) return std::nullopt;
  if (df_is_leaf(h.head_qdf)) return std::nullopt;
  Term p1 = p.left(), q1 = p.right();
  DfCtx& qctx = DfCtx::for_p(q1);
  const auto& qc = df_components(h.head_qdf);
  Star qs = df_star(h.head_qdf);

  std::vector<DfId> hc;
  if (p.is_app()) {
    // p'(q' c_0 ... * c_k) = (p'q')(p'c_0) ... * (p'c_k)
    for (DfId c : qc) hc.push_back(divide(p, app(p1, qctx.to_term(c))));
  } else {
    if (qc.size() == 1 && qs == Star::Comp) {
      // p'(q' o c) = (p'o q') c o (p' q')
      hc.push_back(divide(p, qctx.to_term(qc[0])));
      hc.push_back(divide(p, app(p1, q1)));
    } else {
      // p'(q' c_0 ... * c_k) = (p' o q') c_0 (p'c_1) ... * (p'c_k)
      hc.push_back(divide(p, qctx.to_term(qc[0])));
      for (size_t j = 1; j < qc.size(); ++j)
        hc.push_back(divide(p, app(p1, qctx.to_term(qc[j]))));
    }
  }
  DfCtx& pctx1 = DfCtx::for_p(p1);
  auto H = ctx.try_node(hc, qs);
  if (!H) return std::nullopt;
  DfId R = *H;
  for (size_t j = 0; j < h.orig_tail.size(); ++j) {
    DfId B = divide(p, pctx1.to_term(h.orig_tail[j]));
    bool last = j + 1 == h.orig_tail.size();
    R = (last && h.star == Star::Comp) ? ctx.comp(R, B) : ctx.mul(R, B);
  }
  return R;
}

}  // namespace

DfId divide(Term p, Term w) {
  DfCtx& ctx = DfCtx::for_p(p);
  if (p.is_gen()) return ctx.of_term(w);

  static thread_local std::unordered_map<uint64_t, DfId> memo;
  uint64_t key = (uint64_t(p.id()) << 32) | w.id();
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  auto store = [&](DfId r) {
    memo.emplace(key, r);
    return r;
  };

  DfCtx& xc = DfCtx::x();
  DfId wx = xc.of_term(w);
  if (xc.lex(wx, ctx.p_xdf()) != Verdict::Greater)
    return store(ctx.make_leaf(wx));

  // Head-shape recursion of the division theorem, bounded as a schedule
  // reconstruction; the structural fold is the total fallback.
  static thread_local int head_depth = 0;
  if (head_depth < 40) {
    ++head_depth;
    struct Dec {
      int* d;
      ~Dec() { --(*d); }
    } dec{&head_depth};
    try {
      DfId u = divide(p.left(), w);
      Hybrid h = hybrid_df(p.left(), p.right(), u);
      if (auto r = assemble_hybrid(ctx, p, h)) {
        ctx.stats.proof_path++;
        return store(*r);
      }
    } catch (const WatchdogError&) {
    } catch (const BudgetError&) {
    }
  }
  return store(ctx.of_term(w));
}

Hybrid hybrid_df(Term p, Term q, DfId u) {
  DfCtx& pc = DfCtx::for_p(p);
  Hybrid h;
  if (df_is_leaf(u)) {
    h.is_leaf = true;
    h.leaf_val = pc.xdf_of(u);
    return h;
  }
  const auto& cs = df_components(u);
  h.star = df_star(u);
  h.orig_head = cs[0];
  h.head_qdf = divide(q, pc.to_term(cs[0]));
  for (size_t i = 1; i < cs.size(); ++i) {
    h.orig_tail.push_back(cs[i]);
    h.tail.push_back(hybrid_df(p, q, cs[i]));
  }
  return h;
}

int find_power(Term p, Term q) {
  for (int n = 1; n <= 64; ++n)
    if (compare_terms(power_app(p, n), q) == Verdict::Greater) return n;
  throw BudgetError("find_power: no exponent below the bound");
}

bool is_prenormal(Term p, const std::vector<DfId>& comps, Star star) {
  return DfCtx::for_p(p).is_prenormal(comps, star);
}

std::string df_sexpr(Term p, DfId d) {
  DfCtx& ctx = DfCtx::for_p(p);
  if (rec(d).leaf) return compact(ctx.to_term(d));
  std::string s = "(df ";
  s += p.is_gen() ? "x" : "(" + compact(p) + ")";
  s += " [";
  const auto& cs = rec(d).comps;
  for (size_t i = 0; i < cs.size(); ++i) {
    if (i) s += ' ';
    s += df_sexpr(p, cs[i]);
  }
  s += "] ";
  s += rec(d).star == Star::App ? "app" : "comp";
  s += ")";
  return s;
}

}  // namespace ldform
