#include "ldform/term.hpp"

#include <cassert>
#include <map>
#include <unordered_map>

namespace ldform {

namespace {

struct TermRec {
  Op op;
  TermId l, r;
  int leaves;
  bool in_A;
};

struct TermStore {
  std::vector<TermRec> recs;
  std::unordered_map<uint64_t, TermId> intern;

  TermStore() { recs.push_back({Op::Gen, kNoTerm, kNoTerm, 1, true}); }

  static uint64_t key(Op op, TermId l, TermId r) {
    return (uint64_t(op) << 62) | (uint64_t(l) << 31) | uint64_t(r);
  }

  TermId make(Op op, TermId l, TermId r) {
    uint64_t k = key(op, l, r);
    auto it = intern.find(k);
    if (it != intern.end()) return it->second;
    TermId id = TermId(recs.size());
    const TermRec& a = recs[l];
    const TermRec& b = recs[r];
    recs.push_back({op, l, r, a.leaves + b.leaves,
                    op == Op::App && a.in_A && b.in_A});
    intern.emplace(k, id);
    return id;
  }

  static TermStore& inst() {
    static TermStore s;
    return s;
  }
};

const TermRec& rec(TermId id) { return TermStore::inst().recs[id]; }

}  // namespace

Op Term::op() const { return rec(id_).op; }
Term Term::left() const { return Term(rec(id_).l); }
Term Term::right() const { return Term(rec(id_).r); }
int Term::leaves() const { return rec(id_).leaves; }
bool Term::is_A() const { return rec(id_).in_A; }

Term gen() { return Term(0); }

Term app(Term a, Term b) {
  assert(a.valid() && b.valid());
  return Term(TermStore::inst().make(Op::App, a.id(), b.id()));
}

Term comp(Term a, Term b) {
  assert(a.valid() && b.valid());
  return Term(TermStore::inst().make(Op::Comp, a.id(), b.id()));
}

Term mk(Op op, Term a, Term b) {
  return op == Op::App ? app(a, b) : comp(a, b);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Lexer {
  std::string_view s;
  size_t i = 0;

  void skip() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' ||
                            s[i] == '\r'))
      ++i;
  }
  char peek() {
    skip();
    return i < s.size() ? s[i] : '\0';
  }
  char next() {
    char c = peek();
    if (i < s.size()) ++i;
    return c;
  }
};

Term parse_comp(Lexer& lx);

Term parse_atom(Lexer& lx) {
  char c = lx.peek();
  if (c == 'x') {
    lx.next();
    return gen();
  }
  if (c == '(') {
    size_t open = lx.i;
    lx.next();
    char h = lx.peek();
    if (h == '*' || h == 'o') {
      // s-expression node: (* a b) or (o a b); "(o" cannot start an infix
      // group since "o" is an infix operator there.
      lx.next();
      Term a = parse_atom(lx);
      Term b = parse_atom(lx);
      if (lx.peek() != ')') throw ParseError(lx.i, "expected ')'");
      lx.next();
      return h == '*' ? app(a, b) : comp(a, b);
    }
    Term t = parse_comp(lx);
    if (lx.peek() != ')') throw ParseError(open, "unbalanced '('");
    lx.next();
    return t;
  }
  throw ParseError(lx.i, "expected 'x' or '('");
}

bool starts_atom(char c) { return c == 'x' || c == '('; }

Term parse_app(Lexer& lx) {
  Term t = parse_atom(lx);
  while (starts_atom(lx.peek())) t = app(t, parse_atom(lx));
  return t;
}

Term parse_comp(Lexer& lx) {
  Term t = parse_app(lx);
  while (lx.peek() == 'o') {
    lx.next();
    t = comp(t, parse_app(lx));
  }
  return t;
}

}  // namespace

Term parse(std::string_view text) {
  Lexer lx{text};
  if (lx.peek() == '\0') throw ParseError(0, "empty input");
  Term t = parse_comp(lx);
  if (lx.peek() != '\0') throw ParseError(lx.i, "trailing input");
  return t;
}

namespace {

// prec: 0 = comp context, 1 = app context, 2 = atom context
void render(Term t, int prec, bool spaces, std::string& out) {
  switch (t.op()) {
    case Op::Gen:
      out += 'x';
      return;
    case Op::App: {
      bool par = prec > 1;
      if (par) out += '(';
      render(t.left(), 1, spaces, out);
      if (spaces) out += ' ';
      render(t.right(), 2, spaces, out);
      if (par) out += ')';
      return;
    }
    case Op::Comp: {
      bool par = prec > 0;
      if (par) out += '(';
      render(t.left(), 0, spaces, out);
      out += spaces ? " o " : "o";
      render(t.right(), 1, spaces, out);
      if (par) out += ')';
      return;
    }
  }
}

void render_sexpr(Term t, std::string& out) {
  switch (t.op()) {
    case Op::Gen:
      out += 'x';
      return;
    case Op::App:
    case Op::Comp:
      out += t.is_app() ? "(* " : "(o ";
      render_sexpr(t.left(), out);
      out += ' ';
      render_sexpr(t.right(), out);
      out += ')';
      return;
  }
}

}  // namespace

std::string print(Term t, Format f) {
  std::string out;
  if (f == Format::Infix)
    render(t, 0, true, out);
  else
    render_sexpr(t, out);
  return out;
}

std::string compact(Term t) {
  std::string out;
  render(t, 0, false, out);
  return out;
}

// ---------------------------------------------------------------------------
// Structure

Spine spine(Term t) {
  Spine s;
  Term chain = t;
  if (t.is_comp()) {
    s.star = Star::Comp;
    s.args.push_back(t.right());
    chain = t.left();
  }
  std::vector<Term> rev;
  while (chain.is_app()) {
    rev.push_back(chain.right());
    chain = chain.left();
  }
  s.head = chain;
  for (auto it = rev.rbegin(); it != rev.rend(); ++it) s.args.push_back(*it);
  if (s.star == Star::Comp) {
    // the composition argument was recorded first; move it to the end
    Term last = s.args.front();
    s.args.erase(s.args.begin());
    s.args.push_back(last);
  }
  return s;
}

Term unspine(const Spine& s) {
  Term t = s.head;
  if (s.args.empty()) return t;
  for (size_t i = 0; i + 1 < s.args.size(); ++i) t = app(t, s.args[i]);
  return s.star == Star::App ? app(t, s.args.back()) : comp(t, s.args.back());
}

Term iterate(Term a, Term b, int n) {
  if (n < 1) throw std::invalid_argument("iterate: n must be >= 1");
  if (n == 1) return a;
  Term prev = a, cur = app(a, b);
  for (int k = 3; k <= n; ++k) {
    Term next = app(cur, prev);
    prev = cur;
    cur = next;
  }
  return cur;
}

Term power_app(Term p, int n) {
  if (n < 0) throw std::invalid_argument("power_app: n must be >= 0");
  Term t = p;
  for (int k = 0; k < n; ++k) t = app(p, t);
  return t;
}

Term power_comp(Term p, int n) {
  if (n < 1) throw std::invalid_argument("power_comp: n must be >= 1");
  Term t = p;
  for (int k = 1; k < n; ++k) t = comp(p, t);
  return t;
}

namespace {
void collect(Term t, std::string& path,
             std::vector<std::pair<std::string, Term>>& out) {
  out.emplace_back(path, t);
  if (t.is_gen()) return;
  path.push_back('L');
  collect(t.left(), path, out);
  path.back() = 'R';
  collect(t.right(), path, out);
  path.pop_back();
}
}  // namespace

std::vector<std::pair<std::string, Term>> subterms(Term t) {
  std::vector<std::pair<std::string, Term>> out;
  std::string path;
  collect(t, path, out);
  return out;
}

Term subterm_at(Term t, std::string_view path) {
  for (char c : path) {
    if (t.is_gen()) throw std::invalid_argument("subterm_at: bad path");
    t = (c == 'L') ? t.left() : t.right();
  }
  return t;
}

Term replace_at(Term t, std::string_view path, Term sub) {
  if (path.empty()) return sub;
  if (t.is_gen()) throw std::invalid_argument("replace_at: bad path");
  if (path[0] == 'L')
    return mk(t.op(), replace_at(t.left(), path.substr(1), sub), t.right());
  return mk(t.op(), t.left(), replace_at(t.right(), path.substr(1), sub));
}

const std::vector<Term>& enumerate_terms(int leaves, bool a_only) {
  static std::map<std::pair<int, bool>, std::vector<Term>> memo;
  auto key = std::make_pair(leaves, a_only);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  std::vector<Term> out;
  if (leaves == 1) {
    out.push_back(gen());
  } else if (leaves > 1) {
    for (int i = 1; i < leaves; ++i) {
      const auto& ls = enumerate_terms(i, a_only);
      const auto& rs = enumerate_terms(leaves - i, a_only);
      for (Term l : ls)
        for (Term r : rs) {
          out.push_back(app(l, r));
          if (!a_only) out.push_back(comp(l, r));
        }
    }
  }
  return memo.emplace(key, std::move(out)).first->second;
}

}  // namespace ldform
