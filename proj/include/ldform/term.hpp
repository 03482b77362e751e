#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Raw terms of the free one-generated algebra under application (.) and
// composition (o). Terms are interned: structural equality is id equality,
// and leaf counts are cached per node.

namespace ldform {

enum class Op : uint8_t { Gen, App, Comp };
enum class Star : uint8_t { App, Comp };

using TermId = uint32_t;
inline constexpr TermId kNoTerm = 0xffffffffu;

class Term {
public:
  Term() : id_(kNoTerm) {}
  explicit Term(TermId id) : id_(id) {}

  TermId id() const { return id_; }
  bool valid() const { return id_ != kNoTerm; }

  Op op() const;
  Term left() const;
  Term right() const;
  int leaves() const;
  int nodes() const { return leaves() - 1; }

  bool is_gen() const { return op() == Op::Gen; }
  bool is_app() const { return op() == Op::App; }
  bool is_comp() const { return op() == Op::Comp; }
  // True when no composition node occurs anywhere in the tree.
  bool is_A() const;

  friend bool operator==(Term a, Term b) { return a.id_ == b.id_; }
  friend bool operator!=(Term a, Term b) { return a.id_ != b.id_; }
  friend bool operator<(Term a, Term b) { return a.id_ < b.id_; }

private:
  TermId id_;
};

Term gen();
Term app(Term a, Term b);
Term comp(Term a, Term b);
Term mk(Op op, Term a, Term b);

struct ParseError : std::runtime_error {
  size_t pos;
  ParseError(size_t p, const std::string& what)
      : std::runtime_error(what), pos(p) {}
};

enum class Format : uint8_t { Infix, Sexpr };

// Accepts both the infix grammar and the s-expression form.
//   term := comp ; comp := app ("o" app)* ; app := atom atom* ; atom := "x" | "(" term ")"
//   sexpr := "x" | "(* a b)" | "(o a b)"
Term parse(std::string_view text);
std::string print(Term t, Format f = Format::Infix);
// Minimal-parenthesis infix without spaces, e.g. "(xx)x".
std::string compact(Term t);

// Maximal decomposition head args[0] ... args[k-1] * args[k]; the head is
// Gen or Comp-rooted. Reassembling via unspine reproduces the term exactly.
struct Spine {
  Term head;
  std::vector<Term> args;
  Star star = Star::App;
};
Spine spine(Term t);
Term unspine(const Spine& s);

// Iterates I_1(a,b) = a, I_2(a,b) = ab, I_{n+2} = I_{n+1} I_n.
Term iterate(Term a, Term b, int n);
// p^(0) = p, p^(n+1) = p p^(n).
Term power_app(Term p, int n);
// p^1 = p, p^(n+1) = p o p^n.
Term power_comp(Term p, int n);

// Preorder enumeration of all subterm occurrences; paths are strings over
// {'L','R'} from the root ("" is the root itself).
std::vector<std::pair<std::string, Term>> subterms(Term t);
Term subterm_at(Term t, std::string_view path);
Term replace_at(Term t, std::string_view path, Term sub);

// All terms with exactly `leaves` generator occurrences, deterministic order.
const std::vector<Term>& enumerate_terms(int leaves, bool a_only);

}  // namespace ldform
