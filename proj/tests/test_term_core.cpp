#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ldform/oracle.hpp"
#include "ldform/term.hpp"

using namespace ldform;

namespace {

// independent unfolding of the iterate recurrence, for frozen expectations
Term iterate_ref(Term a, Term b, int n) {
  std::vector<Term> seq{a, app(a, b)};
  while (int(seq.size()) < n)
    seq.push_back(app(seq[seq.size() - 1], seq[seq.size() - 2]));
  return seq[n - 1];
}

}  // namespace

TEST_CASE("parse basics") {
  CHECK(parse("x") == gen());
  CHECK(parse("x x x") == app(app(gen(), gen()), gen()));
  CHECK(parse("x o x x") == comp(gen(), app(gen(), gen())));
  CHECK(parse("x x o x") == comp(app(gen(), gen()), gen()));
  CHECK(parse("x o x o x") == comp(comp(gen(), gen()), gen()));
  CHECK(parse("(x o x) x") == app(comp(gen(), gen()), gen()));
  CHECK(parse("xx") == app(gen(), gen()));  // compact form accepted
  CHECK(parse("(* x (* x x))") == app(gen(), app(gen(), gen())));
  CHECK(parse("(o x (* x x))") == comp(gen(), app(gen(), gen())));
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("x )"), ParseError);
  CHECK_THROWS_AS(parse("o x"), ParseError);
  CHECK_THROWS_AS(parse("(x"), ParseError);
}

TEST_CASE("print examples") {
  CHECK(print(app(gen(), gen())) == "x x");
  CHECK(print(comp(app(gen(), gen()), gen())) == "x x o x");
  CHECK(print(app(gen(), app(gen(), gen())), Format::Sexpr) ==
        "(* x (* x x))");
  CHECK(compact(app(app(gen(), gen()), gen())) == "(xx)x");
  CHECK(compact(app(gen(), app(gen(), gen()))) == "x(xx)");
}

TEST_CASE("parse/print round trip on enumerated terms") {
  for (int n = 1; n <= 7; ++n)
    for (Term t : enumerate_terms(n, false)) {
      CHECK(parse(print(t, Format::Infix)) == t);
      CHECK(parse(print(t, Format::Sexpr)) == t);
      CHECK(parse(compact(t)) == t);
    }
}

TEST_CASE("spine examples and round trip") {
  Term xx = app(gen(), gen());
  Spine s1 = spine(app(xx, gen()));
  CHECK(s1.head == gen());
  CHECK(s1.args == std::vector<Term>{gen(), gen()});
  CHECK(s1.star == Star::App);

  Spine s2 = spine(comp(xx, gen()));
  CHECK(s2.head == gen());
  CHECK(s2.args == std::vector<Term>{gen(), gen()});
  CHECK(s2.star == Star::Comp);

  Spine s3 = spine(gen());
  CHECK(s3.head == gen());
  CHECK(s3.args.empty());

  Spine s4 = spine(app(comp(gen(), gen()), gen()));
  CHECK(s4.head == comp(gen(), gen()));
  CHECK(s4.args.size() == 1);

  for (int n = 1; n <= 7; ++n)
    for (Term t : enumerate_terms(n, false)) CHECK(unspine(spine(t)) == t);
}

TEST_CASE("iterates") {
  Term x = gen(), xx = app(x, x);
  CHECK(iterate(x, x, 1) == x);
  CHECK(iterate(x, x, 3) == app(app(x, x), x));
  CHECK(iterate(x, xx, 4) == parse("((x (x x)) x) (x (x x))"));
  for (int n = 1; n <= 9; ++n) CHECK(iterate(x, xx, n) == iterate_ref(x, xx, n));
  CHECK_THROWS(iterate(x, x, 0));
}

TEST_CASE("powers") {
  Term x = gen(), xx = app(x, x);
  CHECK(power_comp(x, 1) == x);
  CHECK(power_comp(x, 2) == comp(x, x));
  CHECK(power_comp(xx, 3) == comp(xx, comp(xx, xx)));
  CHECK(power_app(x, 0) == x);
  CHECK(power_app(x, 2) == app(x, app(x, x)));
  CHECK(power_app(xx, 1) == app(xx, xx));
  CHECK_THROWS(power_comp(x, 0));
}

TEST_CASE("subterms") {
  CHECK(subterms(gen()).size() == 1);
  CHECK(subterms(app(gen(), gen())).size() == 3);
  CHECK(subterms(app(gen(), app(gen(), gen()))).size() == 5);
  auto ss = subterms(app(gen(), gen()));
  CHECK(ss[0].first == "");
  CHECK(ss[1].first == "L");
  CHECK(ss[2].first == "R");
}

TEST_CASE("enumeration counts") {
  // binary trees by leaf count, and the two-operation variant
  const int cat[] = {1, 1, 2, 5, 14, 42, 132};
  for (int n = 1; n <= 7; ++n) {
    CHECK(int(enumerate_terms(n, true).size()) == cat[n - 1]);
    CHECK(int(enumerate_terms(n, false).size()) == cat[n - 1] * (1 << (n - 1)));
  }
  int total = 0;
  for (int n = 1; n <= 7; ++n) total += int(enumerate_terms(n, true).size());
  CHECK(total == 197);
}

TEST_CASE("power identity p^(n+1) = p^(i) p^(n)") {
  Oracle oracle(OracleBudget{120000, 0, 3});
  for (Term p : {gen(), app(gen(), gen())})
    for (int n = 0; n <= 3; ++n)
      for (int i = 0; i <= n; ++i) {
        Term lhs = power_app(p, n + 1);
        Term rhs = app(power_app(p, i), power_app(p, n));
        CAPTURE(print(lhs));
        CAPTURE(print(rhs));
        CHECK(oracle.equal(lhs, rhs).verdict == OVerdict::Equal);
      }
}

TEST_CASE("law instances hold under the oracle") {
  Oracle oracle(OracleBudget{150000, 0, 3});
  std::vector<Term> small;
  for (int n = 1; n <= 3; ++n)
    for (Term t : enumerate_terms(n, true)) small.push_back(t);
  for (Term a : small)
    for (Term b : small)
      for (Term c : small) {
        CHECK(oracle.equal(comp(a, comp(b, c)), comp(comp(a, b), c)).verdict ==
              OVerdict::Equal);
        CHECK(oracle.equal(app(comp(a, b), c), app(a, app(b, c))).verdict ==
              OVerdict::Equal);
        CHECK(oracle.equal(app(a, comp(b, c)), comp(app(a, b), app(a, c)))
                  .verdict == OVerdict::Equal);
      }
  for (Term a : small)
    for (Term b : small)
      CHECK(oracle.equal(comp(a, b), comp(app(a, b), a)).verdict ==
            OVerdict::Equal);
}
