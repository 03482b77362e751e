#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ldform/normalform.hpp"
#include "ldform/oracle.hpp"

using namespace ldform;

namespace {

std::vector<Term> upto(int leaves, bool a_only) {
  std::vector<Term> all;
  for (int n = 1; n <= leaves; ++n)
    for (Term t : enumerate_terms(n, a_only)) all.push_back(t);
  return all;
}

}  // namespace

TEST_CASE("bare powers are forced") {
  Term x = gen();
  NfId n1 = nf_of(x, parse("x x"));
  CHECK_FALSE(nf_is_leaf(n1));
  CHECK(nf_power(n1) == 1);
  CHECK(nf_components(n1).empty());

  NfId n0 = nf_of(x, x);
  CHECK(nf_power(n0) == 0);
  CHECK(nf_components(n0).empty());

  NfId n2 = nf_of(x, parse("x (x x)"));
  CHECK(nf_power(n2) == 2);
  CHECK(nf_components(n2).empty());
}

TEST_CASE("head power with components") {
  Term x = gen();
  NfId n = nf_of(x, parse("(x x) x"));
  CHECK(nf_power(n) == 1);
  REQUIRE(nf_components(n).size() == 1);
  NfId c = nf_components(n)[0];
  CHECK(nf_power(c) == 0);
  CHECK(nf_components(c).empty());
  CHECK(nf_star(n) == Star::App);
  // a_0 below the head power: x below x^(1)
  CHECK(compare_terms(to_term_nf(x, c), power_app(x, 1)) == Verdict::Less);
}

TEST_CASE("composition normal forms") {
  Term x = gen();
  NfId n = nf_of(x, parse("x o x"));
  CHECK(nf_power(n) == 1);
  CHECK(nf_star(n) == Star::Comp);
  REQUIRE(nf_components(n).size() == 1);
  CHECK(nf_components(n)[0] == nf_of(x, x));

  // flattening and validity
  Oracle o;
  CHECK(o.equal(to_term_nf(x, n), parse("x o x")).verdict == OVerdict::Equal);
  CHECK(NfCtx::for_p(x).valid(n));
}

TEST_CASE("leaves below the head stay leaves") {
  Term p = parse("x (x x)");
  NfId n = nf_of(p, parse("x x"));
  CHECK(nf_is_leaf(n));
  CHECK(to_term_nf(p, n) == parse("x x"));
}

TEST_CASE("round trip and structure over small heads") {
  Oracle oracle(OracleBudget{300000, 0, 4});
  for (Term p : upto(2, false))
    for (Term w : upto(4, false)) {
      CAPTURE(print(p));
      CAPTURE(print(w));
      NfId n = nf_of(p, w);
      CHECK(NfCtx::for_p(p).valid(n));
      Term back = to_term_nf(p, n);
      CHECK(oracle.equal(back, w).verdict == OVerdict::Equal);
    }
}

TEST_CASE("uniqueness matches equality classes") {
  Term x = gen();
  auto ws = upto(5, true);
  for (Term u : ws)
    for (Term v : ws) {
      bool same = compare_terms(u, v) == Verdict::Equal;
      CHECK((nf_of(x, u) == nf_of(x, v)) == same);
    }
}

TEST_CASE("normal-form order agrees with the comparator") {
  Term p = parse("x x");
  auto ws = upto(4, false);
  for (Term u : ws)
    for (Term v : ws) {
      Term bu = to_term_nf(p, nf_of(p, u));
      Term bv = to_term_nf(p, nf_of(p, v));
      CHECK(compare_terms(bu, bv) == compare_terms(u, v));
    }
}

TEST_CASE("serialization") {
  Term x = gen();
  CHECK(nf_sexpr(x, nf_of(x, parse("x x"))) == "x^(1)");
  CHECK(nf_sexpr(x, nf_of(x, x)) == "x");
  CHECK(nf_sexpr(x, nf_of(x, parse("(x x) x"))) == "(nf x^(1) [x] app)");
}
