#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ldform/divform.hpp"
#include "ldform/oracle.hpp"

using namespace ldform;

namespace {

std::vector<Term> upto(int leaves, bool a_only) {
  std::vector<Term> all;
  for (int n = 1; n <= leaves; ++n)
    for (Term t : enumerate_terms(n, a_only)) all.push_back(t);
  return all;
}

// collect every form reachable through components
void df_closure(DfId d, std::vector<DfId>& out) {
  out.push_back(d);
  if (!df_is_leaf(d))
    for (DfId c : df_components(d)) df_closure(c, out);
}

}  // namespace

TEST_CASE("prenormality over the head chain") {
  DfCtx& xc = DfCtx::x();
  DfId g = kGenDf;
  DfId xx = xc.make_node({g}, Star::App);

  // a_1 is bounded by the bare head, a_2 by head * a_0, and so on
  CHECK(is_prenormal(gen(), {xx, g, g}, Star::App));
  CHECK(is_prenormal(gen(), {g, g, xx}, Star::App));
  CHECK_FALSE(is_prenormal(gen(), {g, xx}, Star::App));

  // composition nodes need the last bound strictly
  CHECK(is_prenormal(gen(), {g}, Star::Comp));
  CHECK_FALSE(is_prenormal(gen(), {g, g}, Star::Comp));
  CHECK(is_prenormal(gen(), {g, g}, Star::App));
}

TEST_CASE("lex examples") {
  DfCtx& xc = DfCtx::x();
  DfId g = kGenDf;
  DfId xx = xc.make_node({g}, Star::App);
  DfId xxx = xc.make_node({g, g}, Star::App);
  DfId x_xx = xc.make_node({xx}, Star::App);
  DfId oxx = xc.make_node({g}, Star::Comp);

  CHECK(xc.lex(g, xx) == Verdict::Less);
  CHECK(xc.lex(xx, g) == Verdict::Greater);
  CHECK(xc.lex(xx, xx) == Verdict::Equal);
  // finite sequence a proper prefix of the iterate-extended one
  CHECK(xc.lex(xxx, oxx) == Verdict::Less);
  // first divergence decides
  CHECK(xc.lex(xxx, x_xx) == Verdict::Less);
  // products sit below the matching composition
  CHECK(xc.lex(xx, oxx) == Verdict::Less);
  CHECK(xc.lex(oxx, x_xx) == Verdict::Less);
  // every early iterate stays below its supremum
  DfId i4 = xc.make_node({g, g, xx}, Star::App);
  CHECK(xc.lex(i4, oxx) == Verdict::Less);
}

TEST_CASE("canonical forms of small terms") {
  DfCtx& xc = DfCtx::x();
  DfId g = kGenDf;
  DfId xx = xc.make_node({g}, Star::App);

  CHECK(df_of_term(parse("x")) == g);
  CHECK(df_of_term(parse("x x")) == xx);
  CHECK(df_of_term(parse("x x x")) == xc.make_node({g, g}, Star::App));
  CHECK(df_of_term(parse("x (x x)")) == xc.make_node({xx}, Star::App));
  CHECK(df_of_term(parse("(x x) (x x)")) == df_of_term(parse("x (x x)")));
  CHECK(df_of_term(parse("x o x")) == xc.make_node({g}, Star::Comp));
  // the absorbed left factor collapses to the same representation
  CHECK(df_of_term(parse("x x o x")) == df_of_term(parse("x o x")));
  CHECK(df_of_term(parse("((x x) x) (x x)")) ==
        xc.make_node({g, g, xx}, Star::App));
}

TEST_CASE("product and composition calculus on forms") {
  DfCtx& xc = DfCtx::x();
  DfId g = kGenDf;
  DfId xx = xc.make_node({g}, Star::App);

  // |p v| = p v for the head leaf
  CHECK(xc.mul(g, xx) == xc.make_node({xx}, Star::App));
  // appending a bounded component
  CHECK(xc.mul(xx, g) == xc.make_node({g, g}, Star::App));
  // x o x as a form
  CHECK(xc.comp(g, g) == xc.make_node({g}, Star::Comp));
  // (x x) o x unwinds an iterate back to x o x
  CHECK(xc.comp(xx, g) == xc.make_node({g}, Star::Comp));
}

TEST_CASE("to_term flattening") {
  DfCtx& xc = DfCtx::x();
  DfId g = kGenDf;
  CHECK(xc.to_term(xc.make_node({g, g}, Star::App)) == parse("(x x) x"));
  CHECK(xc.to_term(xc.make_node({g}, Star::Comp)) == parse("x o x"));
  CHECK(xc.to_term(g) == gen());
  // round trip: flattening a canonical form reproduces its element
  for (Term t : upto(5, false)) {
    DfId d = df_of_term(t);
    CHECK(df_of_term(xc.to_term(d)) == d);
  }
}

TEST_CASE("comparator examples") {
  CHECK(compare_terms(parse("x"), parse("x x")) == Verdict::Less);
  CHECK(compare_terms(parse("x (x x)"), parse("(x x) (x x)")) ==
        Verdict::Equal);
  CHECK(compare_terms(parse("(x x) x"), parse("x (x x)")) == Verdict::Less);
  for (Term t : upto(4, false))
    if (t != gen()) CHECK(compare_terms(gen(), t) == Verdict::Less);
}

TEST_CASE("division examples") {
  Term xx = parse("x x");
  DfCtx& ctx = DfCtx::for_p(xx);
  DfId d1 = divide(xx, parse("(x x) x"));
  CHECK_FALSE(df_is_leaf(d1));
  CHECK(df_star(d1) == Star::App);
  CHECK(df_components(d1) == std::vector<DfId>{kGenDf});
  CHECK(df_sexpr(xx, d1) == "(df (xx) [x] app)");

  DfId d2 = divide(xx, parse("x o x"));
  CHECK(df_star(d2) == Star::Comp);
  CHECK(df_components(d2) == std::vector<DfId>{kGenDf});

  DfId d3 = divide(parse("x (x x)"), parse("x"));
  CHECK(d3 == kGenDf);

  // head itself divides to the head leaf
  DfId d4 = divide(xx, xx);
  CHECK(df_is_leaf(d4));
  CHECK(df_sexpr(xx, d4) == "xx");
}

TEST_CASE("division agrees with the structural fold") {
  for (Term p : upto(3, false))
    for (Term w : upto(4, false)) {
      if (p.is_gen()) continue;
      CAPTURE(print(p));
      CAPTURE(print(w));
      CHECK(divide(p, w) == DfCtx::for_p(p).of_term(w));
    }
}

TEST_CASE("division soundness against the oracle") {
  Oracle oracle(OracleBudget{300000, 0, 4});
  for (Term p : upto(3, false))
    for (Term w : upto(3, false)) {
      DfId d = divide(p, w);
      Term back = DfCtx::for_p(p).to_term(d);
      CAPTURE(print(p));
      CAPTURE(print(w));
      CHECK(oracle.equal(back, w).verdict == OVerdict::Equal);
      if (!df_is_leaf(d))
        CHECK(is_prenormal(p, df_components(d), df_star(d)));
    }
}

TEST_CASE("mixed-head forms") {
  // over the generator head the first component is already canonical
  DfCtx& xc = DfCtx::x();
  DfId u = df_of_term(parse("x (x x)"));
  Hybrid h = hybrid_df(gen(), gen(), u);
  CHECK_FALSE(h.is_leaf);
  CHECK(h.head_qdf == df_of_term(parse("x x")));
  CHECK(h.tail.empty());

  // below the head: unchanged leaf
  Hybrid h2 = hybrid_df(parse("x (x x)"), gen(),
                        divide(parse("x (x x)"), parse("x x")));
  CHECK(h2.is_leaf);
  CHECK(h2.leaf_val == df_of_term(parse("x x")));

  // the head component of |(xx)(xxx)|^{xx} is |xxx|^x
  Term xx = parse("x x");
  DfId u3 = divide(xx, app(xx, parse("(x x) x")));
  Hybrid h3 = hybrid_df(xx, gen(), u3);
  CHECK(h3.head_qdf == df_of_term(parse("(x x) x")));
  (void)xc;
}

TEST_CASE("find_power examples") {
  CHECK(find_power(parse("x"), parse("x")) == 1);
  CHECK(find_power(parse("x"), parse("x x")) == 2);
  CHECK(find_power(parse("x x"), parse("x")) == 1);
}

TEST_CASE("order properties on the small enumeration") {
  auto all = upto(4, false);
  for (Term u : all) {
    CHECK(compare_terms(u, u) == Verdict::Equal);
    for (Term v : all) {
      Verdict uv = compare_terms(u, v), vu = compare_terms(v, u);
      if (uv == Verdict::Less) CHECK(vu == Verdict::Greater);
      if (uv == Verdict::Equal) CHECK(vu == Verdict::Equal);
    }
  }
}

TEST_CASE("comparator agrees with the oracle on small terms") {
  Oracle oracle(OracleBudget{400000, 0, 4});
  auto all = upto(5, true);
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = i + 1; j < all.size(); ++j) {
      Verdict mine = compare_terms(all[i], all[j]);
      OracleResult o = oracle.compare(all[i], all[j]);
      CAPTURE(print(all[i]));
      CAPTURE(print(all[j]));
      REQUIRE(o.verdict != OVerdict::Unknown);
      switch (o.verdict) {
        case OVerdict::Less: CHECK(mine == Verdict::Less); break;
        case OVerdict::Equal: CHECK(mine == Verdict::Equal); break;
        case OVerdict::Greater: CHECK(mine == Verdict::Greater); break;
        default: break;
      }
    }
}

TEST_CASE("law congruence of canonical forms") {
  auto small = upto(2, false);
  for (Term a : small)
    for (Term b : small)
      for (Term c : small) {
        CHECK(df_of_term(comp(a, comp(b, c))) ==
              df_of_term(comp(comp(a, b), c)));
        CHECK(df_of_term(app(comp(a, b), c)) ==
              df_of_term(app(a, app(b, c))));
        CHECK(df_of_term(app(a, comp(b, c))) ==
              df_of_term(comp(app(a, b), app(a, c))));
      }
  for (Term a : small)
    for (Term b : small)
      CHECK(df_of_term(comp(a, b)) == df_of_term(comp(app(a, b), a)));
}

TEST_CASE("subterm dominance inside forms") {
  DfCtx& xc = DfCtx::x();
  for (Term t : upto(5, false)) {
    DfId d = df_of_term(t);
    if (df_is_leaf(d)) continue;
    std::vector<DfId> sub;
    for (DfId c : df_components(d)) df_closure(c, sub);
    for (DfId s : sub) CHECK(xc.lex(s, d) == Verdict::Less);
  }
}

TEST_CASE("dominance witnesses") {
  DfCtx& xc = DfCtx::x();
  DfId g = kGenDf;
  DfId xx = xc.make_node({g}, Star::App);
  DfId oxx = xc.make_node({g}, Star::Comp);

  // the head dominates everything
  for (DfId v : {g, xx, oxx}) {
    auto w = xc.sharp(g, v);
    REQUIRE(w.has_value());
    CHECK(w->clause == 2);
  }
  // p a dominates anything bounded by the head
  auto w2 = xc.sharp(xx, g);
  REQUIRE(w2.has_value());
  CHECK(w2->clause == 3);
  // p o a dominates everything
  auto w3 = xc.sharp(oxx, xc.make_node({xx}, Star::App));
  REQUIRE(w3.has_value());
  CHECK(w3->clause == 3);
}

TEST_CASE("dominance closes downward") {
  DfCtx& xc = DfCtx::x();
  std::vector<DfId> forms;
  for (Term t : upto(4, true)) forms.push_back(df_of_term(t));
  std::sort(forms.begin(), forms.end());
  forms.erase(std::unique(forms.begin(), forms.end()), forms.end());
  for (DfId u : forms)
    for (DfId v : forms) {
      if (!xc.sharp(u, v)) continue;
      for (DfId w : forms)
        if (xc.lex(w, v) != Verdict::Greater) {
          CAPTURE(u);
          CAPTURE(v);
          CAPTURE(w);
          CHECK(xc.sharp(u, w).has_value());
        }
    }
}

TEST_CASE("dominant products stay on the direct path") {
  DfCtx& xc = DfCtx::x();
  std::vector<DfId> forms;
  for (Term t : upto(4, true)) forms.push_back(df_of_term(t));
  std::sort(forms.begin(), forms.end());
  forms.erase(std::unique(forms.begin(), forms.end()), forms.end());

  Oracle oracle(OracleBudget{300000, 0, 4});
  for (DfId u : forms)
    for (DfId v : forms) {
      if (!xc.sharp(u, v)) continue;
      uint64_t t2 = xc.stats.tier2, t3 = xc.stats.tier3;
      DfId uv = xc.mul(u, v);
      DfId ucv = xc.comp(u, v);
      CHECK(xc.stats.tier2 == t2);
      CHECK(xc.stats.tier3 == t3);
      // |uv| dominates u, and both results denote the right elements
      CHECK(xc.sharp(uv, u).has_value());
      CHECK(oracle
                .equal(xc.to_term(uv),
                       app(xc.to_term(u), xc.to_term(v)))
                .verdict == OVerdict::Equal);
      CHECK(oracle
                .equal(xc.to_term(ucv),
                       comp(xc.to_term(u), xc.to_term(v)))
                .verdict == OVerdict::Equal);
    }
}

TEST_CASE("left cancellation and the sandwich on small terms") {
  auto small = upto(3, false);
  for (Term p : small)
    for (Term q : small)
      for (Term r : small) {
        CHECK(compare_terms(app(p, q), app(p, r)) == compare_terms(q, r));
        if (compare_terms(q, r) == Verdict::Less) {
          CHECK(compare_terms(app(p, q), comp(p, q)) == Verdict::Less);
          CHECK(compare_terms(comp(p, q), app(p, r)) == Verdict::Less);
        }
      }
}
