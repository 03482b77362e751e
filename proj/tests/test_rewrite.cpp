#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ldform/rewrite.hpp"

using namespace ldform;

TEST_CASE("expansion successors") {
  CHECK(ld_successors(gen()).empty());

  Term t = parse("x (x x)");
  auto s = ld_successors(t);
  REQUIRE(s.size() == 1);
  CHECK(s[0].pos == "");
  CHECK(s[0].after == parse("(x x) (x x)"));

  // root redex plus one inside the left subterm
  CHECK(ld_successors(parse("(x (x x)) (x x)")).size() == 2);
}

TEST_CASE("directed law neighbors") {
  auto has = [](const std::vector<RewriteStep>& steps, Term to) {
    for (const auto& s : steps)
      if (s.after == to) return true;
    return false;
  };
  CHECK(sigma_neighbors(gen()).empty());
  CHECK(has(sigma_neighbors(parse("x o x")), parse("x x o x")));
  CHECK(has(sigma_neighbors(parse("(x o x) x")), parse("x (x x)")));
}

TEST_CASE("steps are invertible at their position") {
  for (int n = 1; n <= 5; ++n)
    for (Term t : enumerate_terms(n, false))
      for (const RewriteStep& s : sigma_neighbors(t)) {
        auto back = apply_rule_at(s.after, s.pos, inverse(s.rule));
        REQUIRE(back.has_value());
        CHECK(*back == s.before);
      }
}

TEST_CASE("expansion grows the leaf count by the duplicated subterm") {
  for (int n = 1; n <= 6; ++n)
    for (Term t : enumerate_terms(n, true))
      for (const RewriteStep& s : ld_successors(t)) {
        Term redex = subterm_at(s.before, s.pos);
        int dup = redex.left().leaves();
        CHECK(s.after.leaves() == s.before.leaves() + dup);
      }
}

TEST_CASE("common reduct basics") {
  auto r1 = common_reduct(parse("x (x x)"), parse("(x x) (x x)"), 10);
  REQUIRE(r1.meet.has_value());
  CHECK(*r1.meet == parse("(x x) (x x)"));
  CHECK(r1.path_u.size() == 1);
  CHECK(r1.path_v.empty());

  auto r2 = common_reduct(gen(), gen(), 0);
  REQUIRE(r2.meet.has_value());
  CHECK(*r2.meet == gen());

  auto r3 = common_reduct(parse("x (x (x x))"), parse("(x x) ((x x) (x x))"),
                          5000);
  REQUIRE(r3.meet.has_value());
}

TEST_CASE("confluence on sampled one-step divergences") {
  for (int n = 1; n <= 6; ++n)
    for (Term t : enumerate_terms(n, true)) {
      auto steps = ld_successors(t);
      for (size_t i = 0; i < steps.size(); ++i)
        for (size_t j = i + 1; j < steps.size(); ++j) {
          auto r = common_reduct(steps[i].after, steps[j].after, 20000);
          CAPTURE(print(t));
          CHECK(r.meet.has_value());
        }
    }
}
