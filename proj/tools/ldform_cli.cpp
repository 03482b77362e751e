// Command-line surface for the left-distributive division-form library.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ldform/divform.hpp"
#include "ldform/normalform.hpp"
#include "ldform/oracle.hpp"
#include "ldform/rewrite.hpp"
#include "ldform/serialize.hpp"
#include "ldform/term.hpp"

using namespace ldform;
using nlohmann::json;

namespace {

struct CliError {
  int code;
  std::string msg;
};

uint64_t default_budget() {
  if (const char* env = std::getenv("LDFORM_BUDGET")) {
    char* end = nullptr;
    uint64_t v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 200000;
}

// An argument is either an inline term or @file with one term per line
// ('#' starts a comment line).
std::vector<Term> term_args(const std::string& arg) {
  std::vector<Term> out;
  if (!arg.empty() && arg[0] == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw CliError{2, "cannot open " + arg.substr(1)};
    std::string line;
    while (std::getline(in, line)) {
      size_t h = line.find('#');
      if (h != std::string::npos) line = line.substr(0, h);
      bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
      if (blank) continue;
      out.push_back(parse(line));
    }
    if (out.empty()) throw CliError{2, "no terms in " + arg.substr(1)};
  } else {
    out.push_back(parse(arg));
  }
  return out;
}

Term one_term(const std::string& arg) {
  auto v = term_args(arg);
  if (v.size() != 1) throw CliError{2, "expected a single term, got a corpus"};
  return v.front();
}

void emit(bool json_mode, const std::string& op,
          const std::vector<std::string>& inputs, const std::string& result,
          uint64_t tier3_used, uint64_t cost) {
  if (json_mode) {
    json j{{"op", op},
           {"inputs", inputs},
           {"result", result},
           {"tier_used", tier3_used ? 3 : 1},
           {"cost", cost}};
    std::cout << j.dump() << "\n";
  } else {
    std::cout << result << "\n";
  }
}

int run_check(const std::string& suite, uint64_t budget, int max_leaves);

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"division forms and ordering for the free one-generated "
               "left-distributive algebra"};
  cli.require_subcommand(1);
  bool json_mode = false;
  cli.add_flag("--json", json_mode, "emit JSON results");

  std::string a_arg, b_arg, fmt = "infix", kind = "app", suite = "canonical";
  int n_arg = 1, steps = 1, leaves = 4, max_leaves = 0;
  bool a_only = false, count_only = false;
  uint64_t budget = default_budget();

  auto* c_parse = cli.add_subcommand("parse", "parse a term and echo it");
  c_parse->add_option("term", a_arg)->required();

  auto* c_print = cli.add_subcommand("print", "reprint a term");
  c_print->add_option("term", a_arg)->required();
  c_print->add_option("--format", fmt)->check(CLI::IsMember({"infix", "sexpr"}));

  auto* c_cmp = cli.add_subcommand("cmp", "compare two terms in the left order");
  c_cmp->add_option("a", a_arg)->required();
  c_cmp->add_option("b", b_arg)->required();

  auto* c_eq = cli.add_subcommand("eq", "decide equality of two terms");
  c_eq->add_option("a", a_arg)->required();
  c_eq->add_option("b", b_arg)->required();

  auto* c_df = cli.add_subcommand("df", "canonical division form over x");
  c_df->add_option("term", a_arg)->required();

  auto* c_div = cli.add_subcommand("div", "division form of Q over head P");
  c_div->add_option("p", a_arg)->required();
  c_div->add_option("q", b_arg)->required();

  auto* c_nf = cli.add_subcommand("nf", "normal form of W over head P");
  c_nf->add_option("p", a_arg)->required();
  c_nf->add_option("w", b_arg)->required();

  auto* c_rw = cli.add_subcommand("rewrite", "apply expansion steps");
  c_rw->add_option("term", a_arg)->required();
  c_rw->add_option("--steps", steps);

  auto* c_conf = cli.add_subcommand("confluence", "search a common reduct");
  c_conf->add_option("u", a_arg)->required();
  c_conf->add_option("v", b_arg)->required();
  c_conf->add_option("--budget", budget);

  auto* c_iter = cli.add_subcommand("iterate", "iterate I_n(a, b)");
  c_iter->add_option("a", a_arg)->required();
  c_iter->add_option("b", b_arg)->required();
  c_iter->add_option("n", n_arg)->required();

  auto* c_pow = cli.add_subcommand("power", "p^(n) or p^n");
  c_pow->add_option("p", a_arg)->required();
  c_pow->add_option("n", n_arg)->required();
  c_pow->add_option("--kind", kind)->check(CLI::IsMember({"app", "comp"}));

  auto* c_enum = cli.add_subcommand("enum", "enumerate terms by leaf count");
  c_enum->add_option("--leaves", leaves)->required();
  c_enum->add_flag("--a-only", a_only);
  c_enum->add_flag("--count-only", count_only);

  auto* c_fp = cli.add_subcommand("findpow", "least n with p^(n) above q");
  c_fp->add_option("p", a_arg)->required();
  c_fp->add_option("q", b_arg)->required();

  auto* c_check = cli.add_subcommand("check", "oracle cross-validation");
  c_check->add_option("--suite", suite)
      ->check(CLI::IsMember({"thm1", "canonical", "division", "nf"}));
  c_check->add_option("--budget", budget);
  c_check->add_option("--max-leaves", max_leaves);

  CLI11_PARSE(cli, argc, argv);

  try {
    if (*c_parse) {
      Term t = one_term(a_arg);
      emit(json_mode, "parse", {a_arg}, print(t), 0, 0);
    } else if (*c_print) {
      Term t = one_term(a_arg);
      emit(json_mode, "print", {a_arg},
           print(t, fmt == "infix" ? Format::Infix : Format::Sexpr), 0, 0);
    } else if (*c_cmp) {
      auto as = term_args(a_arg), bs = term_args(b_arg);
      for (Term a : as)
        for (Term b : bs) {
          uint64_t t3 = DfCtx::x().stats.tier3;
          Verdict v = compare_terms(a, b);
          emit(json_mode, "cmp", {print(a), print(b)}, verdict_name(v),
               DfCtx::x().stats.tier3 - t3, 0);
        }
    } else if (*c_eq) {
      auto as = term_args(a_arg), bs = term_args(b_arg);
      for (Term a : as)
        for (Term b : bs) {
          Verdict v = compare_terms(a, b);
          emit(json_mode, "eq", {print(a), print(b)},
               v == Verdict::Equal ? "Equal" : "NotEqual", 0, 0);
        }
    } else if (*c_df) {
      for (Term t : term_args(a_arg)) {
        uint64_t t3 = DfCtx::x().stats.tier3;
        DfId d = df_of_term(t);
        emit(json_mode, "df", {print(t)},
             json_mode ? df_json(gen(), d).dump() : df_sexpr(gen(), d),
             DfCtx::x().stats.tier3 - t3, 0);
      }
    } else if (*c_div) {
      Term p = one_term(a_arg);
      for (Term w : term_args(b_arg)) {
        uint64_t t3 = DfCtx::for_p(p).stats.tier3;
        DfId d = divide(p, w);
        emit(json_mode, "div", {print(p), print(w)},
             json_mode ? df_json(p, d).dump() : df_sexpr(p, d),
             DfCtx::for_p(p).stats.tier3 - t3, 0);
      }
    } else if (*c_nf) {
      Term p = one_term(a_arg);
      for (Term w : term_args(b_arg)) {
        NfId n = nf_of(p, w);
        emit(json_mode, "nf", {print(p), print(w)},
             json_mode ? nf_json(p, n).dump() : nf_sexpr(p, n), 0, 0);
      }
    } else if (*c_rw) {
      Term t = one_term(a_arg);
      json trace = json::array();
      for (int i = 0; i < steps; ++i) {
        auto succ = ld_successors(t);
        if (succ.empty()) break;
        t = succ.front().after;
        if (json_mode)
          trace.push_back(step_json(succ.front()));
        else
          std::cout << print(t) << "\n";
      }
      if (json_mode)
        std::cout << json{{"op", "rewrite"}, {"result", print(t)},
                          {"trace", trace}}
                         .dump()
                  << "\n";
    } else if (*c_conf) {
      Term u = one_term(a_arg), v = one_term(b_arg);
      auto r = common_reduct(u, v, budget);
      if (!r.meet) {
        if (json_mode)
          std::cout << json{{"op", "confluence"}, {"result", nullptr},
                            {"cost", r.cost}}
                           .dump()
                    << "\n";
        else
          std::cout << "no common reduct found (budget "
                    << (r.budget_exhausted ? "exhausted" : "not exhausted")
                    << ")\n";
        return 3;
      }
      if (json_mode)
        std::cout << json{{"op", "confluence"},
                          {"result", print(*r.meet)},
                          {"cost", r.cost},
                          {"path_u", trace_json(r.path_u)},
                          {"path_v", trace_json(r.path_v)}}
                         .dump()
                  << "\n";
      else
        std::cout << print(*r.meet) << "\n";
    } else if (*c_iter) {
      Term a = one_term(a_arg), b = one_term(b_arg);
      if (n_arg < 1) throw CliError{2, "iterate: n must be >= 1"};
      emit(json_mode, "iterate", {print(a), print(b), std::to_string(n_arg)},
           print(iterate(a, b, n_arg)), 0, 0);
    } else if (*c_pow) {
      Term p = one_term(a_arg);
      if (kind == "comp" && n_arg < 1)
        throw CliError{2, "power: composition power needs n >= 1"};
      if (kind == "app" && n_arg < 0)
        throw CliError{2, "power: application power needs n >= 0"};
      Term r = kind == "app" ? power_app(p, n_arg) : power_comp(p, n_arg);
      emit(json_mode, "power", {print(p), std::to_string(n_arg), kind},
           print(r), 0, 0);
    } else if (*c_enum) {
      const auto& ts = enumerate_terms(leaves, a_only);
      if (count_only) {
        emit(json_mode, "enum", {std::to_string(leaves)},
             std::to_string(ts.size()), 0, 0);
      } else {
        for (Term t : ts) std::cout << print(t) << "\n";
        std::cerr << ts.size() << " terms with " << leaves << " leaves\n";
      }
    } else if (*c_fp) {
      Term p = one_term(a_arg), q = one_term(b_arg);
      emit(json_mode, "findpow", {print(p), print(q)},
           std::to_string(find_power(p, q)), 0, 0);
    } else if (*c_check) {
      return run_check(suite, budget, max_leaves);
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error at " << e.pos << ": " << e.what() << "\n";
    return 2;
  } catch (const CliError& e) {
    std::cerr << e.msg << "\n";
    return e.code;
  } catch (const BudgetError& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return 3;
  } catch (const WatchdogError& e) {
    std::cerr << "watchdog: " << e.what() << "\n";
    return 3;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 4;
  }
  return 0;
}

namespace {

int run_check(const std::string& suite, uint64_t budget, int max_leaves) {
  Oracle oracle(OracleBudget{budget, 0, 4});
  uint64_t checked = 0, unknown = 0, mismatch = 0;
  auto report = [&](const char* name) {
    const TierStats& st = DfCtx::x().stats;
    std::cout << name << ": " << checked << " checks, " << unknown
              << " unknown, " << mismatch << " mismatches; tiers "
              << st.tier1 << "/" << st.tier2 << "/" << st.tier3 << "\n";
    if (mismatch) return 4;
    if (unknown) return 3;
    return 0;
  };
  auto agree = [](Verdict v, OVerdict o) {
    switch (o) {
      case OVerdict::Less: return v == Verdict::Less;
      case OVerdict::Equal: return v == Verdict::Equal;
      case OVerdict::Greater: return v == Verdict::Greater;
      case OVerdict::Unknown: return true;
    }
    return false;
  };

  if (suite == "canonical") {
    int ml = max_leaves ? max_leaves : 6;
    std::vector<Term> all;
    for (int n = 1; n <= ml; ++n)
      for (Term t : enumerate_terms(n, true)) all.push_back(t);
    for (Term u : all)
      for (Term v : all) {
        Verdict mine = compare_terms(u, v);
        OracleResult o = oracle.compare(u, v);
        ++checked;
        if (o.verdict == OVerdict::Unknown)
          ++unknown;
        else if (!agree(mine, o.verdict)) {
          ++mismatch;
          std::cerr << "mismatch: " << print(u) << " vs " << print(v) << ": "
                    << verdict_name(mine) << " / "
                    << overdict_name(o.verdict) << "\n";
        }
      }
    return report("canonical");
  }
  if (suite == "thm1") {
    int ml = max_leaves ? max_leaves : 3;
    std::vector<Term> all;
    for (int n = 1; n <= ml; ++n)
      for (Term t : enumerate_terms(n, false)) all.push_back(t);
    for (Term p : all)
      for (Term r : all)
        for (Term s : all) {
          if (compare_terms(r, s) != Verdict::Less) continue;
          ++checked;
          bool ok = compare_terms(app(p, r), comp(p, r)) == Verdict::Less &&
                    compare_terms(comp(p, r), app(p, s)) == Verdict::Less &&
                    compare_terms(app(p, r), app(p, s)) == Verdict::Less;
          if (!ok) {
            ++mismatch;
            std::cerr << "sandwich violation at p=" << print(p)
                      << " r=" << print(r) << " s=" << print(s) << "\n";
          }
        }
    for (Term p : all)
      for (Term q : all)
        for (Term r : all) {
          ++checked;
          if (compare_terms(app(p, q), app(p, r)) != compare_terms(q, r)) {
            ++mismatch;
            std::cerr << "cancellation violation at p=" << print(p)
                      << " q=" << print(q) << " r=" << print(r) << "\n";
          }
        }
    return report("thm1");
  }
  if (suite == "division") {
    int ml = max_leaves ? max_leaves : 3;
    std::vector<Term> all;
    for (int n = 1; n <= ml; ++n)
      for (Term t : enumerate_terms(n, false)) all.push_back(t);
    for (Term p : all)
      for (Term w : all) {
        ++checked;
        DfId d = divide(p, w);
        if (!df_is_leaf(d) &&
            !is_prenormal(p, df_components(d), df_star(d))) {
          ++mismatch;
          std::cerr << "non-prenormal division at p=" << print(p)
                    << " w=" << print(w) << "\n";
          continue;
        }
        Term back = DfCtx::for_p(p).to_term(d);
        OracleResult o = oracle.equal(back, w);
        if (o.verdict == OVerdict::Unknown) ++unknown;
      }
    return report("division");
  }
  // nf
  int ml = max_leaves ? max_leaves : 2;
  std::vector<Term> ps, ws;
  for (int n = 1; n <= ml; ++n)
    for (Term t : enumerate_terms(n, false)) ps.push_back(t);
  for (int n = 1; n <= ml + 2; ++n)
    for (Term t : enumerate_terms(n, false)) ws.push_back(t);
  for (Term p : ps)
    for (Term w : ws) {
      ++checked;
      NfId nf = nf_of(p, w);
      if (!NfCtx::for_p(p).valid(nf)) {
        ++mismatch;
        std::cerr << "invalid normal form at p=" << print(p)
                  << " w=" << print(w) << "\n";
        continue;
      }
      Term back = to_term_nf(p, nf);
      OracleResult o = oracle.equal(back, w);
      if (o.verdict == OVerdict::Unknown) ++unknown;
    }
  return report("nf");
}

}  // namespace
