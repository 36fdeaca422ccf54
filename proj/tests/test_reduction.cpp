#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "ptsem/proof_io.hpp"
#include "ptsem/reduction.hpp"

using namespace ptsem;

namespace {

Formula P(const char* s) { return parse_formula(s); }
const CalculusMode NJ = CalculusMode::intuitionistic();

Argument conjunction_detour() {
  return Argument::and_e1(Argument::and_i(Argument::assume(P("p")), Argument::assume(P("q"))));
}

}  // namespace

TEST_SUITE("reduction") {

TEST_CASE("conjunction detour") {
  Argument d = conjunction_detour();
  auto sites = find_detours(d);
  REQUIRE(sites.size() == 1);
  CHECK(sites[0].path.empty());
  CHECK(sites[0].connective == Connective::And);
  CHECK(describe_site(sites[0]) == "and-detour");
  CHECK_FALSE(is_canonical(d));
  CHECK(reduce_step(d, sites[0]) == Argument::assume(P("p")));
  std::vector<std::string> trace;
  CHECK(normalize(d, kDefaultReductionSteps, &trace) == Argument::assume(P("p")));
  CHECK(trace == std::vector<std::string>{"step 1: and-detour at root"});
}

TEST_CASE("implication detour substitutes the minor premise") {
  Argument d1 = Argument::and_i(Argument::assume(P("q")), Argument::assume(P("r")));
  Argument body = Argument::and_i(Argument::assume(P("q & r"), "x"), Argument::assume(P("q & r"), "x"));
  Argument d = Argument::imp_e(d1, Argument::imp_i(P("q & r"), "x", body));
  auto sites = find_detours(d);
  REQUIRE(sites.size() == 1);
  CHECK(describe_site(sites[0]) == "imp-detour");
  Argument r = reduce_step(d, sites[0]);
  CHECK(r == Argument::and_i(d1, d1));
  CHECK(is_canonical(r));
}

TEST_CASE("vacuous implication detour drops the minor premise") {
  Argument d = Argument::imp_e(Argument::assume(P("p")), Argument::imp_i(P("p"), "x", Argument::assume(P("q"))));
  Argument n = normalize(d);
  CHECK(n == Argument::assume(P("q")));
  CHECK(open_assumptions(n) == FormulaSet{P("q")});
}

TEST_CASE("disjunction detour selects the branch") {
  Argument d = Argument::or_e(Argument::or_i2(P("p"), Argument::assume(P("q"))), "x",
                              Argument::or_i2(P("q"), Argument::assume(P("p"), "x")), "y",
                              Argument::or_i1(Argument::assume(P("q"), "y"), P("p")));
  auto sites = find_detours(d);
  REQUIRE(sites.size() == 1);
  CHECK(describe_site(sites[0]) == "or-detour");
  CHECK(normalize(d) == Argument::or_i1(Argument::assume(P("q")), P("p")));
}

TEST_CASE("permutation past disjunction elimination") {
  Argument major = Argument::assume(P("a | b"));
  Argument l = Argument::and_i(Argument::assume(P("a"), "x"), Argument::assume(P("c")));
  Argument r = Argument::and_i(Argument::assume(P("b"), "y"), Argument::assume(P("c")));
  Argument d = Argument::and_e2(Argument::or_e(major, "x", l, "y", r));
  auto sites = find_detours(d);
  REQUIRE(sites.size() == 1);
  CHECK(sites[0].kind == DetourKind::Permutative);
  CHECK(describe_site(sites[0]) == "or-permutation");
  Argument n = normalize(d);
  CHECK(is_canonical(n));
  CHECK(n.rule() == RuleId::OrE);
  CHECK(n.premises()[1] == Argument::assume(P("c")));
  CHECK(check_derivation(n, Base(), NJ));
}

TEST_CASE("permutation past falsum elimination") {
  Argument d = Argument::and_e1(Argument::bot_e(Argument::assume(P("bot")), P("p & q")));
  Argument n = normalize(d);
  CHECK(n == Argument::bot_e(Argument::assume(P("bot")), P("p")));
}

TEST_CASE("canonical derivations are fixed points") {
  Argument id = Argument::imp_i(P("bot"), "u1", Argument::assume(P("bot"), "u1"));
  CHECK(find_detours(id).empty());
  CHECK(is_canonical(id));
  std::vector<std::string> trace;
  CHECK(normalize(id, kDefaultReductionSteps, &trace) == id);
  CHECK(trace.empty());
  CHECK(is_canonical(Argument::assume(P("p"))));
}

TEST_CASE("ends_with_intro") {
  CHECK(ends_with_intro(Argument::imp_i(P("bot"), "u", Argument::assume(P("bot"), "u"))));
  CHECK_FALSE(ends_with_intro(Argument::assume(P("p"))));
}

TEST_CASE("reduce_step rejects a non-site") {
  Argument a = Argument::assume(P("p"));
  CHECK_THROWS_AS(reduce_step(a, DetourSite{{}, Connective::And, DetourKind::Direct}), InvalidSite);
}

TEST_CASE("grafting an introduction above an elimination yields a detour") {
  Argument hole = Argument::imp_e(Argument::assume(P("p")), Argument::assume(P("p -> q")));
  Argument intro = Argument::imp_i(P("p"), "k", Argument::assume(P("q")));
  Argument grafted = cut({{intro, P("p -> q")}}, hole);
  CHECK(check_derivation(grafted, Base(), NJ));
  CHECK_FALSE(is_canonical(grafted));
}

TEST_CASE("absurdity detour expands by the conclusion") {
  AtomSet pq{Atom("p"), Atom("q")};
  Base b = parse_base("=> p\n=> q\n");
  Argument bot = Argument::bot_i({Argument::base_rule(AtomicRule::axiom(Atom("p")), {}),
                                  Argument::base_rule(AtomicRule::axiom(Atom("q")), {})});
  for (const char* goal : {"p", "q & p", "p | r", "r -> q", "bot"}) {
    Argument d = Argument::bot_e(bot, P(goal));
    INFO(goal);
    REQUIRE(check_derivation(d, b, CalculusMode::absurdity(pq)));
    Argument n = normalize(d);
    CHECK(is_canonical(n));
    CHECK(n.conclusion() == P(goal));
    CHECK(check_derivation(n, b, CalculusMode::absurdity(pq)));
    if (!P(goal).is_atom() && !P(goal).is_bot()) CHECK(ends_with_intro(n));
  }
}

TEST_CASE("normalization properties on generated derivations") {
  std::mt19937 rng(101);
  std::vector<Atom> atoms{Atom("p"), Atom("q"), Atom("r")};
  Base base = parse_base("=> p\np => q\n");
  int done = 0, small = 0, with_detours = 0, permutative = 0;
  while (done < 400) {
    Formula g = oracle::random_formula(rng, atoms, true, 3);
    oracle::GenOptions opt;
    opt.base = base;
    opt.fuel = std::uniform_int_distribution<int>(2, 7)(rng);
    auto a = oracle::random_derivation(rng, g, opt);
    if (!a || a->size() > 200) continue;
    ++done;
    REQUIRE(check_derivation(*a, base, NJ));
    auto sites = find_detours(*a);
    if (!sites.empty()) ++with_detours;
    for (const auto& s : sites)
      if (s.kind == DetourKind::Permutative) {
        ++permutative;
        break;
      }
    Argument n = normalize(*a);
    INFO(proof_to_text(*a));
    CHECK(is_canonical(n));
    CHECK(n.conclusion() == a->conclusion());
    CHECK(check_derivation(n, base, NJ));
    FormulaSet before = open_assumptions(*a), after = open_assumptions(n);
    for (Formula f : after) CHECK(before.count(f));
    if (a->size() <= 12) {
      ++small;
      auto normal = oracle::all_normal_forms(*a);
      REQUIRE(normal);
      CHECK(normal->size() == 1);
      CHECK(*normal->begin() == write_proof(canonical_relabel(n)));
    }
  }
  CHECK(small > 20);
  CHECK(with_detours > 150);
  CHECK(permutative > 30);
}

TEST_CASE("closed normal proofs of compound formulas end with an introduction") {
  std::mt19937 rng(202);
  std::vector<Atom> atoms{Atom("p"), Atom("q")};
  int done = 0;
  while (done < 300) {
    Formula g = oracle::random_formula(rng, atoms, true, 3);
    oracle::GenOptions opt;
    opt.fuel = 5;
    auto a = oracle::random_derivation(rng, g, opt);
    if (!a) continue;
    Argument closed = oracle::close_with_imp_i(*a);
    // Use the closed proof inside extra detours so the root is an elimination.
    oracle::GenOptions closed_opt;
    closed_opt.allow_open = false;
    closed_opt.fuel = 4;
    auto again = oracle::random_derivation(rng, closed.conclusion(), closed_opt);
    for (const Argument& x : {closed, again.value_or(closed)}) {
      REQUIRE(is_closed(x));
      Argument n = normalize(x);
      CHECK(is_canonical(n));
      if (!n.conclusion().is_atom() && !n.conclusion().is_bot()) CHECK(ends_with_intro(n));
    }
    ++done;
  }
}

TEST_CASE("step budget") {
  Argument d = conjunction_detour();
  for (int i = 0; i < 5; ++i) d = Argument::and_e1(Argument::and_i(d, Argument::assume(P("r"))));
  CHECK_THROWS_AS(normalize(d, 3), ReductionBudgetExceeded);
  CHECK(normalize(d, 6) == Argument::assume(P("p")));
}

}
