#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "ptsem/argument.hpp"
#include "ptsem/proof_io.hpp"

using namespace ptsem;

namespace {

Formula P(const char* s) { return parse_formula(s); }
const CalculusMode NJ = CalculusMode::intuitionistic();

/// The ∨E/⊥E derivation of q from p ∨ q and ¬p.
Argument disjunctive_syllogism() {
  Argument left = Argument::bot_e(Argument::imp_e(Argument::assume(P("p"), "x"), Argument::assume(P("~p"))), P("q"));
  return Argument::or_e(Argument::assume(P("p | q")), "x", left, "y", Argument::assume(P("q"), "y"));
}

Argument conjunction_detour() {
  return Argument::and_e1(Argument::and_i(Argument::assume(P("p")), Argument::assume(P("q"))));
}

}  // namespace

TEST_SUITE("proofs") {

TEST_CASE("open assumptions") {
  CHECK(open_assumptions(Argument::assume(P("p"))) == FormulaSet{P("p")});
  Argument id = Argument::imp_i(P("p"), "u", Argument::assume(P("p"), "u"));
  CHECK(open_assumptions(id).empty());
  CHECK(id.conclusion() == P("p -> p"));
  Argument botbot = Argument::imp_i(P("bot"), "u", Argument::assume(P("bot"), "u"));
  CHECK(is_closed(botbot));
  CHECK(open_assumptions(disjunctive_syllogism()) == FormulaSet{P("p | q"), P("~p")});
}

TEST_CASE("witnesses") {
  CHECK(witnesses(Argument::assume(P("p")), parse_sequent("p, q : p")));
  CHECK_FALSE(witnesses(Argument::assume(P("p")), parse_sequent(" : p")));
  CHECK(witnesses(disjunctive_syllogism(), parse_sequent("p | q, ~p : q")));
  CHECK_FALSE(witnesses(disjunctive_syllogism(), parse_sequent("p | q : q")));
}

TEST_CASE("binding errors") {
  // Leaf bound by label u but with the wrong formula.
  Argument bad = Argument::imp_i(P("p"), "u", Argument::assume(P("q"), "u"));
  CHECK_THROWS_AS(open_assumptions(bad), MalformedArgument);
  // Shadowing binder.
  Argument inner = Argument::imp_i(P("p"), "u", Argument::assume(P("p"), "u"));
  Argument shadow = Argument::imp_i(P("q"), "u", inner);
  CHECK_THROWS_AS(open_assumptions(shadow), MalformedArgument);
}

TEST_CASE("check_derivation") {
  CHECK(check_derivation(conjunction_detour(), Base(), NJ));
  CHECK(check_derivation(disjunctive_syllogism(), Base(), NJ));
  CHECK_FALSE(check_derivation(disjunctive_syllogism(), Base(), CalculusMode::minimal()));

  Argument bogus = Argument::make(RuleId::AndE1, P("q"), {Argument::assume(P("p"))});
  CHECK_FALSE(check_derivation(bogus, Base(), NJ));
  auto report = check_derivation_report(bogus, Base(), NJ);
  REQUIRE_FALSE(report.ok());
  CHECK(report.defects.front().path.empty());

  AtomicRule pc = parse_rule("p => c");
  Argument app = Argument::base_rule(pc, {Argument::assume(P("p"))});
  CHECK(check_derivation(app, parse_base("p => c"), NJ));
  CHECK_FALSE(check_derivation(app, Base(), NJ));
  CHECK_FALSE(check_derivation(Argument::base_rule(pc, {Argument::assume(P("q"))}), parse_base("p => c"), NJ));
}

TEST_CASE("BotI only in the absurdity calculus over the alphabet") {
  AtomSet pq{Atom("p"), Atom("q")};
  Argument b = Argument::bot_i({Argument::assume(P("p")), Argument::assume(P("q"))});
  CHECK(b.conclusion() == P("bot"));
  CHECK(check_derivation(b, Base(), CalculusMode::absurdity(pq)));
  CHECK_FALSE(check_derivation(b, Base(), NJ));
  CHECK_FALSE(check_derivation(b, Base(), CalculusMode::absurdity({Atom("p")})));
}

TEST_CASE("apply_rule") {
  Argument p = Argument::assume(P("p")), q = Argument::assume(P("q"));
  auto and_i = apply_rule(RuleId::AndI, {p, q});
  REQUIRE(and_i.size() == 1);
  CHECK(and_i[0].conclusion() == P("p & q"));
  CHECK(and_i[0].premises()[0] == p);
  CHECK(and_i[0].premises()[1] == q);

  auto imp_e = apply_rule(RuleId::ImpE, {p, Argument::assume(P("p -> q"))});
  CHECK(imp_e.at(0).conclusion() == P("q"));

  RuleParams with_q;
  with_q.formula = P("q");
  CHECK(apply_rule(RuleId::OrI1, {p}, with_q).at(0).conclusion() == P("p | q"));

  CHECK_THROWS_AS(apply_rule(RuleId::ImpE, {q, Argument::assume(P("p -> q"))}), RuleError);
  CHECK_THROWS_AS(apply_rule(RuleId::AndI, {p}), RuleError);

  RuleParams discharge_p;
  discharge_p.formula = P("p");
  auto closed = apply_rule(RuleId::ImpI, {p}, discharge_p).at(0);
  CHECK(closed.conclusion() == P("p -> p"));
  CHECK(is_closed(closed));
}

TEST_CASE("apply_rule preserves well-formedness on generated inputs") {
  std::mt19937 rng(21);
  std::vector<Atom> atoms{Atom("p"), Atom("q")};
  int applied = 0;
  for (int i = 0; i < 400; ++i) {
    Formula g1 = oracle::random_formula(rng, atoms, false, 3);
    Formula g2 = oracle::random_formula(rng, atoms, false, 3);
    oracle::GenOptions opt;
    opt.fuel = 3;
    auto a = oracle::random_derivation(rng, g1, opt);
    auto b = oracle::random_derivation(rng, g2, opt);
    if (!a || !b) continue;
    REQUIRE(check_derivation(*a, Base(), NJ));
    CHECK(apply_rule(RuleId::AndI, {*a, *b}).size() == 1);
    CHECK(check_derivation(apply_rule(RuleId::AndI, {*a, *b}).at(0), Base(), NJ));
    RuleParams ip;
    ip.formula = g2;
    Argument imp = apply_rule(RuleId::ImpI, {*a}, ip).at(0);
    CHECK(check_derivation(imp, Base(), NJ));
    FormulaSet open = open_assumptions(*a);
    open.erase(g2);
    CHECK(open_assumptions(imp) == open);
    CHECK(check_derivation(apply_rule(RuleId::ImpE, {*b, imp}).at(0), Base(), NJ));
    ++applied;
  }
  CHECK(applied > 100);
}

TEST_CASE("check_derivation implies witnesses of its own sequent") {
  std::mt19937 rng(23);
  std::vector<Atom> atoms{Atom("p"), Atom("q"), Atom("r")};
  for (int i = 0; i < 500; ++i) {
    Formula g = oracle::random_formula(rng, atoms, true, 3);
    auto a = oracle::random_derivation(rng, g, {});
    if (!a) continue;
    REQUIRE(check_derivation(*a, Base(), NJ));
    CHECK(witnesses(*a, Sequent{open_assumptions(*a), a->conclusion()}));
  }
}

TEST_CASE("cut") {
  Argument proof_p = Argument::base_rule(AtomicRule::axiom(Atom("p")), {});
  CHECK(cut({{proof_p, P("p")}}, Argument::assume(P("p"))) == proof_p);

  // Closing both hypotheses of the disjunctive syllogism.
  Base b = parse_base("=> q");
  Argument q = Argument::base_rule(AtomicRule::axiom(Atom("q")), {});
  Argument pq = Argument::or_i2(P("p"), q);
  Argument ds = disjunctive_syllogism();
  Argument half = cut({{pq, P("p | q")}}, ds);
  CHECK(open_assumptions(half) == FormulaSet{P("~p")});
  CHECK(check_derivation(half, b, NJ));
  CHECK(half.conclusion() == P("q"));

  // A closed proof of ~p exists once ⊥ is introduced over the alphabet {p, q}.
  Argument neg = Argument::imp_i(P("p"), "w", Argument::bot_i({Argument::assume(P("p"), "w"), q}));
  Argument full = cut({{pq, P("p | q")}, {neg, P("~p")}}, ds);
  CHECK(is_closed(full));
  CHECK(full.conclusion() == P("q"));
  CHECK(check_derivation(full, b, CalculusMode::absurdity({Atom("p"), Atom("q")})));
}

TEST_CASE("cut above an implication elimination creates a detour") {
  Argument hole = Argument::imp_e(Argument::assume(P("p")), Argument::assume(P("p -> q")));
  Argument intro = Argument::imp_i(P("p"), "k", Argument::assume(P("q")));
  Argument grafted = cut({{intro, P("p -> q")}}, hole);
  CHECK(check_derivation(grafted, Base(), NJ));
  CHECK(grafted.conclusion() == P("q"));
  CHECK(grafted.premises()[1].rule() == RuleId::ImpI);
}

TEST_CASE("cut avoids capture") {
  // The closure has a free leaf labelled u; the target sits under a binder u.
  Argument closure = Argument::assume(P("q"), "u");
  Argument body = Argument::and_i(Argument::assume(P("p"), "u"), Argument::assume(P("q")));
  Argument a = Argument::imp_i(P("p"), "u", body);
  Argument c = cut({{closure, P("q")}}, a);
  CHECK(check_derivation(c, Base(), NJ));
  CHECK(free_labels(c) == std::set<Label>{"u"});
  CHECK(open_assumptions(c) == FormulaSet{P("q")});
}

TEST_CASE("canonical relabelling identifies alpha-variants") {
  Argument a = Argument::imp_i(P("p"), "x", Argument::assume(P("p"), "x"));
  Argument b = Argument::imp_i(P("p"), "y", Argument::assume(P("p"), "y"));
  CHECK_FALSE(a == b);
  CHECK(alpha_equivalent(a, b));
  CHECK(canonical_relabel(a) == canonical_relabel(b));
  Argument c = Argument::imp_i(P("p"), "y", Argument::assume(P("p")));
  CHECK_FALSE(alpha_equivalent(a, c));
}

TEST_CASE("operations commute with alpha-renaming") {
  std::mt19937 rng(29);
  std::vector<Atom> atoms{Atom("p"), Atom("q")};
  for (int i = 0; i < 300; ++i) {
    Formula g = oracle::random_formula(rng, atoms, true, 3);
    auto a = oracle::random_derivation(rng, g, {});
    if (!a) continue;
    Argument r = canonical_relabel(*a);
    CHECK(alpha_equivalent(*a, r));
    CHECK(canonical_relabel(r) == r);
    CHECK(open_assumptions(r) == open_assumptions(*a));
    CHECK(check_derivation(r, Base(), NJ) == check_derivation(*a, Base(), NJ));
  }
}

TEST_CASE("proof JSON round trip") {
  std::mt19937 rng(31);
  std::vector<Atom> atoms{Atom("p"), Atom("q")};
  Base base = parse_base("=> p\np => q\n");
  for (int i = 0; i < 300; ++i) {
    Formula g = oracle::random_formula(rng, atoms, true, 3);
    oracle::GenOptions opt;
    opt.base = base;
    auto a = oracle::random_derivation(rng, g, opt);
    if (!a) continue;
    CHECK(read_proof(write_proof(*a)) == *a);
  }
  CHECK(read_proof(write_proof(disjunctive_syllogism())) == disjunctive_syllogism());
}

TEST_CASE("proof JSON golden layout") {
  Argument id = Argument::imp_i(P("p"), "u1", Argument::assume(P("p"), "u1"));
  CHECK(write_proof(id) ==
        "{\n"
        "  \"rule\": \"ImpI\",\n"
        "  \"conclusion\": \"p -> p\",\n"
        "  \"discharges\": [\n"
        "    [\n"
        "      \"u1\"\n"
        "    ]\n"
        "  ],\n"
        "  \"premises\": [\n"
        "    {\n"
        "      \"rule\": \"Assume\",\n"
        "      \"conclusion\": \"p\",\n"
        "      \"label\": \"u1\"\n"
        "    }\n"
        "  ]\n"
        "}\n");
}

TEST_CASE("proof JSON errors") {
  CHECK_THROWS_AS(read_proof("[]"), ProofFormatError);
  CHECK_THROWS_AS(read_proof("{\"rule\": \"Nope\", \"conclusion\": \"p\"}"), ProofFormatError);
  CHECK_THROWS_AS(read_proof("{\"rule\": \"Assume\", \"conclusion\": \"p &\"}"), ProofFormatError);
  CHECK_THROWS_AS(read_proof("{\"rule\": \"AndI\", \"conclusion\": \"p & q\"}"), ProofFormatError);
  CHECK_THROWS_AS(read_proof("{\"rule\": \"Assume\", \"conclusion\": \"p\", \"extra\": 1}"), ProofFormatError);
  CHECK_THROWS_AS(read_proof("not json"), ProofFormatError);
}

}
