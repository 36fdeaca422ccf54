#include <doctest.h>

#include <cstdlib>
#include <random>

#include "curated.hpp"
#include "oracles.hpp"
#include "ptsem/prover.hpp"
#include "ptsem/reduction.hpp"

using namespace ptsem;

namespace {

Formula P(const char* s) { return parse_formula(s); }
const CalculusMode NJ = CalculusMode::intuitionistic();

bool contains_rule(const Argument& a, RuleId r) {
  if (a.rule() == r) return true;
  for (const auto& p : a.premises())
    if (contains_rule(p, r)) return true;
  return false;
}

}  // namespace

TEST_SUITE("prover") {

TEST_CASE("examples") {
  Sequent ds = parse_sequent("p | q, ~p : q");
  CHECK(proves(Base(), ds.context, ds.extract, NJ).decided);
  CHECK_FALSE(proves(Base(), {}, P("((p -> q) -> p) -> p"), NJ).decided);
  CHECK(proves(parse_base("=> p"), {}, P("p | q"), NJ).decided);
}

TEST_CASE("witness shapes") {
  auto id = derivation_for(Base(), {}, P("p -> p"), NJ);
  REQUIRE(id);
  CHECK(alpha_equivalent(*id, Argument::imp_i(P("p"), "u", Argument::assume(P("p"), "u"))));

  Sequent ds = parse_sequent("p | q, ~p : q");
  auto w = derivation_for(Base(), ds.context, ds.extract, NJ);
  REQUIRE(w);
  CHECK(check_derivation(*w, Base(), NJ));
  CHECK(witnesses(*w, ds));
  Argument n = normalize(*w);
  CHECK(n.rule() == RuleId::OrE);
  CHECK(contains_rule(n, RuleId::BotE));

  Base chain = parse_base("=> p\np => q\n");
  auto q = derivation_for(chain, {}, P("q"), NJ);
  REQUIRE(q);
  CHECK(q->rule() == RuleId::BaseRule);
  REQUIRE(q->premises().size() == 1);
  CHECK(q->premises()[0].rule() == RuleId::BaseRule);
  CHECK(q->size() == 2);
}

TEST_CASE("refute") {
  auto lem = refute(Base(), {}, P("p | ~p"), 2);
  REQUIRE(lem);
  CHECK(lem->size() == 2);
  CHECK(lem->valuation[0].empty());
  CHECK(lem->valuation[1] == AtomSet{Atom("p")});
  CHECK_FALSE(refute(Base(), {}, P("bot -> p"), 4));
  CHECK_FALSE(refute(parse_base("=> p"), {}, P("p"), 4));
  auto peirce = refute(Base(), {}, P("((p -> q) -> p) -> p"), 4);
  REQUIRE(peirce);
  CHECK(peirce->size() == 2);
}

TEST_CASE("countermodel JSON round trip") {
  auto m = refute(parse_base("p => q"), {}, P("q"), 3);
  REQUIRE(m);
  KripkeModel back = read_countermodel(write_countermodel(*m));
  CHECK(back.above == m->above);
  CHECK(back.valuation == m->valuation);
  CHECK(back.base_closed == m->base_closed);
}

TEST_CASE("certificate coherence on the curated suite") {
  for (const auto& inst : curated::suite()) {
    Base b = parse_base(inst.base);
    Sequent s = parse_sequent(inst.sequent);
    INFO(inst.base, inst.sequent);
    ProveOptions opt;
    opt.want_witness = opt.want_countermodel = true;
    ProverVerdict v = proves(b, s.context, s.extract, NJ, opt);
    CHECK(v.decided == inst.provable);
    CHECK(v.witness.has_value() != v.countermodel.has_value());
    if (v.witness) {
      CHECK(check_derivation(*v.witness, b, NJ));
      CHECK(witnesses(*v.witness, s));
    }
    if (v.countermodel) CHECK(oracle::countermodel_ok(*v.countermodel, b, s.context, s.extract, NJ));
  }
}

TEST_CASE("minimal mode") {
  Sequent ds = parse_sequent("p | q, ~p : q");
  ProveOptions opt;
  opt.want_countermodel = true;
  ProverVerdict v = proves(Base(), ds.context, ds.extract, CalculusMode::minimal(), opt);
  CHECK_FALSE(v.decided);
  REQUIRE(v.countermodel);
  CHECK(v.countermodel->size() == 1);
  CHECK(oracle::countermodel_ok(*v.countermodel, Base(), ds.context, ds.extract, CalculusMode::minimal()));
  CHECK(proves(Base(), {}, P("p -> ~~p"), CalculusMode::minimal()).decided);
  CHECK_FALSE(proves(Base(), {P("bot")}, P("p"), CalculusMode::minimal()).decided);
}

TEST_CASE("absurdity mode") {
  auto mode = CalculusMode::absurdity({Atom("p"), Atom("q")});
  Base pq = parse_base("=> p\n=> q\n");
  auto w = derivation_for(pq, {}, P("bot"), mode);
  REQUIRE(w);
  CHECK(w->rule() == RuleId::BotI);
  CHECK(check_derivation(*w, pq, mode));
  CHECK(proves(Base(), {P("p"), P("q")}, P("r"), mode).decided);
  CHECK_FALSE(proves(parse_base("=> p"), {}, P("bot"), mode).decided);
}

TEST_CASE("random coherence against the Kripke oracle") {
  std::mt19937 rng(77);
  std::vector<Atom> atoms{Atom("p"), Atom("q")};
  const AtomSet pq{Atom("p"), Atom("q")};
  auto universe = rule_universe(pq, {1, 2, 2, 1});
  int refuted = 0, proved = 0;
  for (int i = 0; i < 600; ++i) {
    Base b;
    for (int k = std::uniform_int_distribution<int>(0, 2)(rng); k > 0; --k)
      b = b.with(universe[std::uniform_int_distribution<std::size_t>(0, universe.size() - 1)(rng)]);
    CalculusMode mode = std::vector<CalculusMode>{CalculusMode::minimal(), NJ, CalculusMode::absurdity(pq)}[i % 3];
    FormulaSet gamma;
    if (i % 2) gamma.insert(oracle::random_formula(rng, atoms, true, 3));
    Formula phi = oracle::random_formula(rng, atoms, true, 4);
    INFO(print_base(b), print_sequent({gamma, phi}));
    ProveOptions opt;
    opt.want_witness = opt.want_countermodel = true;
    opt.countermodel_bound = 5;
    ProverVerdict v = proves(b, gamma, phi, mode, opt);
    if (v.decided) {
      ++proved;
      REQUIRE(v.witness);
      CHECK(check_derivation(*v.witness, b, mode));
      CHECK(witnesses(*v.witness, Sequent{gamma, phi}));
      CHECK_FALSE(v.countermodel);
    } else {
      // Every refuted sequent over two atoms has a small countermodel.
      REQUIRE(v.countermodel);
      CHECK(oracle::countermodel_ok(*v.countermodel, b, gamma, phi, mode));
      ++refuted;
    }
  }
  CHECK(proved > 50);
  CHECK(refuted > 50);
}

TEST_CASE("deduction, conjunction and atom properties") {
  std::mt19937 rng(79);
  std::vector<Atom> atoms{Atom("p"), Atom("q")};
  const AtomSet pq{Atom("p"), Atom("q")};
  auto universe = rule_universe(pq, {1, 2, 2, 1});
  for (int i = 0; i < 300; ++i) {
    Base b;
    for (int k = std::uniform_int_distribution<int>(0, 3)(rng); k > 0; --k)
      b = b.with(universe[std::uniform_int_distribution<std::size_t>(0, universe.size() - 1)(rng)]);
    Prover pr(b, NJ);
    Prover min(b, CalculusMode::minimal());
    Formula f = oracle::random_formula(rng, atoms, true, 3);
    Formula g = oracle::random_formula(rng, atoms, true, 3);
    CHECK(pr.proves({f}, g) == pr.proves({}, Formula::imp(f, g)));
    CHECK(pr.proves({}, Formula::conj(f, g)) == (pr.proves({}, f) && pr.proves({}, g)));
    if (min.proves({f}, g)) CHECK(pr.proves({f}, g));
    for (const Atom& a : pq) CHECK(pr.proves({}, Formula::atom(a)) == derivable_atom(b, {}, a));
  }
}

TEST_CASE("budget") {
  const Formula hard = P("((p -> q) -> r) -> ((q -> p) -> r) -> (p | q -> r) -> r | ~r");
  Prover probe(Base(), NJ);
  probe.proves({}, hard);
  const std::size_t needed = probe.nodes_used();
  REQUIRE(needed > 2);
  Prover pr(Base(), NJ, needed - 1);
  CHECK_THROWS_AS(pr.proves({}, hard), BudgetExceeded);
  Prover roomy(Base(), NJ, 1000);
  CHECK(roomy.proves({}, P("p -> p")));
  CHECK(roomy.nodes_used() > 0);
}

}
