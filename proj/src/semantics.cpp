#include "ptsem/semantics.hpp"

#include <algorithm>

#include "ptsem/reduction.hpp"

namespace ptsem {

const char* mode_name(SemanticsMode m) { return m == SemanticsMode::PtV ? "ptv" : "sandqvist"; }

SemanticsMode mode_from_name(const std::string& name) {
  if (name == "ptv") return SemanticsMode::PtV;
  if (name == "sandqvist") return SemanticsMode::Sandqvist;
  throw std::invalid_argument("unknown mode '" + name + "' (expected ptv or sandqvist)");
}

AtomSet working_alphabet(const AtomSet& instance_atoms, int reserve) {
  AtomSet out = instance_atoms;
  for (int i = 1, added = 0; added < reserve; ++i) {
    Atom a("r" + std::to_string(i));
    if (out.insert(a).second) ++added;
  }
  return out;
}

CalculusMode calculus_of(const SemanticsConfig& cfg) {
  return cfg.mode == SemanticsMode::PtV ? CalculusMode::intuitionistic() : CalculusMode::absurdity(cfg.alphabet);
}

namespace {

std::vector<std::pair<Base, int>> bounded_extensions(const Base& b, const std::vector<AtomicRule>& universe,
                                                     int remaining) {
  std::vector<AtomicRule> fresh;
  for (const auto& r : universe)
    if (!b.contains(r)) fresh.push_back(r);
  std::vector<std::pair<Base, int>> out;
  ExtensionStream s(b, std::move(fresh), std::max(remaining, 0));
  while (auto c = s.next()) {
    int used = static_cast<int>(c->size() - b.size());
    out.emplace_back(std::move(*c), remaining - used);
  }
  return out;
}

std::vector<AtomicRule> universe_for(const SemanticsConfig& cfg, ExtensionBounds bounds) {
  if (cfg.mode == SemanticsMode::PtV) bounds.level = 1;
  return rule_universe(cfg.alphabet, bounds);
}

std::string describe_base(const Base& b) {
  if (b.empty()) return "{}";
  std::string out = "{";
  for (const auto& r : b.rules()) {
    if (out.size() > 1) out += "; ";
    out += print_rule(r);
  }
  return out + "}";
}

}  // namespace

// ---------------------------------------------------------------------------

Semantics::Semantics(SemanticsConfig cfg) : cfg_(std::move(cfg)) {}

void Semantics::check_base(const Base& b) const {
  if (cfg_.mode == SemanticsMode::PtV && b.level() > 1)
    throw ModeMismatch("ptv mode admits only level-1 bases");
  if (cfg_.mode == SemanticsMode::Sandqvist) {
    for (const Atom& a : b.atoms())
      if (!cfg_.alphabet.count(a))
        throw ModeMismatch("base atom '" + a.name() + "' is outside the working alphabet");
  }
}

Prover& Semantics::prover(const Base& b, CalculusKind kind) {
  auto key = std::make_pair(b, kind);
  auto it = provers_.find(key);
  if (it == provers_.end()) {
    CalculusMode m{kind, kind == CalculusKind::Absurdity ? cfg_.alphabet : AtomSet{}};
    it = provers_.emplace(key, Prover(b, m, cfg_.budget)).first;
  }
  return it->second;
}

bool Semantics::supports(const Base& b, const FormulaSet& gamma, Formula phi) {
  check_base(b);
  if (cfg_.mode == SemanticsMode::Sandqvist) {
    AtomSet inst = atoms_of(gamma);
    AtomSet pa = atoms_of(phi);
    inst.insert(pa.begin(), pa.end());
    for (const Atom& a : inst)
      if (!cfg_.alphabet.count(a)) throw ModeMismatch("atom '" + a.name() + "' is outside the working alphabet");
  }
  return prover(b, calculus_of(cfg_).kind).proves(gamma, phi);
}

std::optional<Argument> Semantics::witness(const Base& b, const FormulaSet& gamma, Formula phi) {
  if (!supports(b, gamma, phi)) return std::nullopt;
  if (cfg_.mode == SemanticsMode::PtV) {
    if (auto w = prover(b, CalculusKind::Minimal).derivation(gamma, phi)) return w;
    return prover(b, CalculusKind::Intuitionistic).derivation(gamma, phi);
  }
  return prover(b, CalculusKind::Absurdity).derivation(gamma, phi);
}

bool supports(const Base& b, const FormulaSet& gamma, Formula phi, const SemanticsConfig& cfg) {
  return Semantics(cfg).supports(b, gamma, phi);
}

bool entails(const FormulaSet& gamma, Formula phi, const SemanticsConfig& cfg) {
  return Semantics(cfg).entails(gamma, phi);
}

// ---------------------------------------------------------------------------
// Clause-level evaluation

const char* verdict_name(ClauseVerdict::Kind k) {
  switch (k) {
    case ClauseVerdict::Kind::Holds: return "holds";
    case ClauseVerdict::Kind::Fails: return "fails";
    case ClauseVerdict::Kind::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

ClauseVerdict holds(std::string detail) { return {ClauseVerdict::Kind::Holds, std::nullopt, std::nullopt, std::move(detail)}; }
ClauseVerdict inconclusive(std::string detail) {
  return {ClauseVerdict::Kind::Inconclusive, std::nullopt, std::nullopt, std::move(detail)};
}
ClauseVerdict fails(const Base& c, std::optional<Atom> atom, std::string detail) {
  return {ClauseVerdict::Kind::Fails, c, std::move(atom), std::move(detail)};
}

}  // namespace

std::size_t ClausalEvaluator::KeyHash::operator()(const Key& k) const {
  std::size_t h = std::hash<int>{}(k.base) * 31 + std::hash<int>{}(k.remaining);
  h = h * 1000003u ^ FormulaHash{}(k.phi);
  for (Formula f : k.gamma) h = h * 1000003u ^ FormulaHash{}(f);
  return h;
}

ClausalEvaluator::ClausalEvaluator(Semantics& sem, ExtensionBounds bounds, Fault fault)
    : sem_(sem), bounds_(bounds), fault_(fault), universe_(universe_for(sem.config(), bounds)) {}

int ClausalEvaluator::base_id(const Base& b) {
  auto [it, inserted] = ids_.emplace(b, static_cast<int>(ids_.size()));
  return it->second;
}

const std::vector<std::pair<Base, int>>& ClausalEvaluator::extensions(const Base& b, int remaining) {
  auto key = std::make_pair(base_id(b), remaining);
  auto it = ext_cache_.find(key);
  if (it == ext_cache_.end()) it = ext_cache_.emplace(key, bounded_extensions(b, universe_, remaining)).first;
  return it->second;
}

ClauseVerdict ClausalEvaluator::evaluate(const Base& b, const FormulaSet& gamma, Formula phi) {
  sem_.check_base(b);
  return eval(b, bounds_.max_rules, gamma, phi);
}

ClauseVerdict ClausalEvaluator::bridge(const Base& b, const FormulaSet& gamma, Formula phi, const std::string& clause) {
  if (sem_.supports(b, gamma, phi)) return holds(clause + ": no counterexample within bounds; prover agrees");
  return inconclusive(clause + ": no counterexample within bounds");
}

ClauseVerdict ClausalEvaluator::eval(const Base& b, int remaining, const FormulaSet& gamma, Formula phi) {
  Key key{base_id(b), remaining, std::vector<Formula>(gamma.begin(), gamma.end()), phi};
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  ClauseVerdict v;
  if (gamma.empty()) {
    v = eval_closed(b, remaining, phi);
  } else {
    // (⇒): look for C ⊇ B supporting every member of Γ but not φ.
    bool found = false;
    for (const auto& [c, rest] : extensions(b, remaining)) {
      bool all = true;
      for (Formula g : gamma) {
        if (eval(c, rest, {}, g).kind != ClauseVerdict::Kind::Holds) {
          all = false;
          break;
        }
      }
      if (!all) continue;
      ClauseVerdict pv = eval(c, rest, {}, phi);
      if (pv.kind == ClauseVerdict::Kind::Fails) {
        v = fails(c, pv.atom, "(=>): C = " + describe_base(c) + " supports the context but not " + print_formula(phi));
        found = true;
        break;
      }
    }
    if (!found) v = bridge(b, gamma, phi, "(=>)");
  }
  memo_.emplace(std::move(key), v);
  return v;
}

ClauseVerdict ClausalEvaluator::eval_closed(const Base& b, int remaining, Formula phi) {
  const AtomSet& alphabet = sem_.config().alphabet;
  switch (phi.kind()) {
    case Connective::Atom: {
      Atom a(phi.atom_name());
      bool d = derivable_atom(b, {}, a);
      if (fault_ == Fault::AtomClause) d = !d;
      if (d) return holds("(A): " + a.name() + " is derivable");
      return fails(b, a, "(A): " + a.name() + " is not derivable in " + describe_base(b));
    }
    case Connective::Bot: {
      if (sem_.config().mode == SemanticsMode::PtV) return fails(b, std::nullopt, "(bot): never");
      AtomicDeriver d(b, alphabet);
      for (const Atom& a : alphabet)
        if (!d.derivable({}, a)) return fails(b, a, "(bot)': " + a.name() + " is not derivable");
      return holds("(bot)': every alphabet atom is derivable");
    }
    case Connective::And: {
      ClauseVerdict l = eval(b, remaining, {}, phi.left());
      if (l.kind == ClauseVerdict::Kind::Fails) return l;
      ClauseVerdict r = eval(b, remaining, {}, phi.right());
      if (r.kind == ClauseVerdict::Kind::Fails) return r;
      if (l.kind == ClauseVerdict::Kind::Holds && r.kind == ClauseVerdict::Kind::Holds) return holds("(and)");
      return inconclusive("(and): a conjunct is inconclusive");
    }
    case Connective::Imp:
      return eval(b, remaining, {phi.left()}, phi.right());
    case Connective::Or: {
      // (∨): look for C ⊇ B and r with φ ⊩_C r, ψ ⊩_C r but not ⊩_C r.
      for (const auto& [c, rest] : extensions(b, remaining)) {
        AtomicDeriver d(c, alphabet);
        for (const Atom& r : alphabet) {
          bool derivable = d.derivable({}, r);
          if (fault_ == Fault::DisjunctionClause) derivable = false;
          if (derivable) continue;
          Formula rf = Formula::atom(r);
          if (eval(c, rest, {phi.left()}, rf).kind != ClauseVerdict::Kind::Holds) continue;
          if (eval(c, rest, {phi.right()}, rf).kind != ClauseVerdict::Kind::Holds) continue;
          return fails(c, r, "(or): C = " + describe_base(c) + ", both disjuncts support " + r.name() + " but " +
                                 r.name() + " is not derivable");
        }
      }
      return bridge(b, {}, phi, "(or)");
    }
  }
  return inconclusive("unknown connective");
}

ClauseVerdict supports_clausal(const Base& b, const FormulaSet& gamma, Formula phi, const SemanticsConfig& cfg,
                               const ExtensionBounds& bounds) {
  Semantics sem(cfg);
  return ClausalEvaluator(sem, bounds).evaluate(b, gamma, phi);
}

// ---------------------------------------------------------------------------
// Satisfaction

SatisfactionChecker::SatisfactionChecker(Semantics& sem, ExtensionBounds bounds)
    : sem_(sem), bounds_(bounds), universe_(universe_for(sem.config(), bounds)) {}

bool SatisfactionChecker::fail(std::string why) {
  reason_ = std::move(why);
  return false;
}

bool SatisfactionChecker::satisfies(const Argument& a, const Base& b, const FormulaSet& gamma, Formula phi) {
  reason_.clear();
  Sequent s{gamma, phi};
  if (!witnesses(a, s)) return fail("the argument does not witness " + print_sequent(s));
  CheckReport rep = check_derivation_report(a, b, calculus_of(sem_.config()));
  if (!rep.ok()) return fail("not a derivation: " + rep.describe());
  return open_valid(a, b, bounds_.max_rules, gamma);
}

bool SatisfactionChecker::open_valid(const Argument& a, const Base& b, int remaining, const FormulaSet& gamma) {
  FormulaSet open = open_assumptions(a);
  if (open.empty()) return closed_valid(a, b, remaining);
  for (const auto& [c, rest] : bounded_extensions(b, universe_, remaining)) {
    bool in_scope = std::all_of(gamma.begin(), gamma.end(), [&](Formula g) { return sem_.supports(c, {}, g); });
    if (!in_scope) continue;
    std::vector<Closure> closures;
    for (Formula f : open) closures.push_back({*sem_.witness(c, {}, f), f});
    Argument closed = cut(closures, a);
    if (!closed_valid(closed, c, rest))
      return fail("closing the assumptions with witnesses in C = " + describe_base(c) + " gives an invalid argument (" +
                  reason_ + ")");
  }
  return true;
}

bool SatisfactionChecker::closed_valid(const Argument& a, const Base& b, int remaining) {
  Argument n = normalize(a);
  Formula phi = n.conclusion();
  switch (phi.kind()) {
    case Connective::Atom: {
      std::function<bool(const Argument&)> pure = [&](const Argument& x) {
        if (x.rule() != RuleId::Assume && x.rule() != RuleId::BaseRule) return false;
        return std::all_of(x.premises().begin(), x.premises().end(), pure);
      };
      if (!pure(n)) return fail("normal form of " + print_formula(phi) + " is not a base derivation");
      return true;
    }
    case Connective::Bot:
      if (sem_.config().mode == SemanticsMode::PtV) return fail("no argument for bot is valid");
      if (n.rule() != RuleId::BotI) return fail("normal form of bot does not end with BotI");
      for (const auto& p : n.premises())
        if (!closed_valid(p, b, remaining)) return false;
      return true;
    case Connective::And:
      if (n.rule() != RuleId::AndI) return fail("normal form of " + print_formula(phi) + " does not end with AndI");
      return closed_valid(n.premises()[0], b, remaining) && closed_valid(n.premises()[1], b, remaining);
    case Connective::Or:
      if (n.rule() != RuleId::OrI1 && n.rule() != RuleId::OrI2)
        return fail("normal form of " + print_formula(phi) + " does not end with OrI");
      return closed_valid(n.premises()[0], b, remaining);
    case Connective::Imp:
      if (n.rule() != RuleId::ImpI) return fail("normal form of " + print_formula(phi) + " does not end with ImpI");
      return open_valid(n.premises()[0], b, remaining, {phi.left()});
  }
  return fail("unknown connective");
}

bool satisfies(const Argument& a, const Base& b, const FormulaSet& gamma, Formula phi, const SemanticsConfig& cfg,
               const ExtensionBounds& bounds) {
  Semantics sem(cfg);
  return SatisfactionChecker(sem, bounds).satisfies(a, b, gamma, phi);
}

}  // namespace ptsem
