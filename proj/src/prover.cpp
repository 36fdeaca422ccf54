#include "ptsem/prover.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <string>

namespace ptsem {

std::size_t default_budget() {
  if (const char* env = std::getenv("PTSEM_BUDGET")) {
    try {
      long long v = std::stoll(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return kDefaultBudget;
}

namespace {

/// Context for the boolean search: unique formulas sorted by node address.
using Ctx = std::vector<Formula>;

bool by_node(Formula a, Formula b) { return a.node() < b.node(); }

bool ctx_has(const Ctx& c, Formula f) { return std::binary_search(c.begin(), c.end(), f, by_node); }

void ctx_add(Ctx& c, Formula f) {
  auto it = std::lower_bound(c.begin(), c.end(), f, by_node);
  if (it == c.end() || *it != f) c.insert(it, f);
}

Ctx ctx_without(const Ctx& c, Formula f) {
  Ctx out;
  out.reserve(c.size() + 2);
  for (Formula g : c)
    if (g != f) out.push_back(g);
  return out;
}

struct Key {
  Ctx ctx;
  Formula goal;
  bool operator==(const Key& o) const { return goal == o.goal && ctx == o.ctx; }
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::size_t h = FormulaHash{}(k.goal);
    for (Formula f : k.ctx) h = h * 1000003u ^ FormulaHash{}(f);
    return h;
  }
};

enum class StepKind { Axiom, BotL, AndL, AtomImp, AndImp, OrImp, BotImpDrop, ImpR, AndR, OrL, Search };

struct Step {
  StepKind kind;
  std::optional<Formula> principal;
};

/// First applicable invertible rule, scanning `formulas` in order.
template <typename Range, typename Has>
Step choose(const Range& formulas, Formula goal, const CalculusMode& mode, Has has) {
  if (has(goal)) return {StepKind::Axiom, goal};
  const bool efq = mode.efq();
  if (efq && has(Formula::bot())) return {StepKind::BotL, Formula::bot()};
  for (Formula f : formulas) {
    if (f.kind() == Connective::And) return {StepKind::AndL, f};
    if (f.kind() != Connective::Imp) continue;
    Formula l = f.left();
    switch (l.kind()) {
      case Connective::Atom:
        if (has(l)) return {StepKind::AtomImp, f};
        break;
      case Connective::Bot:
        if (!efq && has(l)) return {StepKind::AtomImp, f};
        if (efq) return {StepKind::BotImpDrop, f};
        break;
      case Connective::And:
        return {StepKind::AndImp, f};
      case Connective::Or:
        return {StepKind::OrImp, f};
      case Connective::Imp:
        break;
    }
  }
  if (goal.kind() == Connective::Imp) return {StepKind::ImpR, std::nullopt};
  if (goal.kind() == Connective::And) return {StepKind::AndR, std::nullopt};
  for (Formula f : formulas)
    if (f.kind() == Connective::Or) return {StepKind::OrL, f};
  return {StepKind::Search, std::nullopt};
}

/// How the current assumptions yield a context formula: either a derivation
/// of it, or a base rule (or ⊥I) still waiting for some premises.
struct Rep {
  std::optional<Argument> proof;
  std::optional<AtomicRule> rule;
  bool bot_i = false;
  std::vector<Argument> supplied;
  std::vector<std::vector<Label>> discharges;
};

Rep proof_rep(Argument a) { return Rep{std::move(a), std::nullopt, false, {}, {}}; }

}  // namespace

struct Prover::Impl {
  Base base;
  CalculusMode mode;
  std::size_t budget;
  std::size_t nodes = 0;
  std::unordered_map<Key, bool, KeyHash> memo;
  std::optional<Formula> bot_chain;  // a1 -> … -> an -> ⊥ (absurdity mode)

  Impl(Base b, CalculusMode m, std::size_t bud) : base(std::move(b)), mode(std::move(m)), budget(bud) {
    if (mode.kind == CalculusKind::Absurdity) {
      Formula f = Formula::bot();
      for (auto it = mode.alphabet.rbegin(); it != mode.alphabet.rend(); ++it) f = Formula::imp(Formula::atom(*it), f);
      bot_chain = f;
    }
  }

  Ctx initial(const FormulaSet& gamma) const {
    Ctx c;
    for (Formula g : gamma) ctx_add(c, g);
    for (const auto& r : base.rules()) ctx_add(c, r.compiled());
    if (bot_chain) ctx_add(c, *bot_chain);
    return c;
  }

  bool search(const Ctx& ctx, Formula goal) {
    Key key{ctx, goal};
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    if (++nodes > budget) throw BudgetExceeded("proof search exceeded " + std::to_string(budget) + " nodes");
    bool result = expand(ctx, goal);
    memo.emplace(std::move(key), result);
    return result;
  }

  bool expand(const Ctx& ctx, Formula goal) {
    Step s = choose(ctx, goal, mode, [&](Formula f) { return ctx_has(ctx, f); });
    switch (s.kind) {
      case StepKind::Axiom:
      case StepKind::BotL:
        return true;
      case StepKind::AndL: {
        Ctx c = ctx_without(ctx, *s.principal);
        ctx_add(c, s.principal->left());
        ctx_add(c, s.principal->right());
        return search(c, goal);
      }
      case StepKind::AtomImp: {
        Ctx c = ctx_without(ctx, *s.principal);
        ctx_add(c, s.principal->right());
        return search(c, goal);
      }
      case StepKind::AndImp: {
        Formula f = *s.principal;
        Ctx c = ctx_without(ctx, f);
        ctx_add(c, Formula::imp(f.left().left(), Formula::imp(f.left().right(), f.right())));
        return search(c, goal);
      }
      case StepKind::OrImp: {
        Formula f = *s.principal;
        Ctx c = ctx_without(ctx, f);
        ctx_add(c, Formula::imp(f.left().left(), f.right()));
        ctx_add(c, Formula::imp(f.left().right(), f.right()));
        return search(c, goal);
      }
      case StepKind::BotImpDrop:
        return search(ctx_without(ctx, *s.principal), goal);
      case StepKind::ImpR: {
        Ctx c = ctx;
        ctx_add(c, goal.left());
        return search(c, goal.right());
      }
      case StepKind::AndR:
        return search(ctx, goal.left()) && search(ctx, goal.right());
      case StepKind::OrL: {
        Formula f = *s.principal;
        Ctx a = ctx_without(ctx, f), b = a;
        ctx_add(a, f.left());
        ctx_add(b, f.right());
        return search(a, goal) && search(b, goal);
      }
      case StepKind::Search:
        break;
    }
    if (goal.kind() == Connective::Or && (search(ctx, goal.left()) || search(ctx, goal.right()))) return true;
    for (Formula f : ctx) {
      if (f.kind() != Connective::Imp || f.left().kind() != Connective::Imp) continue;
      Formula c = f.left().left(), d = f.left().right(), b = f.right();
      Ctx rest = ctx_without(ctx, f);
      Ctx first = rest;
      ctx_add(first, c);
      ctx_add(first, Formula::imp(d, b));
      if (!search(first, d)) continue;
      Ctx second = rest;
      ctx_add(second, b);
      if (search(second, goal)) return true;
    }
    return false;
  }

  // -- witness reconstruction ----------------------------------------------

  using RepCtx = std::map<Formula, Rep>;

  struct Builder {
    Impl& impl;
    LabelSupply labels{"x"};

    Ctx keys(const RepCtx& c) const {
      Ctx out;
      for (const auto& [f, r] : c) ctx_add(out, f);
      return out;
    }

    Rep apply(const Rep& rep, Formula f, Argument arg) {
      if (rep.proof) return proof_rep(Argument::imp_e(std::move(arg), *rep.proof));
      Rep out = rep;
      if (out.bot_i) {
        out.supplied.push_back(std::move(arg));
        if (out.supplied.size() == impl.mode.alphabet.size()) out.proof = Argument::bot_i(out.supplied);
        return out;
      }
      const AtomicRule& r = *out.rule;
      const RulePremise& prem = r.premises()[out.supplied.size()];
      if (prem.hypotheses.empty()) {
        out.supplied.push_back(std::move(arg));
        out.discharges.emplace_back();
      } else {
        // σ1 -> … -> p becomes p over σ-leaves bound by the rule.
        Label l = labels.fresh();
        Argument cur = std::move(arg);
        for (const Atom& h : prem.hypotheses) cur = Argument::imp_e(Argument::assume(Formula::atom(h), l), cur);
        out.supplied.push_back(std::move(cur));
        out.discharges.push_back({l});
      }
      if (out.supplied.size() == r.premises().size()) out.proof = Argument::base_rule(r, out.supplied, out.discharges);
      (void)f;
      return out;
    }

    Argument to_proof(const Rep& rep, Formula f) {
      if (rep.proof) return *rep.proof;
      std::vector<std::pair<Formula, Label>> hyps;
      Rep cur = rep;
      Formula rest = f;
      while (!cur.proof) {
        Label l = labels.fresh();
        hyps.emplace_back(rest.left(), l);
        cur = apply(cur, rest, Argument::assume(rest.left(), l));
        rest = rest.right();
      }
      Argument body = *cur.proof;
      for (auto it = hyps.rbegin(); it != hyps.rend(); ++it) body = Argument::imp_i(it->first, it->second, body);
      return body;
    }

    static void add(RepCtx& c, Formula f, Rep r) { c.emplace(f, std::move(r)); }

    Argument build(const RepCtx& ctx, Formula goal) {
      auto has = [&](Formula f) { return ctx.count(f) > 0; };
      std::vector<Formula> order;
      for (const auto& [f, r] : ctx) order.push_back(f);
      Step s = choose(order, goal, impl.mode, has);
      switch (s.kind) {
        case StepKind::Axiom:
          return to_proof(ctx.at(goal), goal);
        case StepKind::BotL:
          return Argument::bot_e(to_proof(ctx.at(Formula::bot()), Formula::bot()), goal);
        case StepKind::AndL: {
          Formula f = *s.principal;
          Argument p = to_proof(ctx.at(f), f);
          RepCtx c = ctx;
          c.erase(f);
          add(c, f.left(), proof_rep(Argument::and_e1(p)));
          add(c, f.right(), proof_rep(Argument::and_e2(p)));
          return build(c, goal);
        }
        case StepKind::AtomImp: {
          Formula f = *s.principal;
          Rep b = apply(ctx.at(f), f, to_proof(ctx.at(f.left()), f.left()));
          RepCtx c = ctx;
          c.erase(f);
          add(c, f.right(), std::move(b));
          return build(c, goal);
        }
        case StepKind::AndImp: {
          Formula f = *s.principal;
          Formula cf = f.left().left(), df = f.left().right(), bf = f.right();
          Label lc = labels.fresh(), ld = labels.fresh();
          Argument pair = Argument::and_i(Argument::assume(cf, lc), Argument::assume(df, ld));
          Argument inner = to_proof(apply(ctx.at(f), f, pair), bf);
          Argument curried = Argument::imp_i(cf, lc, Argument::imp_i(df, ld, inner));
          RepCtx c = ctx;
          c.erase(f);
          add(c, curried.conclusion(), proof_rep(curried));
          return build(c, goal);
        }
        case StepKind::OrImp: {
          Formula f = *s.principal;
          Formula cf = f.left().left(), df = f.left().right(), bf = f.right();
          Label lc = labels.fresh(), ld = labels.fresh();
          Argument from_c = Argument::imp_i(
              cf, lc, to_proof(apply(ctx.at(f), f, Argument::or_i1(Argument::assume(cf, lc), df)), bf));
          Argument from_d = Argument::imp_i(
              df, ld, to_proof(apply(ctx.at(f), f, Argument::or_i2(cf, Argument::assume(df, ld))), bf));
          RepCtx c = ctx;
          c.erase(f);
          add(c, from_c.conclusion(), proof_rep(from_c));
          add(c, from_d.conclusion(), proof_rep(from_d));
          return build(c, goal);
        }
        case StepKind::BotImpDrop: {
          RepCtx c = ctx;
          c.erase(*s.principal);
          return build(c, goal);
        }
        case StepKind::ImpR: {
          Label l = labels.fresh();
          RepCtx c = ctx;
          add(c, goal.left(), proof_rep(Argument::assume(goal.left(), l)));
          return Argument::imp_i(goal.left(), l, build(c, goal.right()));
        }
        case StepKind::AndR:
          return Argument::and_i(build(ctx, goal.left()), build(ctx, goal.right()));
        case StepKind::OrL: {
          Formula f = *s.principal;
          Argument major = to_proof(ctx.at(f), f);
          Label lx = labels.fresh(), ly = labels.fresh();
          RepCtx a = ctx;
          a.erase(f);
          RepCtx b = a;
          add(a, f.left(), proof_rep(Argument::assume(f.left(), lx)));
          add(b, f.right(), proof_rep(Argument::assume(f.right(), ly)));
          return Argument::or_e(major, lx, build(a, goal), ly, build(b, goal));
        }
        case StepKind::Search:
          break;
      }
      const Ctx k = keys(ctx);
      if (goal.kind() == Connective::Or) {
        if (impl.search(k, goal.left())) return Argument::or_i1(build(ctx, goal.left()), goal.right());
        if (impl.search(k, goal.right())) return Argument::or_i2(goal.left(), build(ctx, goal.right()));
      }
      for (const auto& [f, e] : ctx) {
        if (f.kind() != Connective::Imp || f.left().kind() != Connective::Imp) continue;
        Formula cf = f.left().left(), df = f.left().right(), bf = f.right();
        Ctx rest = ctx_without(k, f);
        Ctx first = rest;
        ctx_add(first, cf);
        ctx_add(first, Formula::imp(df, bf));
        if (!impl.search(first, df)) continue;
        Ctx second = rest;
        ctx_add(second, bf);
        if (!impl.search(second, goal)) continue;

        const Rep rep = e;
        const Formula principal = f;
        Label lc = labels.fresh(), ly = labels.fresh();
        // D -> B from the principal formula: fed C -> D built vacuously from D.
        Argument vacuous = Argument::imp_i(cf, std::nullopt, Argument::assume(df, ly));
        Argument d_to_b = Argument::imp_i(df, ly, to_proof(apply(rep, principal, vacuous), bf));
        RepCtx c1 = ctx;
        c1.erase(principal);
        RepCtx c2 = c1;
        add(c1, cf, proof_rep(Argument::assume(cf, lc)));
        add(c1, d_to_b.conclusion(), proof_rep(d_to_b));
        Argument c_to_d = Argument::imp_i(cf, lc, build(c1, df));
        add(c2, bf, apply(rep, principal, c_to_d));
        return build(c2, goal);
      }
      throw std::logic_error("witness reconstruction diverged from the search");
    }
  };

  RepCtx initial_reps(const FormulaSet& gamma) const {
    RepCtx c;
    for (const auto& r : base.rules()) {
      Rep rep;
      rep.rule = r;
      if (r.premises().empty()) rep.proof = Argument::base_rule(r, {});
      c.emplace(r.compiled(), std::move(rep));
    }
    if (bot_chain) {
      Rep rep;
      rep.bot_i = true;
      if (mode.alphabet.empty()) rep.proof = Argument::bot_i({});
      c.emplace(*bot_chain, std::move(rep));
    }
    for (Formula g : gamma) c.emplace(g, proof_rep(Argument::assume(g)));
    return c;
  }
};

Prover::Prover(Base base, CalculusMode mode, std::size_t budget)
    : impl_(std::make_unique<Impl>(std::move(base), std::move(mode), budget)) {}
Prover::~Prover() = default;
Prover::Prover(Prover&&) noexcept = default;
Prover& Prover::operator=(Prover&&) noexcept = default;

bool Prover::proves(const FormulaSet& gamma, Formula phi) {
  impl_->nodes = 0;
  return impl_->search(impl_->initial(gamma), phi);
}

std::optional<Argument> Prover::derivation(const FormulaSet& gamma, Formula phi) {
  if (!proves(gamma, phi)) return std::nullopt;
  Impl::Builder b{*impl_};
  return b.build(impl_->initial_reps(gamma), phi);
}

const Base& Prover::base() const { return impl_->base; }
const CalculusMode& Prover::mode() const { return impl_->mode; }
std::size_t Prover::nodes_used() const { return impl_->nodes; }

ProverVerdict proves(const Base& base, const FormulaSet& gamma, Formula phi, const CalculusMode& mode,
                     const ProveOptions& options) {
  Prover p(base, mode, options.budget);
  ProverVerdict v;
  v.decided = p.proves(gamma, phi);
  if (v.decided && options.want_witness) v.witness = p.derivation(gamma, phi);
  if (!v.decided && options.want_countermodel) v.countermodel = refute(base, gamma, phi, options.countermodel_bound, mode);
  return v;
}

std::optional<Argument> derivation_for(const Base& base, const FormulaSet& gamma, Formula phi,
                                       const CalculusMode& mode) {
  return Prover(base, mode).derivation(gamma, phi);
}

}  // namespace ptsem
