#include "ptsem/reduction.hpp"

namespace ptsem {

namespace {

bool is_elim_node(const Argument& a) { return is_elim(a.rule()) && !a.premises().empty(); }

const Argument& major_of(const Argument& a) { return a.premises()[major_premise(a.rule())]; }

/// Can BotE(BotI …) concluding `c` be contracted? Atoms need a matching
/// BotI premise.
bool bot_contractible(const Argument& bot_i, Formula c) {
  if (!c.is_atom()) return true;
  for (const auto& p : bot_i.premises())
    if (p.conclusion() == c) return true;
  return false;
}

std::optional<DetourSite> site_at(const Argument& a, const Path& p) {
  if (!is_elim_node(a)) return std::nullopt;
  if (major_premise(a.rule()) >= a.premises().size()) return std::nullopt;
  const Argument& m = major_of(a);
  switch (a.rule()) {
    case RuleId::AndE1:
    case RuleId::AndE2:
      if (m.rule() == RuleId::AndI) return DetourSite{p, Connective::And, DetourKind::Direct};
      break;
    case RuleId::ImpE:
      if (m.rule() == RuleId::ImpI) return DetourSite{p, Connective::Imp, DetourKind::Direct};
      break;
    case RuleId::OrE:
      if (m.rule() == RuleId::OrI1 || m.rule() == RuleId::OrI2)
        return DetourSite{p, Connective::Or, DetourKind::Direct};
      break;
    case RuleId::BotE:
      if (m.rule() == RuleId::BotI && bot_contractible(m, a.conclusion()))
        return DetourSite{p, Connective::Bot, DetourKind::Direct};
      break;
    default:
      break;
  }
  if (m.rule() == RuleId::OrE && m.premises().size() == 3)
    return DetourSite{p, Connective::Or, DetourKind::Permutative};
  if (m.rule() == RuleId::BotE) return DetourSite{p, Connective::Bot, DetourKind::Permutative};
  return std::nullopt;
}

void scan(const Argument& a, Path& p, std::vector<DetourSite>& out) {
  for (std::size_t i = 0; i < a.premises().size(); ++i) {
    p.push_back(i);
    scan(a.premises()[i], p, out);
    p.pop_back();
  }
  if (auto s = site_at(a, p)) out.push_back(*s);
}

/// Replace leaves labeled `label` with `proof`. Assumes binders are unique,
/// so no scoping is needed.
Argument substitute(const Argument& a, const Label& label, const Argument& proof) {
  if (a.is_leaf()) return a.label() == label ? proof : a;
  std::vector<Argument> ps;
  bool changed = false;
  for (const auto& p : a.premises()) {
    ps.push_back(substitute(p, label, proof));
    changed = changed || !(ps.back().node() == p.node());
  }
  if (!changed) return a;
  return Argument::make(a.rule(), a.conclusion(), std::move(ps), [&] {
    std::vector<std::vector<Label>> ds;
    if (a.has_discharges())
      for (std::size_t i = 0; i < a.premises().size(); ++i) ds.push_back(a.discharges(i));
    return ds;
  }(), a.base_rule());
}

Argument substitute_all(Argument body, const std::vector<Label>& labels, const Argument& proof) {
  for (const auto& l : labels) body = substitute(body, l, proof);
  return body;
}

/// ⊥E from a BotI proof, pushed towards the conclusion's main connective.
Argument expand_bot(const Argument& bot_i, Formula c) {
  switch (c.kind()) {
    case Connective::Bot:
      return bot_i;
    case Connective::Atom:
      for (const auto& p : bot_i.premises())
        if (p.conclusion() == c) return p;
      throw InvalidSite("no BotI premise for " + print_formula(c));
    case Connective::And:
      return Argument::and_i(Argument::bot_e(bot_i, c.left()), Argument::bot_e(bot_i, c.right()));
    case Connective::Or:
      return Argument::or_i1(Argument::bot_e(bot_i, c.left()), c.right());
    case Connective::Imp:
      return Argument::imp_i(c.left(), std::nullopt, Argument::bot_e(bot_i, c.right()));
  }
  throw InvalidSite("unknown connective");
}

Argument with_premise(const Argument& a, std::size_t i, Argument replacement, Formula conclusion) {
  std::vector<Argument> ps = a.premises();
  ps[i] = std::move(replacement);
  std::vector<std::vector<Label>> ds;
  if (a.has_discharges())
    for (std::size_t k = 0; k < a.premises().size(); ++k) ds.push_back(a.discharges(k));
  return Argument::make(a.rule(), conclusion, std::move(ps), std::move(ds), a.base_rule());
}

Argument contract(const Argument& n, const DetourSite& s) {
  const Argument& m = major_of(n);
  if (s.kind == DetourKind::Permutative) {
    if (m.rule() == RuleId::BotE) return Argument::bot_e(m.premises()[0], n.conclusion());
    // n(OrE(d, [x]e1, [y]e2), rest) ~> OrE(d, [x]n(e1, rest), [y]n(e2, rest))
    std::size_t k = major_premise(n.rule());
    Argument left = with_premise(n, k, m.premises()[1], n.conclusion());
    Argument right = with_premise(n, k, m.premises()[2], n.conclusion());
    return Argument::make(RuleId::OrE, n.conclusion(), {m.premises()[0], left, right},
                          {{}, m.discharges(1), m.discharges(2)});
  }
  switch (s.connective) {
    case Connective::And:
      return n.rule() == RuleId::AndE1 ? m.premises()[0] : m.premises()[1];
    case Connective::Imp:
      return substitute_all(m.premises()[0], m.discharges(0), n.premises()[0]);
    case Connective::Or: {
      std::size_t branch = m.rule() == RuleId::OrI1 ? 1 : 2;
      return substitute_all(n.premises()[branch], n.discharges(branch), m.premises()[0]);
    }
    case Connective::Bot:
      return expand_bot(m, n.conclusion());
    default:
      throw InvalidSite("bad detour connective");
  }
}

}  // namespace

std::string describe_site(const DetourSite& s) {
  std::string c;
  switch (s.connective) {
    case Connective::And: c = "and"; break;
    case Connective::Or: c = "or"; break;
    case Connective::Imp: c = "imp"; break;
    case Connective::Bot: c = "bot"; break;
    case Connective::Atom: c = "atom"; break;
  }
  return c + (s.kind == DetourKind::Direct ? "-detour" : "-permutation");
}

std::vector<DetourSite> find_detours(const Argument& a) {
  std::vector<DetourSite> out;
  Path p;
  scan(a, p, out);
  return out;
}

Argument reduce_step(const Argument& a, const DetourSite& site) {
  // Unique binders distinct from free labels: grafting cannot capture.
  Argument fresh = canonical_relabel(a);
  const Argument* node;
  try {
    node = &subterm(fresh, site.path);
  } catch (const std::out_of_range&) {
    throw InvalidSite("no node at " + print_path(site.path));
  }
  auto actual = site_at(*node, site.path);
  if (!actual || !(*actual == site))
    throw InvalidSite("no " + describe_site(site) + " at " + print_path(site.path));
  return canonical_relabel(replace_at(fresh, site.path, contract(*node, site)));
}

Argument normalize(const Argument& a, std::size_t max_steps, std::vector<std::string>* trace) {
  Argument cur = a;
  for (std::size_t step = 1;; ++step) {
    auto sites = find_detours(cur);
    if (sites.empty()) return cur;
    if (step > max_steps)
      throw ReductionBudgetExceeded("normalization exceeded " + std::to_string(max_steps) + " steps");
    if (trace)
      trace->push_back("step " + std::to_string(step) + ": " + describe_site(sites.front()) + " at " +
                       print_path(sites.front().path));
    cur = reduce_step(cur, sites.front());
  }
}

bool is_canonical(const Argument& a) { return find_detours(a).empty(); }

bool ends_with_intro(const Argument& a) {
  RuleId r = a.rule();
  return r == RuleId::AndI || r == RuleId::OrI1 || r == RuleId::OrI2 || r == RuleId::ImpI;
}

}  // namespace ptsem
