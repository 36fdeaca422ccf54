#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "ptsem/proof_io.hpp"
#include "ptsem/reduction.hpp"

namespace oracle {

bool kleene_derivable(const Base& b, const AtomSet& alphabet, const AtomSet& hyps, const Atom& goal) {
  AtomSet all = alphabet;
  for (const Atom& a : b.atoms()) all.insert(a);
  all.insert(hyps.begin(), hyps.end());
  all.insert(goal);
  std::vector<Atom> atoms(all.begin(), all.end());
  const std::size_t n = atoms.size();
  if (n > 12) return false;
  auto idx = [&](const Atom& a) {
    return static_cast<std::size_t>(std::find(atoms.begin(), atoms.end(), a) - atoms.begin());
  };
  auto mask = [&](const AtomSet& s) {
    unsigned m = 0;
    for (const Atom& a : s) m |= 1u << idx(a);
    return m;
  };
  std::vector<unsigned> d(1u << n);
  for (unsigned s = 0; s < d.size(); ++s) d[s] = s;
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<unsigned> next = d;
    for (unsigned s = 0; s < d.size(); ++s) {
      for (const auto& r : b.rules()) {
        bool ok = true;
        for (const auto& p : r.premises())
          if (!(d[s | mask(p.hypotheses)] >> idx(p.goal) & 1)) ok = false;
        if (ok) next[s] |= 1u << idx(r.conclusion());
      }
      if (next[s] != d[s]) changed = true;
    }
    d = std::move(next);
  }
  return d[mask(hyps)] >> idx(goal) & 1;
}

bool tree_derivable(const Base& b, const AtomSet& hyps, const Atom& goal, int depth) {
  if (hyps.count(goal)) return true;
  if (depth == 0) return false;
  for (const auto& r : b.rules()) {
    if (r.conclusion() != goal) continue;
    bool ok = true;
    for (const auto& p : r.premises()) {
      AtomSet h = hyps;
      h.insert(p.hypotheses.begin(), p.hypotheses.end());
      if (!tree_derivable(b, h, p.goal, depth - 1)) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::size_t count_level1_rules(std::size_t n, std::size_t k) {
  std::size_t premise_sets = 0;
  for (std::size_t j = 0; j <= k; ++j) premise_sets += binomial(n, j);
  return n * premise_sets;
}

Formula random_formula(std::mt19937& rng, const std::vector<Atom>& atoms, bool with_bot, int max_depth) {
  std::uniform_int_distribution<int> pick(0, 99);
  if (max_depth <= 1 || pick(rng) < 30) {
    std::size_t choices = atoms.size() + (with_bot ? 1 : 0);
    std::size_t i = std::uniform_int_distribution<std::size_t>(0, choices - 1)(rng);
    return i < atoms.size() ? Formula::atom(atoms[i]) : Formula::bot();
  }
  Formula l = random_formula(rng, atoms, with_bot, max_depth - 1);
  Formula r = random_formula(rng, atoms, with_bot, max_depth - 1);
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0: return Formula::conj(l, r);
    case 1: return Formula::disj(l, r);
    default: return Formula::imp(l, r);
  }
}

namespace {

struct Hyp {
  Formula f;
  Label label;
};

class Generator {
 public:
  Generator(std::mt19937& rng, const GenOptions& opt) : rng_(rng), opt_(opt) {
    for (const Atom& a : opt.base.atoms()) atoms_.push_back(a);
  }

  std::optional<Argument> gen(std::vector<Hyp>& ctx, Formula goal, int fuel) {
    if (++calls_ > 4000) return std::nullopt;
    for (const Atom& a : atoms_of(goal))
      if (std::find(atoms_.begin(), atoms_.end(), a) == atoms_.end()) atoms_.push_back(a);
    std::vector<int> order = {0, 1, 2, 3, 4, 5};
    std::shuffle(order.begin(), order.end(), rng_);
    bool detour_ok = fuel > 0 && roll(opt_.detour_percent);
    if (detour_ok) order.insert(order.begin(), 4);
    for (int choice : order) {
      std::optional<Argument> a;
      switch (choice) {
        case 0: a = hyp(ctx, goal); break;
        case 1: if (opt_.allow_open && (fuel <= 0 || roll(20))) a = Argument::assume(goal); break;
        case 2: a = intro(ctx, goal, fuel); break;
        case 3: if (fuel > 0) a = elim(ctx, goal, fuel); break;
        case 4: if (fuel > 0) a = detour(ctx, goal, fuel); break;
        case 5: a = base_rule(ctx, goal, fuel); break;
      }
      if (a) return a;
    }
    return std::nullopt;
  }

 private:
  bool roll(int percent) { return std::uniform_int_distribution<int>(0, 99)(rng_) < percent; }

  Label fresh() { return "g" + std::to_string(++label_); }

  std::optional<Argument> hyp(const std::vector<Hyp>& ctx, Formula goal) {
    for (auto it = ctx.rbegin(); it != ctx.rend(); ++it)
      if (it->f == goal) return Argument::assume(goal, it->label);
    return std::nullopt;
  }

  std::optional<Argument> with_hyp(std::vector<Hyp>& ctx, Formula f, const Label& l, Formula goal, int fuel) {
    ctx.push_back({f, l});
    auto a = gen(ctx, goal, fuel);
    ctx.pop_back();
    return a;
  }

  std::optional<Argument> intro(std::vector<Hyp>& ctx, Formula goal, int fuel) {
    switch (goal.kind()) {
      case Connective::And: {
        auto l = gen(ctx, goal.left(), fuel - 1);
        if (!l) return std::nullopt;
        auto r = gen(ctx, goal.right(), fuel - 1);
        if (!r) return std::nullopt;
        return Argument::and_i(*l, *r);
      }
      case Connective::Or: {
        bool left = roll(50);
        auto a = gen(ctx, left ? goal.left() : goal.right(), fuel - 1);
        if (!a) a = gen(ctx, left ? goal.right() : goal.left(), fuel - 1), left = !left;
        if (!a) return std::nullopt;
        return left ? Argument::or_i1(*a, goal.right()) : Argument::or_i2(goal.left(), *a);
      }
      case Connective::Imp: {
        Label l = fresh();
        auto body = with_hyp(ctx, goal.left(), l, goal.right(), fuel - 1);
        if (!body) return std::nullopt;
        return Argument::imp_i(goal.left(), l, *body);
      }
      default:
        return std::nullopt;
    }
  }

  std::optional<Argument> elim(std::vector<Hyp>& ctx, Formula goal, int fuel) {
    std::vector<Hyp> cands = ctx;
    std::shuffle(cands.begin(), cands.end(), rng_);
    for (const auto& h : cands) {
      Argument major = Argument::assume(h.f, h.label);
      if (h.f.kind() == Connective::And) {
        if (h.f.left() == goal) return Argument::and_e1(major);
        if (h.f.right() == goal) return Argument::and_e2(major);
      }
      if (h.f.kind() == Connective::Imp && h.f.right() == goal) {
        if (auto m = gen(ctx, h.f.left(), fuel - 1)) return Argument::imp_e(*m, major);
      }
      if (h.f.kind() == Connective::Or && roll(50)) {
        Label x = fresh(), y = fresh();
        auto l = with_hyp(ctx, h.f.left(), x, goal, fuel - 1);
        if (!l) continue;
        auto r = with_hyp(ctx, h.f.right(), y, goal, fuel - 1);
        if (!r) continue;
        return Argument::or_e(major, x, *l, y, *r);
      }
      if (h.f.is_bot() && opt_.efq) return Argument::bot_e(major, goal);
    }
    return std::nullopt;
  }

  /// A side formula the generator can hope to prove here.
  Formula side_formula(const std::vector<Hyp>& ctx, Formula goal) {
    std::vector<Formula> cands{goal};
    for (const auto& h : ctx) cands.push_back(h.f);
    if (opt_.allow_open) {
      std::vector<Atom> atoms = atoms_;
      if (atoms.empty()) atoms.push_back(Atom("p"));
      cands.push_back(random_formula(rng_, atoms, false, 2));
    }
    return cands[std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(rng_)];
  }

  std::optional<Argument> detour(std::vector<Hyp>& ctx, Formula goal, int fuel) {
    Formula psi = side_formula(ctx, goal);
    switch (std::uniform_int_distribution<int>(0, 4)(rng_)) {
      case 0: {  // ∧
        auto a = gen(ctx, goal, fuel - 1);
        auto b = a ? gen(ctx, psi, fuel - 2) : std::nullopt;
        if (!b) return std::nullopt;
        return roll(50) ? Argument::and_e1(Argument::and_i(*a, *b)) : Argument::and_e2(Argument::and_i(*b, *a));
      }
      case 1: {  // →
        auto m = gen(ctx, psi, fuel - 2);
        if (!m) return std::nullopt;
        Label l = fresh();
        auto body = with_hyp(ctx, psi, l, goal, fuel - 1);
        if (!body) return std::nullopt;
        return Argument::imp_e(*m, Argument::imp_i(psi, l, *body));
      }
      case 2: {  // ∨
        Formula chi = side_formula(ctx, goal);
        auto m = gen(ctx, psi, fuel - 2);
        if (!m) return std::nullopt;
        Label x = fresh(), y = fresh();
        auto l = with_hyp(ctx, psi, x, goal, fuel - 1);
        auto r = l ? with_hyp(ctx, chi, y, goal, fuel - 1) : std::nullopt;
        if (!r) return std::nullopt;
        return Argument::or_e(Argument::or_i1(*m, chi), x, *l, y, *r);
      }
      case 3: {  // E-rule under ∨E: permutative
        Formula chi = side_formula(ctx, goal);
        Formula disj = Formula::disj(psi, chi);
        auto major = gen(ctx, disj, fuel - 2);
        if (!major) return std::nullopt;
        Formula theta = side_formula(ctx, goal);
        Formula pair = Formula::conj(goal, theta);
        Label x = fresh(), y = fresh();
        auto l = with_hyp(ctx, psi, x, pair, fuel - 2);
        auto r = l ? with_hyp(ctx, chi, y, pair, fuel - 2) : std::nullopt;
        if (!r) return std::nullopt;
        return Argument::and_e1(Argument::or_e(*major, x, *l, y, *r));
      }
      default: {  // E-rule under ⊥E: permutative
        if (!opt_.efq) return std::nullopt;
        auto bot = gen(ctx, Formula::bot(), fuel - 2);
        if (!bot) return std::nullopt;
        Formula psi2 = side_formula(ctx, goal);
        auto minor = gen(ctx, psi2, fuel - 2);
        if (!minor) return std::nullopt;
        return Argument::imp_e(*minor, Argument::bot_e(*bot, Formula::imp(psi2, goal)));
      }
    }
  }

  std::optional<Argument> base_rule(std::vector<Hyp>& ctx, Formula goal, int fuel) {
    if (!goal.is_atom()) return std::nullopt;
    for (const auto& r : opt_.base.rules()) {
      if (r.conclusion().name() != goal.atom_name() || r.level() != 1) continue;
      std::vector<Argument> ps;
      for (const auto& p : r.premises()) {
        auto a = gen(ctx, Formula::atom(p.goal), fuel - 1);
        if (!a) break;
        ps.push_back(*a);
      }
      if (ps.size() == r.premises().size()) return Argument::base_rule(r, ps);
    }
    return std::nullopt;
  }

  std::mt19937& rng_;
  const GenOptions& opt_;
  std::vector<Atom> atoms_;
  int label_ = 0;
  int calls_ = 0;
};

}  // namespace

std::optional<Argument> random_derivation(std::mt19937& rng, Formula goal, const GenOptions& opt) {
  Generator g(rng, opt);
  std::vector<Hyp> ctx;
  return g.gen(ctx, goal, opt.fuel);
}

bool force(const KripkeModel& m, std::size_t w, Formula f, const CalculusMode& mode) {
  switch (f.kind()) {
    case Connective::Atom:
      return m.valuation[w].count(Atom(f.atom_name())) > 0;
    case Connective::Bot:
      if (mode.kind == CalculusKind::Minimal) return w < m.falsum.size() && m.falsum[w];
      if (mode.kind == CalculusKind::Intuitionistic) return false;
      for (const Atom& a : mode.alphabet)
        if (!m.valuation[w].count(a)) return false;
      return true;
    case Connective::And:
      return force(m, w, f.left(), mode) && force(m, w, f.right(), mode);
    case Connective::Or:
      return force(m, w, f.left(), mode) || force(m, w, f.right(), mode);
    case Connective::Imp:
      for (std::size_t v = 0; v < m.size(); ++v)
        if (m.above[w][v] && force(m, v, f.left(), mode) && !force(m, v, f.right(), mode)) return false;
      return true;
  }
  return false;
}

bool countermodel_ok(const KripkeModel& m, const Base& base, const FormulaSet& gamma, Formula phi,
                     const CalculusMode& mode) {
  const std::size_t n = m.size();
  if (n == 0 || m.above.size() != n) return false;
  for (std::size_t a = 0; a < n; ++a) {
    if (!m.above[0][a] || !m.above[a][a]) return false;
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (m.above[a][b] && m.above[b][c] && !m.above[a][c]) return false;
    for (std::size_t b = 0; b < n; ++b) {
      if (!m.above[a][b]) continue;
      for (const Atom& x : m.valuation[a])
        if (!m.valuation[b].count(x)) return false;
      auto fal = [&](std::size_t w) { return w < m.falsum.size() && m.falsum[w]; };
      if (mode.kind == CalculusKind::Minimal && fal(a) && !fal(b)) return false;
    }
  }
  if (!base.empty()) {
    if (!m.base_closed) return false;
    for (std::size_t w = 0; w < n; ++w)
      for (const auto& r : base.rules())
        if (!force(m, w, r.compiled(), mode)) return false;
  }
  for (Formula g : gamma)
    if (!force(m, 0, g, mode)) return false;
  return !force(m, 0, phi, mode);
}

namespace {

bool explore(const Argument& a, std::set<std::string>& seen, std::set<std::string>& normal, int& budget) {
  std::string key = write_proof(canonical_relabel(a));
  if (!seen.insert(key).second) return true;
  if (--budget < 0) return false;
  auto sites = find_detours(a);
  if (sites.empty()) normal.insert(key);
  for (const auto& s : sites)
    if (!explore(reduce_step(a, s), seen, normal, budget)) return false;
  return true;
}

}  // namespace

std::optional<std::set<std::string>> all_normal_forms(const Argument& a, int max_states) {
  std::set<std::string> seen, normal;
  if (!explore(a, seen, normal, max_states)) return std::nullopt;
  return normal;
}

Argument close_with_imp_i(const Argument& a) {
  Argument cur = a;
  for (;;) {
    FormulaSet open = open_assumptions(cur);
    if (open.empty()) return cur;
    Formula f = *open.begin();
    RuleParams params;
    params.formula = f;
    cur = apply_rule(RuleId::ImpI, {cur}, params).front();
  }
}

}  // namespace oracle
