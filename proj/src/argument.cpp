#include "ptsem/argument.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace ptsem {

namespace {

struct RuleNameEntry {
  RuleId id;
  const char* name;
};

constexpr RuleNameEntry kRuleNames[] = {
    {RuleId::Assume, "Assume"}, {RuleId::AndI, "AndI"},   {RuleId::AndE1, "AndE1"},
    {RuleId::AndE2, "AndE2"},   {RuleId::OrI1, "OrI1"},   {RuleId::OrI2, "OrI2"},
    {RuleId::OrE, "OrE"},       {RuleId::ImpI, "ImpI"},   {RuleId::ImpE, "ImpE"},
    {RuleId::BotE, "BotE"},     {RuleId::BotI, "BotI"},   {RuleId::BaseRule, "BaseRule"},
};

const std::vector<Label> kNoLabels;

}  // namespace

const char* rule_name(RuleId r) {
  for (const auto& e : kRuleNames)
    if (e.id == r) return e.name;
  return "?";
}

RuleId rule_from_name(const std::string& name) {
  for (const auto& e : kRuleNames)
    if (name == e.name) return e.id;
  throw std::invalid_argument("unknown rule '" + name + "'");
}

bool is_intro(RuleId r) {
  return r == RuleId::AndI || r == RuleId::OrI1 || r == RuleId::OrI2 || r == RuleId::ImpI ||
         r == RuleId::BotI;
}

bool is_elim(RuleId r) {
  return r == RuleId::AndE1 || r == RuleId::AndE2 || r == RuleId::OrE || r == RuleId::ImpE ||
         r == RuleId::BotE;
}

std::size_t major_premise(RuleId r) { return r == RuleId::ImpE ? 1 : 0; }

// ---------------------------------------------------------------------------
// Construction

Argument Argument::assume(Formula f, std::optional<Label> label) {
  return Argument(std::make_shared<const ArgumentNode>(
      ArgumentNode{f, RuleId::Assume, {}, std::move(label), {}, std::nullopt, 1}));
}

Argument Argument::make(RuleId rule, Formula conclusion, std::vector<Argument> premises,
                        std::vector<std::vector<Label>> discharges,
                        std::optional<AtomicRule> base_rule) {
  std::size_t size = 1;
  for (const auto& p : premises) size += p.size();
  bool any = std::any_of(discharges.begin(), discharges.end(), [](const auto& d) { return !d.empty(); });
  if (!any) discharges.clear();
  if (!discharges.empty()) discharges.resize(premises.size());
  for (auto& d : discharges) {
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
  }
  return Argument(std::make_shared<const ArgumentNode>(
      ArgumentNode{conclusion, rule, std::move(premises), std::nullopt, std::move(discharges),
                   std::move(base_rule), size}));
}

Argument Argument::and_i(Argument l, Argument r) {
  Formula c = Formula::conj(l.conclusion(), r.conclusion());
  return make(RuleId::AndI, c, {std::move(l), std::move(r)});
}
Argument Argument::and_e1(Argument a) {
  Formula c = a.conclusion().left();
  return make(RuleId::AndE1, c, {std::move(a)});
}
Argument Argument::and_e2(Argument a) {
  Formula c = a.conclusion().right();
  return make(RuleId::AndE2, c, {std::move(a)});
}
Argument Argument::or_i1(Argument a, Formula right) {
  Formula c = Formula::disj(a.conclusion(), right);
  return make(RuleId::OrI1, c, {std::move(a)});
}
Argument Argument::or_i2(Formula left, Argument a) {
  Formula c = Formula::disj(left, a.conclusion());
  return make(RuleId::OrI2, c, {std::move(a)});
}
Argument Argument::or_e(Argument major, Label left_label, Argument left, Label right_label,
                        Argument right) {
  Formula c = left.conclusion();
  return make(RuleId::OrE, c, {std::move(major), std::move(left), std::move(right)},
              {{}, {std::move(left_label)}, {std::move(right_label)}});
}
Argument Argument::imp_i(Formula antecedent, std::optional<Label> label, Argument body) {
  Formula c = Formula::imp(antecedent, body.conclusion());
  std::vector<std::vector<Label>> d;
  if (label) d.push_back({*label});
  return make(RuleId::ImpI, c, {std::move(body)}, std::move(d));
}
Argument Argument::imp_e(Argument minor, Argument major) {
  Formula c = major.conclusion().right();
  return make(RuleId::ImpE, c, {std::move(minor), std::move(major)});
}
Argument Argument::bot_e(Argument a, Formula conclusion) {
  return make(RuleId::BotE, conclusion, {std::move(a)});
}
Argument Argument::bot_i(std::vector<Argument> atom_proofs) {
  return make(RuleId::BotI, Formula::bot(), std::move(atom_proofs));
}
Argument Argument::base_rule(const AtomicRule& r, std::vector<Argument> premises,
                             std::vector<std::vector<Label>> discharges) {
  return make(RuleId::BaseRule, Formula::atom(r.conclusion()), std::move(premises),
              std::move(discharges), r);
}

const Formula& Argument::conclusion() const { return node_->conclusion; }
RuleId Argument::rule() const { return node_->rule; }
const std::vector<Argument>& Argument::premises() const { return node_->premises; }
const std::optional<Label>& Argument::label() const { return node_->label; }
const std::vector<Label>& Argument::discharges(std::size_t i) const {
  return i < node_->discharges.size() ? node_->discharges[i] : kNoLabels;
}
const std::optional<AtomicRule>& Argument::base_rule() const { return node_->base_rule; }
bool Argument::has_discharges() const { return !node_->discharges.empty(); }
std::size_t Argument::size() const { return node_->size; }

bool operator==(const Argument& a, const Argument& b) {
  if (a.node_ == b.node_) return true;
  const ArgumentNode& x = *a.node_;
  const ArgumentNode& y = *b.node_;
  if (x.rule != y.rule || x.conclusion != y.conclusion || x.label != y.label ||
      x.discharges != y.discharges || x.base_rule != y.base_rule || x.size != y.size ||
      x.premises.size() != y.premises.size())
    return false;
  for (std::size_t i = 0; i < x.premises.size(); ++i)
    if (!(x.premises[i] == y.premises[i])) return false;
  return true;
}

std::string print_path(const Path& p) {
  if (p.empty()) return "root";
  std::string out;
  for (std::size_t i : p) {
    if (!out.empty()) out += '.';
    out += std::to_string(i);
  }
  return out;
}

const Argument& subterm(const Argument& a, const Path& p) {
  const Argument* cur = &a;
  for (std::size_t i : p) {
    if (i >= cur->premises().size()) throw std::out_of_range("no node at path " + print_path(p));
    cur = &cur->premises()[i];
  }
  return *cur;
}

namespace {

Argument rebuild_with_premises(const Argument& a, std::vector<Argument> premises) {
  const ArgumentNode& n = *a.node();
  if (n.rule == RuleId::Assume) return a;
  return Argument::make(n.rule, n.conclusion, std::move(premises), n.discharges, n.base_rule);
}

Argument replace_rec(const Argument& a, const Path& p, std::size_t depth, Argument& repl) {
  if (depth == p.size()) return repl;
  std::vector<Argument> ps = a.premises();
  if (p[depth] >= ps.size()) throw std::out_of_range("no node at path " + print_path(p));
  ps[p[depth]] = replace_rec(ps[p[depth]], p, depth + 1, repl);
  return rebuild_with_premises(a, std::move(ps));
}

}  // namespace

Argument replace_at(const Argument& a, const Path& p, Argument replacement) {
  return replace_rec(a, p, 0, replacement);
}

MalformedArgument::MalformedArgument(const std::string& what, Path path)
    : std::runtime_error("malformed argument at " + print_path(path) + ": " + what),
      path_(std::move(path)) {}

// ---------------------------------------------------------------------------
// Discharge bookkeeping

namespace {

/// Formulas a binder in premise `i` of `a` may discharge, or nullopt when
/// that premise binds nothing or the node is ill-typed.
std::optional<FormulaSet> bindable(const Argument& a, std::size_t i) {
  switch (a.rule()) {
    case RuleId::ImpI:
      if (a.conclusion().kind() == Connective::Imp) return FormulaSet{a.conclusion().left()};
      return std::nullopt;
    case RuleId::OrE: {
      if (i == 0 || a.premises().empty()) return std::nullopt;
      Formula major = a.premises()[0].conclusion();
      if (major.kind() != Connective::Or) return std::nullopt;
      return FormulaSet{i == 1 ? major.left() : major.right()};
    }
    case RuleId::BaseRule: {
      const auto& r = a.base_rule();
      if (!r || i >= r->premises().size()) return std::nullopt;
      FormulaSet out;
      for (const Atom& h : r->premises()[i].hypotheses) out.insert(Formula::atom(h));
      return out;
    }
    default:
      return std::nullopt;
  }
}

struct Scope {
  Label label;
  FormulaSet allowed;
};

void collect_open(const Argument& a, std::vector<Scope>& env, Path& path, FormulaSet& out,
                  std::set<Label>* labels) {
  if (a.is_leaf()) {
    if (a.label()) {
      for (auto it = env.rbegin(); it != env.rend(); ++it) {
        if (it->label == *a.label()) {
          if (!it->allowed.count(a.conclusion()))
            throw MalformedArgument("leaf " + print_formula(a.conclusion()) + " bound by label '" +
                                        *a.label() + "' of a binder that cannot discharge it",
                                    path);
          return;
        }
      }
      if (labels) labels->insert(*a.label());
    }
    out.insert(a.conclusion());
    return;
  }
  for (std::size_t i = 0; i < a.premises().size(); ++i) {
    const auto& ds = a.discharges(i);
    std::size_t pushed = 0;
    if (!ds.empty()) {
      auto allowed = bindable(a, i);
      if (!allowed)
        throw MalformedArgument(std::string(rule_name(a.rule())) + " cannot discharge in premise " +
                                    std::to_string(i),
                                path);
      for (const Label& l : ds) {
        for (const auto& s : env)
          if (s.label == l) throw MalformedArgument("label '" + l + "' is bound twice", path);
        env.push_back({l, *allowed});
        ++pushed;
      }
    }
    path.push_back(i);
    collect_open(a.premises()[i], env, path, out, labels);
    path.pop_back();
    env.resize(env.size() - pushed);
  }
}

/// Nearest-binder traversal that never throws; used for relabeling.
void collect_free_labels(const Argument& a, std::vector<Label>& env, std::set<Label>& out) {
  if (a.is_leaf()) {
    if (a.label() && std::find(env.begin(), env.end(), *a.label()) == env.end())
      out.insert(*a.label());
    return;
  }
  for (std::size_t i = 0; i < a.premises().size(); ++i) {
    const auto& ds = a.discharges(i);
    env.insert(env.end(), ds.begin(), ds.end());
    collect_free_labels(a.premises()[i], env, out);
    env.resize(env.size() - ds.size());
  }
}

void collect_bound_labels(const Argument& a, std::set<Label>& out) {
  for (std::size_t i = 0; i < a.premises().size(); ++i) {
    for (const auto& l : a.discharges(i)) out.insert(l);
    collect_bound_labels(a.premises()[i], out);
  }
}

}  // namespace

FormulaSet open_assumptions(const Argument& a) {
  std::vector<Scope> env;
  Path path;
  FormulaSet out;
  collect_open(a, env, path, out, nullptr);
  return out;
}

bool is_closed(const Argument& a) { return open_assumptions(a).empty(); }

bool witnesses(const Argument& a, const Sequent& s) {
  if (a.conclusion() != s.extract) return false;
  FormulaSet open = open_assumptions(a);
  return std::includes(s.context.begin(), s.context.end(), open.begin(), open.end());
}

std::set<Label> free_labels(const Argument& a) {
  std::vector<Label> env;
  std::set<Label> out;
  collect_free_labels(a, env, out);
  return out;
}

Label LabelSupply::fresh() {
  for (;;) {
    Label l = prefix_ + std::to_string(next_++);
    if (!avoid_.count(l)) return l;
  }
}

namespace {

Argument relabel_rec(const Argument& a, std::vector<std::pair<Label, Label>>& env,
                     LabelSupply& supply) {
  if (a.is_leaf()) {
    if (!a.label()) return a;
    for (auto it = env.rbegin(); it != env.rend(); ++it)
      if (it->first == *a.label()) {
        if (it->second == *a.label()) return a;
        return Argument::assume(a.conclusion(), it->second);
      }
    return a;
  }
  std::vector<Argument> ps;
  std::vector<std::vector<Label>> ds;
  bool any = a.has_discharges();
  for (std::size_t i = 0; i < a.premises().size(); ++i) {
    std::size_t pushed = 0;
    std::vector<Label> renamed;
    for (const Label& l : a.discharges(i)) {
      Label fresh = supply.fresh();
      env.emplace_back(l, fresh);
      renamed.push_back(fresh);
      ++pushed;
    }
    ps.push_back(relabel_rec(a.premises()[i], env, supply));
    env.resize(env.size() - pushed);
    ds.push_back(std::move(renamed));
  }
  if (!any) ds.clear();
  return Argument::make(a.rule(), a.conclusion(), std::move(ps), std::move(ds), a.base_rule());
}

}  // namespace

Argument canonical_relabel(const Argument& a) {
  LabelSupply supply("u", free_labels(a));
  std::vector<std::pair<Label, Label>> env;
  return relabel_rec(a, env, supply);
}

bool alpha_equivalent(const Argument& a, const Argument& b) {
  return canonical_relabel(a) == canonical_relabel(b);
}

// ---------------------------------------------------------------------------
// Derivation checking

std::string CheckReport::describe() const {
  std::string out;
  for (const auto& d : defects) out += print_path(d.path) + ": " + d.reason + "\n";
  return out;
}

namespace {

class Checker {
 public:
  Checker(const Base& base, const CalculusMode& mode) : base_(base), mode_(mode) {}

  CheckReport run(const Argument& a) {
    Path path;
    std::vector<Scope> env;
    visit(a, path, env);
    return std::move(report_);
  }

 private:
  void defect(const Path& p, std::string why) { report_.defects.push_back({p, std::move(why)}); }

  bool arity(const Argument& a, std::size_t n, const Path& p) {
    if (a.premises().size() == n) return true;
    defect(p, std::string(rule_name(a.rule())) + " expects " + std::to_string(n) + " premise(s), has " +
                  std::to_string(a.premises().size()));
    return false;
  }

  void expect_eq(Formula got, Formula want, const Path& p, const char* what) {
    if (got != want)
      defect(p, std::string(what) + ": expected " + print_formula(want) + ", found " + print_formula(got));
  }

  void check_node(const Argument& a, const Path& p) {
    const Formula c = a.conclusion();
    auto prem = [&](std::size_t i) { return a.premises()[i].conclusion(); };
    switch (a.rule()) {
      case RuleId::Assume:
        arity(a, 0, p);
        return;
      case RuleId::AndI:
        if (arity(a, 2, p)) expect_eq(c, Formula::conj(prem(0), prem(1)), p, "AndI conclusion");
        return;
      case RuleId::AndE1:
      case RuleId::AndE2:
        if (!arity(a, 1, p)) return;
        if (prem(0).kind() != Connective::And)
          defect(p, "major premise is not a conjunction");
        else
          expect_eq(c, a.rule() == RuleId::AndE1 ? prem(0).left() : prem(0).right(), p, "AndE conclusion");
        return;
      case RuleId::OrI1:
      case RuleId::OrI2:
        if (!arity(a, 1, p)) return;
        if (c.kind() != Connective::Or)
          defect(p, "OrI conclusion is not a disjunction");
        else
          expect_eq(prem(0), a.rule() == RuleId::OrI1 ? c.left() : c.right(), p, "OrI premise");
        return;
      case RuleId::OrE:
        if (!arity(a, 3, p)) return;
        if (prem(0).kind() != Connective::Or) defect(p, "major premise is not a disjunction");
        expect_eq(prem(1), c, p, "OrE left minor");
        expect_eq(prem(2), c, p, "OrE right minor");
        return;
      case RuleId::ImpI:
        if (!arity(a, 1, p)) return;
        if (c.kind() != Connective::Imp)
          defect(p, "ImpI conclusion is not an implication");
        else
          expect_eq(prem(0), c.right(), p, "ImpI premise");
        return;
      case RuleId::ImpE:
        if (!arity(a, 2, p)) return;
        expect_eq(prem(1), Formula::imp(prem(0), c), p, "ImpE major premise");
        return;
      case RuleId::BotE:
        if (!mode_.efq()) defect(p, "BotE is not admitted in the minimal calculus");
        if (arity(a, 1, p)) expect_eq(prem(0), Formula::bot(), p, "BotE premise");
        return;
      case RuleId::BotI: {
        if (mode_.kind != CalculusKind::Absurdity) {
          defect(p, "BotI is only admitted in the absurdity calculus");
          return;
        }
        expect_eq(c, Formula::bot(), p, "BotI conclusion");
        if (!arity(a, mode_.alphabet.size(), p)) return;
        std::size_t i = 0;
        for (const Atom& at : mode_.alphabet) expect_eq(prem(i++), Formula::atom(at), p, "BotI premise");
        return;
      }
      case RuleId::BaseRule: {
        const auto& r = a.base_rule();
        if (!r) {
          defect(p, "BaseRule node without a rule");
          return;
        }
        if (!base_.contains(*r)) defect(p, "rule '" + print_rule(*r) + "' is not in the base");
        expect_eq(c, Formula::atom(r->conclusion()), p, "BaseRule conclusion");
        if (!arity(a, r->premises().size(), p)) return;
        for (std::size_t i = 0; i < r->premises().size(); ++i)
          expect_eq(prem(i), Formula::atom(r->premises()[i].goal), p, "BaseRule premise");
        return;
      }
    }
  }

  void visit(const Argument& a, Path& p, std::vector<Scope>& env) {
    check_node(a, p);
    if (a.is_leaf()) {
      if (a.label()) {
        for (auto it = env.rbegin(); it != env.rend(); ++it) {
          if (it->label == *a.label()) {
            if (!it->allowed.count(a.conclusion()))
              defect(p, "leaf " + print_formula(a.conclusion()) + " cannot be discharged by label '" +
                            *a.label() + "'");
            break;
          }
        }
      }
      return;
    }
    for (std::size_t i = 0; i < a.premises().size(); ++i) {
      std::size_t pushed = 0;
      const auto& ds = a.discharges(i);
      if (!ds.empty()) {
        auto allowed = bindable(a, i);
        if (!allowed) {
          defect(p, std::string(rule_name(a.rule())) + " cannot discharge in premise " + std::to_string(i));
        } else {
          for (const Label& l : ds) {
            bool reused = std::any_of(env.begin(), env.end(), [&](const Scope& s) { return s.label == l; });
            if (reused) defect(p, "label '" + l + "' is already bound by a dominating node");
            env.push_back({l, *allowed});
            ++pushed;
          }
        }
      }
      p.push_back(i);
      visit(a.premises()[i], p, env);
      p.pop_back();
      env.resize(env.size() - pushed);
    }
  }

  const Base& base_;
  const CalculusMode& mode_;
  CheckReport report_;
};

}  // namespace

CheckReport check_derivation_report(const Argument& a, const Base& base, const CalculusMode& mode) {
  return Checker(base, mode).run(a);
}

bool check_derivation(const Argument& a, const Base& base, const CalculusMode& mode) {
  return check_derivation_report(a, base, mode).ok();
}

// ---------------------------------------------------------------------------
// Rule application

namespace {

/// Open leaves of `a` concluding one of `formulas`, relabeled so they all carry
/// `label`. Returns the rewritten argument.
Argument label_open_leaves(const Argument& a, const FormulaSet& formulas, const Label& label,
                           std::vector<Label>& env) {
  if (a.is_leaf()) {
    bool bound = a.label() && std::find(env.begin(), env.end(), *a.label()) != env.end();
    if (!bound && formulas.count(a.conclusion())) return Argument::assume(a.conclusion(), label);
    return a;
  }
  std::vector<Argument> ps;
  for (std::size_t i = 0; i < a.premises().size(); ++i) {
    const auto& ds = a.discharges(i);
    env.insert(env.end(), ds.begin(), ds.end());
    ps.push_back(label_open_leaves(a.premises()[i], formulas, label, env));
    env.resize(env.size() - ds.size());
  }
  return rebuild_with_premises(a, std::move(ps));
}

/// Resolves the labels a binder uses for premise input `in`: explicit labels
/// are validated; otherwise every open leaf concluding one of `formulas` is
/// put under a fresh label.
std::vector<Label> bind_labels(Argument& in, const FormulaSet& formulas,
                               const std::vector<Label>* explicit_labels) {
  std::set<Label> bound;
  collect_bound_labels(in, bound);
  if (explicit_labels != nullptr) {
    for (const Label& l : *explicit_labels) {
      if (bound.count(l)) throw RuleError("discharge label '" + l + "' is already bound inside the input");
    }
    return *explicit_labels;
  }
  if (formulas.empty()) return {};
  std::set<Label> avoid = bound;
  auto fl = free_labels(in);
  avoid.insert(fl.begin(), fl.end());
  Label l = LabelSupply("h", avoid).fresh();
  std::vector<Label> env;
  Argument relabeled = label_open_leaves(in, formulas, l, env);
  if (relabeled == in) return {};
  in = relabeled;
  return {l};
}

const std::vector<Label>* explicit_for(const RuleParams& params, std::size_t i) {
  if (params.discharges.empty()) return nullptr;
  if (i >= params.discharges.size()) throw RuleError("discharge list shorter than the premise list");
  return &params.discharges[i];
}

void validate_labels(const Argument& result) {
  try {
    open_assumptions(result);
  } catch (const MalformedArgument& e) {
    throw RuleError(e.what());
  }
}

}  // namespace

std::vector<Argument> apply_rule(RuleId rule, const std::vector<Argument>& inputs, const RuleParams& params) {
  auto need = [&](std::size_t n) {
    if (inputs.size() != n)
      throw RuleError(std::string(rule_name(rule)) + " takes " + std::to_string(n) + " input(s)");
  };
  auto concl = [&](std::size_t i) { return inputs[i].conclusion(); };
  switch (rule) {
    case RuleId::Assume:
      need(0);
      if (!params.formula) throw RuleError("Assume needs a formula");
      return {Argument::assume(*params.formula)};
    case RuleId::AndI:
      need(2);
      return {Argument::and_i(inputs[0], inputs[1])};
    case RuleId::AndE1:
    case RuleId::AndE2:
      need(1);
      if (concl(0).kind() != Connective::And) throw RuleError("major premise is not a conjunction");
      return {rule == RuleId::AndE1 ? Argument::and_e1(inputs[0]) : Argument::and_e2(inputs[0])};
    case RuleId::OrI1:
    case RuleId::OrI2:
      need(1);
      if (!params.formula) throw RuleError("OrI needs the other disjunct");
      return {rule == RuleId::OrI1 ? Argument::or_i1(inputs[0], *params.formula)
                                   : Argument::or_i2(*params.formula, inputs[0])};
    case RuleId::OrE: {
      need(3);
      if (concl(0).kind() != Connective::Or) throw RuleError("major premise is not a disjunction");
      if (concl(1) != concl(2)) throw RuleError("OrE minor premises conclude different formulas");
      Argument left = inputs[1], right = inputs[2];
      auto ll = bind_labels(left, {concl(0).left()}, explicit_for(params, 1));
      auto rl = bind_labels(right, {concl(0).right()}, explicit_for(params, 2));
      Argument out = Argument::make(RuleId::OrE, concl(1), {inputs[0], left, right}, {{}, ll, rl});
      validate_labels(out);
      return {out};
    }
    case RuleId::ImpI: {
      need(1);
      Argument body = inputs[0];
      const std::vector<Label>* labels = explicit_for(params, 0);
      std::optional<Formula> antecedent = params.formula;
      if (!antecedent && labels != nullptr && !labels->empty()) {
        // Infer the antecedent from the first leaf carrying the label.
        std::function<std::optional<Formula>(const Argument&)> find = [&](const Argument& a) -> std::optional<Formula> {
          if (a.is_leaf() && a.label() && *a.label() == labels->front()) return a.conclusion();
          for (const auto& p : a.premises())
            if (auto f = find(p)) return f;
          return std::nullopt;
        };
        antecedent = find(body);
      }
      if (!antecedent) throw RuleError("ImpI needs an antecedent");
      auto ls = bind_labels(body, {*antecedent}, labels);
      Argument out = Argument::make(RuleId::ImpI, Formula::imp(*antecedent, body.conclusion()), {body}, {ls});
      validate_labels(out);
      return {out};
    }
    case RuleId::ImpE:
      need(2);
      if (concl(1).kind() != Connective::Imp || concl(1).left() != concl(0))
        throw RuleError("major premise is not an implication from the minor premise");
      return {Argument::imp_e(inputs[0], inputs[1])};
    case RuleId::BotE:
      need(1);
      if (!concl(0).is_bot()) throw RuleError("BotE premise is not bot");
      if (!params.formula) throw RuleError("BotE needs a conclusion");
      return {Argument::bot_e(inputs[0], *params.formula)};
    case RuleId::BotI:
      for (const auto& in : inputs)
        if (!in.conclusion().is_atom()) throw RuleError("BotI premises must conclude atoms");
      return {Argument::bot_i(inputs)};
    case RuleId::BaseRule: {
      if (!params.base_rule) throw RuleError("BaseRule needs a rule");
      const AtomicRule& r = *params.base_rule;
      need(r.premises().size());
      std::vector<Argument> ps = inputs;
      std::vector<std::vector<Label>> ds;
      for (std::size_t i = 0; i < ps.size(); ++i) {
        if (concl(i) != Formula::atom(r.premises()[i].goal))
          throw RuleError("premise " + std::to_string(i) + " does not conclude " + r.premises()[i].goal.name());
        FormulaSet hyps;
        for (const Atom& h : r.premises()[i].hypotheses) hyps.insert(Formula::atom(h));
        ds.push_back(bind_labels(ps[i], hyps, explicit_for(params, i)));
      }
      Argument out = Argument::base_rule(r, std::move(ps), std::move(ds));
      validate_labels(out);
      return {out};
    }
  }
  throw RuleError("unknown rule");
}

// ---------------------------------------------------------------------------
// Composition

namespace {

Argument graft(const Argument& a, const std::map<Formula, const Argument*>& closures,
               std::vector<Label>& env, std::set<Formula>& hit) {
  if (a.is_leaf()) {
    bool bound = a.label() && std::find(env.begin(), env.end(), *a.label()) != env.end();
    if (bound) return a;
    auto it = closures.find(a.conclusion());
    if (it == closures.end()) return a;
    hit.insert(a.conclusion());
    return *it->second;
  }
  std::vector<Argument> ps;
  for (std::size_t i = 0; i < a.premises().size(); ++i) {
    const auto& ds = a.discharges(i);
    env.insert(env.end(), ds.begin(), ds.end());
    ps.push_back(graft(a.premises()[i], closures, env, hit));
    env.resize(env.size() - ds.size());
  }
  return rebuild_with_premises(a, std::move(ps));
}

bool has_leaf(const Argument& a, Formula f) {
  if (a.is_leaf()) return a.conclusion() == f;
  return std::any_of(a.premises().begin(), a.premises().end(), [&](const Argument& p) { return has_leaf(p, f); });
}

}  // namespace

Argument cut(const std::vector<Closure>& closures, const Argument& a) {
  std::map<Formula, const Argument*> by_target;
  std::set<Label> avoid = free_labels(a);
  for (const auto& c : closures) {
    if (c.proof.conclusion() != c.target)
      throw RuleError("closure concludes " + print_formula(c.proof.conclusion()) + ", target is " +
                      print_formula(c.target));
    by_target[c.target] = &c.proof;
    auto fl = free_labels(c.proof);
    avoid.insert(fl.begin(), fl.end());
  }
  // Rename binders of `a` away from the closures' free labels so grafting
  // cannot capture them.
  LabelSupply supply("u", avoid);
  std::vector<std::pair<Label, Label>> renv;
  Argument host = relabel_rec(a, renv, supply);

  FormulaSet open = open_assumptions(host);
  for (const auto& c : closures)
    if (!open.count(c.target) && has_leaf(host, c.target))
      throw RuleError("cut targets " + print_formula(c.target) + ", which only occurs discharged");

  std::vector<Label> env;
  std::set<Formula> hit;
  return canonical_relabel(graft(host, by_target, env, hit));
}

}  // namespace ptsem
