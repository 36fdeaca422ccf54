#pragma once

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptsem/base.hpp"
#include "ptsem/formula.hpp"

namespace ptsem {

enum class RuleId {
  Assume,
  AndI,
  AndE1,
  AndE2,
  OrI1,
  OrI2,
  OrE,
  ImpI,
  ImpE,
  BotE,
  /// ⊥ from one proof of each working-alphabet atom (Sandqvist calculus only).
  BotI,
  BaseRule,
};

const char* rule_name(RuleId r);
RuleId rule_from_name(const std::string& name);
bool is_intro(RuleId r);
bool is_elim(RuleId r);
/// Index of the major premise of an elimination rule.
std::size_t major_premise(RuleId r);

enum class CalculusKind {
  /// NJ without ⊥E; ⊥ behaves as an ordinary atom.
  Minimal,
  /// NJ with ⊥E.
  Intuitionistic,
  /// NJ plus ⊥I over a finite alphabet: ⊥ holds iff every alphabet atom does.
  Absurdity,
};

struct CalculusMode {
  CalculusKind kind = CalculusKind::Intuitionistic;
  AtomSet alphabet;  // Absurdity only

  static CalculusMode minimal() { return {CalculusKind::Minimal, {}}; }
  static CalculusMode intuitionistic() { return {CalculusKind::Intuitionistic, {}}; }
  static CalculusMode absurdity(AtomSet alphabet) { return {CalculusKind::Absurdity, std::move(alphabet)}; }

  bool efq() const { return kind != CalculusKind::Minimal; }
};

using Label = std::string;

struct ArgumentNode;

/// Immutable, rule-annotated argument tree. Leaves are `Assume` nodes; a leaf
/// is discharged when its label is bound by a dominating ImpI / OrE /
/// level-2 BaseRule node.
class Argument {
 public:
  static Argument assume(Formula f, std::optional<Label> label = std::nullopt);
  /// Unchecked constructor; `discharges[i]` lists labels bound in premise i.
  static Argument make(RuleId rule, Formula conclusion, std::vector<Argument> premises,
                       std::vector<std::vector<Label>> discharges = {},
                       std::optional<AtomicRule> base_rule = std::nullopt);

  static Argument and_i(Argument l, Argument r);
  static Argument and_e1(Argument a);
  static Argument and_e2(Argument a);
  static Argument or_i1(Argument a, Formula right);
  static Argument or_i2(Formula left, Argument a);
  static Argument or_e(Argument major, Label left_label, Argument left, Label right_label,
                       Argument right);
  static Argument imp_i(Formula antecedent, std::optional<Label> label, Argument body);
  static Argument imp_e(Argument minor, Argument major);
  static Argument bot_e(Argument a, Formula conclusion);
  static Argument bot_i(std::vector<Argument> atom_proofs);
  static Argument base_rule(const AtomicRule& r, std::vector<Argument> premises,
                            std::vector<std::vector<Label>> discharges = {});

  const Formula& conclusion() const;
  RuleId rule() const;
  const std::vector<Argument>& premises() const;
  const std::optional<Label>& label() const;
  /// Labels bound in premise `i` (empty when none).
  const std::vector<Label>& discharges(std::size_t i) const;
  const std::optional<AtomicRule>& base_rule() const;
  bool has_discharges() const;

  std::size_t size() const;
  bool is_leaf() const { return rule() == RuleId::Assume; }
  const ArgumentNode* node() const { return node_.get(); }

  /// Structural equality including labels.
  friend bool operator==(const Argument& a, const Argument& b);

 private:
  explicit Argument(std::shared_ptr<const ArgumentNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ArgumentNode> node_;
};

struct ArgumentNode {
  Formula conclusion;
  RuleId rule;
  std::vector<Argument> premises;
  std::optional<Label> label;
  std::vector<std::vector<Label>> discharges;
  std::optional<AtomicRule> base_rule;
  std::size_t size;
};

/// Node address: premise indices from the root.
using Path = std::vector<std::size_t>;
std::string print_path(const Path& p);

const Argument& subterm(const Argument& a, const Path& p);
/// Copy of `a` with the subtree at `p` replaced.
Argument replace_at(const Argument& a, const Path& p, Argument replacement);

class MalformedArgument : public std::runtime_error {
 public:
  MalformedArgument(const std::string& what, Path path);
  const Path& path() const { return path_; }

 private:
  Path path_;
};

/// Formulas at undischarged leaves. Throws MalformedArgument on a bad binding
/// (label reused by nested binders, or a bound leaf of the wrong formula).
FormulaSet open_assumptions(const Argument& a);
bool is_closed(const Argument& a);
bool witnesses(const Argument& a, const Sequent& s);

/// Labels carried by undischarged leaves.
std::set<Label> free_labels(const Argument& a);

struct Defect {
  Path path;
  std::string reason;
};

struct CheckReport {
  std::vector<Defect> defects;
  bool ok() const { return defects.empty(); }
  std::string describe() const;
};

/// Is `a` built from Assume leaves by rules of NJ ∪ base under `mode`?
CheckReport check_derivation_report(const Argument& a, const Base& base, const CalculusMode& mode);
bool check_derivation(const Argument& a, const Base& base, const CalculusMode& mode);

struct RuleParams {
  /// OrI: the other disjunct; BotE: the conclusion; ImpI: the antecedent.
  std::optional<Formula> formula;
  /// Labels bound per premise (ImpI: [labels]; OrE: [[], left, right]).
  std::vector<std::vector<Label>> discharges;
  std::optional<AtomicRule> base_rule;
};

class RuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One application of `rule` as a deduction operator. Throws RuleError on a
/// schema mismatch or a discharge label that is already bound inside an input.
std::vector<Argument> apply_rule(RuleId rule, const std::vector<Argument>& inputs,
                                 const RuleParams& params = {});

/// Graft `proof` above every undischarged leaf concluding `target`.
struct Closure {
  Argument proof;
  Formula target;
};
Argument cut(const std::vector<Closure>& closures, const Argument& a);

/// Rename every binder to u1, u2, … in preorder, avoiding free labels.
Argument canonical_relabel(const Argument& a);
bool alpha_equivalent(const Argument& a, const Argument& b);

/// Source of labels that do not clash with a given set.
class LabelSupply {
 public:
  explicit LabelSupply(std::string prefix = "u", std::set<Label> avoid = {})
      : prefix_(std::move(prefix)), avoid_(std::move(avoid)) {}
  Label fresh();

 private:
  std::string prefix_;
  std::set<Label> avoid_;
  int next_ = 1;
};

}  // namespace ptsem
