#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptsem/formula.hpp"

namespace ptsem {

/// One premise of an atomic rule: derive `goal` with `hypotheses` available
/// (and discharged by the rule). Level-1 premises have no hypotheses.
struct RulePremise {
  AtomSet hypotheses;
  Atom goal;

  auto operator<=>(const RulePremise&) const = default;
};

/// ((Σ₁, p₁), …, (Σₙ, pₙ)) ⇒ c. Premises are kept sorted and duplicate-free,
/// so rules compare equal up to premise reordering.
class AtomicRule {
 public:
  AtomicRule(std::vector<RulePremise> premises, Atom conclusion);

  static AtomicRule axiom(Atom c) { return AtomicRule({}, std::move(c)); }
  static AtomicRule flat(const std::vector<Atom>& premises, Atom c);

  const std::vector<RulePremise>& premises() const { return premises_; }
  const Atom& conclusion() const { return conclusion_; }
  int level() const;
  AtomSet atoms() const;

  /// Formula form used by the prover: level 1 `p1 -> … -> c`, level 2
  /// `(σ… -> p_i) -> … -> c`; an axiom compiles to the atom `c`.
  Formula compiled() const;
  /// Formula form of premise `i`: `σ1 -> … -> p_i`.
  Formula premise_formula(std::size_t i) const;

  std::strong_ordering operator<=>(const AtomicRule& o) const;
  bool operator==(const AtomicRule& o) const = default;

 private:
  std::vector<RulePremise> premises_;
  Atom conclusion_;
};

/// Finite set of atomic rules. Extension C ⊇ B is rule-set inclusion.
class Base {
 public:
  Base() = default;
  explicit Base(std::vector<AtomicRule> rules);

  const std::vector<AtomicRule>& rules() const { return rules_; }
  bool empty() const { return rules_.empty(); }
  std::size_t size() const { return rules_.size(); }
  int level() const;
  bool contains(const AtomicRule& r) const;
  bool is_subset_of(const Base& other) const;
  Base with(const AtomicRule& r) const;
  Base united(const Base& other) const;
  AtomSet atoms() const;

  auto operator<=>(const Base&) const = default;

 private:
  std::vector<AtomicRule> rules_;
};

class BaseParseError : public std::runtime_error {
 public:
  BaseParseError(const std::string& what, int line);
  int line() const { return line_; }

 private:
  int line_;
};

AtomicRule parse_rule(std::string_view line);
std::string print_rule(const AtomicRule& r);
/// One rule per line; `#` starts a comment.
Base parse_base(std::string_view text);
/// Canonical rendering: rules in canonical order, one per line.
std::string print_base(const Base& b);

/// Least-fixed-point atomic derivability with a memo table over hypothesis
/// sets. One instance per base; not shared between threads.
class AtomicDeriver {
 public:
  explicit AtomicDeriver(Base base, const AtomSet& extra_atoms = {});

  bool derivable(const AtomSet& hypotheses, const Atom& goal);
  /// D(S): every atom derivable from `hypotheses`.
  AtomSet closure(const AtomSet& hypotheses);

  const Base& base() const { return base_; }

 private:
  friend class BaseWitnessBuilder;

  using Mask = std::uint64_t;
  struct Saturation {
    Mask atoms = 0;
    std::vector<int> stage;  // per atom index; -1 when underivable
  };

  int index_of(const Atom& a);
  Mask mask_of(const AtomSet& atoms);
  const Saturation& saturate(Mask s);

  struct CompiledRule {
    std::vector<std::pair<Mask, int>> premises;  // (hypotheses, goal index)
    int conclusion;
  };

  Base base_;
  std::vector<Atom> atoms_;
  std::map<Atom, int> index_;
  std::vector<CompiledRule> rules_;
  std::map<Mask, Saturation> memo_;
};

bool derivable_atom(const Base& base, const AtomSet& hypotheses, const Atom& goal);

struct ExtensionBounds {
  int max_rules = 1;
  int max_premises = 1;
  int level = 1;
  int max_hyps = 1;
};

/// Every rule over `alphabet` within the premise bounds, in canonical order.
std::vector<AtomicRule> rule_universe(const AtomSet& alphabet, const ExtensionBounds& bounds);

/// Restartable stream of every C ⊇ base adding at most `max_rules` rules from
/// the rule universe, each exactly once; `base` itself comes first.
class ExtensionStream {
 public:
  ExtensionStream(Base base, const AtomSet& alphabet, const ExtensionBounds& bounds);
  ExtensionStream(Base base, std::vector<AtomicRule> universe, int max_rules);

  std::optional<Base> next();
  void reset();
  /// Total number of bases the stream yields.
  std::size_t count() const;

 private:
  Base base_;
  std::vector<AtomicRule> universe_;
  int max_rules_;
  int k_ = 0;
  std::vector<int> combo_;
  bool started_ = false;
  bool done_ = false;
};

std::vector<Base> enumerate_extensions(const Base& base, const AtomSet& alphabet,
                                       const ExtensionBounds& bounds);

}  // namespace ptsem
