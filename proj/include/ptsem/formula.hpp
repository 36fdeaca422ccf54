#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ptsem {

/// Propositional atom. Names match `[a-z][a-zA-Z0-9_]*`; `bot` is reserved.
class Atom {
 public:
  explicit Atom(std::string name);

  const std::string& name() const { return name_; }

  static bool valid_name(std::string_view name);

  auto operator<=>(const Atom&) const = default;

 private:
  std::string name_;
};

enum class Connective { Atom, Bot, And, Or, Imp };

struct FormulaNode;

/// Hash-consed, immutable IPL formula. Structurally equal formulas share one
/// node, so equality is a pointer comparison.
class Formula {
 public:
  static Formula atom(const Atom& a);
  static Formula atom(std::string_view name) { return atom(Atom(std::string(name))); }
  static Formula bot();
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula imp(Formula l, Formula r);
  /// ¬φ is stored as φ → ⊥.
  static Formula neg(Formula f) { return imp(f, bot()); }

  Connective kind() const;
  bool is_atom() const { return kind() == Connective::Atom; }
  bool is_bot() const { return kind() == Connective::Bot; }
  bool is_negation() const;
  const std::string& atom_name() const;
  Formula left() const;
  Formula right() const;

  /// Nodes on the longest root-to-leaf path; atoms and ⊥ have depth 1.
  int depth() const;
  std::size_t size() const;

  const FormulaNode* node() const { return node_; }

  friend bool operator==(Formula a, Formula b) { return a.node_ == b.node_; }
  /// Structural total order (kind, then atom name, then children). Stable
  /// across runs, unlike node addresses.
  friend std::strong_ordering operator<=>(Formula a, Formula b);

 private:
  explicit Formula(const FormulaNode* n) : node_(n) {}
  const FormulaNode* node_;
};

struct FormulaNode {
  Connective kind;
  std::string name;
  const FormulaNode* left = nullptr;
  const FormulaNode* right = nullptr;
  int depth = 1;
  std::size_t size = 1;
};

struct FormulaHash {
  std::size_t operator()(Formula f) const { return std::hash<const void*>{}(f.node()); }
};

using FormulaSet = std::set<Formula>;
using AtomSet = std::set<Atom>;

/// Γ : φ. The context is a set.
struct Sequent {
  FormulaSet context;
  Formula extract;

  friend bool operator==(const Sequent&, const Sequent&) = default;
};

class ParseError : public std::runtime_error {
 public:
  /// `offset` is the 1-based byte position of the offending input.
  ParseError(const std::string& what, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Concrete syntax: `bot`, `~`, `&`, `|`, `->`, parentheses. Precedence
/// ~ > & > | > ->; `->` is right-associative, `&` and `|` left-associative.
Formula parse_formula(std::string_view text);
std::string print_formula(Formula f);

/// `f1, f2 : g`; the left side may be empty.
Sequent parse_sequent(std::string_view text);
std::string print_sequent(const Sequent& s);
/// Context rendered as a comma-separated list in print order.
std::string print_context(const FormulaSet& gamma);

/// Right-nested conjunction of `gamma` in print order; conjoin(∅) = ⊥ → ⊥.
Formula conjoin(const FormulaSet& gamma);
/// Right-nested conjunction of atoms in name order; requires nonempty input.
Formula conjoin_atoms(const AtomSet& atoms);

AtomSet atoms_of(Formula f);
AtomSet atoms_of(const Sequent& s);
AtomSet atoms_of(const FormulaSet& gamma);

/// Every formula over `atoms` (plus ⊥ when `with_bot`) of depth ≤ max_depth,
/// in a deterministic order.
std::vector<Formula> enumerate_formulas(const AtomSet& atoms, bool with_bot, int max_depth);

}  // namespace ptsem
