#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ptsem/argument.hpp"
#include "ptsem/base.hpp"
#include "ptsem/prover.hpp"

namespace ptsem {

enum class SemanticsMode {
  /// Derived from proof-theoretic validity: level-1 bases, ⊥ never supported.
  PtV,
  /// Level-2 bases; ⊥ holds iff every working-alphabet atom does.
  Sandqvist,
};

const char* mode_name(SemanticsMode m);
SemanticsMode mode_from_name(const std::string& name);

/// Instance atoms plus `reserve` fresh atoms r1, r2, … (skipping names
/// already taken).
AtomSet working_alphabet(const AtomSet& instance_atoms, int reserve);

struct SemanticsConfig {
  SemanticsMode mode = SemanticsMode::PtV;
  /// Domain of "any p ∈ 𝔸" in clauses (∨) and (⊥)′.
  AtomSet alphabet;
  std::size_t budget = default_budget();
};

class ModeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Calculus deciding support: NJ for PtV, NJ + ⊥I over the alphabet for Sandqvist.
CalculusMode calculus_of(const SemanticsConfig& cfg);

/// Support and witnesses, with one memoizing prover per base.
class Semantics {
 public:
  explicit Semantics(SemanticsConfig cfg);

  const SemanticsConfig& config() const { return cfg_; }
  /// Throws ModeMismatch for a level-2 base under PtV, or base atoms outside
  /// a Sandqvist alphabet.
  void check_base(const Base& b) const;

  bool supports(const Base& b, const FormulaSet& gamma, Formula phi);
  bool entails(const FormulaSet& gamma, Formula phi) { return supports(Base(), gamma, phi); }
  /// Witness for a supported sequent. PtV prefers a ⊥E-free derivation.
  std::optional<Argument> witness(const Base& b, const FormulaSet& gamma, Formula phi);

  Prover& prover(const Base& b, CalculusKind kind);

 private:
  SemanticsConfig cfg_;
  std::map<std::pair<Base, CalculusKind>, Prover> provers_;
};

bool supports(const Base& b, const FormulaSet& gamma, Formula phi, const SemanticsConfig& cfg);
bool entails(const FormulaSet& gamma, Formula phi, const SemanticsConfig& cfg);

struct ClauseVerdict {
  enum class Kind { Holds, Fails, Inconclusive };
  Kind kind = Kind::Inconclusive;
  /// Fails: the extension C ⊇ B where the clause body is violated.
  std::optional<Base> counterexample;
  /// Fails: the atom witnessing the violation, when the clause names one.
  std::optional<Atom> atom;
  std::string detail;

  bool decisive() const { return kind != Kind::Inconclusive; }
};

const char* verdict_name(ClauseVerdict::Kind k);

/// Deliberate defects for the mutation test of the coherence sweep.
enum class Fault { None, AtomClause, DisjunctionClause };

/// Literal evaluation of the support clauses with ∀C ⊇ B realized by bounded
/// enumeration. Nested quantifiers share one budget: every C visited adds at
/// most `bounds.max_rules` rules to the root base.
class ClausalEvaluator {
 public:
  ClausalEvaluator(Semantics& sem, ExtensionBounds bounds, Fault fault = Fault::None);

  ClauseVerdict evaluate(const Base& b, const FormulaSet& gamma, Formula phi);

 private:
  struct Key {
    int base;
    int remaining;
    std::vector<Formula> gamma;
    Formula phi;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };

  ClauseVerdict eval(const Base& b, int remaining, const FormulaSet& gamma, Formula phi);
  ClauseVerdict eval_closed(const Base& b, int remaining, Formula phi);
  ClauseVerdict bridge(const Base& b, const FormulaSet& gamma, Formula phi, const std::string& clause);
  const std::vector<std::pair<Base, int>>& extensions(const Base& b, int remaining);
  int base_id(const Base& b);

  Semantics& sem_;
  ExtensionBounds bounds_;
  Fault fault_;
  std::vector<AtomicRule> universe_;
  std::map<Base, int> ids_;
  std::map<std::pair<int, int>, std::vector<std::pair<Base, int>>> ext_cache_;
  std::unordered_map<Key, ClauseVerdict, KeyHash> memo_;
};

ClauseVerdict supports_clausal(const Base& b, const FormulaSet& gamma, Formula phi, const SemanticsConfig& cfg,
                               const ExtensionBounds& bounds);

/// Validity of an argument in a base, following the inductive
/// characterization: closed arguments are normalized and inspected by their
/// final introduction rule; open ones are closed off by witnesses in every
/// extension within `bounds`.
class SatisfactionChecker {
 public:
  SatisfactionChecker(Semantics& sem, ExtensionBounds bounds);

  /// Throws MalformedArgument for a badly bound argument.
  bool satisfies(const Argument& a, const Base& b, const FormulaSet& gamma, Formula phi);
  /// Why the last negative answer was given.
  const std::string& reason() const { return reason_; }

 private:
  bool closed_valid(const Argument& a, const Base& b, int remaining);
  bool open_valid(const Argument& a, const Base& b, int remaining, const FormulaSet& gamma);
  bool fail(std::string why);

  Semantics& sem_;
  ExtensionBounds bounds_;
  std::vector<AtomicRule> universe_;
  std::string reason_;
};

bool satisfies(const Argument& a, const Base& b, const FormulaSet& gamma, Formula phi, const SemanticsConfig& cfg,
               const ExtensionBounds& bounds);

}  // namespace ptsem
