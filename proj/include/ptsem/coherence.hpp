#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ptsem/semantics.hpp"

namespace ptsem {

struct CoherenceConfig {
  SemanticsConfig semantics;
  /// Atoms for the enumerated bases and formulas.
  AtomSet atoms;
  /// Bases swept: every extension of ∅ within these bounds.
  ExtensionBounds base_bounds{2, 2, 1, 1};
  int max_depth = 2;
  int max_context = 2;
  bool with_bot = true;
  /// Bounds for the quantifiers of supports_clausal and satisfies.
  ExtensionBounds clause_bounds{1, 1, 1, 1};
  bool check_clausal = true;
  bool check_witnesses = true;
  bool check_monotonicity = true;
  Fault fault = Fault::None;
  unsigned jobs = 1;
};

struct Violation {
  /// clausal-vs-support | proof-existence | monotonicity
  std::string kind;
  Base base;
  Sequent sequent;
  std::string detail;
  std::optional<Base> other_base;
  std::optional<Argument> witness;
};

struct CoherenceReport {
  std::size_t bases = 0;
  std::size_t sequents = 0;
  /// (base, sequent) pairs checked: bases × sequents.
  std::size_t instances = 0;
  std::size_t supported = 0;
  std::size_t clausal_holds = 0;
  std::size_t clausal_fails = 0;
  std::size_t clausal_inconclusive = 0;
  std::size_t witnesses_checked = 0;
  std::size_t monotonicity_pairs = 0;
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  /// `instance | judgment | verdict | witness-ref` records: one per
  /// violation, then summary counts.
  std::string render() const;
};

/// Every sequent Γ : φ with |Γ| ≤ max_context and formulas of depth ≤ max_depth.
std::vector<Sequent> enumerate_sequents(const AtomSet& atoms, bool with_bot, int max_depth, int max_context);

CoherenceReport check_clause_coherence(const CoherenceConfig& cfg,
                                       const std::function<void(std::size_t, std::size_t)>& progress = {});

/// One file per violation: `<n>.base`, `<n>.sequent`, and `<n>.proof` when a
/// witness is involved. Returns the number of violations written.
std::size_t write_counterexamples(const CoherenceReport& r, const std::string& dir);

}  // namespace ptsem
