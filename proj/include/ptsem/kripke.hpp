#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptsem/argument.hpp"
#include "ptsem/base.hpp"

namespace ptsem {

/// Finite rooted Kripke model; world 0 is the root.
struct KripkeModel {
  /// above[w][v]: w ≤ v. Reflexive and transitive.
  std::vector<std::vector<bool>> above;
  std::vector<AtomSet> valuation;
  /// Worlds forcing ⊥; only used when ⊥ is an ordinary atom (minimal mode).
  std::vector<bool> falsum;
  /// Every world forces every rule of this base.
  bool base_closed = false;

  std::size_t size() const { return valuation.size(); }
};

/// Standard forcing. ⊥: never (intuitionistic), `falsum[w]` (minimal), every
/// alphabet atom forced (absurdity).
bool forces(const KripkeModel& m, std::size_t world, Formula f, const CalculusMode& mode);
bool forces_rule(const KripkeModel& m, std::size_t world, const AtomicRule& r, const CalculusMode& mode);

/// Persistence, reflexivity/transitivity and (when flagged) base closure.
bool well_formed(const KripkeModel& m, const Base& base, const CalculusMode& mode);

/// A base-closed model with at most `bound` worlds forcing Γ but not φ at
/// the root, found by exhaustive search in increasing model size.
std::optional<KripkeModel> refute(const Base& base, const FormulaSet& gamma, Formula phi, int bound,
                                  const CalculusMode& mode = CalculusMode::intuitionistic());

std::string write_countermodel(const KripkeModel& m);
KripkeModel read_countermodel(std::string_view text);

}  // namespace ptsem
