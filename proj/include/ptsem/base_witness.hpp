#pragma once

#include <optional>

#include "ptsem/argument.hpp"
#include "ptsem/base.hpp"

namespace ptsem {

/// Builds base-rule-only derivations from the stage numbers that
/// AtomicDeriver records, so every derivation is well-founded.
class BaseWitnessBuilder {
 public:
  explicit BaseWitnessBuilder(AtomicDeriver& deriver) : d_(deriver) {}

  /// Derivation of `goal` using only rules of the base. Hypothesis leaves are
  /// left unlabeled (open); leaves for a level-2 premise's Σ are bound by a
  /// fresh label on the BaseRule node.
  std::optional<Argument> build(const AtomSet& hypotheses, const Atom& goal);

 private:
  using Mask = AtomicDeriver::Mask;
  struct Frame;
  Argument derive(Frame& f, int goal);

  AtomicDeriver& d_;
  LabelSupply labels_{"b"};
};

std::optional<Argument> derivation_in_base(const Base& base, const AtomSet& hypotheses, const Atom& goal);

}  // namespace ptsem
