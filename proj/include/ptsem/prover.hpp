#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <unordered_map>

#include "ptsem/argument.hpp"
#include "ptsem/base.hpp"
#include "ptsem/kripke.hpp"

namespace ptsem {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultBudget = 1000000;

/// kDefaultBudget unless PTSEM_BUDGET holds a positive integer.
std::size_t default_budget();

/// Contraction-free backward search (Dyckhoff's G4ip) for Γ ⊢_B φ. Base rules
/// enter the context as formulas and are turned back into BaseRule nodes
/// when a witness is rebuilt. Results are memoized per instance, so reuse
/// one Prover for many queries over the same base and mode.
class Prover {
 public:
  Prover(Base base, CalculusMode mode, std::size_t budget = default_budget());
  ~Prover();
  Prover(Prover&&) noexcept;
  Prover& operator=(Prover&&) noexcept;

  /// Throws BudgetExceeded when one query expands more than `budget` nodes.
  bool proves(const FormulaSet& gamma, Formula phi);
  std::optional<Argument> derivation(const FormulaSet& gamma, Formula phi);

  const Base& base() const;
  const CalculusMode& mode() const;
  /// Search nodes expanded by the last query.
  std::size_t nodes_used() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ProverVerdict {
  bool decided = false;
  std::optional<Argument> witness;
  std::optional<KripkeModel> countermodel;
};

struct ProveOptions {
  bool want_witness = false;
  bool want_countermodel = false;
  int countermodel_bound = 4;
  std::size_t budget = default_budget();
};

ProverVerdict proves(const Base& base, const FormulaSet& gamma, Formula phi, const CalculusMode& mode,
                     const ProveOptions& options = {});
std::optional<Argument> derivation_for(const Base& base, const FormulaSet& gamma, Formula phi,
                                       const CalculusMode& mode);

}  // namespace ptsem
