#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ptsem/argument.hpp"

namespace ptsem {

enum class DetourKind {
  /// I-rule conclusion used as the major premise of the matching E-rule.
  Direct,
  /// E-rule whose major premise comes from OrE or BotE.
  Permutative,
};

struct DetourSite {
  Path path;
  /// Direct: the detour connective. Permutative: Or or Bot, the rule being
  /// permuted past.
  Connective connective;
  DetourKind kind;

  bool operator==(const DetourSite&) const = default;
};

/// e.g. "imp-detour", "or-permutation".
std::string describe_site(const DetourSite& s);

/// Every site in leftmost-innermost (postorder) order.
std::vector<DetourSite> find_detours(const Argument& a);

class InvalidSite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One contraction at `site`. Bound labels of the result are canonical.
Argument reduce_step(const Argument& a, const DetourSite& site);

class ReductionBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultReductionSteps = 100000;

/// Reduce at the first site until none remain. Appends `step k: <kind> at
/// <path>` lines to `trace` when given.
Argument normalize(const Argument& a, std::size_t max_steps = kDefaultReductionSteps,
                   std::vector<std::string>* trace = nullptr);

bool is_canonical(const Argument& a);
bool ends_with_intro(const Argument& a);

}  // namespace ptsem
