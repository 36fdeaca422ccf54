#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "ptsem/argument.hpp"

namespace ptsem {

class ProofFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// JSON proof document: one object per node with `rule`, `conclusion`, and
/// where relevant `label`, `base_rule`, `discharges`, `premises`.
std::string write_proof(const Argument& a);
Argument read_proof(std::string_view text);

/// Graphviz rendering, conclusion on top, premises as children.
std::string proof_to_dot(const Argument& a);

/// Indented one-line-per-node rendering for terminals.
std::string proof_to_text(const Argument& a);

}  // namespace ptsem
