#include "ptsem/base_witness.hpp"

#include <map>

namespace ptsem {

struct BaseWitnessBuilder::Frame {
  Mask mask;
  std::map<int, std::optional<Label>> hyp_label;  // atom index -> binder label
  std::map<int, Argument> memo;
};

std::optional<Argument> BaseWitnessBuilder::build(const AtomSet& hypotheses, const Atom& goal) {
  Mask s = d_.mask_of(hypotheses);
  int g = d_.index_of(goal);
  if (!(d_.saturate(s).atoms >> g & 1)) return std::nullopt;
  Frame f{s, {}, {}};
  for (int i = 0; i < 64; ++i)
    if (s >> i & 1) f.hyp_label[i] = std::nullopt;
  return derive(f, g);
}

Argument BaseWitnessBuilder::derive(Frame& f, int goal) {
  if (auto it = f.memo.find(goal); it != f.memo.end()) return it->second;
  // Copy: saturate() may insert into the memo table while we recurse.
  const std::vector<int> stage = d_.saturate(f.mask).stage;
  int k = stage[goal];
  Argument out = Argument::assume(Formula::atom(d_.atoms_[goal]));
  if (k == 0) {
    out = Argument::assume(Formula::atom(d_.atoms_[goal]), f.hyp_label.at(goal));
    f.memo.emplace(goal, out);
    return out;
  }
  const auto& rules = d_.base_.rules();
  for (std::size_t ri = 0; ri < d_.rules_.size(); ++ri) {
    const auto& cr = d_.rules_[ri];
    if (cr.conclusion != goal) continue;
    bool ok = true;
    for (const auto& [hyps, g] : cr.premises) {
      Mask t = f.mask | hyps;
      bool have = t == f.mask ? (stage[g] >= 0 && stage[g] < k) : (d_.saturate(t).atoms >> g & 1) != 0;
      if (!have) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    std::vector<Argument> premises;
    std::vector<std::vector<Label>> discharges;
    for (const auto& [hyps, g] : cr.premises) {
      if (hyps == 0) {
        premises.push_back(derive(f, g));
        discharges.emplace_back();
        continue;
      }
      Label l = labels_.fresh();
      Frame inner{f.mask | hyps, f.hyp_label, {}};
      for (int i = 0; i < 64; ++i)
        if (hyps >> i & 1) inner.hyp_label[i] = l;
      Argument p = derive(inner, g);
      premises.push_back(p);
      if (free_labels(p).count(l))
        discharges.push_back({l});
      else
        discharges.emplace_back();
    }
    out = Argument::base_rule(rules[ri], std::move(premises), std::move(discharges));
    f.memo.emplace(goal, out);
    return out;
  }
  throw std::logic_error("stage bookkeeping lost a derivation");
}

std::optional<Argument> derivation_in_base(const Base& base, const AtomSet& hypotheses, const Atom& goal) {
  AtomSet extra = hypotheses;
  extra.insert(goal);
  AtomicDeriver d(base, extra);
  return BaseWitnessBuilder(d).build(hypotheses, goal);
}

}  // namespace ptsem
