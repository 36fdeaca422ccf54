#include "ptsem/base.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>

namespace ptsem {

AtomicRule::AtomicRule(std::vector<RulePremise> premises, Atom conclusion)
    : premises_(std::move(premises)), conclusion_(std::move(conclusion)) {
  std::sort(premises_.begin(), premises_.end());
  premises_.erase(std::unique(premises_.begin(), premises_.end()), premises_.end());
}

AtomicRule AtomicRule::flat(const std::vector<Atom>& premises, Atom c) {
  std::vector<RulePremise> ps;
  for (const Atom& a : premises) ps.push_back({{}, a});
  return AtomicRule(std::move(ps), std::move(c));
}

int AtomicRule::level() const {
  for (const auto& p : premises_)
    if (!p.hypotheses.empty()) return 2;
  return 1;
}

AtomSet AtomicRule::atoms() const {
  AtomSet out{conclusion_};
  for (const auto& p : premises_) {
    out.insert(p.goal);
    out.insert(p.hypotheses.begin(), p.hypotheses.end());
  }
  return out;
}

Formula AtomicRule::premise_formula(std::size_t i) const {
  const RulePremise& p = premises_.at(i);
  Formula f = Formula::atom(p.goal);
  for (auto it = p.hypotheses.rbegin(); it != p.hypotheses.rend(); ++it)
    f = Formula::imp(Formula::atom(*it), f);
  return f;
}

Formula AtomicRule::compiled() const {
  Formula f = Formula::atom(conclusion_);
  for (std::size_t i = premises_.size(); i-- > 0;) f = Formula::imp(premise_formula(i), f);
  return f;
}

std::strong_ordering AtomicRule::operator<=>(const AtomicRule& o) const {
  if (auto c = conclusion_ <=> o.conclusion_; c != 0) return c;
  if (auto c = premises_.size() <=> o.premises_.size(); c != 0) return c;
  return premises_ <=> o.premises_;
}

Base::Base(std::vector<AtomicRule> rules) : rules_(std::move(rules)) {
  std::sort(rules_.begin(), rules_.end());
  rules_.erase(std::unique(rules_.begin(), rules_.end()), rules_.end());
}

int Base::level() const {
  int level = 1;
  for (const auto& r : rules_) level = std::max(level, r.level());
  return level;
}

bool Base::contains(const AtomicRule& r) const {
  return std::binary_search(rules_.begin(), rules_.end(), r);
}

bool Base::is_subset_of(const Base& other) const {
  return std::includes(other.rules_.begin(), other.rules_.end(), rules_.begin(), rules_.end());
}

Base Base::with(const AtomicRule& r) const {
  std::vector<AtomicRule> rules = rules_;
  rules.push_back(r);
  return Base(std::move(rules));
}

Base Base::united(const Base& other) const {
  std::vector<AtomicRule> rules = rules_;
  rules.insert(rules.end(), other.rules_.begin(), other.rules_.end());
  return Base(std::move(rules));
}

AtomSet Base::atoms() const {
  AtomSet out;
  for (const auto& r : rules_) {
    AtomSet a = r.atoms();
    out.insert(a.begin(), a.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// File format

BaseParseError::BaseParseError(const std::string& what, int line)
    : std::runtime_error("base file line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

class RuleLexer {
 public:
  explicit RuleLexer(std::string_view s) : s_(s) {}

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool at_end() {
    skip_ws();
    return i_ >= s_.size();
  }
  bool accept(std::string_view tok) {
    skip_ws();
    if (s_.substr(i_, tok.size()) == tok) {
      i_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view tok) {
    if (!accept(tok)) throw std::invalid_argument("expected '" + std::string(tok) + "'");
  }
  Atom atom() {
    skip_ws();
    std::size_t j = i_;
    while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
    std::string name(s_.substr(i_, j - i_));
    if (!Atom::valid_name(name))
      throw std::invalid_argument(name.empty() ? "expected an atom" : "invalid atom '" + name + "'");
    i_ = j;
    return Atom(name);
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
};

RulePremise parse_premise(RuleLexer& lx) {
  if (!lx.accept("(")) return RulePremise{{}, lx.atom()};
  AtomSet hyps;
  if (!lx.accept(">")) {
    hyps.insert(lx.atom());
    while (lx.accept(",")) hyps.insert(lx.atom());
    lx.expect(">");
  }
  Atom goal = lx.atom();
  lx.expect(")");
  return RulePremise{std::move(hyps), std::move(goal)};
}

std::string join_atoms(const AtomSet& atoms) {
  std::string out;
  for (const Atom& a : atoms) {
    if (!out.empty()) out += ", ";
    out += a.name();
  }
  return out;
}

}  // namespace

AtomicRule parse_rule(std::string_view line) {
  RuleLexer lx(line);
  std::vector<RulePremise> premises;
  if (!lx.accept("=>")) {
    premises.push_back(parse_premise(lx));
    while (lx.accept(",")) premises.push_back(parse_premise(lx));
    lx.expect("=>");
  }
  Atom c = lx.atom();
  if (!lx.at_end()) throw std::invalid_argument("trailing input after conclusion");
  return AtomicRule(std::move(premises), std::move(c));
}

std::string print_rule(const AtomicRule& r) {
  std::string out;
  bool level2 = r.level() == 2;
  for (const auto& p : r.premises()) {
    if (!out.empty()) out += ", ";
    if (level2) {
      out += "(";
      if (!p.hypotheses.empty()) out += join_atoms(p.hypotheses) + " ";
      out += "> " + p.goal.name() + ")";
    } else {
      out += p.goal.name();
    }
  }
  return (out.empty() ? "" : out + " ") + "=> " + r.conclusion().name();
}

Base parse_base(std::string_view text) {
  std::vector<AtomicRule> rules;
  int lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    bool blank = std::all_of(line.begin(), line.end(),
                             [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    if (!blank) {
      try {
        rules.push_back(parse_rule(line));
      } catch (const std::invalid_argument& e) {
        throw BaseParseError(e.what(), lineno);
      }
    }
    start = end + 1;
  }
  return Base(std::move(rules));
}

std::string print_base(const Base& b) {
  std::string out;
  for (const auto& r : b.rules()) out += print_rule(r) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Derivability

AtomicDeriver::AtomicDeriver(Base base, const AtomSet& extra_atoms) : base_(std::move(base)) {
  AtomSet all = base_.atoms();
  all.insert(extra_atoms.begin(), extra_atoms.end());
  for (const Atom& a : all) index_of(a);
  for (const auto& r : base_.rules()) {
    CompiledRule cr;
    cr.conclusion = index_of(r.conclusion());
    for (const auto& p : r.premises()) cr.premises.emplace_back(mask_of(p.hypotheses), index_of(p.goal));
    rules_.push_back(std::move(cr));
  }
}

int AtomicDeriver::index_of(const Atom& a) {
  auto it = index_.find(a);
  if (it != index_.end()) return it->second;
  if (atoms_.size() >= 64) throw std::length_error("atomic derivability supports at most 64 atoms");
  int i = static_cast<int>(atoms_.size());
  atoms_.push_back(a);
  index_.emplace(a, i);
  return i;
}

AtomicDeriver::Mask AtomicDeriver::mask_of(const AtomSet& atoms) {
  Mask m = 0;
  for (const Atom& a : atoms) m |= Mask{1} << index_of(a);
  return m;
}

const AtomicDeriver::Saturation& AtomicDeriver::saturate(Mask s) {
  if (auto it = memo_.find(s); it != memo_.end()) return it->second;
  Saturation sat;
  sat.atoms = s;
  sat.stage.assign(64, -1);
  for (int i = 0; i < 64; ++i)
    if (s >> i & 1) sat.stage[i] = 0;
  int stage = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    ++stage;
    Mask added = 0;
    for (const auto& r : rules_) {
      if (sat.atoms >> r.conclusion & 1 || added >> r.conclusion & 1) continue;
      bool ok = true;
      for (const auto& [hyps, goal] : r.premises) {
        Mask t = s | hyps;
        bool have = t == s ? (sat.atoms >> goal & 1) != 0 : (saturate(t).atoms >> goal & 1) != 0;
        if (!have) {
          ok = false;
          break;
        }
      }
      if (ok) added |= Mask{1} << r.conclusion;
    }
    if (added != 0) {
      for (int i = 0; i < 64; ++i)
        if (added >> i & 1) sat.stage[i] = stage;
      sat.atoms |= added;
      changed = true;
    }
  }
  return memo_.emplace(s, std::move(sat)).first->second;
}

bool AtomicDeriver::derivable(const AtomSet& hypotheses, const Atom& goal) {
  Mask s = mask_of(hypotheses);
  int g = index_of(goal);
  return (saturate(s).atoms >> g & 1) != 0;
}

AtomSet AtomicDeriver::closure(const AtomSet& hypotheses) {
  Mask m = saturate(mask_of(hypotheses)).atoms;
  AtomSet out;
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (m >> i & 1) out.insert(atoms_[i]);
  return out;
}

bool derivable_atom(const Base& base, const AtomSet& hypotheses, const Atom& goal) {
  AtomicDeriver d(base);
  return d.derivable(hypotheses, goal);
}

// ---------------------------------------------------------------------------
// Extensions

namespace {

std::vector<AtomSet> subsets_up_to(const std::vector<Atom>& atoms, int max_size) {
  std::vector<AtomSet> out;
  std::size_t n = atoms.size();
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    if (std::popcount(m) > max_size) continue;
    AtomSet s;
    for (std::size_t i = 0; i < n; ++i)
      if (m >> i & 1) s.insert(atoms[i]);
    out.push_back(std::move(s));
  }
  return out;
}

void choose_premises(const std::vector<RulePremise>& candidates, std::size_t from, int remaining,
                     std::vector<RulePremise>& current, std::vector<std::vector<RulePremise>>& out) {
  out.push_back(current);
  if (remaining == 0) return;
  for (std::size_t i = from; i < candidates.size(); ++i) {
    current.push_back(candidates[i]);
    choose_premises(candidates, i + 1, remaining - 1, current, out);
    current.pop_back();
  }
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::vector<AtomicRule> rule_universe(const AtomSet& alphabet, const ExtensionBounds& bounds) {
  std::vector<Atom> atoms(alphabet.begin(), alphabet.end());
  std::vector<RulePremise> candidates;
  auto hyp_sets = subsets_up_to(atoms, bounds.level >= 2 ? bounds.max_hyps : 0);
  for (const auto& hyps : hyp_sets)
    for (const Atom& g : atoms) candidates.push_back({hyps, g});
  std::sort(candidates.begin(), candidates.end());

  std::vector<std::vector<RulePremise>> premise_lists;
  std::vector<RulePremise> current;
  choose_premises(candidates, 0, bounds.max_premises, current, premise_lists);

  std::vector<AtomicRule> out;
  for (const auto& ps : premise_lists)
    for (const Atom& c : atoms) out.emplace_back(ps, c);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ExtensionStream::ExtensionStream(Base base, const AtomSet& alphabet, const ExtensionBounds& bounds)
    : base_(std::move(base)), max_rules_(bounds.max_rules) {
  for (auto& r : rule_universe(alphabet, bounds))
    if (!base_.contains(r)) universe_.push_back(std::move(r));
}

ExtensionStream::ExtensionStream(Base base, std::vector<AtomicRule> universe, int max_rules)
    : base_(std::move(base)), max_rules_(max_rules) {
  for (auto& r : universe)
    if (!base_.contains(r)) universe_.push_back(std::move(r));
  std::sort(universe_.begin(), universe_.end());
  universe_.erase(std::unique(universe_.begin(), universe_.end()), universe_.end());
}

void ExtensionStream::reset() {
  started_ = false;
  done_ = false;
  k_ = 0;
  combo_.clear();
}

std::optional<Base> ExtensionStream::next() {
  const int n = static_cast<int>(universe_.size());
  if (done_) return std::nullopt;
  if (!started_) {
    started_ = true;
    k_ = 0;
    combo_.clear();
    return base_;
  }
  // Advance the current k-combination; move to k+1 when exhausted.
  bool advanced = false;
  if (k_ > 0) {
    int i = k_ - 1;
    while (i >= 0 && combo_[i] == n - k_ + i) --i;
    if (i >= 0) {
      ++combo_[i];
      for (int j = i + 1; j < k_; ++j) combo_[j] = combo_[j - 1] + 1;
      advanced = true;
    }
  }
  if (!advanced) {
    ++k_;
    if (k_ > max_rules_ || k_ > n) {
      done_ = true;
      return std::nullopt;
    }
    combo_.resize(k_);
    for (int j = 0; j < k_; ++j) combo_[j] = j;
  }
  std::vector<AtomicRule> rules = base_.rules();
  for (int idx : combo_) rules.push_back(universe_[idx]);
  return Base(std::move(rules));
}

std::size_t ExtensionStream::count() const {
  std::size_t total = 0;
  for (int k = 0; k <= max_rules_; ++k) total += binomial(universe_.size(), static_cast<std::size_t>(k));
  return total;
}

std::vector<Base> enumerate_extensions(const Base& base, const AtomSet& alphabet,
                                       const ExtensionBounds& bounds) {
  ExtensionStream s(base, alphabet, bounds);
  std::vector<Base> out;
  while (auto b = s.next()) out.push_back(std::move(*b));
  return out;
}

}  // namespace ptsem
