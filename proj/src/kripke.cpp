#include "ptsem/kripke.hpp"

#include <cstdint>
#include <json.hpp>
#include <unordered_map>

namespace ptsem {

namespace {

using Mask = std::uint64_t;

class Evaluator {
 public:
  Evaluator(const KripkeModel& m, const CalculusMode& mode) : m_(m), mode_(mode) {
    if (m.size() > 64) throw std::length_error("Kripke models are limited to 64 worlds");
    up_.resize(m.size());
    for (std::size_t w = 0; w < m.size(); ++w)
      for (std::size_t v = 0; v < m.size(); ++v)
        if (m.above[w][v]) up_[w] |= Mask{1} << v;
    all_ = m.size() == 64 ? ~Mask{0} : (Mask{1} << m.size()) - 1;
  }

  Mask eval(Formula f) {
    if (auto it = cache_.find(f); it != cache_.end()) return it->second;
    Mask out = 0;
    switch (f.kind()) {
      case Connective::Atom:
        out = atom_mask(Atom(f.atom_name()));
        break;
      case Connective::Bot:
        if (mode_.kind == CalculusKind::Minimal) {
          for (std::size_t w = 0; w < m_.size(); ++w)
            if (w < m_.falsum.size() && m_.falsum[w]) out |= Mask{1} << w;
        } else if (mode_.kind == CalculusKind::Absurdity) {
          out = all_;
          for (const Atom& a : mode_.alphabet) out &= atom_mask(a);
        }
        break;
      case Connective::And:
        out = eval(f.left()) & eval(f.right());
        break;
      case Connective::Or:
        out = eval(f.left()) | eval(f.right());
        break;
      case Connective::Imp: {
        Mask ok = (~eval(f.left()) | eval(f.right())) & all_;
        for (std::size_t w = 0; w < m_.size(); ++w)
          if ((up_[w] & ok) == up_[w]) out |= Mask{1} << w;
        break;
      }
    }
    cache_.emplace(f, out);
    return out;
  }

 private:
  Mask atom_mask(const Atom& a) const {
    Mask out = 0;
    for (std::size_t w = 0; w < m_.size(); ++w)
      if (m_.valuation[w].count(a)) out |= Mask{1} << w;
    return out;
  }

  const KripkeModel& m_;
  const CalculusMode& mode_;
  std::vector<Mask> up_;
  Mask all_ = 0;
  std::unordered_map<Formula, Mask, FormulaHash> cache_;
};

}  // namespace

bool forces(const KripkeModel& m, std::size_t world, Formula f, const CalculusMode& mode) {
  return (Evaluator(m, mode).eval(f) >> world & 1) != 0;
}

bool forces_rule(const KripkeModel& m, std::size_t world, const AtomicRule& r, const CalculusMode& mode) {
  return forces(m, world, r.compiled(), mode);
}

bool well_formed(const KripkeModel& m, const Base& base, const CalculusMode& mode) {
  const std::size_t n = m.size();
  if (n == 0 || m.above.size() != n) return false;
  for (const auto& row : m.above)
    if (row.size() != n) return false;
  for (std::size_t w = 0; w < n; ++w) {
    if (!m.above[w][w] || !m.above[0][w]) return false;
    for (std::size_t v = 0; v < n; ++v) {
      if (!m.above[w][v]) continue;
      if (w != v && m.above[v][w]) return false;
      for (std::size_t u = 0; u < n; ++u)
        if (m.above[v][u] && !m.above[w][u]) return false;
      for (const Atom& a : m.valuation[w])
        if (!m.valuation[v].count(a)) return false;
      if (w < m.falsum.size() && m.falsum[w] && !(v < m.falsum.size() && m.falsum[v])) return false;
    }
  }
  if (m.base_closed) {
    Evaluator ev(m, mode);
    for (const auto& r : base.rules())
      if (ev.eval(r.compiled()) != (n == 64 ? ~Mask{0} : (Mask{1} << n) - 1)) return false;
  }
  return true;
}

namespace {

/// Rooted partial orders on n worlds where i ≤ j implies i ≤ j as integers.
std::vector<std::vector<std::vector<bool>>> rooted_orders(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<std::vector<std::vector<bool>>> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << pairs.size()); ++bits) {
    std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) le[i][i] = le[0][i] = true;
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if (bits >> k & 1) le[pairs[k].first][pairs[k].second] = true;
    bool transitive = true;
    for (int a = 0; a < n && transitive; ++a)
      for (int b = 0; b < n && transitive; ++b)
        for (int c = 0; c < n && transitive; ++c)
          if (le[a][b] && le[b][c] && !le[a][c]) transitive = false;
    if (transitive) out.push_back(std::move(le));
  }
  return out;
}

class RefuteSearch {
 public:
  RefuteSearch(const Base& base, const FormulaSet& gamma, Formula phi, const CalculusMode& mode)
      : base_(base), gamma_(gamma), phi_(phi), mode_(mode) {
    AtomSet atoms = atoms_of(gamma);
    AtomSet pa = atoms_of(phi);
    atoms.insert(pa.begin(), pa.end());
    AtomSet ba = base.atoms();
    atoms.insert(ba.begin(), ba.end());
    if (mode.kind == CalculusKind::Absurdity) atoms.insert(mode.alphabet.begin(), mode.alphabet.end());
    atoms_.assign(atoms.begin(), atoms.end());
    bits_ = static_cast<int>(atoms_.size()) + (mode.kind == CalculusKind::Minimal ? 1 : 0);
    if (bits_ > 20) throw std::length_error("too many atoms for countermodel search");
  }

  std::optional<KripkeModel> run(int n) {
    for (auto& order : rooted_orders(n)) {
      order_ = &order;
      vals_.assign(n, 0);
      if (assign(0)) return model_;
    }
    return std::nullopt;
  }

 private:
  bool assign(std::size_t w) {
    const std::size_t n = order_->size();
    if (w == n) return check();
    std::uint32_t floor = 0;
    for (std::size_t v = 0; v < w; ++v)
      if ((*order_)[v][w]) floor |= vals_[v];
    std::uint32_t full = (std::uint32_t{1} << bits_) - 1;
    std::uint32_t free = full & ~floor;
    // Enumerate every superset of `floor`.
    for (std::uint32_t sub = free;; sub = (sub - 1) & free) {
      vals_[w] = floor | sub;
      if (assign(w + 1)) return true;
      if (sub == 0) break;
    }
    return false;
  }

  bool check() {
    KripkeModel m;
    const std::size_t n = order_->size();
    m.above = *order_;
    m.valuation.resize(n);
    m.base_closed = true;
    if (mode_.kind == CalculusKind::Minimal) m.falsum.assign(n, false);
    for (std::size_t w = 0; w < n; ++w) {
      for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (vals_[w] >> i & 1) m.valuation[w].insert(atoms_[i]);
      if (mode_.kind == CalculusKind::Minimal) m.falsum[w] = (vals_[w] >> atoms_.size() & 1) != 0;
    }
    Evaluator ev(m, mode_);
    Mask all = (Mask{1} << n) - 1;
    for (const auto& r : base_.rules())
      if (ev.eval(r.compiled()) != all) return false;
    for (Formula g : gamma_)
      if (!(ev.eval(g) & 1)) return false;
    if (ev.eval(phi_) & 1) return false;
    model_ = std::move(m);
    return true;
  }

  const Base& base_;
  const FormulaSet& gamma_;
  Formula phi_;
  const CalculusMode& mode_;
  std::vector<Atom> atoms_;
  int bits_ = 0;
  const std::vector<std::vector<bool>>* order_ = nullptr;
  std::vector<std::uint32_t> vals_;
  KripkeModel model_;
};

}  // namespace

std::optional<KripkeModel> refute(const Base& base, const FormulaSet& gamma, Formula phi, int bound,
                                  const CalculusMode& mode) {
  RefuteSearch search(base, gamma, phi, mode);
  for (int n = 1; n <= bound; ++n)
    if (auto m = search.run(n)) return m;
  return std::nullopt;
}

std::string write_countermodel(const KripkeModel& m) {
  nlohmann::ordered_json j;
  j["worlds"] = m.size();
  auto order = nlohmann::ordered_json::array();
  for (std::size_t w = 0; w < m.size(); ++w)
    for (std::size_t v = 0; v < m.size(); ++v)
      if (w != v && m.above[w][v]) order.push_back({w, v});
  j["order"] = order;
  auto val = nlohmann::ordered_json::array();
  for (const auto& s : m.valuation) {
    auto names = nlohmann::ordered_json::array();
    for (const Atom& a : s) names.push_back(a.name());
    val.push_back(names);
  }
  j["valuation"] = val;
  if (!m.falsum.empty()) {
    auto f = nlohmann::ordered_json::array();
    for (bool b : m.falsum) f.push_back(b);
    j["falsum"] = f;
  }
  j["base_closed"] = m.base_closed;
  return j.dump(2) + "\n";
}

KripkeModel read_countermodel(std::string_view text) {
  auto j = nlohmann::json::parse(text);
  KripkeModel m;
  std::size_t n = j.at("worlds").get<std::size_t>();
  m.above.assign(n, std::vector<bool>(n, false));
  for (std::size_t w = 0; w < n; ++w) m.above[w][w] = true;
  for (const auto& p : j.at("order")) m.above.at(p.at(0).get<std::size_t>()).at(p.at(1).get<std::size_t>()) = true;
  for (const auto& names : j.at("valuation")) {
    AtomSet s;
    for (const auto& a : names) s.insert(Atom(a.get<std::string>()));
    m.valuation.push_back(std::move(s));
  }
  if (m.valuation.size() != n) throw std::invalid_argument("valuation does not cover every world");
  if (j.contains("falsum"))
    for (const auto& b : j["falsum"]) m.falsum.push_back(b.get<bool>());
  m.base_closed = j.value("base_closed", false);
  return m;
}

}  // namespace ptsem
