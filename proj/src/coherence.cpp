#include "ptsem/coherence.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "ptsem/proof_io.hpp"

namespace ptsem {

std::vector<Sequent> enumerate_sequents(const AtomSet& atoms, bool with_bot, int max_depth, int max_context) {
  std::vector<Formula> fs = enumerate_formulas(atoms, with_bot, max_depth);
  std::vector<FormulaSet> contexts{{}};
  // Contexts as k-subsets of fs, k ≤ max_context, in lexicographic index order.
  std::vector<std::size_t> idx;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (static_cast<int>(idx.size()) == max_context) return;
    for (std::size_t i = start; i < fs.size(); ++i) {
      idx.push_back(i);
      FormulaSet c;
      for (std::size_t k : idx) c.insert(fs[k]);
      contexts.push_back(std::move(c));
      rec(i + 1);
      idx.pop_back();
    }
  };
  rec(0);
  std::vector<Sequent> out;
  out.reserve(contexts.size() * fs.size());
  for (const auto& c : contexts)
    for (Formula f : fs) out.push_back({c, f});
  return out;
}

namespace {

struct BaseResult {
  std::vector<bool> supported;
  std::size_t holds = 0, fails = 0, inconclusive = 0, witnesses = 0;
  std::vector<Violation> violations;
};

BaseResult sweep_base(const CoherenceConfig& cfg, const Base& b, const std::vector<Sequent>& sequents) {
  BaseResult r;
  Semantics sem(cfg.semantics);
  ClausalEvaluator clausal(sem, cfg.clause_bounds, cfg.fault);
  SatisfactionChecker sat(sem, cfg.clause_bounds);
  r.supported.resize(sequents.size());
  for (std::size_t i = 0; i < sequents.size(); ++i) {
    const Sequent& s = sequents[i];
    bool sup = sem.supports(b, s.context, s.extract);
    r.supported[i] = sup;
    if (cfg.check_clausal) {
      ClauseVerdict v = clausal.evaluate(b, s.context, s.extract);
      switch (v.kind) {
        case ClauseVerdict::Kind::Holds: ++r.holds; break;
        case ClauseVerdict::Kind::Fails: ++r.fails; break;
        case ClauseVerdict::Kind::Inconclusive: ++r.inconclusive; break;
      }
      if (v.decisive() && (v.kind == ClauseVerdict::Kind::Holds) != sup) {
        Violation viol{"clausal-vs-support", b, s,
                       std::string("clausal ") + verdict_name(v.kind) + ", support " + (sup ? "true" : "false") +
                           ": " + v.detail,
                       v.counterexample, std::nullopt};
        r.violations.push_back(std::move(viol));
      }
    }
    if (cfg.check_witnesses && sup) {
      ++r.witnesses;
      auto w = sem.witness(b, s.context, s.extract);
      if (!w) {
        r.violations.push_back({"proof-existence", b, s, "no witness returned", std::nullopt, std::nullopt});
      } else if (!sat.satisfies(*w, b, s.context, s.extract)) {
        r.violations.push_back({"proof-existence", b, s, "witness does not satisfy: " + sat.reason(), std::nullopt, w});
      }
    }
  }
  return r;
}

std::string describe_base(const Base& b) {
  std::string out = "{";
  for (const auto& r : b.rules()) {
    if (out.size() > 1) out += "; ";
    out += print_rule(r);
  }
  return out + "}";
}

}  // namespace

CoherenceReport check_clause_coherence(const CoherenceConfig& cfg,
                                       const std::function<void(std::size_t, std::size_t)>& progress) {
  std::vector<Base> bases = enumerate_extensions(Base(), cfg.atoms, cfg.base_bounds);
  std::vector<Sequent> sequents = enumerate_sequents(cfg.atoms, cfg.with_bot, cfg.max_depth, cfg.max_context);
  std::vector<BaseResult> results(bases.size());

  std::mutex mu;
  std::size_t next = 0, done = 0;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard lock(mu);
        if (next == bases.size()) return;
        i = next++;
      }
      results[i] = sweep_base(cfg, bases[i], sequents);
      std::lock_guard lock(mu);
      ++done;
      if (progress) progress(done, bases.size());
    }
  };
  unsigned jobs = std::max(1u, cfg.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  CoherenceReport rep;
  rep.bases = bases.size();
  rep.sequents = sequents.size();
  rep.instances = bases.size() * sequents.size();
  for (auto& r : results) {
    rep.supported += static_cast<std::size_t>(std::count(r.supported.begin(), r.supported.end(), true));
    rep.clausal_holds += r.holds;
    rep.clausal_fails += r.fails;
    rep.clausal_inconclusive += r.inconclusive;
    rep.witnesses_checked += r.witnesses;
    for (auto& v : r.violations) rep.violations.push_back(std::move(v));
  }
  if (cfg.check_monotonicity) {
    for (std::size_t i = 0; i < bases.size(); ++i) {
      for (std::size_t j = 0; j < bases.size(); ++j) {
        if (i == j || !bases[i].is_subset_of(bases[j])) continue;
        ++rep.monotonicity_pairs;
        for (std::size_t k = 0; k < sequents.size(); ++k) {
          if (results[i].supported[k] && !results[j].supported[k])
            rep.violations.push_back({"monotonicity", bases[i], sequents[k],
                                      "supported in the base but not in its extension", bases[j], std::nullopt});
        }
      }
    }
  }
  return rep;
}

namespace {

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

std::string CoherenceReport::render() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    const auto& v = violations[i];
    out << "B=" << describe_base(v.base) << " " << print_sequent(v.sequent) << " | " << v.kind << " | " << one_line(v.detail)
        << " | " << (v.witness ? "cx" + std::to_string(i + 1) + ".proof" : "-") << "\n";
  }
  out << "bases | count | " << bases << " | -\n";
  out << "sequents | count | " << sequents << " | -\n";
  out << "instances | count | " << instances << " | -\n";
  out << "supported | count | " << supported << " | -\n";
  out << "clausal | holds | " << clausal_holds << " | -\n";
  out << "clausal | fails | " << clausal_fails << " | -\n";
  out << "clausal | inconclusive | " << clausal_inconclusive << " | -\n";
  out << "witnesses | checked | " << witnesses_checked << " | -\n";
  out << "monotonicity | pairs | " << monotonicity_pairs << " | -\n";
  out << "violations | count | " << violations.size() << " | -\n";
  return out.str();
}

std::size_t write_counterexamples(const CoherenceReport& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < r.violations.size(); ++i) {
    const auto& v = r.violations[i];
    std::string stem = dir + "/cx" + std::to_string(i + 1);
    std::ofstream(stem + ".base") << "# " << v.kind << ": " << one_line(v.detail) << "\n" << print_base(v.base);
    std::ofstream(stem + ".sequent") << print_sequent(v.sequent) << "\n";
    if (v.other_base) std::ofstream(stem + ".extension.base") << print_base(*v.other_base);
    if (v.witness) std::ofstream(stem + ".proof") << write_proof(*v.witness);
  }
  return r.violations.size();
}

}  // namespace ptsem
