// Command-line front end. Exit codes: 0 positive, 1 negative, 2 input error,
// 3 budget exceeded.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "ptsem/coherence.hpp"
#include "ptsem/proof_io.hpp"
#include "ptsem/prover.hpp"
#include "ptsem/reduction.hpp"
#include "ptsem/semantics.hpp"

using namespace ptsem;

namespace {

enum Exit { kYes = 0, kNo = 1, kInput = 2, kBudget = 3 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

Base load_base(const std::string& path) {
  if (path.empty()) return Base();
  try {
    return parse_base(read_file(path));
  } catch (const BaseParseError& e) {
    throw InputError(path + ":" + std::to_string(e.line()) + ": " + e.what());
  }
}

AtomSet parse_atom_list(const std::string& text) {
  AtomSet out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    if (!Atom::valid_name(item)) throw InputError("invalid atom '" + item + "'");
    out.insert(Atom(item));
  }
  return out;
}

std::string show_atoms(const AtomSet& atoms) {
  std::string out = "{";
  for (const Atom& a : atoms) out += (out.size() > 1 ? ", " : "") + a.name();
  return out + "}";
}

std::string show_base(const Base& b) {
  std::string out = "{";
  for (const auto& r : b.rules()) out += (out.size() > 1 ? "; " : "") + print_rule(r);
  return out + "}";
}

/// Options shared by `support`, `entail` and `sweep`.
struct SemanticsFlags {
  std::string mode = "ptv";
  std::string alphabet;
  int reserve = -1;
  int max_rules = 1;
  int max_premises = 1;
  int max_hyps = 1;
  std::size_t budget = 0;

  void add_to(CLI::App* cmd, bool bounds = true) {
    cmd->add_option("--mode", mode, "ptv or sandqvist")->check(CLI::IsMember({"ptv", "sandqvist"}));
    cmd->add_option("--alphabet", alphabet, "working alphabet, comma separated");
    cmd->add_option("--reserve", reserve, "fresh atoms added to the alphabet")->check(CLI::NonNegativeNumber);
    if (bounds) {
      cmd->add_option("--max-rules", max_rules, "rules added per extension")->check(CLI::NonNegativeNumber);
      cmd->add_option("--max-premises", max_premises, "premises per added rule")->check(CLI::NonNegativeNumber);
      cmd->add_option("--max-hyps", max_hyps, "hypotheses per premise (sandqvist)")->check(CLI::NonNegativeNumber);
    }
    cmd->add_option("--budget", budget, "prover node budget per query");
  }

  /// An explicit alphabet is used as given unless a reserve is also asked for.
  SemanticsConfig config(const AtomSet& instance_atoms) const {
    SemanticsConfig cfg;
    cfg.mode = mode_from_name(mode);
    if (!alphabet.empty())
      cfg.alphabet = working_alphabet(parse_atom_list(alphabet), std::max(reserve, 0));
    else
      cfg.alphabet = working_alphabet(instance_atoms, reserve < 0 ? 1 : reserve);
    if (budget) cfg.budget = budget;
    return cfg;
  }

  ExtensionBounds bounds() const {
    return {max_rules, max_premises, mode == "ptv" ? 1 : 2, max_hyps};
  }
};

AtomSet instance_atoms(const Base& b, const Sequent& s) {
  AtomSet a = b.atoms();
  for (const Atom& x : atoms_of(s)) a.insert(x);
  return a;
}

// ---------------------------------------------------------------------------

int cmd_parse(const std::string& text) {
  std::cout << print_formula(parse_formula(text)) << "\n";
  return kYes;
}

struct ProveFlags {
  std::string base, calculus = "nj", alphabet, witness, countermodel, dot;
  int bound = 4;
  std::size_t budget = 0;
  bool show = false;
};

CalculusMode calculus_from(const std::string& name, const AtomSet& alphabet) {
  if (name == "nj") return CalculusMode::intuitionistic();
  if (name == "minimal") return CalculusMode::minimal();
  return CalculusMode::absurdity(alphabet);
}

int cmd_prove(const std::string& sequent, const ProveFlags& f) {
  Base b = load_base(f.base);
  Sequent s = parse_sequent(sequent);
  AtomSet alphabet = f.alphabet.empty() ? instance_atoms(b, s) : parse_atom_list(f.alphabet);
  ProveOptions opt;
  opt.want_witness = !f.witness.empty() || !f.dot.empty() || f.show;
  opt.want_countermodel = !f.countermodel.empty() || f.show;
  opt.countermodel_bound = f.bound;
  if (f.budget) opt.budget = f.budget;
  ProverVerdict v = proves(b, s.context, s.extract, calculus_from(f.calculus, alphabet), opt);
  std::cout << (v.decided ? "provable" : "not provable") << ": " << print_sequent(s) << "\n";
  if (v.witness) {
    if (!f.witness.empty()) write_file(f.witness, write_proof(*v.witness));
    if (!f.dot.empty()) write_file(f.dot, proof_to_dot(*v.witness));
    if (f.show) std::cout << proof_to_text(*v.witness);
  }
  if (!v.decided && opt.want_countermodel) {
    if (v.countermodel) {
      std::cout << "countermodel: " << v.countermodel->size() << " world(s)\n";
      if (!f.countermodel.empty()) write_file(f.countermodel, write_countermodel(*v.countermodel));
      if (f.show) std::cout << write_countermodel(*v.countermodel);
    } else {
      std::cout << "no countermodel within " << f.bound << " worlds\n";
    }
  }
  return v.decided ? kYes : kNo;
}

struct NormalizeFlags {
  std::string file, output, dot;
  bool trace = false, assert_canonical = false;
  std::size_t max_steps = kDefaultReductionSteps;
};

int cmd_normalize(const NormalizeFlags& f) {
  Argument a = [&] {
    try {
      return read_proof(read_file(f.file));
    } catch (const ProofFormatError& e) {
      throw InputError(f.file + ": " + e.what());
    }
  }();
  open_assumptions(a);  // rejects bad bindings
  std::vector<std::string> trace;
  Argument n = normalize(a, f.max_steps, &trace);
  if (f.output.empty())
    std::cout << write_proof(n);
  else
    write_file(f.output, write_proof(n));
  if (!f.dot.empty()) write_file(f.dot, proof_to_dot(n));
  if (f.trace)
    for (const auto& line : trace) std::cerr << line << "\n";
  if (f.assert_canonical && !is_canonical(n)) {
    std::cerr << "normal form is not canonical\n";
    return kNo;
  }
  return kYes;
}

int cmd_support(const std::string& base_file, const std::string& sequent, const SemanticsFlags& flags,
                const std::string& witness_file, bool clausal, bool entail) {
  Base b = entail ? Base() : load_base(base_file);
  Sequent s = parse_sequent(sequent);
  SemanticsConfig cfg = flags.config(instance_atoms(b, s));
  Semantics sem(cfg);
  bool yes = sem.supports(b, s.context, s.extract);
  std::cout << (yes ? "supported" : "not supported") << ": " << print_sequent(s) << "  [" << mode_name(cfg.mode)
            << ", alphabet " << show_atoms(cfg.alphabet) << "]\n";
  if (yes && !witness_file.empty()) {
    auto w = sem.witness(b, s.context, s.extract);
    if (w) write_file(witness_file, write_proof(*w));
  }
  if (clausal) {
    ClausalEvaluator ev(sem, flags.bounds());
    ClauseVerdict v = ev.evaluate(b, s.context, s.extract);
    std::cout << "clausal: " << verdict_name(v.kind);
    if (v.counterexample) std::cout << " at C = " << show_base(*v.counterexample);
    if (v.atom) std::cout << ", atom " << v.atom->name();
    if (!v.detail.empty()) std::cout << " (" << v.detail << ")";
    std::cout << "\n";
  }
  return yes ? kYes : kNo;
}

struct SweepFlags {
  SemanticsFlags sem;
  std::string atoms = "p";
  int base_rules = 1, base_premises = 1, base_hyps = 1;
  int depth = 2, context = 1;
  bool no_bot = false, no_witnesses = false, no_clausal = false, no_monotonicity = false, quiet = false;
  std::string fault = "none", emit;
  unsigned jobs = 1;
};

int cmd_sweep(const SweepFlags& f) {
  CoherenceConfig cfg;
  cfg.atoms = parse_atom_list(f.atoms);
  if (cfg.atoms.empty()) throw InputError("--atoms must name at least one atom");
  cfg.semantics = f.sem.config(cfg.atoms);
  int level = cfg.semantics.mode == SemanticsMode::PtV ? 1 : 2;
  cfg.base_bounds = {f.base_rules, f.base_premises, level, f.base_hyps};
  cfg.max_depth = f.depth;
  cfg.max_context = f.context;
  cfg.with_bot = !f.no_bot;
  cfg.clause_bounds = f.sem.bounds();
  cfg.check_clausal = !f.no_clausal;
  cfg.check_witnesses = !f.no_witnesses;
  cfg.check_monotonicity = !f.no_monotonicity;
  cfg.fault = f.fault == "atom-clause"           ? Fault::AtomClause
              : f.fault == "disjunction-clause" ? Fault::DisjunctionClause
                                                : Fault::None;
  cfg.jobs = std::max(1u, f.jobs);
  CoherenceReport r = check_clause_coherence(cfg);
  std::string text = r.render();
  if (f.quiet) text = text.substr(text.find("bases | count"));
  std::cout << text;
  if (!f.emit.empty()) {
    std::size_t n = write_counterexamples(r, f.emit);
    std::cerr << n << " counterexample(s) written to " << f.emit << "\n";
  }
  return r.ok() ? kYes : kNo;
}

// ---------------------------------------------------------------------------
// Gallery

bool uses(const Argument& a, RuleId r) {
  if (a.rule() == r) return true;
  for (const auto& p : a.premises())
    if (uses(p, r)) return true;
  return false;
}

std::string indent(const std::string& text, const std::string& pad = "    ") {
  std::string out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out += pad + line + "\n";
  return out;
}

bool gallery_conjunction_detour(std::ostream& out) {
  Formula p = parse_formula("p"), q = parse_formula("q");
  Argument d = Argument::and_e1(Argument::and_i(Argument::assume(p), Argument::assume(q)));
  std::vector<std::string> trace;
  Argument n = normalize(d, kDefaultReductionSteps, &trace);
  out << "  derivation:\n" << indent(proof_to_text(d));
  out << "  normal form:\n" << indent(proof_to_text(n));
  for (const auto& t : trace) out << "  " << t << "\n";
  bool ok = n == Argument::assume(p) && trace.size() == 1;
  out << "  reduces to the left subproof in one step: " << (ok ? "yes" : "NO") << "\n";
  return ok;
}

bool gallery_disjunctive_syllogism(std::ostream& out) {
  Sequent s = parse_sequent("p | q, ~p : q");
  AtomSet alphabet = working_alphabet(atoms_of(s), 1);
  bool ok = true;
  out << "  sequent: " << print_sequent(s) << "\n";

  Semantics ptv({SemanticsMode::PtV, alphabet});
  bool sp = ptv.supports(Base(), s.context, s.extract);
  out << "  ptv: " << (sp ? "supported" : "not supported") << "\n";
  ProveOptions opt;
  opt.want_countermodel = true;
  ProverVerdict minimal = proves(Base(), s.context, s.extract, CalculusMode::minimal(), opt);
  out << "  derivable without falsum elimination: " << (minimal.decided ? "yes" : "no");
  if (minimal.countermodel) out << " (minimal-logic countermodel, " << minimal.countermodel->size() << " world)";
  out << "\n";
  auto pw = ptv.witness(Base(), s.context, s.extract);
  ok = ok && sp && pw && !minimal.decided;
  if (pw) {
    Argument n = normalize(*pw);
    out << "  ptv witness (normalized):\n" << indent(proof_to_text(n));
    out << "  ptv witness uses BotE: " << (uses(n, RuleId::BotE) ? "yes" : "no") << "\n";
  }

  Semantics sq({SemanticsMode::Sandqvist, alphabet});
  bool ss = sq.supports(Base(), s.context, s.extract);
  out << "  sandqvist " << show_atoms(alphabet) << ": " << (ss ? "supported" : "not supported") << "\n";
  auto sw = sq.witness(Base(), s.context, s.extract);
  ok = ok && ss && sw;
  if (sw) {
    Argument n = normalize(*sw);
    bool shape = n.rule() == RuleId::OrE && uses(n.premises()[1], RuleId::BotE);
    out << "  sandqvist witness (normalized):\n" << indent(proof_to_text(n));
    out << "  OrE at the root with BotE in the left branch: " << (shape ? "yes" : "no") << "\n";
    ok = ok && shape && check_derivation(n, Base(), CalculusMode::absurdity(alphabet));
  }
  return ok;
}

bool gallery_efq_argument(std::ostream& out) {
  Sequent s = parse_sequent("p, ~p : bot");
  auto w = derivation_for(Base(), s.context, s.extract, CalculusMode::minimal());
  out << "  sequent: " << print_sequent(s) << "\n";
  out << "  derivable: " << (w ? "yes" : "no") << "\n";
  if (w) out << indent(proof_to_text(*w));
  Base b = parse_base("=> p\n");
  bool ok = w.has_value();
  for (const AtomSet& alphabet : {AtomSet{Atom("p")}, working_alphabet({Atom("p")}, 1)}) {
    Semantics sq({SemanticsMode::Sandqvist, alphabet});
    bool bot = sq.supports(b, {}, Formula::bot());
    bool want = true;
    for (const Atom& a : alphabet) want = want && derivable_atom(b, {}, a);
    out << "  base {=> p}, alphabet " << show_atoms(alphabet) << ": bot " << (bot ? "supported" : "not supported")
        << " (every alphabet atom derivable: " << (want ? "yes" : "no") << ")\n";
    ok = ok && bot == want;
  }
  return ok;
}

bool gallery_bot_implies_bot(std::ostream& out) {
  Formula bot = Formula::bot();
  Argument whole = Argument::imp_i(bot, "u1", Argument::assume(bot, "u1"));
  Argument sub = Argument::assume(bot);
  SemanticsConfig cfg{SemanticsMode::PtV, working_alphabet({}, 1)};
  ExtensionBounds bounds{1, 1, 1, 1};
  bool a = satisfies(whole, Base(), {}, Formula::imp(bot, bot), cfg, bounds);
  bool b = satisfies(sub, Base(), {}, bot, cfg, bounds);
  bool c = satisfies(sub, Base(), {bot}, bot, cfg, bounds);
  out << "  derivation:\n" << indent(proof_to_text(whole));
  out << "  valid for : bot -> bot: " << (a ? "yes" : "no") << "\n";
  out << "  its subderivation valid for : bot: " << (b ? "yes" : "no") << "\n";
  out << "  its subderivation valid for bot : bot: " << (c ? "yes" : "no") << "\n";
  return a && !b && c;
}

int cmd_examples(const std::string& only) {
  struct Item {
    const char* name;
    bool (*run)(std::ostream&);
  };
  const Item items[] = {
      {"conjunction-detour", gallery_conjunction_detour},
      {"disjunctive-syllogism", gallery_disjunctive_syllogism},
      {"efq-argument", gallery_efq_argument},
      {"bot-implies-bot", gallery_bot_implies_bot},
  };
  bool all = true, found = false;
  for (const auto& it : items) {
    if (!only.empty() && only != it.name) continue;
    found = true;
    std::cout << "== " << it.name << "\n";
    bool ok = it.run(std::cout);
    std::cout << "  result: " << (ok ? "as expected" : "UNEXPECTED") << "\n";
    all = all && ok;
  }
  if (!found) throw InputError("unknown gallery item '" + only + "'");
  return all ? kYes : kNo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proof-theoretic semantics workbench for intuitionistic propositional logic"};
  app.require_subcommand(1);

  std::string text;
  auto* parse = app.add_subcommand("parse", "parse and pretty-print a formula");
  parse->add_option("formula", text)->required();

  ProveFlags pf;
  std::string sequent;
  auto* prove = app.add_subcommand("prove", "decide Γ ⊢_B φ and emit a certificate");
  prove->add_option("sequent", sequent, "\"f1, f2 : g\"")->required();
  prove->add_option("--base", pf.base, "base file");
  prove->add_option("--calculus", pf.calculus, "nj, minimal or absurdity")
      ->check(CLI::IsMember({"nj", "minimal", "absurdity"}));
  prove->add_option("--alphabet", pf.alphabet, "alphabet for the absurdity calculus");
  prove->add_option("--witness", pf.witness, "write the derivation as JSON");
  prove->add_option("--countermodel", pf.countermodel, "write the countermodel as JSON");
  prove->add_option("--dot", pf.dot, "write the derivation as Graphviz");
  prove->add_option("--bound", pf.bound, "largest countermodel searched")->check(CLI::PositiveNumber);
  prove->add_option("--budget", pf.budget, "search node budget");
  prove->add_flag("--show", pf.show, "print the certificate");

  NormalizeFlags nf;
  auto* norm = app.add_subcommand("normalize", "reduce a proof file to normal form");
  norm->add_option("proof", nf.file)->required();
  norm->add_option("-o,--output", nf.output, "write the normal form here instead of stdout");
  norm->add_option("--dot", nf.dot, "write the normal form as Graphviz");
  norm->add_option("--max-steps", nf.max_steps, "reduction step budget");
  norm->add_flag("--trace", nf.trace, "print each step to stderr");
  norm->add_flag("--assert-canonical", nf.assert_canonical, "fail unless the result has no detours");

  SemanticsFlags sf;
  std::string base_file, witness_file;
  bool clausal = false;
  auto* support = app.add_subcommand("support", "decide Γ ⊩_B φ");
  support->add_option("sequent", sequent)->required();
  support->add_option("--base", base_file, "base file");
  support->add_option("--witness", witness_file, "write a witness argument as JSON");
  support->add_flag("--clausal", clausal, "also evaluate the clauses over bounded extensions");
  sf.add_to(support);

  auto* entail = app.add_subcommand("entail", "decide Γ ⊩ φ (support in every base)");
  entail->add_option("sequent", sequent)->required();
  entail->add_option("--witness", witness_file, "write a witness argument as JSON");
  entail->add_flag("--clausal", clausal, "also evaluate the clauses over bounded extensions");
  sf.add_to(entail);

  SweepFlags wf;
  auto* sweep = app.add_subcommand("sweep", "check support against the clauses over small bases and sequents");
  wf.sem.add_to(sweep);
  sweep->add_option("--atoms", wf.atoms, "atoms of the swept bases and formulas");
  sweep->add_option("--base-rules", wf.base_rules, "rules per swept base")->check(CLI::NonNegativeNumber);
  sweep->add_option("--base-premises", wf.base_premises, "premises per rule of swept bases")
      ->check(CLI::NonNegativeNumber);
  sweep->add_option("--base-hyps", wf.base_hyps, "hypotheses per premise of swept bases")
      ->check(CLI::NonNegativeNumber);
  sweep->add_option("--depth", wf.depth, "formula depth")->check(CLI::PositiveNumber);
  sweep->add_option("--context", wf.context, "context size")->check(CLI::NonNegativeNumber);
  sweep->add_flag("--no-bot", wf.no_bot, "leave bot out of the formulas");
  sweep->add_flag("--no-witnesses", wf.no_witnesses, "skip the witness satisfaction check");
  sweep->add_flag("--no-clausal", wf.no_clausal, "skip the clause comparison");
  sweep->add_flag("--no-monotonicity", wf.no_monotonicity, "skip the monotonicity check");
  sweep->add_option("--inject-fault", wf.fault, "deliberately break a clause")
      ->check(CLI::IsMember({"none", "atom-clause", "disjunction-clause"}));
  sweep->add_option("--emit-counterexamples", wf.emit, "directory for one file set per violation");
  sweep->add_option("--jobs", wf.jobs, "worker threads");
  sweep->add_flag("--quiet", wf.quiet, "print only the summary counts");

  std::string item;
  auto* examples = app.add_subcommand("examples", "run the built-in gallery");
  examples->add_option("name", item, "run only this item");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (*parse) return cmd_parse(text);
    if (*prove) return cmd_prove(sequent, pf);
    if (*norm) return cmd_normalize(nf);
    if (*support) return cmd_support(base_file, sequent, sf, witness_file, clausal, false);
    if (*entail) return cmd_support("", sequent, sf, witness_file, clausal, true);
    if (*sweep) return cmd_sweep(wf);
    if (*examples) return cmd_examples(item);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const ReductionBudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const ModeMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const MalformedArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kInput;
}
