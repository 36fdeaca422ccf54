#include "ptsem/formula.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <unordered_map>

namespace ptsem {

Atom::Atom(std::string name) : name_(std::move(name)) {
  if (!valid_name(name_)) throw std::invalid_argument("invalid atom name '" + name_ + "'");
}

bool Atom::valid_name(std::string_view name) {
  if (name.empty() || !std::islower(static_cast<unsigned char>(name[0]))) return false;
  if (name == "bot") return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

namespace {

struct InternKey {
  Connective kind;
  std::string name;
  const FormulaNode* left;
  const FormulaNode* right;
  bool operator==(const InternKey&) const = default;
};

struct InternKeyHash {
  std::size_t operator()(const InternKey& k) const {
    std::size_t h = std::hash<int>{}(static_cast<int>(k.kind));
    h = h * 1000003u ^ std::hash<std::string>{}(k.name);
    h = h * 1000003u ^ std::hash<const void*>{}(k.left);
    h = h * 1000003u ^ std::hash<const void*>{}(k.right);
    return h;
  }
};

class InternTable {
 public:
  const FormulaNode* get(Connective kind, std::string name, const FormulaNode* l,
                         const FormulaNode* r) {
    std::lock_guard lock(mu_);
    InternKey key{kind, std::move(name), l, r};
    auto it = table_.find(key);
    if (it != table_.end()) return it->second.get();
    auto node = std::make_unique<FormulaNode>();
    node->kind = kind;
    node->name = key.name;
    node->left = l;
    node->right = r;
    if (l != nullptr) {
      node->depth = 1 + std::max(l->depth, r->depth);
      node->size = 1 + l->size + r->size;
    }
    const FormulaNode* raw = node.get();
    table_.emplace(std::move(key), std::move(node));
    return raw;
  }

 private:
  std::mutex mu_;
  std::unordered_map<InternKey, std::unique_ptr<FormulaNode>, InternKeyHash> table_;
};

InternTable& interns() {
  static InternTable table;
  return table;
}

}  // namespace

Formula Formula::atom(const Atom& a) {
  return Formula(interns().get(Connective::Atom, a.name(), nullptr, nullptr));
}
Formula Formula::bot() {
  static const FormulaNode* node = interns().get(Connective::Bot, "", nullptr, nullptr);
  return Formula(node);
}
Formula Formula::conj(Formula l, Formula r) {
  return Formula(interns().get(Connective::And, "", l.node_, r.node_));
}
Formula Formula::disj(Formula l, Formula r) {
  return Formula(interns().get(Connective::Or, "", l.node_, r.node_));
}
Formula Formula::imp(Formula l, Formula r) {
  return Formula(interns().get(Connective::Imp, "", l.node_, r.node_));
}

Connective Formula::kind() const { return node_->kind; }
bool Formula::is_negation() const { return kind() == Connective::Imp && right().is_bot(); }
const std::string& Formula::atom_name() const { return node_->name; }
Formula Formula::left() const { return Formula(node_->left); }
Formula Formula::right() const { return Formula(node_->right); }
int Formula::depth() const { return node_->depth; }
std::size_t Formula::size() const { return node_->size; }

std::strong_ordering operator<=>(Formula a, Formula b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (a.kind() != b.kind()) return a.kind() <=> b.kind();
  switch (a.kind()) {
    case Connective::Atom:
      return a.atom_name() <=> b.atom_name();
    case Connective::Bot:
      return std::strong_ordering::equal;
    default:
      if (auto c = a.left() <=> b.left(); c != 0) return c;
      return a.right() <=> b.right();
  }
}

ParseError::ParseError(const std::string& what, std::size_t offset)
    : std::runtime_error("syntax error at offset " + std::to_string(offset) + ": " + what),
      offset_(offset) {}

namespace {

enum class Tok { Ident, Bot, And, Or, Arrow, Not, LParen, RParen, Comma, Colon, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;  // 0-based
};

std::string describe(const Token& t) {
  return t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
}

class Lexer {
 public:
  explicit Lexer(std::string_view s) : src_(s) {}

  std::vector<Token> run(bool allow_sequent) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < src_.size()) {
      char c = src_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
          ++j;
        std::string word(src_.substr(i, j - i));
        if (word == "bot") {
          out.push_back({Tok::Bot, word, i});
        } else if (Atom::valid_name(word)) {
          out.push_back({Tok::Ident, word, i});
        } else {
          throw ParseError("unknown token '" + word + "'", i + 1);
        }
        i = j;
        continue;
      }
      switch (c) {
        case '&': out.push_back({Tok::And, "&", i}); ++i; continue;
        case '|': out.push_back({Tok::Or, "|", i}); ++i; continue;
        case '~': out.push_back({Tok::Not, "~", i}); ++i; continue;
        case '(': out.push_back({Tok::LParen, "(", i}); ++i; continue;
        case ')': out.push_back({Tok::RParen, ")", i}); ++i; continue;
        case '-':
          if (i + 1 < src_.size() && src_[i + 1] == '>') {
            out.push_back({Tok::Arrow, "->", i});
            i += 2;
            continue;
          }
          break;
        case ',':
          if (allow_sequent) { out.push_back({Tok::Comma, ",", i}); ++i; continue; }
          break;
        case ':':
          if (allow_sequent) { out.push_back({Tok::Colon, ":", i}); ++i; continue; }
          break;
        default:
          break;
      }
      throw ParseError(std::string("unknown token '") + c + "'", i + 1);
    }
    out.push_back({Tok::End, "", src_.size()});
    return out;
  }

 private:
  std::string_view src_;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula formula() { return implication(); }

  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_++]; }
  void expect(Tok kind, const char* what) {
    if (peek().kind != kind)
      throw ParseError(std::string("expected ") + what + ", found " + describe(peek()),
                       peek().pos + 1);
    ++pos_;
  }

 private:
  Formula implication() {
    Formula lhs = disjunction();
    if (peek().kind == Tok::Arrow) {
      next();
      return Formula::imp(lhs, implication());
    }
    return lhs;
  }
  Formula disjunction() {
    Formula lhs = conjunction();
    while (peek().kind == Tok::Or) {
      next();
      lhs = Formula::disj(lhs, conjunction());
    }
    return lhs;
  }
  Formula conjunction() {
    Formula lhs = unary();
    while (peek().kind == Tok::And) {
      next();
      lhs = Formula::conj(lhs, unary());
    }
    return lhs;
  }
  Formula unary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Not:
        next();
        return Formula::neg(unary());
      case Tok::Ident:
        next();
        return Formula::atom(t.text);
      case Tok::Bot:
        next();
        return Formula::bot();
      case Tok::LParen: {
        next();
        Formula f = implication();
        expect(Tok::RParen, "')'");
        return f;
      }
      default:
        throw ParseError("expected a formula, found " + describe(t), t.pos + 1);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

int precedence(Formula f) {
  switch (f.kind()) {
    case Connective::Imp:
      return f.is_negation() ? 4 : 1;
    case Connective::Or: return 2;
    case Connective::And: return 3;
    default: return 5;
  }
}

void print_into(Formula f, std::string& out);

void print_operand(Formula f, int min_prec, std::string& out) {
  if (precedence(f) < min_prec) {
    out += '(';
    print_into(f, out);
    out += ')';
  } else {
    print_into(f, out);
  }
}

void print_into(Formula f, std::string& out) {
  switch (f.kind()) {
    case Connective::Atom:
      out += f.atom_name();
      return;
    case Connective::Bot:
      out += "bot";
      return;
    case Connective::And:
      print_operand(f.left(), 3, out);
      out += " & ";
      print_operand(f.right(), 4, out);
      return;
    case Connective::Or:
      print_operand(f.left(), 2, out);
      out += " | ";
      print_operand(f.right(), 3, out);
      return;
    case Connective::Imp:
      if (f.is_negation()) {
        out += '~';
        print_operand(f.left(), 4, out);
        return;
      }
      print_operand(f.left(), 2, out);
      out += " -> ";
      print_operand(f.right(), 1, out);
      return;
  }
}

void collect_atoms(Formula f, AtomSet& out) {
  switch (f.kind()) {
    case Connective::Atom: out.insert(Atom(f.atom_name())); return;
    case Connective::Bot: return;
    default:
      collect_atoms(f.left(), out);
      collect_atoms(f.right(), out);
  }
}

}  // namespace

Formula parse_formula(std::string_view text) {
  Parser p(Lexer(text).run(false));
  if (p.peek().kind == Tok::End) throw ParseError("empty formula", 1);
  Formula f = p.formula();
  if (p.peek().kind != Tok::End)
    throw ParseError("unexpected " + describe(p.peek()), p.peek().pos + 1);
  return f;
}

std::string print_formula(Formula f) {
  std::string out;
  print_into(f, out);
  return out;
}

Sequent parse_sequent(std::string_view text) {
  Parser p(Lexer(text).run(true));
  FormulaSet ctx;
  if (p.peek().kind != Tok::Colon) {
    ctx.insert(p.formula());
    while (p.peek().kind == Tok::Comma) {
      p.next();
      ctx.insert(p.formula());
    }
  }
  p.expect(Tok::Colon, "':'");
  Formula goal = p.formula();
  if (p.peek().kind != Tok::End)
    throw ParseError("unexpected " + describe(p.peek()), p.peek().pos + 1);
  return Sequent{std::move(ctx), goal};
}

namespace {
std::vector<std::string> printed_sorted(const FormulaSet& gamma) {
  std::vector<std::string> items;
  for (Formula f : gamma) items.push_back(print_formula(f));
  std::sort(items.begin(), items.end());
  return items;
}
}  // namespace

std::string print_context(const FormulaSet& gamma) {
  std::string out;
  for (const auto& s : printed_sorted(gamma)) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

std::string print_sequent(const Sequent& s) {
  std::string ctx = print_context(s.context);
  return (ctx.empty() ? std::string() : ctx + " ") + ": " + print_formula(s.extract);
}

Formula conjoin(const FormulaSet& gamma) {
  if (gamma.empty()) return Formula::imp(Formula::bot(), Formula::bot());
  std::vector<std::pair<std::string, Formula>> items;
  for (Formula f : gamma) items.emplace_back(print_formula(f), f);
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Formula acc = items.back().second;
  for (auto it = items.rbegin() + 1; it != items.rend(); ++it) acc = Formula::conj(it->second, acc);
  return acc;
}

Formula conjoin_atoms(const AtomSet& atoms) {
  if (atoms.empty()) throw std::invalid_argument("conjoin_atoms: empty atom set");
  auto it = atoms.rbegin();
  Formula acc = Formula::atom(*it);
  for (++it; it != atoms.rend(); ++it) acc = Formula::conj(Formula::atom(*it), acc);
  return acc;
}

AtomSet atoms_of(Formula f) {
  AtomSet out;
  collect_atoms(f, out);
  return out;
}

AtomSet atoms_of(const FormulaSet& gamma) {
  AtomSet out;
  for (Formula f : gamma) collect_atoms(f, out);
  return out;
}

AtomSet atoms_of(const Sequent& s) {
  AtomSet out = atoms_of(s.context);
  collect_atoms(s.extract, out);
  return out;
}

std::vector<Formula> enumerate_formulas(const AtomSet& atoms, bool with_bot, int max_depth) {
  std::vector<Formula> level;
  for (const Atom& a : atoms) level.push_back(Formula::atom(a));
  if (with_bot) level.push_back(Formula::bot());
  if (max_depth < 1) return {};
  std::vector<Formula> all = level;
  for (int d = 2; d <= max_depth; ++d) {
    std::vector<Formula> next;
    const std::vector<Formula> prev = all;
    for (auto make : {&Formula::conj, &Formula::disj, &Formula::imp})
      for (Formula l : prev)
        for (Formula r : prev)
          if (std::max(l.depth(), r.depth()) == d - 1) next.push_back(make(l, r));
    all.insert(all.end(), next.begin(), next.end());
  }
  return all;
}

}  // namespace ptsem
