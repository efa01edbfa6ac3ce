#include "musat/formula.hpp"

#include <cctype>
#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <unordered_map>

namespace musat {

namespace {

struct Node {
  Op op;
  int symbol;         // atom / variable symbol, -1 otherwise
  std::uint32_t a;    // left child or unary/binder body
  std::uint32_t b;    // right child
};

struct NodeKey {
  Op op; int symbol; std::uint32_t a; std::uint32_t b;
  bool operator==(const NodeKey&) const = default;
};

struct NodeKeyHash {
  std::size_t operator()(const NodeKey& k) const {
    std::size_t h = static_cast<std::size_t>(k.op);
    h = h * 1000003u + static_cast<std::size_t>(k.symbol + 1);
    h = h * 1000003u + k.a;
    h = h * 1000003u + k.b;
    return h;
  }
};

// Process-wide interning arena.  Nodes live in a deque so handles stay valid
// while the arena grows; the mutex guards interning only, reads go lock-free
// through stable references.
struct Arena {
  std::mutex mu;
  std::deque<Node> nodes;
  std::unordered_map<NodeKey, std::uint32_t, NodeKeyHash> intern;
  std::deque<std::string> symbols;
  std::unordered_map<std::string, int> symbol_ids;
};

Arena& arena() {
  static Arena* a = new Arena();
  return *a;
}

const Node& node(std::uint32_t id) { return arena().nodes[id]; }

}  // namespace

int Formula::intern_symbol(std::string_view name) {
  Arena& a = arena();
  std::lock_guard<std::mutex> lock(a.mu);
  auto it = a.symbol_ids.find(std::string(name));
  if (it != a.symbol_ids.end()) return it->second;
  int id = static_cast<int>(a.symbols.size());
  a.symbols.emplace_back(name);
  a.symbol_ids.emplace(a.symbols.back(), id);
  return id;
}

std::string_view Formula::symbol_text(int symbol) {
  return arena().symbols[static_cast<std::size_t>(symbol)];
}

Formula Formula::make(Op op, int symbol, Formula fa, Formula fb) {
  Arena& a = arena();
  NodeKey key{op, symbol, fa.id_, fb.id_};
  std::lock_guard<std::mutex> lock(a.mu);
  auto it = a.intern.find(key);
  if (it != a.intern.end()) return Formula(it->second);
  std::uint32_t id = static_cast<std::uint32_t>(a.nodes.size());
  a.nodes.push_back(Node{op, symbol, fa.id_, fb.id_});
  a.intern.emplace(key, id);
  return Formula(id);
}

Formula Formula::top() { return make(Op::Top, -1, Formula(), Formula()); }
Formula Formula::bot() { return make(Op::Bot, -1, Formula(), Formula()); }
Formula Formula::atom(std::string_view n) { return make(Op::Atom, intern_symbol(n), Formula(), Formula()); }
Formula Formula::neg_atom(std::string_view n) { return make(Op::NegAtom, intern_symbol(n), Formula(), Formula()); }
Formula Formula::var(std::string_view n) { return make(Op::Var, intern_symbol(n), Formula(), Formula()); }
Formula Formula::conj(Formula l, Formula r) { return make(Op::And, -1, l, r); }
Formula Formula::disj(Formula l, Formula r) { return make(Op::Or, -1, l, r); }
Formula Formula::diamond(Formula f) { return make(Op::Diamond, -1, f, Formula()); }
Formula Formula::box(Formula f) { return make(Op::Box, -1, f, Formula()); }
Formula Formula::mu(std::string_view v, Formula f) { return make(Op::Mu, intern_symbol(v), f, Formula()); }
Formula Formula::nu(std::string_view v, Formula f) { return make(Op::Nu, intern_symbol(v), f, Formula()); }
Formula Formula::mu(int v, Formula f) { return make(Op::Mu, v, f, Formula()); }
Formula Formula::nu(int v, Formula f) { return make(Op::Nu, v, f, Formula()); }

Op Formula::op() const { return node(id_).op; }
int Formula::symbol() const { return node(id_).symbol; }
std::string_view Formula::symbol_name() const { return symbol_text(node(id_).symbol); }
Formula Formula::left() const { return Formula(node(id_).a); }
Formula Formula::right() const { return Formula(node(id_).b); }
Formula Formula::child() const { return Formula(node(id_).a); }

std::size_t Formula::node_count() const {
  switch (op()) {
    case Op::Top: case Op::Bot: case Op::Atom: case Op::NegAtom: case Op::Var:
      return 1;
    case Op::And: case Op::Or:
      return 1 + left().node_count() + right().node_count();
    case Op::Diamond: case Op::Box: case Op::Mu: case Op::Nu:
      return 1 + child().node_count();
  }
  return 1;
}

bool Formula::contains_var(int v) const {
  switch (op()) {
    case Op::Var: return symbol() == v;
    case Op::And: case Op::Or: return left().contains_var(v) || right().contains_var(v);
    case Op::Diamond: case Op::Box: return child().contains_var(v);
    case Op::Mu: case Op::Nu:
      return symbol() != v && child().contains_var(v);
    default: return false;
  }
}

namespace {
void collect_free(Formula f, std::vector<int>& bound, std::set<int>& out) {
  switch (f.op()) {
    case Op::Var: {
      int v = f.symbol();
      for (int b : bound) if (b == v) return;
      out.insert(v);
      return;
    }
    case Op::And: case Op::Or:
      collect_free(f.left(), bound, out);
      collect_free(f.right(), bound, out);
      return;
    case Op::Diamond: case Op::Box:
      collect_free(f.child(), bound, out);
      return;
    case Op::Mu: case Op::Nu:
      bound.push_back(f.symbol());
      collect_free(f.child(), bound, out);
      bound.pop_back();
      return;
    default: return;
  }
}
}  // namespace

std::vector<int> Formula::free_vars() const {
  std::vector<int> bound;
  std::set<int> out;
  collect_free(*this, bound, out);
  return std::vector<int>(out.begin(), out.end());
}

namespace {
Formula subst(Formula f, int v, Formula g,
              std::unordered_map<std::uint32_t, Formula>& memo) {
  auto it = memo.find(f.id());
  if (it != memo.end()) return it->second;
  Formula out;
  switch (f.op()) {
    case Op::Var: out = (f.symbol() == v) ? g : f; break;
    case Op::And: out = Formula::conj(subst(f.left(), v, g, memo), subst(f.right(), v, g, memo)); break;
    case Op::Or:  out = Formula::disj(subst(f.left(), v, g, memo), subst(f.right(), v, g, memo)); break;
    case Op::Diamond: out = Formula::diamond(subst(f.child(), v, g, memo)); break;
    case Op::Box:     out = Formula::box(subst(f.child(), v, g, memo)); break;
    case Op::Mu:
      out = (f.symbol() == v) ? f : Formula::mu(f.symbol(), subst(f.child(), v, g, memo));
      break;
    case Op::Nu:
      out = (f.symbol() == v) ? f : Formula::nu(f.symbol(), subst(f.child(), v, g, memo));
      break;
    default: out = f; break;
  }
  memo.emplace(f.id(), out);
  return out;
}
}  // namespace

Formula Formula::substitute(int v, Formula g) const {
  std::unordered_map<std::uint32_t, Formula> memo;
  return subst(*this, v, g, memo);
}

namespace {
// Precedence for printing: binder 0, | 1, & 2, prefix 3.
int print_prec(Op o) {
  switch (o) {
    case Op::Mu: case Op::Nu: return 0;
    case Op::Or: return 1;
    case Op::And: return 2;
    default: return 3;
  }
}

void print(Formula f, int min_prec, std::ostringstream& os) {
  int p = print_prec(f.op());
  bool parens = p < min_prec;
  if (parens) os << '(';
  switch (f.op()) {
    case Op::Top: os << "true"; break;
    case Op::Bot: os << "false"; break;
    case Op::Atom: os << f.symbol_name(); break;
    case Op::NegAtom: os << '~' << f.symbol_name(); break;
    case Op::Var: os << f.symbol_name(); break;
    // The parser is left-associative, so right operands need one level more.
    case Op::And:
      print(f.left(), 2, os); os << " & "; print(f.right(), 3, os); break;
    case Op::Or:
      print(f.left(), 1, os); os << " | "; print(f.right(), 2, os); break;
    case Op::Diamond: os << "<>"; print(f.child(), 3, os); break;
    case Op::Box: os << "[]"; print(f.child(), 3, os); break;
    case Op::Mu:
      os << "mu " << f.symbol_name() << ". "; print(f.child(), 0, os); break;
    case Op::Nu:
      os << "nu " << f.symbol_name() << ". "; print(f.child(), 0, os); break;
  }
  if (parens) os << ')';
}
}  // namespace

std::string Formula::to_string() const {
  std::ostringstream os;
  print(*this, 0, os);
  return os.str();
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Token {
  enum Kind { Ident, VarIdent, KwMu, KwNu, KwTrue, KwFalse,
              Amp, Pipe, Tilde, Diam, Box, LParen, RParen, Dot, End } kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    skip_ws();
    int line = line_, col = col_;
    if (pos_ >= s_.size()) return {Token::End, "", line, col};
    char c = s_[pos_];
    if (std::islower(static_cast<unsigned char>(c))) {
      std::string id = ident();
      if (id == "mu") return {Token::KwMu, id, line, col};
      if (id == "nu") return {Token::KwNu, id, line, col};
      if (id == "true") return {Token::KwTrue, id, line, col};
      if (id == "false") return {Token::KwFalse, id, line, col};
      return {Token::Ident, id, line, col};
    }
    if (std::isupper(static_cast<unsigned char>(c)))
      return {Token::VarIdent, ident(), line, col};
    advance();
    switch (c) {
      case '&': return {Token::Amp, "&", line, col};
      case '|': return {Token::Pipe, "|", line, col};
      case '~': return {Token::Tilde, "~", line, col};
      case '(': return {Token::LParen, "(", line, col};
      case ')': return {Token::RParen, ")", line, col};
      case '.': return {Token::Dot, ".", line, col};
      case '<':
        if (pos_ < s_.size() && s_[pos_] == '>') { advance(); return {Token::Diam, "<>", line, col}; }
        break;
      case '[':
        if (pos_ < s_.size() && s_[pos_] == ']') { advance(); return {Token::Box, "[]", line, col}; }
        break;
      default: break;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", line, col);
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '#') {                 // line comment
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }
  std::string ident() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      advance();
    return std::string(s_.substr(start, pos_ - start));
  }
  void advance() {
    if (s_[pos_] == '\n') { ++line_; col_ = 1; } else { ++col_; }
    ++pos_;
  }
  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) { shift(); }

  Formula parse() {
    Formula f = formula();
    expect(Token::End, "end of input");
    return f;
  }

 private:
  void shift() { tok_ = lex_.next(); }

  void expect(Token::Kind k, const char* what) {
    if (tok_.kind != k)
      throw ParseError(std::string("expected ") + what + ", found '" + tok_.text + "'",
                       tok_.line, tok_.col);
  }

  // formula := or-level; a binder may start any operand position and its
  // scope extends maximally to the right.
  Formula formula() { return or_level(); }

  Formula or_level() {
    Formula f = and_level();
    while (tok_.kind == Token::Pipe) {
      shift();
      Formula r = (tok_.kind == Token::KwMu || tok_.kind == Token::KwNu)
                      ? binder() : and_level();
      f = Formula::disj(f, r);
    }
    return f;
  }

  Formula and_level() {
    Formula f = prefix();
    while (tok_.kind == Token::Amp) {
      shift();
      Formula r = (tok_.kind == Token::KwMu || tok_.kind == Token::KwNu)
                      ? binder() : prefix();
      f = Formula::conj(f, r);
    }
    return f;
  }

  Formula prefix() {
    switch (tok_.kind) {
      case Token::Tilde: {
        Token t = tok_;
        shift();
        if (tok_.kind != Token::Ident)
          throw ParseError("negation is only applicable to atoms", t.line, t.col);
        Formula f = Formula::neg_atom(tok_.text);
        shift();
        return f;
      }
      case Token::Diam: { shift(); return Formula::diamond(prefix()); }
      case Token::Box: { shift(); return Formula::box(prefix()); }
      case Token::KwMu: case Token::KwNu:
        return binder();
      default:
        return primary();
    }
  }

  Formula binder() {
    bool is_mu = tok_.kind == Token::KwMu;
    shift();
    expect(Token::VarIdent, "a fixpoint variable");
    std::string name = tok_.text;
    int sym = Formula::intern_symbol(name);
    shift();
    expect(Token::Dot, "'.'");
    shift();
    scope_.push_back(sym);
    Formula body = formula();
    scope_.pop_back();
    return is_mu ? Formula::mu(sym, body) : Formula::nu(sym, body);
  }

  Formula primary() {
    switch (tok_.kind) {
      case Token::KwTrue: shift(); return Formula::top();
      case Token::KwFalse: shift(); return Formula::bot();
      case Token::Ident: {
        Formula f = Formula::atom(tok_.text);
        shift();
        return f;
      }
      case Token::VarIdent: {
        int sym = Formula::intern_symbol(tok_.text);
        bool bound = false;
        for (int s : scope_) if (s == sym) { bound = true; break; }
        if (!bound)
          throw ParseError("unbound variable '" + tok_.text + "'", tok_.line, tok_.col);
        shift();
        return Formula::var(Formula::symbol_text(sym));
      }
      case Token::LParen: {
        shift();
        Formula f = formula();
        expect(Token::RParen, "')'");
        shift();
        return f;
      }
      default:
        throw ParseError("expected a formula, found '" + tok_.text + "'",
                         tok_.line, tok_.col);
    }
  }

  Lexer lex_;
  Token tok_;
  std::vector<int> scope_;
};

}  // namespace

Formula parse_formula(std::string_view text) {
  return Parser(text).parse();
}

// ---------------------------------------------------------------------------
// Cleaning and guardedness
// ---------------------------------------------------------------------------

namespace {

void count_binders(Formula f, std::map<int, int>& counts, std::set<int>& all_names) {
  switch (f.op()) {
    case Op::Atom: case Op::NegAtom: case Op::Var:
      all_names.insert(f.symbol());
      return;
    case Op::And: case Op::Or:
      count_binders(f.left(), counts, all_names);
      count_binders(f.right(), counts, all_names);
      return;
    case Op::Diamond: case Op::Box:
      count_binders(f.child(), counts, all_names);
      return;
    case Op::Mu: case Op::Nu:
      counts[f.symbol()]++;
      all_names.insert(f.symbol());
      count_binders(f.child(), counts, all_names);
      return;
    default: return;
  }
}

struct Renamer {
  const std::map<int, int>& dup;               // binder symbol -> #bindings
  std::set<int>& taken;                        // all symbols in use
  std::map<int, int> next_index;               // base symbol -> next suffix
  std::vector<std::pair<int, int>> active;     // (original, replacement)
  std::vector<std::string>* warnings;
  bool renamed = false;

  int fresh(int base) {
    std::string base_name(Formula::symbol_text(base));
    int& idx = next_index[base];
    for (;;) {
      std::string cand = base_name + std::to_string(idx++);
      int sym = Formula::intern_symbol(cand);
      if (taken.insert(sym).second) return sym;
    }
  }

  Formula run(Formula f) {
    switch (f.op()) {
      case Op::Var: {
        int v = f.symbol();
        for (auto it = active.rbegin(); it != active.rend(); ++it)
          if (it->first == v)
            return it->second == v ? f : Formula::var(Formula::symbol_text(it->second));
        return f;
      }
      case Op::And: return Formula::conj(run(f.left()), run(f.right()));
      case Op::Or: return Formula::disj(run(f.left()), run(f.right()));
      case Op::Diamond: return Formula::diamond(run(f.child()));
      case Op::Box: return Formula::box(run(f.child()));
      case Op::Mu: case Op::Nu: {
        int v = f.symbol();
        int used = v;
        auto it = dup.find(v);
        if (it != dup.end() && it->second > 1) {
          used = fresh(v);
          renamed = true;
          warnings->push_back("renamed duplicate binder '" +
                              std::string(Formula::symbol_text(v)) + "' to '" +
                              std::string(Formula::symbol_text(used)) + "'");
        }
        active.emplace_back(v, used);
        Formula body = run(f.child());
        active.pop_back();
        return f.op() == Op::Mu ? Formula::mu(used, body) : Formula::nu(used, body);
      }
      default: return f;
    }
  }
};

}  // namespace

CleanResult make_clean(Formula f) {
  std::map<int, int> counts;
  std::set<int> taken;
  count_binders(f, counts, taken);
  CleanResult res;
  Renamer r{counts, taken, {}, {}, &res.warnings, false};
  res.formula = r.run(f);
  res.renamed = r.renamed;
  return res;
}

bool is_clean(Formula f) {
  std::map<int, int> counts;
  std::set<int> names;
  count_binders(f, counts, names);
  for (auto& [sym, n] : counts)
    if (n > 1) return false;
  return true;
}

namespace {
// `pending` holds variables whose binder has not yet been crossed by a
// modality on the current path.
bool guarded_walk(Formula f, std::vector<int>& pending) {
  switch (f.op()) {
    case Op::Var:
      for (int v : pending)
        if (v == f.symbol()) return false;
      return true;
    case Op::And: case Op::Or:
      return guarded_walk(f.left(), pending) && guarded_walk(f.right(), pending);
    case Op::Diamond: case Op::Box: {
      std::vector<int> none;
      return guarded_walk(f.child(), none);
    }
    case Op::Mu: case Op::Nu: {
      pending.push_back(f.symbol());
      bool ok = guarded_walk(f.child(), pending);
      pending.pop_back();
      return ok;
    }
    default:
      return true;
  }
}
}  // namespace

bool check_guarded(Formula f) {
  std::vector<int> pending;
  return guarded_walk(f, pending);
}

}  // namespace musat
