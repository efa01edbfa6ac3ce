// Modal mu-calculus formulas in negation normal form.
//
// Formulas are immutable, hash-consed nodes held in a process-wide arena;
// a Formula value is a cheap 32-bit handle and two formulas are structurally
// equal iff their handles compare equal.  The handle doubles as a stable key
// for closure sets and automaton state maps.

#ifndef MUSAT_FORMULA_HPP
#define MUSAT_FORMULA_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace musat {

struct MusatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parse / input validation failure with source position (1-based).
struct ParseError : MusatError {
  ParseError(const std::string& msg, int line, int col)
      : MusatError(msg + " (line " + std::to_string(line) + ", column " +
                   std::to_string(col) + ")"),
        line(line), col(col) {}
  int line = 0;
  int col = 0;
};

enum class Op : std::uint8_t {
  Top, Bot, Atom, NegAtom, Var, And, Or, Diamond, Box, Mu, Nu
};

class Formula {
 public:
  Formula() = default;  // invalid handle

  static Formula top();
  static Formula bot();
  static Formula atom(std::string_view name);
  static Formula neg_atom(std::string_view name);
  static Formula var(std::string_view name);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula diamond(Formula body);
  static Formula box(Formula body);
  static Formula mu(std::string_view var, Formula body);
  static Formula nu(std::string_view var, Formula body);
  static Formula mu(int var_symbol, Formula body);
  static Formula nu(int var_symbol, Formula body);

  bool valid() const { return id_ != kInvalid; }
  std::uint32_t id() const { return id_; }

  Op op() const;
  // Symbol id of the atom (Atom/NegAtom), variable (Var), or bound variable
  // (Mu/Nu).
  int symbol() const;
  std::string_view symbol_name() const;
  Formula left() const;   // And/Or
  Formula right() const;  // And/Or
  Formula child() const;  // Diamond/Box and the body of Mu/Nu

  bool is_fixpoint() const { Op o = op(); return o == Op::Mu || o == Op::Nu; }
  bool is_literal() const { Op o = op(); return o == Op::Atom || o == Op::NegAtom; }
  bool is_modal_op() const { Op o = op(); return o == Op::Diamond || o == Op::Box; }

  // Number of syntax tree nodes (shared subtrees counted per occurrence).
  std::size_t node_count() const;
  bool contains_var(int var_symbol) const;
  // Free variable symbols, each reported once.
  std::vector<int> free_vars() const;
  bool closed() const { return free_vars().empty(); }
  // Capture is impossible when `replacement` is closed, which is the only
  // way this is used (fixpoint unfolding).
  Formula substitute(int var_symbol, Formula replacement) const;

  std::string to_string() const;

  friend bool operator==(Formula a, Formula b) { return a.id_ == b.id_; }
  friend bool operator<(Formula a, Formula b) { return a.id_ < b.id_; }

  // Symbol table shared by atoms and variables.
  static int intern_symbol(std::string_view name);
  static std::string_view symbol_text(int symbol);

 private:
  static constexpr std::uint32_t kInvalid = 0xffffffffu;
  explicit Formula(std::uint32_t id) : id_(id) {}
  static Formula make(Op op, int symbol, Formula a, Formula b);
  std::uint32_t id_ = kInvalid;
};

struct FormulaHash {
  std::size_t operator()(Formula f) const { return f.id(); }
};

// Concrete syntax:
//   atoms [a-z][a-zA-Z0-9_]*, variables [A-Z][a-zA-Z0-9_]*,
//   ~p (atoms only), &, |, <>, [], mu X., nu X., true, false, parentheses.
// Precedence: prefix (~, <>, []) > & > |; fixpoint binders bind weakest and
// extend maximally to the right.
// Throws ParseError on syntax errors, unbound variables, and negation
// applied to a non-atom.  The result is always a closed formula.
Formula parse_formula(std::string_view text);

struct CleanResult {
  Formula formula;
  bool renamed = false;                // true iff any binder was renamed
  std::vector<std::string> warnings;   // one entry per renamed variable
};

// Alpha-renames so that every binder uses a distinct variable.  Variables
// bound more than once are renamed apart with fresh numbered names; renaming
// can grow the closure, hence the warning records.
CleanResult make_clean(Formula f);

bool is_clean(Formula f);

// True iff every occurrence of a bound variable is separated from its binder
// by at least one modal operator.
bool check_guarded(Formula f);

}  // namespace musat

#endif  // MUSAT_FORMULA_HPP
