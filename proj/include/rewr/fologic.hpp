// First-order logic over the signature {->, =}: formula AST, a small concrete
// syntax with macros, Tarskian evaluation over a finite Ars, a library of
// named sentence families, and bounded checks of the infinite families.
#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rewr/core.hpp"

namespace rewr {

/// A term is a variable (bound by an enclosing quantifier) or a constant
/// (free name, interpreted by the environment).
struct Term {
    bool is_variable = false;
    std::string name;
    friend bool operator==(const Term&, const Term&) = default;
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum class Kind { Eq, Step, Not, And, Or, Implies, ForAll, Exists };
    Kind kind = Kind::Eq;
    Term lhs, rhs;             // Eq / Step
    FormulaPtr child;          // Not / quantifiers; left operand of binaries
    FormulaPtr child2;         // right operand of binaries
    std::string bound;         // quantified variable name
};

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);

// Construction helpers. Variables vs constants follow the Term flag.
FormulaPtr mk_eq(Term lhs, Term rhs);
FormulaPtr mk_step(Term lhs, Term rhs);
FormulaPtr mk_not(FormulaPtr f);
FormulaPtr mk_and(FormulaPtr l, FormulaPtr r);
FormulaPtr mk_or(FormulaPtr l, FormulaPtr r);
FormulaPtr mk_implies(FormulaPtr l, FormulaPtr r);
FormulaPtr mk_forall(std::string var, FormulaPtr body);
FormulaPtr mk_exists(std::string var, FormulaPtr body);
Term var(std::string name);
Term cst(std::string name);

/// Positions are byte offsets into the parsed text.
class FormulaParseError : public std::runtime_error {
  public:
    FormulaParseError(std::size_t position, const std::string& message);
    std::size_t position() const { return position_; }

  private:
    std::size_t position_;
};

/// Concrete syntax:
///   formula  := quantified | implication
///   `forall x. f` / `exists x. f`   (body extends as far as possible)
///   `f -> g` (right-assoc, loosest) | `f | g` | `f & g` | `~f`
///   atoms: `x = y`, `x != y` (sugar for ~(x = y)), `x --> y`, `(f)`
///   macros, expanded during parsing with capture-avoiding fresh variables:
///     nf(t)            no successor
///     step[n](s, t)    n-fold composition of -->   (step[0] is s = t)
///     conv[n](s, t)    n-fold composition of <-->  (conv[0] is s = t)
/// Identifiers are ASCII words [A-Za-z_][A-Za-z0-9_]*; an identifier is a
/// variable iff some enclosing quantifier binds it, otherwise a constant.
/// Throws FormulaParseError with the offending position.
FormulaPtr parse_formula(std::string_view text);

/// Prints in the same concrete syntax; parse(print(f)) is structurally equal
/// to f. ~(x = y) prints as x != y.
std::string print_formula(const FormulaPtr& f);

/// Interpretation of constants.
using Environment = std::map<std::string, NodeId>;

/// Tarskian truth over the finite node set, with short-circuit connectives
/// and quantifier loops in node order. An unbound constant raises
/// std::invalid_argument naming it; an environment value >= n_nodes likewise.
bool eval(const Ars& ars, const FormulaPtr& f, const Environment& env = {});

// Named sentences. delta_* are closed; xi_* use the constant "a".
FormulaPtr delta_un(unsigned i);                // convertible NFs at distance i agree
FormulaPtr delta_unr(unsigned i, unsigned j);   // NF reducts via i/j-step paths agree
FormulaPtr delta_ac(unsigned i);                // no i-step cycle (i >= 1)
FormulaPtr xi_a();                              // branching at `a` only, <= 2 successors
FormulaPtr xi_not_a();                          // every node but `a` is deterministic

enum class GfopFamily { UN, UNR, AC };

/// Evaluates the indexed family up to the exactness bound B = n_nodes
/// (inclusive): repetition-free reductions and conversions between fixed
/// endpoints have fewer than n_nodes steps, and any cycle contains a simple
/// cycle of length <= n_nodes, so truth of the bounded fragment implies truth
/// of the whole family on a finite system.
bool check_bounded_gfop(const Ars& ars, GfopFamily family);

}  // namespace rewr
