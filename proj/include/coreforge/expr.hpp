#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "coreforge/values.hpp"

namespace coreforge::expr {

// Raised when the input text is not a well-formed expression. Offsets are
// 1-based byte positions into the original text.
struct parse_error : error {
    parse_error(std::string msg, std::size_t off, std::string exp)
        : error(std::move(msg)), offset(off), expected(std::move(exp)) {}

    std::size_t offset;
    std::string expected;
};

struct unbound_selector : error {
    using error::error;
};

// A predicate position produced a value other than 0 or 1.
struct non_boolean_verification : error {
    using error::error;
};

enum class node_kind {
    constant,
    selector,        // v<j>(<unit>) or v<j>(<unit>(<type>))
    add,             // n-ary, commutative
    sub,             // binary
    mul,             // n-ary, commutative
    power,           // binary, right-associative
    sin_deg,         // sine of a value in degrees
    sum_components,  // sum over all components of a unit
    equality_chain,  // a = b = ... (>= 2 operands), 1.0 iff all equal
    conjunction,     // a and b and ... (>= 2 operands)
    comparison,      // a <op> b
};

enum class cmp_op { lt, le, gt, ge, ne };

struct node;
using ast = std::shared_ptr<const node>;

struct node {
    node_kind kind;

    double value = 0.0;       // constant
    std::string unit;         // selector / sum_components: referenced unit name
    int component = 0;        // selector: 1-based component index
    std::string type_param;   // selector: optional type subscript, may be empty
    cmp_op op = cmp_op::lt;   // comparison

    std::vector<ast> args;
};

ast make_constant(double v);
ast make_selector(std::string unit, int component, std::string type_param = {});
ast make_add(std::vector<ast> terms);
ast make_sub(ast lhs, ast rhs);
ast make_mul(std::vector<ast> factors);
ast make_power(ast base, ast exponent);
ast make_sin_deg(ast arg);
ast make_sum_components(std::string unit);
ast make_equality_chain(std::vector<ast> operands);
ast make_conjunction(std::vector<ast> operands);
ast make_comparison(ast lhs, cmp_op op, ast rhs);

// Grammar: selectors v<j>(u) / v<j>(u(t)), numeric literals, + - * ^,
// sin(x) in degrees, sum(u), chained =, comparisons, `and`, parentheses.
// Precedence, tightest first: ^  >  * >  +/-  >  comparisons  >  =  >  and.
ast parse_expression(std::string_view text);

// Minimal-parenthesis form; parse(print(parse(t))) == parse(t).
std::string print_expression(const ast& e);

// Resolves a selector's unit name to its value tuple, or nullptr if the
// name is unknown in the current environment.
using selector_resolver = std::function<const value_tuple*(std::string_view unit)>;

// Arithmetic follows standard real semantics; sin takes degrees; equality
// chains, comparisons and conjunctions yield 1.0 or 0.0. Equality between
// magnitudes is exact.
double evaluate(const ast& e, const selector_resolver& resolve);

// Same, but rejects results outside {0, 1}.
double evaluate_verification(const ast& e, const selector_resolver& resolve);

// Normal form used for structural equality across types: type parameters
// are replaced by a placeholder and operands of commutative nodes are
// sorted. Two canonical expressions are equal iff their keys are equal.
struct canonical_expr {
    ast form;
    std::string key;

    bool operator==(const canonical_expr& other) const { return key == other.key; }
    bool operator!=(const canonical_expr& other) const { return key != other.key; }
};

canonical_expr alpha_canonicalize(const ast& e);

// Unit names a given expression selects from (deduplicated).
std::vector<std::string> referenced_units(const ast& e);

}  // namespace coreforge::expr
