#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace implicitpoly {

// A parsed scalar expression in named variables. Immutable after parse and
// safe to evaluate concurrently from many threads.
//
// Grammar (also documented in the README):
//   expr     = term { ("+" | "-") term }
//   term     = unary { ("*" | "/") unary }
//   unary    = "-" unary | power
//   power    = primary [ "^" exponent ]
//   exponent = [ "-" ] number [ "^" exponent ]      (literal towers fold)
//   primary  = number | name | name "(" expr ")" | "(" expr ")"
//
// "^" binds tighter than unary minus and is right-associative; its exponent
// must be a numeric literal. Integer exponents evaluate by repeated
// multiplication. Known functions: sin cos exp log sqrt abs.
class Expression {
public:
    static Expression parse(std::string_view source);

    // Variable names, sorted lexicographically.
    const std::vector<std::string>& free_vars() const { return free_vars_; }

    // values[i] binds free_vars()[i].
    double eval(std::span<const double> values) const;
    double eval(const std::map<std::string, double>& binding) const;

    // Sign of the central finite difference along `var` at `point`, or 0
    // when the difference is below the derivative noise floor (1e-8,
    // relative to the local function scale). A name the expression does not
    // use gives 0.
    int partial_sign(const std::string& var,
                     const std::map<std::string, double>& point,
                     double step) const;

    // Canonical fully parenthesized form; parse(to_string()) reproduces the
    // AST exactly.
    std::string to_string() const;

    bool operator==(const Expression& other) const;

private:
    enum class Kind : unsigned char {
        constant,
        variable,
        negate,
        add,
        sub,
        mul,
        divide,
        pow_int,
        pow_real,
        call,
    };
    enum class Fn : unsigned char { sin, cos, exp, log, sqrt, abs };

    struct Node {
        Kind kind{};
        Fn fn{};
        int lhs = -1;
        int rhs = -1;
        double value = 0;    // constant payload or real exponent
        long long ipow = 0;  // integer exponent
        int var = -1;        // slot into free_vars_
    };

    std::vector<Node> nodes_;
    int root_ = -1;
    std::vector<std::string> free_vars_;

    double eval_node(int idx, std::span<const double> values) const;
    void print_node(int idx, std::string& out) const;
    bool node_equal(int idx, const Expression& other, int other_idx) const;

    friend class ExprParser;
};

} // namespace implicitpoly
