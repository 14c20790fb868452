#include "implicitpoly/expr.hpp"

#include "implicitpoly/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace implicitpoly {

namespace {

bool is_ident_start(char c)
{
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// x^e by binary exponentiation; negative exponents via the reciprocal.
double int_pow(double x, long long e)
{
    bool neg = e < 0;
    unsigned long long n = neg ? static_cast<unsigned long long>(-(e + 1)) + 1
                               : static_cast<unsigned long long>(e);
    double acc = 1.0;
    double base = x;
    while (n != 0) {
        if (n & 1)
            acc *= base;
        base *= base;
        n >>= 1;
    }
    return neg ? 1.0 / acc : acc;
}

} // namespace

class ExprParser {
public:
    explicit ExprParser(std::string_view src) : src_(src) {}

    Expression run()
    {
        skip_space();
        if (pos_ >= src_.size())
            fail(Errc::syntax, "empty input");
        int root = parse_expr();
        skip_space();
        if (pos_ < src_.size())
            error("unexpected trailing input");
        out_.root_ = root;
        assign_slots();
        return std::move(out_);
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    Expression out_;
    std::vector<std::string> names_; // in order of first appearance

    [[noreturn]] void error(const std::string& what) const
    {
        fail(Errc::syntax,
             "syntax error at offset " + std::to_string(pos_) + ": " + what);
    }

    void skip_space()
    {
        while (pos_ < src_.size() &&
               std::isspace(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
    }

    char peek()
    {
        skip_space();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    int add(Expression::Node n)
    {
        out_.nodes_.push_back(n);
        return static_cast<int>(out_.nodes_.size()) - 1;
    }

    int parse_expr()
    {
        int lhs = parse_term();
        for (;;) {
            char c = peek();
            if (c != '+' && c != '-')
                return lhs;
            ++pos_;
            int rhs = parse_term();
            Expression::Node n;
            n.kind = c == '+' ? Expression::Kind::add : Expression::Kind::sub;
            n.lhs = lhs;
            n.rhs = rhs;
            lhs = add(n);
        }
    }

    int parse_term()
    {
        int lhs = parse_unary();
        for (;;) {
            char c = peek();
            if (c != '*' && c != '/')
                return lhs;
            ++pos_;
            int rhs = parse_unary();
            Expression::Node n;
            n.kind = c == '*' ? Expression::Kind::mul : Expression::Kind::divide;
            n.lhs = lhs;
            n.rhs = rhs;
            lhs = add(n);
        }
    }

    int parse_unary()
    {
        if (peek() == '-') {
            ++pos_;
            int operand = parse_unary();
            Expression::Node n;
            n.kind = Expression::Kind::negate;
            n.lhs = operand;
            return add(n);
        }
        return parse_power();
    }

    int parse_power()
    {
        int base = parse_primary();
        if (peek() != '^')
            return base;
        ++pos_;
        double e = parse_exponent();
        Expression::Node n;
        n.lhs = base;
        double rounded = std::nearbyint(e);
        if (e == rounded && std::abs(e) < 9.0e15) {
            n.kind = Expression::Kind::pow_int;
            n.ipow = static_cast<long long>(rounded);
        } else {
            n.kind = Expression::Kind::pow_real;
            n.value = e;
        }
        return add(n);
    }

    // Exponents are numeric literals with an optional sign; towers like
    // 2^3 fold right-associatively into a constant.
    double parse_exponent()
    {
        bool neg = false;
        if (peek() == '-') {
            ++pos_;
            neg = true;
        }
        skip_space();
        if (pos_ >= src_.size() ||
            !(std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '.'))
            error("exponent must be a numeric literal");
        double v = parse_number();
        if (peek() == '^') {
            ++pos_;
            v = std::pow(v, parse_exponent());
        }
        return neg ? -v : v;
    }

    double parse_number()
    {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() &&
                   std::isdigit(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-'))
                ++pos_;
            if (pos_ < src_.size() &&
                std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() &&
                       std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
            } else {
                pos_ = mark; // "e" was not an exponent marker
            }
        }
        double v = 0;
        auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
        if (res.ec != std::errc{} || res.ptr != src_.data() + pos_) {
            pos_ = start;
            error("malformed number");
        }
        return v;
    }

    int parse_primary()
    {
        char c = peek();
        if (c == '(') {
            ++pos_;
            int inner = parse_expr();
            if (peek() != ')')
                error("expected ')'");
            ++pos_;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            Expression::Node n;
            n.kind = Expression::Kind::constant;
            n.value = parse_number();
            return add(n);
        }
        if (is_ident_start(c)) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && is_ident_char(src_[pos_]))
                ++pos_;
            std::string name(src_.substr(start, pos_ - start));
            if (peek() == '(') {
                struct FnInfo {
                    const char* name;
                    Expression::Fn fn;
                };
                static constexpr FnInfo kFns[] = {
                    {"sin", Expression::Fn::sin},   {"cos", Expression::Fn::cos},
                    {"exp", Expression::Fn::exp},   {"log", Expression::Fn::log},
                    {"sqrt", Expression::Fn::sqrt}, {"abs", Expression::Fn::abs},
                };
                const FnInfo* info = nullptr;
                for (const auto& f : kFns)
                    if (name == f.name)
                        info = &f;
                if (info == nullptr)
                    fail(Errc::unknown_function, "unknown function '" + name +
                                                     "' at offset " +
                                                     std::to_string(start));
                ++pos_; // '('
                int arg = parse_expr();
                if (peek() != ')')
                    error("expected ')'");
                ++pos_;
                Expression::Node n;
                n.kind = Expression::Kind::call;
                n.fn = info->fn;
                n.lhs = arg;
                return add(n);
            }
            Expression::Node n;
            n.kind = Expression::Kind::variable;
            n.var = name_slot(name);
            return add(n);
        }
        if (pos_ >= src_.size())
            error("unexpected end of input");
        error(std::string("unexpected character '") + c + "'");
    }

    int name_slot(const std::string& name)
    {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name)
                return static_cast<int>(i);
        names_.push_back(name);
        return static_cast<int>(names_.size()) - 1;
    }

    // Re-index variable nodes against the lexicographically sorted name list.
    void assign_slots()
    {
        std::vector<std::string> sorted = names_;
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> remap(names_.size());
        for (std::size_t i = 0; i < names_.size(); ++i) {
            auto it = std::lower_bound(sorted.begin(), sorted.end(), names_[i]);
            remap[i] = static_cast<int>(it - sorted.begin());
        }
        for (auto& n : out_.nodes_)
            if (n.kind == Expression::Kind::variable)
                n.var = remap[n.var];
        out_.free_vars_ = std::move(sorted);
    }
};

Expression Expression::parse(std::string_view source)
{
    return ExprParser(source).run();
}

double Expression::eval_node(int idx, std::span<const double> values) const
{
    const Node& n = nodes_[idx];
    switch (n.kind) {
    case Kind::constant:
        return n.value;
    case Kind::variable:
        return values[n.var];
    case Kind::negate:
        return -eval_node(n.lhs, values);
    case Kind::add:
        return eval_node(n.lhs, values) + eval_node(n.rhs, values);
    case Kind::sub:
        return eval_node(n.lhs, values) - eval_node(n.rhs, values);
    case Kind::mul:
        return eval_node(n.lhs, values) * eval_node(n.rhs, values);
    case Kind::divide:
        return eval_node(n.lhs, values) / eval_node(n.rhs, values);
    case Kind::pow_int:
        return int_pow(eval_node(n.lhs, values), n.ipow);
    case Kind::pow_real: {
        double base = eval_node(n.lhs, values);
        if (base < 0)
            fail(Errc::domain, "negative base with non-integer exponent");
        return std::pow(base, n.value);
    }
    case Kind::call: {
        double a = eval_node(n.lhs, values);
        switch (n.fn) {
        case Fn::sin:
            return std::sin(a);
        case Fn::cos:
            return std::cos(a);
        case Fn::exp:
            return std::exp(a);
        case Fn::log:
            if (a <= 0)
                fail(Errc::domain, "log of non-positive value");
            return std::log(a);
        case Fn::sqrt:
            if (a < 0)
                fail(Errc::domain, "sqrt of negative value");
            return std::sqrt(a);
        case Fn::abs:
            return std::abs(a);
        }
        break;
    }
    }
    fail(Errc::invalid_argument, "corrupt expression node");
}

double Expression::eval(std::span<const double> values) const
{
    if (values.size() != free_vars_.size())
        fail(Errc::invalid_argument, "binding size does not match free variables");
    return eval_node(root_, values);
}

double Expression::eval(const std::map<std::string, double>& binding) const
{
    std::vector<double> values(free_vars_.size());
    for (std::size_t i = 0; i < free_vars_.size(); ++i) {
        auto it = binding.find(free_vars_[i]);
        if (it == binding.end())
            fail(Errc::unbound_variable, "unbound variable '" + free_vars_[i] + "'");
        values[i] = it->second;
    }
    return eval_node(root_, values);
}

int Expression::partial_sign(const std::string& var,
                             const std::map<std::string, double>& point,
                             double step) const
{
    if (step <= 0)
        fail(Errc::invalid_argument, "step must be positive");
    // validate the binding even when `var` does not occur
    std::vector<double> values(free_vars_.size());
    int slot = -1;
    for (std::size_t i = 0; i < free_vars_.size(); ++i) {
        auto it = point.find(free_vars_[i]);
        if (it == point.end())
            fail(Errc::unbound_variable, "unbound variable '" + free_vars_[i] + "'");
        values[i] = it->second;
        if (free_vars_[i] == var)
            slot = static_cast<int>(i);
    }
    if (slot < 0)
        return 0;

    const double center = values[slot];
    values[slot] = center + step;
    double hi = eval_node(root_, values);
    values[slot] = center - step;
    double lo = eval_node(root_, values);

    constexpr double kTolDeriv = 1e-8;
    double scale = 1.0 + std::max(std::abs(hi), std::abs(lo));
    double diff = hi - lo;
    if (std::abs(diff) <= kTolDeriv * step * scale)
        return 0;
    return diff > 0 ? +1 : -1;
}

void Expression::print_node(int idx, std::string& out) const
{
    const Node& n = nodes_[idx];
    switch (n.kind) {
    case Kind::constant:
        out += format_double(n.value);
        return;
    case Kind::variable:
        out += free_vars_[n.var];
        return;
    case Kind::negate:
        out += "(-";
        print_node(n.lhs, out);
        out += ')';
        return;
    case Kind::add:
    case Kind::sub:
    case Kind::mul:
    case Kind::divide: {
        char op = n.kind == Kind::add      ? '+'
                  : n.kind == Kind::sub    ? '-'
                  : n.kind == Kind::mul    ? '*'
                                           : '/';
        out += '(';
        print_node(n.lhs, out);
        out += op;
        print_node(n.rhs, out);
        out += ')';
        return;
    }
    case Kind::pow_int:
        out += '(';
        print_node(n.lhs, out);
        out += '^';
        out += std::to_string(n.ipow);
        out += ')';
        return;
    case Kind::pow_real:
        out += '(';
        print_node(n.lhs, out);
        out += '^';
        out += format_double(n.value);
        out += ')';
        return;
    case Kind::call: {
        const char* name = n.fn == Fn::sin    ? "sin"
                           : n.fn == Fn::cos  ? "cos"
                           : n.fn == Fn::exp  ? "exp"
                           : n.fn == Fn::log  ? "log"
                           : n.fn == Fn::sqrt ? "sqrt"
                                              : "abs";
        out += name;
        out += '(';
        print_node(n.lhs, out);
        out += ')';
        return;
    }
    }
}

std::string Expression::to_string() const
{
    std::string out;
    print_node(root_, out);
    return out;
}

bool Expression::node_equal(int idx, const Expression& other, int other_idx) const
{
    const Node& a = nodes_[idx];
    const Node& b = other.nodes_[other_idx];
    if (a.kind != b.kind)
        return false;
    switch (a.kind) {
    case Kind::constant:
        return a.value == b.value;
    case Kind::variable:
        return free_vars_[a.var] == other.free_vars_[b.var];
    case Kind::negate:
        return node_equal(a.lhs, other, b.lhs);
    case Kind::add:
    case Kind::sub:
    case Kind::mul:
    case Kind::divide:
        return node_equal(a.lhs, other, b.lhs) && node_equal(a.rhs, other, b.rhs);
    case Kind::pow_int:
        return a.ipow == b.ipow && node_equal(a.lhs, other, b.lhs);
    case Kind::pow_real:
        return a.value == b.value && node_equal(a.lhs, other, b.lhs);
    case Kind::call:
        return a.fn == b.fn && node_equal(a.lhs, other, b.lhs);
    }
    return false;
}

bool Expression::operator==(const Expression& other) const
{
    if (free_vars_ != other.free_vars_)
        return false;
    return node_equal(root_, other, other.root_);
}

} // namespace implicitpoly
